#include "pns/metrics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "pns/rng.hpp"

namespace pns {

double tvd(const WeightedEmpirical& empirical, const ExactDistribution& exact) {
  if (empirical.total == 0) throw std::invalid_argument("empty empirical");
  for (const auto& [s, m] : empirical.mass)
    if (s >= exact.size())
      throw std::invalid_argument("empirical state outside the exact space");
  const double total = static_cast<double>(empirical.total);
  double l1 = 0.0;
  for (std::size_t s = 0; s < exact.size(); ++s) {
    const auto it = empirical.mass.find(static_cast<PackedState>(s));
    const double emp =
        it == empirical.mass.end() ? 0.0 : static_cast<double>(it->second) / total;
    l1 += std::abs(emp - exact.prob[s]);
  }
  return 0.5 * l1;
}

double tvd(const ExactDistribution& a, const ExactDistribution& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("distributions on different spaces");
  double l1 = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s)
    l1 += std::abs(a.prob[s] - b.prob[s]);
  return 0.5 * l1;
}

double starting_distribution_tvd(std::span<const PackedState> last_states,
                                 const ExactDistribution& exact) {
  if (last_states.empty())
    throw std::invalid_argument("need at least one replication");
  WeightedEmpirical emp;
  for (PackedState s : last_states) emp.add(s, 1);
  return tvd(emp, exact);
}

RingMoments ring_reference_moments(double mu0, double sigma,
                                   std::uint64_t draws) {
  static std::mutex mu;
  static std::map<std::tuple<double, double, std::uint64_t>, RingMoments> cache;
  std::scoped_lock lock(mu);
  const auto key = std::make_tuple(mu0, sigma, draws);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  // radius^2 ~ Normal(mu0, sigma^2) truncated at 0, angle uniform
  Rng rng(0x9d0ce5u);
  const double two_pi = 2.0 * std::acos(-1.0);
  double s2 = 0.0, s4 = 0.0;
  for (std::uint64_t k = 0; k < draws; ++k) {
    double r2;
    do {
      r2 = mu0 + sigma * rng.normal();
    } while (r2 < 0.0);
    const double theta = two_pi * rng.uniform01();
    const double s = std::sin(theta);
    const double x1sq = r2 * s * s;
    s2 += x1sq;
    s4 += x1sq * x1sq;
  }
  RingMoments m{s2 / static_cast<double>(draws),
                s4 / static_cast<double>(draws)};
  cache[key] = m;
  return m;
}

void RingMomentAccumulator::add(const std::array<double, 2>& s,
                                std::uint64_t m) {
  const double w = static_cast<double>(m);
  for (int i = 0; i < 2; ++i) {
    const double x = s[i];
    const double x2 = x * x;
    sum1[i] += w * x;
    sum2[i] += w * x2;
    sum4[i] += w * x2 * x2;
    if (x > 0.0) pos[i] += w;
  }
  total += m;
}

void RingMomentAccumulator::merge(const RingMomentAccumulator& other) {
  for (int i = 0; i < 2; ++i) {
    sum1[i] += other.sum1[i];
    sum2[i] += other.sum2[i];
    sum4[i] += other.sum4[i];
    pos[i] += other.pos[i];
  }
  total += other.total;
}

DonutsBias donuts_bias(const RingMomentAccumulator& acc,
                       const RingMoments& ref) {
  if (acc.total == 0) throw std::invalid_argument("empty accumulator");
  const double t = static_cast<double>(acc.total);
  DonutsBias b;
  for (int i = 0; i < 2; ++i) {
    b.first += std::abs(acc.sum1[i] / t);
    b.second += std::abs(acc.sum2[i] / t - ref.m2);
    b.fourth += std::abs(acc.sum4[i] / t - ref.m4);
    b.positive_rate += std::abs(acc.pos[i] / t - 0.5);
  }
  return b;
}

DonutsBias donuts_bias_suite(const ContinuousChain& chain, double mu0,
                             double sigma) {
  RingMomentAccumulator acc;
  for (std::size_t k = 0; k < chain.states.size(); ++k)
    acc.add(chain.states[k], chain.multiplicities[k]);
  return donuts_bias(acc, ring_reference_moments(mu0, sigma));
}

}  // namespace pns
