#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>

#include "pns/core.hpp"
#include "pns/models.hpp"

namespace pns {

// Multiplicity-weighted empirical distribution over visited states.
struct WeightedEmpirical {
  std::unordered_map<PackedState, std::uint64_t> mass;
  std::uint64_t total = 0;

  void add(PackedState s, std::uint64_t m) {
    mass[s] += m;
    total += m;
  }
  void merge(const WeightedEmpirical& other) {
    for (const auto& [s, m] : other.mass) mass[s] += m;
    total += other.total;
  }
  // Sink interface for the sampler engines.
  void operator()(PackedState s, std::uint64_t m) { add(s, m); }
};

// Half the L1 distance; empirical states missing from the table are a
// structural error, exact states missing from the empirical count as 0.
double tvd(const WeightedEmpirical& empirical, const ExactDistribution& exact);
double tvd(const ExactDistribution& a, const ExactDistribution& b);

// Multiplicity-weighted mean of h over the chain.
template <class H>
double estimate(const JumpChain& chain, H&& h) {
  if (chain.states.empty()) throw std::invalid_argument("empty chain");
  double acc = 0.0;
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < chain.states.size(); ++k) {
    acc += static_cast<double>(chain.multiplicities[k]) * h(chain.states[k]);
    total += chain.multiplicities[k];
  }
  return acc / static_cast<double>(total);
}

template <class H>
double estimate(const ContinuousChain& chain, H&& h) {
  if (chain.states.empty()) throw std::invalid_argument("empty chain");
  double acc = 0.0;
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < chain.states.size(); ++k) {
    acc += static_cast<double>(chain.multiplicities[k]) * h(chain.states[k]);
    total += chain.multiplicities[k];
  }
  return acc / static_cast<double>(total);
}

// Unit-mass empirical over replication end states vs. the exact table.
double starting_distribution_tvd(std::span<const PackedState> last_states,
                                 const ExactDistribution& exact);

// Reference moments of one coordinate of the ring distribution, estimated
// once per (mu0, sigma) by direct (radius^2, angle) simulation and cached.
struct RingMoments {
  double m2 = 0.0;  // E[X1^2]
  double m4 = 0.0;  // E[X1^4]
};
RingMoments ring_reference_moments(double mu0, double sigma,
                                   std::uint64_t draws = 10'000'000);

// Weighted moment sums for the Donuts bias suite; mergeable across chains.
struct RingMomentAccumulator {
  double sum1[2] = {0.0, 0.0};   // sum M * x_i
  double sum2[2] = {0.0, 0.0};   // sum M * x_i^2
  double sum4[2] = {0.0, 0.0};   // sum M * x_i^4
  double pos[2] = {0.0, 0.0};    // sum M * 1(x_i > 0)
  std::uint64_t total = 0;

  void add(const std::array<double, 2>& s, std::uint64_t m);
  void merge(const RingMomentAccumulator& other);
  void operator()(const std::array<double, 2>& s, std::uint64_t m) {
    add(s, m);
  }
};

// The four bias sums: |mean - ref| summed over both coordinates for degrees
// 1, 2, 4 and for the positive rate (ref 1/2).
struct DonutsBias {
  double first = 0.0;
  double second = 0.0;
  double fourth = 0.0;
  double positive_rate = 0.0;
};

DonutsBias donuts_bias(const RingMomentAccumulator& acc,
                       const RingMoments& ref);
DonutsBias donuts_bias_suite(const ContinuousChain& chain, double mu0,
                             double sigma);

}  // namespace pns
