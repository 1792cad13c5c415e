#include "pns/select.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pns {

void compute_transition_weights(std::span<const CandidateMove> candidates,
                                TransitionWeights& out) {
  if (candidates.empty())
    throw std::invalid_argument("transition weights need a candidate set");
  out.weights.resize(candidates.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    const CandidateMove& c = candidates[j];
    double log_r = c.log_ratio;
    if (c.reverse != c.proposal) log_r += std::log(c.reverse / c.proposal);
    // min{1, r}: zero-density current states give log_r = +inf, accept = 1.
    const double a = log_r >= 0.0 ? c.proposal : c.proposal * std::exp(log_r);
    out.weights[j] = a;
    sum += a;
  }
  out.escape_probability = sum < 1.0 ? sum : 1.0;
}

std::size_t select_proportional(std::span<const double> weights, Rng& rng) {
  if (weights.empty())
    throw std::invalid_argument("selection needs at least one weight");
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_j = weights.size();
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!(weights[j] > 0.0)) continue;
    const double d = -std::log(rng.uniform_open_closed()) / weights[j];
    if (d < best) {
      best = d;
      best_j = j;
    }
  }
  if (best_j == weights.size())
    throw std::domain_error("no positive selection weight");
  return best_j;
}

std::uint64_t sample_multiplicity(double p, Rng& rng,
                                  std::uint64_t* cap_hits) {
  if (!(p > 0.0))
    throw std::domain_error("multiplicity needs escape probability p > 0");
  if (p >= 1.0) return 1;
  const double r = rng.uniform_open_closed();
  const double g = std::log(r) / std::log1p(-p);
  if (!(g < static_cast<double>(kMultiplicityCap))) {
    if (cap_hits) ++*cap_hits;
    return kMultiplicityCap;
  }
  return 1 + static_cast<std::uint64_t>(g);
}

}  // namespace pns
