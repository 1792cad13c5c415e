#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pns/core.hpp"
#include "pns/rng.hpp"

namespace pns {

// Acceptance-weighted proposal mass per candidate plus the total escape
// probability p (the geometric success rate for the multiplicity draw).
struct TransitionWeights {
  std::vector<double> weights;
  double escape_probability = 0.0;
};

// weights[z] = proposal(z) * min{1, exp(log_ratio) * reverse(z)/proposal(z)};
// evaluated in log space so large ratios never overflow.
void compute_transition_weights(std::span<const CandidateMove> candidates,
                                TransitionWeights& out);

inline TransitionWeights transition_weights(
    std::span<const CandidateMove> candidates) {
  TransitionWeights tw;
  compute_transition_weights(candidates, tw);
  return tw;
}

// Proportional selection via argmin of -log(R_j)/A_j over positive weights.
// Zero-weight entries are never selected; ties break to the lowest index.
std::size_t select_proportional(std::span<const double> weights, Rng& rng);

inline constexpr std::uint64_t kMultiplicityCap = std::uint64_t{1} << 62;

// 1 + Geometric(p) by inversion; p == 1 returns exactly 1 without consuming
// a draw. Draws capped at kMultiplicityCap (counted if a counter is given).
std::uint64_t sample_multiplicity(double p, Rng& rng,
                                  std::uint64_t* cap_hits = nullptr);

}  // namespace pns
