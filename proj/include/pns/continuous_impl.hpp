#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pns/continuous.hpp"
#include "pns/select.hpp"

namespace pns {

template <ContinuousModel2D M, class Sink>
void mh_continuous_into(const M& model, double proposal_std,
                        std::uint64_t budget, std::uint64_t seed, Sink&& sink) {
  if (budget < 1) throw std::invalid_argument("budget must be >= 1");
  if (!(proposal_std > 0.0))
    throw std::invalid_argument("proposal std must be positive");
  Rng rng(seed);
  Vec2 cur{0.0, 0.0};
  double cur_ld = model.log_density(cur);
  std::uint64_t run = 0;
  for (std::uint64_t t = 0; t < budget; ++t) {
    const Vec2 prop{cur[0] + proposal_std * rng.normal(),
                    cur[1] + proposal_std * rng.normal()};
    const double prop_ld = model.log_density(prop);
    const double log_r = prop_ld - cur_ld;
    const double u = rng.uniform01();
    if (log_r >= 0.0 || u < std::exp(log_r)) {
      if (run > 0) sink(cur, run);
      cur = prop;
      cur_ld = prop_ld;
      run = 1;
    } else {
      ++run;
    }
  }
  if (run > 0) sink(cur, run);
}

template <ContinuousModel2D M, class Sink>
void unbiased_pns_continuous_into(const M& model, int num_pairs,
                                  std::uint64_t l0, std::uint64_t budget,
                                  std::uint64_t seed, Sink&& sink,
                                  ContinuousRunStats* stats) {
  if (budget < 1) throw std::invalid_argument("budget must be >= 1");
  if (num_pairs < 1) throw std::invalid_argument("num_pairs must be >= 1");
  if (l0 < 1) throw std::invalid_argument("window length L0 must be >= 1");
  Rng rng(seed);
  const std::size_t n_cand = 2 * static_cast<std::size_t>(num_pairs);
  std::vector<Vec2> offsets(n_cand);
  auto regen = [&]() {
    const auto raw = symmetric_pair_offsets(2, num_pairs, rng);
    for (std::size_t j = 0; j < n_cand; ++j)
      offsets[j] = Vec2{raw[j][0], raw[j][1]};
  };
  regen();

  Vec2 cur{0.0, 0.0};
  double cur_ld = model.log_density(cur);
  const double q = 1.0 / static_cast<double>(n_cand);
  std::vector<Vec2> cand(n_cand);
  std::vector<double> cand_ld(n_cand), weights(n_cand);
  std::uint64_t emitted = 0;
  std::uint64_t window_left = l0;
  std::uint64_t cap_hits = 0;
  while (emitted < budget) {
    if (window_left == 0) {
      regen();
      window_left = l0;
    }
    double p = 0.0;
    for (std::size_t j = 0; j < n_cand; ++j) {
      cand[j] = Vec2{cur[0] + offsets[j][0], cur[1] + offsets[j][1]};
      cand_ld[j] = model.log_density(cand[j]);
      const double log_r = cand_ld[j] - cur_ld;
      weights[j] = log_r >= 0.0 ? q : q * std::exp(log_r);
      p += weights[j];
    }
    p = std::min(p, 1.0);
    if (!(p > 0.0)) {
      // all acceptance weights vanished: repeat for the rest of the window
      const std::uint64_t take = std::min(window_left, budget - emitted);
      sink(cur, take);
      emitted += take;
      window_left = 0;
      if (stats) {
        ++stats->jump_entries;
        ++stats->zero_escape_windows;
      }
      continue;
    }
    const std::uint64_t m = sample_multiplicity(p, rng, &cap_hits);
    if (m <= window_left) {
      const std::uint64_t take = std::min(m, budget - emitted);
      sink(cur, take);
      emitted += take;
      window_left -= m;
      if (stats) ++stats->jump_entries;
      if (emitted >= budget) break;
      const std::size_t j = select_proportional(weights, rng);
      cur = cand[j];
      cur_ld = cand_ld[j];
    } else {
      const std::uint64_t take = std::min(window_left, budget - emitted);
      sink(cur, take);
      emitted += take;
      window_left = 0;
      if (stats) {
        ++stats->jump_entries;
        ++stats->forced_window_repeats;
      }
    }
  }
  if (stats) stats->multiplicity_cap_hits += cap_hits;
}

}  // namespace pns
