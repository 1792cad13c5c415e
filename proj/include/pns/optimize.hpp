#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "pns/core.hpp"
#include "pns/models.hpp"
#include "pns/rng.hpp"
#include "pns/select.hpp"

namespace pns {

// Non-increasing temperature schedule T(k) > 0, k = 1..steps.
struct CoolingSchedule {
  enum class Kind { Constant, Geometric };
  Kind kind = Kind::Constant;
  double t_start = 1.0;
  double ratio = 1.0;

  static CoolingSchedule constant(double t) {
    if (!(t > 0.0)) throw std::invalid_argument("temperature must be > 0");
    return {Kind::Constant, t, 1.0};
  }
  static CoolingSchedule geometric(double t_start, double ratio) {
    if (!(t_start > 0.0) || !(ratio > 0.0) || ratio > 1.0)
      throw std::invalid_argument("geometric schedule needs T>0, ratio in (0,1]");
    return {Kind::Geometric, t_start, ratio};
  }
  double at(std::uint64_t k) const {
    return kind == Kind::Constant
               ? t_start
               : t_start * std::pow(ratio, static_cast<double>(k));
  }
};

struct OptimizationResult {
  PackedState best_state = 0;
  double best_log_weight = 0.0;
  PackedState final_state = 0;
  double final_log_weight = 0.0;
  std::uint64_t steps = 0;
  std::uint64_t accepted = 0;
};

namespace detail {
struct NoTrace {
  void operator()(PackedState) const {}
};
}  // namespace detail

// Tempered Metropolis maximizing pi: accept with min{1, ratio^(1/T(k))},
// tracking the running maximum.
template <DiscreteSamplerModel M, class Trace = detail::NoTrace>
OptimizationResult run_sa(const M& model, const CoolingSchedule& schedule,
                          std::uint64_t steps, Rng& rng, PackedState x0,
                          Trace&& trace = Trace{}) {
  OptimizationResult r;
  PackedState cur = x0;
  double cur_lw = model.log_weight(cur);
  r.best_state = cur;
  r.best_log_weight = cur_lw;
  for (std::uint64_t k = 1; k <= steps; ++k) {
    const CandidateMove mv = model.propose_move(cur, rng);
    const double t = schedule.at(k);
    const double log_r = mv.log_ratio / t;
    const double u = rng.uniform01();
    if (log_r >= 0.0 || u < std::exp(log_r)) {
      cur = mv.to;
      cur_lw += mv.log_ratio;
      ++r.accepted;
      if (cur_lw > r.best_log_weight) {
        r.best_log_weight = cur_lw;
        r.best_state = cur;
      }
    }
    trace(cur);
  }
  r.final_state = cur;
  r.final_log_weight = cur_lw;
  r.steps = steps;
  return r;
}

template <DiscreteSamplerModel M>
OptimizationResult run_sa(const M& model, const CoolingSchedule& schedule,
                          std::uint64_t steps, std::uint64_t seed) {
  Rng rng(seed);
  const PackedState x0 = model.random_state(rng);
  return run_sa(model, schedule, steps, rng, x0);
}

// Rejection-free ascent over the full neighbor set; every step jumps, no
// multiplicities, running maximum kept.
template <DiscreteSamplerModel M>
OptimizationResult run_opt_rf(const M& model, std::uint64_t steps, Rng& rng,
                              PackedState x0) {
  OptimizationResult r;
  PackedState cur = x0;
  double cur_lw = model.log_weight(cur);
  r.best_state = cur;
  r.best_log_weight = cur_lw;
  std::vector<CandidateMove> cands;
  TransitionWeights tw;
  for (std::uint64_t k = 0; k < steps; ++k) {
    model.full_moves(cur, cands);
    compute_transition_weights(cands, tw);
    if (!(tw.escape_probability > 0.0))
      throw std::domain_error("state has no exit mass under the proposal");
    const std::size_t j = select_proportional(tw.weights, rng);
    cur = cands[j].to;
    cur_lw += cands[j].log_ratio;
    ++r.accepted;
    if (cur_lw > r.best_log_weight) {
      r.best_log_weight = cur_lw;
      r.best_state = cur;
    }
  }
  r.final_state = cur;
  r.final_log_weight = cur_lw;
  r.steps = steps;
  return r;
}

template <DiscreteSamplerModel M>
OptimizationResult run_opt_rf(const M& model, std::uint64_t steps,
                              std::uint64_t seed) {
  Rng rng(seed);
  const PackedState x0 = model.random_state(rng);
  return run_opt_rf(model, steps, rng, x0);
}

// Rejection-free ascent over a fresh random neighbor subset per step.
template <DiscreteSamplerModel M>
OptimizationResult run_opt_pns(const M& model, int subset_size,
                               std::uint64_t steps, Rng& rng, PackedState x0) {
  const int deg = model.degree();
  if (subset_size < 1 || subset_size > deg)
    throw std::invalid_argument("subset size must be in [1, degree]");
  OptimizationResult r;
  PackedState cur = x0;
  double cur_lw = model.log_weight(cur);
  r.best_state = cur;
  r.best_log_weight = cur_lw;
  std::vector<CandidateMove> all, sub;
  std::vector<int> slots(static_cast<std::size_t>(deg));
  TransitionWeights tw;
  for (std::uint64_t k = 0; k < steps; ++k) {
    model.full_moves(cur, all);
    std::iota(slots.begin(), slots.end(), 0);
    for (int i = 0; i < subset_size; ++i) {
      const std::uint64_t j =
          i + rng.below(static_cast<std::uint64_t>(deg - i));
      std::swap(slots[i], slots[j]);
    }
    sub.clear();
    double z = 0.0;
    for (int i = 0; i < subset_size; ++i) z += all[slots[i]].proposal;
    for (int i = 0; i < subset_size; ++i) {
      CandidateMove c = all[slots[i]];
      c.proposal /= z;
      c.reverse /= z;
      sub.push_back(c);
    }
    compute_transition_weights(sub, tw);
    if (!(tw.escape_probability > 0.0))
      throw std::domain_error("state has no exit mass under the subset");
    const std::size_t j = select_proportional(tw.weights, rng);
    cur = sub[j].to;
    cur_lw += sub[j].log_ratio;
    ++r.accepted;
    if (cur_lw > r.best_log_weight) {
      r.best_log_weight = cur_lw;
      r.best_state = cur;
    }
  }
  r.final_state = cur;
  r.final_log_weight = cur_lw;
  r.steps = steps;
  return r;
}

template <DiscreteSamplerModel M>
OptimizationResult run_opt_pns(const M& model, int subset_size,
                               std::uint64_t steps, std::uint64_t seed) {
  Rng rng(seed);
  const PackedState x0 = model.random_state(rng);
  return run_opt_pns(model, subset_size, steps, rng, x0);
}

// Optimization-PNS warm start: K0 steps from a uniform random state; hands
// back the final (not best) state as the sampler's J0.
template <DiscreteSamplerModel M>
PackedState optimization_pns_start(const M& model, std::uint64_t steps,
                                   int subset_size, Rng& rng,
                                   bool use_best = false) {
  if (subset_size <= 0) subset_size = std::max(1, model.degree() / 2);
  const PackedState x0 = model.random_state(rng);
  if (steps == 0) return x0;
  const OptimizationResult r = run_opt_pns(model, subset_size, steps, rng, x0);
  return use_best ? r.best_state : r.final_state;
}

}  // namespace pns
