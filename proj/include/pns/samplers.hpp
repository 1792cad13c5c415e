#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "pns/core.hpp"
#include "pns/models.hpp"
#include "pns/optimize.hpp"
#include "pns/rng.hpp"
#include "pns/scheme.hpp"
#include "pns/select.hpp"

namespace pns {

enum class Method {
  MH,
  RF,
  BasicPNS,
  MHAlternating,
  RFAlternating,
  UnbiasedPNS,
  UnbiasedPNSNaive,
  MHContinuous,
  UnbiasedPNSContinuous,
};

struct BurnIn {
  enum class Kind { None, Discard, Optimize };
  Kind kind = Kind::Discard;
  // Discard: samples dropped before recording (0 = one budget's worth).
  // Optimize: jump steps of Optimization PNS before the chain starts.
  std::uint64_t amount = 0;

  static BurnIn none() { return {Kind::None, 0}; }
  static BurnIn discard(std::uint64_t count = 0) {
    return {Kind::Discard, count};
  }
  static BurnIn optimize(std::uint64_t steps) {
    return {Kind::Optimize, steps};
  }
};

struct SamplerConfig {
  Method method = Method::MH;
  PartialNeighborScheme scheme;
  std::uint64_t budget = 0;  // original samples kept
  std::uint64_t seed = 0;
  BurnIn burn_in = BurnIn::discard();
  bool optimize_use_best = false;  // hand X_max instead of the final state
  int optimize_subset_size = 0;    // 0 = half the move coordinates
};

// ---------------------------------------------------------------------------
// Engines. Each emits (state, multiplicity) pairs through the sink with
// multiplicities summing exactly to `budget`. RNG draw order is fixed:
// multiplicity, then selection, then any boundary set regeneration.
// ---------------------------------------------------------------------------

// Plain Metropolis-Hastings over the full neighbor set; one proposal and one
// uniform per original sample. Output is run-length compressed.
template <DiscreteSamplerModel M, class Sink>
void mh_chain(const M& model, std::uint64_t budget, PackedState x0, Rng& rng,
              Sink&& sink) {
  PackedState cur = x0;
  std::uint64_t run = 0;
  for (std::uint64_t t = 0; t < budget; ++t) {
    const CandidateMove mv = model.propose_move(cur, rng);
    double log_r = mv.log_ratio;
    if (mv.reverse != mv.proposal) log_r += std::log(mv.reverse / mv.proposal);
    const double u = rng.uniform01();
    const bool accept = log_r >= 0.0 || u < std::exp(log_r);
    if (accept && mv.to != cur) {
      if (run > 0) sink(cur, run);
      cur = mv.to;
      run = 1;
    } else {
      ++run;
    }
  }
  if (run > 0) sink(cur, run);
}

// Rejection-free over the full neighbor set: proportional selection plus a
// geometric multiplicity, truncated to land exactly on the budget.
template <DiscreteSamplerModel M, class Sink>
void rf_chain(const M& model, std::uint64_t budget, PackedState x0, Rng& rng,
              Sink&& sink, RunStats* stats = nullptr) {
  PackedState cur = x0;
  std::uint64_t emitted = 0;
  std::vector<CandidateMove> cands;
  TransitionWeights tw;
  std::uint64_t cap_hits = 0;
  while (emitted < budget) {
    model.full_moves(cur, cands);
    compute_transition_weights(cands, tw);
    if (!(tw.escape_probability > 0.0))
      throw std::domain_error("state has no exit mass under the proposal");
    const std::uint64_t m = sample_multiplicity(tw.escape_probability, rng,
                                                &cap_hits);
    const std::uint64_t take = std::min(m, budget - emitted);
    sink(cur, take);
    emitted += take;
    if (stats) ++stats->jump_entries;
    if (emitted >= budget) break;
    cur = cands[select_proportional(tw.weights, rng)].to;
  }
  if (stats) stats->multiplicity_cap_hits += cap_hits;
}

// Basic PNS: a fresh uniformly random subset of the current state's
// neighbors at every jump step. Selection weights renormalize the proposal
// over the subset; the acceptance ratio keeps the unrestricted proposal,
// matching the per-step construction. Known-biased.
template <DiscreteSamplerModel M, class Sink>
void basic_pns_chain(const M& model, int subset_size, std::uint64_t budget,
                     PackedState x0, Rng& rng, Sink&& sink,
                     RunStats* stats = nullptr) {
  const int deg = model.degree();
  if (subset_size < 1 || subset_size > deg)
    throw std::invalid_argument("subset size must be in [1, degree]");
  PackedState cur = x0;
  std::uint64_t emitted = 0;
  std::vector<CandidateMove> all, sub;
  std::vector<int> slots(static_cast<std::size_t>(deg));
  TransitionWeights tw;
  std::uint64_t cap_hits = 0;
  while (emitted < budget) {
    model.full_moves(cur, all);
    std::iota(slots.begin(), slots.end(), 0);
    for (int k = 0; k < subset_size; ++k) {
      const std::uint64_t j =
          k + rng.below(static_cast<std::uint64_t>(deg - k));
      std::swap(slots[k], slots[j]);
    }
    sub.clear();
    double z = 0.0;
    for (int k = 0; k < subset_size; ++k) z += all[slots[k]].proposal;
    for (int k = 0; k < subset_size; ++k) {
      CandidateMove c = all[slots[k]];
      c.proposal /= z;
      c.reverse /= z;  // same normalization both ways: raw Hastings ratio
      sub.push_back(c);
    }
    compute_transition_weights(sub, tw);
    if (!(tw.escape_probability > 0.0))
      throw std::domain_error("state has no exit mass under the subset");
    const std::uint64_t m = sample_multiplicity(tw.escape_probability, rng,
                                                &cap_hits);
    const std::uint64_t take = std::min(m, budget - emitted);
    sink(cur, take);
    emitted += take;
    if (stats) ++stats->jump_entries;
    if (emitted >= budget) break;
    cur = sub[select_proportional(tw.weights, rng)].to;
  }
  if (stats) stats->multiplicity_cap_hits += cap_hits;
}

// Windowed Metropolis-Hastings: L0 original samples per partial neighbor
// set, then the sequence advances. Covers alternating-chain M-H and the
// one-proposal-per-step unbiased PNS oracle.
template <DiscreteSamplerModel M, class Sink>
void windowed_mh_chain(const M& model, const PartialNeighborScheme& scheme,
                       std::uint64_t budget, PackedState x0, Rng& rng,
                       Sink&& sink) {
  const std::uint64_t l0 = scheme.budget_l0;
  if (l0 < 1) throw std::invalid_argument("window length must be >= 1");
  SetSequence seq = SetSequence::make(scheme, model.move_count(), rng);
  PackedState cur = x0;
  std::uint64_t run = 0;
  std::uint64_t window_left = l0;
  std::vector<CandidateMove> cands;
  for (std::uint64_t t = 0; t < budget; ++t) {
    if (window_left == 0) {
      seq.advance(rng);
      window_left = l0;
    }
    model.subset_moves(cur, seq.current(), cands);
    if (!cands.empty()) {
      // propose within the restricted set (weights sum to 1)
      double u = rng.uniform01();
      std::size_t pick = cands.size() - 1;
      for (std::size_t j = 0; j < cands.size(); ++j) {
        if (u < cands[j].proposal) {
          pick = j;
          break;
        }
        u -= cands[j].proposal;
      }
      const CandidateMove& mv = cands[pick];
      double log_r = mv.log_ratio;
      if (mv.reverse != mv.proposal)
        log_r += std::log(mv.reverse / mv.proposal);
      const double ua = rng.uniform01();
      if ((log_r >= 0.0 || ua < std::exp(log_r)) && mv.to != cur) {
        if (run > 0) sink(cur, run);
        cur = mv.to;
        run = 1;
      } else {
        ++run;
      }
    } else {
      ++run;  // nothing proposable under this set; the sample still counts
    }
    --window_left;
  }
  if (run > 0) sink(cur, run);
}

// Windowed rejection-free: jump steps restricted to the active set; a draw
// exceeding the remaining window closes it with a forced repeat ("stay for
// L times and switch"). A window exhausted exactly advances without a
// zero-multiplicity entry.
template <DiscreteSamplerModel M, class Sink>
void windowed_rf_chain(const M& model, const PartialNeighborScheme& scheme,
                       std::uint64_t budget, PackedState x0, Rng& rng,
                       Sink&& sink, RunStats* stats = nullptr) {
  const std::uint64_t l0 = scheme.budget_l0;
  if (l0 < 1) throw std::invalid_argument("window length must be >= 1");
  SetSequence seq = SetSequence::make(scheme, model.move_count(), rng);
  PackedState cur = x0;
  std::uint64_t emitted = 0;
  std::uint64_t window_left = l0;
  std::vector<CandidateMove> cands;
  TransitionWeights tw;
  std::uint64_t cap_hits = 0;
  while (emitted < budget) {
    if (window_left == 0) {
      seq.advance(rng);
      window_left = l0;
    }
    model.subset_moves(cur, seq.current(), cands);
    double p = 0.0;
    if (!cands.empty()) {
      compute_transition_weights(cands, tw);
      p = tw.escape_probability;
    }
    if (!(p > 0.0)) {
      // no exit mass under this set: absorb the rest of the window here
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
      cur = cands[select_proportional(tw.weights, rng)].to;
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

// ---------------------------------------------------------------------------
// Dispatch with burn-in handling.
// ---------------------------------------------------------------------------

namespace detail {

// Drops the first `skip` original samples, forwarding the remainder.
template <class Inner>
struct SkipSink {
  std::uint64_t skip;
  Inner& inner;
  void operator()(PackedState s, std::uint64_t m) {
    if (skip >= m) {
      skip -= m;
      return;
    }
    inner(s, m - skip);
    skip = 0;
  }
};

}  // namespace detail

void validate_sampler_config(const SamplerConfig& cfg, int move_count,
                             int degree);

template <DiscreteSamplerModel M>
bool scheme_covers_model(const M& model, const PartialNeighborScheme& scheme) {
  switch (scheme.kind) {
    case SchemeKind::Full:
    case SchemeKind::RandomSubset:
      return true;  // random subsets cover across windows
    case SchemeKind::SystematicPartition: {
      const int cycle = scheme.num_sets > 0
                            ? scheme.num_sets
                            : systematic_cycle_length(model.move_count(),
                                                      scheme.set_size);
      std::vector<std::vector<int>> sets;
      for (int i = 0; i < cycle; ++i)
        sets.push_back(
            systematic_index_set(model.move_count(), scheme.set_size, i));
      return model.scheme_covers(sets);
    }
    case SchemeKind::ExplicitSets:
      return model.scheme_covers(scheme.explicit_sets);
    case SchemeKind::ContinuousSymmetricPairs:
      return false;
  }
  return false;
}

// Runs the configured discrete sampler, streaming retained samples into the
// sink. Draw order: initial state, optimizer burn-in (if any), chain.
template <DiscreteSamplerModel M, class Sink>
void run_sampler_into(const M& model, const SamplerConfig& cfg, Sink&& sink,
                      RunStats* stats = nullptr) {
  validate_sampler_config(cfg, model.move_count(), model.degree());
  if ((cfg.method == Method::UnbiasedPNS ||
       cfg.method == Method::RFAlternating ||
       cfg.method == Method::MHAlternating ||
       cfg.method == Method::UnbiasedPNSNaive) &&
      !scheme_covers_model(model, cfg.scheme))
    throw std::invalid_argument(
        "scheme does not cover the neighbor structure");
  Rng rng(cfg.seed);
  PackedState x0 = model.random_state(rng);
  std::uint64_t discard = 0;
  if (cfg.burn_in.kind == BurnIn::Kind::Discard) {
    discard = cfg.burn_in.amount > 0 ? cfg.burn_in.amount : cfg.budget;
  } else if (cfg.burn_in.kind == BurnIn::Kind::Optimize &&
             cfg.burn_in.amount > 0) {
    const int ss = cfg.optimize_subset_size > 0
                       ? cfg.optimize_subset_size
                       : std::max(1, model.degree() / 2);
    const OptimizationResult warm =
        run_opt_pns(model, ss, cfg.burn_in.amount, rng, x0);
    x0 = cfg.optimize_use_best ? warm.best_state : warm.final_state;
  }
  const std::uint64_t total = cfg.budget + discard;
  detail::SkipSink<Sink> skipping{discard, sink};
  switch (cfg.method) {
    case Method::MH:
      mh_chain(model, total, x0, rng, skipping);
      break;
    case Method::RF:
      rf_chain(model, total, x0, rng, skipping, stats);
      break;
    case Method::BasicPNS: {
      const int n = cfg.scheme.kind == SchemeKind::Full ? model.degree()
                                                        : cfg.scheme.set_size;
      basic_pns_chain(model, n, total, x0, rng, skipping, stats);
      break;
    }
    case Method::MHAlternating:
    case Method::UnbiasedPNSNaive:
      windowed_mh_chain(model, cfg.scheme, total, x0, rng, skipping);
      break;
    case Method::RFAlternating:
    case Method::UnbiasedPNS:
      windowed_rf_chain(model, cfg.scheme, total, x0, rng, skipping, stats);
      break;
    default:
      throw std::invalid_argument("not a discrete sampling method");
  }
}

template <DiscreteSamplerModel M>
JumpChain run_sampler(const M& model, const SamplerConfig& cfg,
                      RunStats* stats = nullptr) {
  JumpChain chain;
  auto collect = [&chain](PackedState s, std::uint64_t m) {
    chain.append(s, m);
  };
  run_sampler_into(model, cfg, collect, stats);
  return chain;
}

}  // namespace pns
