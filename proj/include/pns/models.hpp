#pragma once

#include <cmath>
#include <concepts>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pns/core.hpp"
#include "pns/rng.hpp"

namespace pns {

// What every discrete sampler engine needs from a target model.
// Move labels index 0..move_count()-1; subset_moves() restricts proposals to
// a label set and renormalizes at both endpoints so Hastings ratios stay
// exact under partial neighbor sets.
template <class M>
concept DiscreteSamplerModel =
    requires(const M m, PackedState s, Rng& rng, std::vector<CandidateMove>& out,
             std::span<const int> labels) {
      { m.move_count() } -> std::convertible_to<int>;
      { m.degree() } -> std::convertible_to<int>;
      { m.log_weight(s) } -> std::convertible_to<double>;
      { m.random_state(rng) } -> std::convertible_to<PackedState>;
      { m.propose_move(s, rng) } -> std::convertible_to<CandidateMove>;
      m.full_moves(s, out);
      m.subset_moves(s, labels, out);
    };

template <class M>
concept EnumerableModel = DiscreteSamplerModel<M> && requires(const M m) {
  { m.state_count() } -> std::convertible_to<std::uint64_t>;
};

// Target pi(x) = exp(x^T Q x) over bit vectors, Q upper triangular.
// Proposals are uniform over the N single-flip neighbors; move label j
// flips bit j, so label subsets are symmetric automatically.
class QuboModel {
 public:
  QuboModel(int n_bits, std::vector<double> upper_triangular);

  static QuboModel random(int n_bits, double std_dev, std::uint64_t seed);

  int n_bits() const { return n_; }
  int move_count() const { return n_; }
  int degree() const { return n_; }
  std::uint64_t state_count() const { return std::uint64_t{1} << n_; }

  double entry(int i, int j) const { return q_[tri_index(i, j)]; }
  const std::vector<double>& upper_triangular() const { return q_; }

  double log_weight(PackedState x) const;

  // Change in x^T Q x if bit i flips; O(N).
  double flip_delta(PackedState x, int i) const;

  PackedState random_state(Rng& rng) const;
  CandidateMove propose_move(PackedState x, Rng& rng) const;
  void full_moves(PackedState x, std::vector<CandidateMove>& out) const;
  void subset_moves(PackedState x, std::span<const int> labels,
                    std::vector<CandidateMove>& out) const;

  // True when cycling the given label sets reaches every flip coordinate.
  bool scheme_covers(const std::vector<std::vector<int>>& sets) const;

 private:
  std::size_t tri_index(int i, int j) const {
    // i <= j, row-major upper triangle
    return static_cast<std::size_t>(i) * n_ -
           static_cast<std::size_t>(i) * (i - 1) / 2 + (j - i);
  }
  int n_;
  std::vector<double> q_;
};

// Explicit finite target: per-state log weights and neighbor lists with
// proposal weights (rows normalized to 1). Move label k means "edges
// incident to state k": the active set for labels S at state x is
// {y ~ x : x in S or y in S}, which is symmetric by construction.
class TabularModel {
 public:
  struct Neighbor {
    int to;
    double proposal;
  };

  TabularModel(std::vector<double> log_weights,
               std::vector<std::vector<Neighbor>> adjacency);

  int state_count_int() const { return static_cast<int>(log_weights_.size()); }
  std::uint64_t state_count() const { return log_weights_.size(); }
  int move_count() const { return state_count_int(); }
  int degree() const { return degree_; }

  double log_weight(PackedState x) const {
    return log_weights_[check_state(x)];
  }
  double proposal(int from, int to) const;

  PackedState random_state(Rng& rng) const;
  CandidateMove propose_move(PackedState x, Rng& rng) const;
  void full_moves(PackedState x, std::vector<CandidateMove>& out) const;
  void subset_moves(PackedState x, std::span<const int> labels,
                    std::vector<CandidateMove>& out) const;

  // Every edge must be active under some set in the cycle.
  bool scheme_covers(const std::vector<std::vector<int>>& sets) const;

 private:
  std::size_t check_state(PackedState x) const {
    if (x >= log_weights_.size())
      throw std::out_of_range("state index out of range");
    return static_cast<std::size_t>(x);
  }
  double restricted_mass(int x, std::span<const int> labels) const;

  std::vector<double> log_weights_;
  std::vector<std::vector<Neighbor>> adjacency_;
  int degree_ = 0;
};

// pi ∝ (1, 2, 3) on three mutually adjacent states A=0, B=1, C=2.
TabularModel make_triangle();

// 16-state model: 4-bit hypercube with pi(x) ∝ e^{popcount(x)}, realized as
// a QUBO with the identity matrix. Degree 4, uniform 1/4 proposals.
QuboModel make_hypercube16();

QuboModel load_qubo(const std::string& path);
void save_qubo(const std::string& path, const QuboModel& model);

// Normalized probability table indexed by packed state.
struct ExactDistribution {
  std::vector<double> prob;
  std::size_t size() const { return prob.size(); }
};

inline constexpr std::uint64_t kExactStateGuard = std::uint64_t{1} << 20;

// pi(x) = exp(log_weight(x) - logsumexp); guarded against huge spaces.
template <EnumerableModel M>
ExactDistribution exact_distribution(const M& model,
                                     std::uint64_t max_states = kExactStateGuard) {
  const std::uint64_t n = model.state_count();
  if (n > max_states)
    throw std::domain_error("state space too large for exact enumeration");
  ExactDistribution d;
  d.prob.resize(static_cast<std::size_t>(n));
  double max_lw = -std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 0; s < n; ++s) {
    d.prob[s] = model.log_weight(s);
    if (d.prob[s] > max_lw) max_lw = d.prob[s];
  }
  double z = 0.0;
  for (double& v : d.prob) {
    v = std::exp(v - max_lw);
    z += v;
  }
  for (double& v : d.prob) v /= z;
  return d;
}

}  // namespace pns
