#include "pns/models.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

namespace pns {

QuboModel::QuboModel(int n_bits, std::vector<double> upper_triangular)
    : n_(n_bits), q_(std::move(upper_triangular)) {
  if (n_ < 1 || n_ > 62)
    throw std::invalid_argument("QUBO bit count must be in [1, 62]");
  const std::size_t need =
      static_cast<std::size_t>(n_) * (static_cast<std::size_t>(n_) + 1) / 2;
  if (q_.size() != need)
    throw std::invalid_argument("QUBO storage must hold N(N+1)/2 entries");
  for (double v : q_)
    if (!std::isfinite(v))
      throw std::invalid_argument("QUBO entries must be finite");
}

QuboModel QuboModel::random(int n_bits, double std_dev, std::uint64_t seed) {
  if (std_dev <= 0.0) throw std::invalid_argument("std_dev must be positive");
  const std::size_t need = static_cast<std::size_t>(n_bits) *
                           (static_cast<std::size_t>(n_bits) + 1) / 2;
  Rng rng(seed);
  std::vector<double> q(need);
  for (double& v : q) v = std_dev * rng.normal();
  return QuboModel(n_bits, std::move(q));
}

double QuboModel::log_weight(PackedState x) const {
  double e = 0.0;
  for (int i = 0; i < n_; ++i) {
    if (!((x >> i) & 1u)) continue;
    e += entry(i, i);
    for (int j = i + 1; j < n_; ++j)
      if ((x >> j) & 1u) e += entry(i, j);
  }
  return e;
}

double QuboModel::flip_delta(PackedState x, int i) const {
  if (i < 0 || i >= n_) throw std::out_of_range("flip index out of range");
  double cross = entry(i, i);
  for (int j = 0; j < i; ++j)
    if ((x >> j) & 1u) cross += entry(j, i);
  for (int j = i + 1; j < n_; ++j)
    if ((x >> j) & 1u) cross += entry(i, j);
  const double sign = ((x >> i) & 1u) ? -1.0 : 1.0;
  return sign * cross;
}

PackedState QuboModel::random_state(Rng& rng) const {
  return rng.below(state_count());
}

CandidateMove QuboModel::propose_move(PackedState x, Rng& rng) const {
  const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_)));
  const double q = 1.0 / n_;
  return CandidateMove{x ^ (PackedState{1} << i), flip_delta(x, i), q, q};
}

void QuboModel::full_moves(PackedState x,
                           std::vector<CandidateMove>& out) const {
  out.clear();
  const double q = 1.0 / n_;
  for (int i = 0; i < n_; ++i)
    out.push_back(
        CandidateMove{x ^ (PackedState{1} << i), flip_delta(x, i), q, q});
}

void QuboModel::subset_moves(PackedState x, std::span<const int> labels,
                             std::vector<CandidateMove>& out) const {
  out.clear();
  if (labels.empty()) return;
  const double q = 1.0 / static_cast<double>(labels.size());
  for (int i : labels) {
    if (i < 0 || i >= n_) throw std::out_of_range("flip index out of range");
    out.push_back(
        CandidateMove{x ^ (PackedState{1} << i), flip_delta(x, i), q, q});
  }
}

bool QuboModel::scheme_covers(
    const std::vector<std::vector<int>>& sets) const {
  std::uint64_t seen = 0;
  for (const auto& s : sets)
    for (int i : s)
      if (i >= 0 && i < n_) seen |= std::uint64_t{1} << i;
  return std::popcount(seen) == n_;
}

TabularModel::TabularModel(std::vector<double> log_weights,
                           std::vector<std::vector<Neighbor>> adjacency)
    : log_weights_(std::move(log_weights)), adjacency_(std::move(adjacency)) {
  const std::size_t k = log_weights_.size();
  if (k == 0) throw std::invalid_argument("tabular model needs states");
  if (adjacency_.size() != k)
    throw std::invalid_argument("adjacency size must match state count");
  for (double lw : log_weights_)
    if (!std::isfinite(lw))
      throw std::invalid_argument("log weights must be finite");
  degree_ = static_cast<int>(adjacency_[0].size());
  for (std::size_t x = 0; x < k; ++x) {
    const auto& row = adjacency_[x];
    if (static_cast<int>(row.size()) != degree_)
      throw std::invalid_argument("tabular models here have constant degree");
    double z = 0.0;
    for (const Neighbor& nb : row) {
      if (nb.to < 0 || nb.to >= static_cast<int>(k) ||
          nb.to == static_cast<int>(x))
        throw std::invalid_argument("bad neighbor index");
      if (!(nb.proposal > 0.0))
        throw std::invalid_argument("proposal weights must be positive");
      z += nb.proposal;
      // symmetry as an unweighted relation
      bool back = false;
      for (const Neighbor& rb : adjacency_[nb.to])
        if (rb.to == static_cast<int>(x)) back = true;
      if (!back) throw std::invalid_argument("adjacency must be symmetric");
    }
    if (std::abs(z - 1.0) > 1e-9)
      throw std::invalid_argument("proposal rows must normalize to 1");
  }
}

double TabularModel::proposal(int from, int to) const {
  for (const Neighbor& nb : adjacency_[from])
    if (nb.to == to) return nb.proposal;
  return 0.0;
}

PackedState TabularModel::random_state(Rng& rng) const {
  return rng.below(log_weights_.size());
}

CandidateMove TabularModel::propose_move(PackedState x, Rng& rng) const {
  const auto& row = adjacency_[check_state(x)];
  double u = rng.uniform01();
  std::size_t pick = row.size() - 1;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (u < row[j].proposal) {
      pick = j;
      break;
    }
    u -= row[j].proposal;
  }
  const Neighbor& nb = row[pick];
  return CandidateMove{static_cast<PackedState>(nb.to),
                       log_weights_[nb.to] - log_weights_[x], nb.proposal,
                       proposal(nb.to, static_cast<int>(x))};
}

void TabularModel::full_moves(PackedState x,
                              std::vector<CandidateMove>& out) const {
  out.clear();
  const int xi = static_cast<int>(check_state(x));
  for (const Neighbor& nb : adjacency_[xi])
    out.push_back(CandidateMove{static_cast<PackedState>(nb.to),
                                log_weights_[nb.to] - log_weights_[xi],
                                nb.proposal, proposal(nb.to, xi)});
}

double TabularModel::restricted_mass(int x, std::span<const int> labels) const {
  bool x_in = false;
  for (int l : labels)
    if (l == x) x_in = true;
  double z = 0.0;
  for (const Neighbor& nb : adjacency_[x]) {
    bool active = x_in;
    if (!active)
      for (int l : labels)
        if (l == nb.to) active = true;
    if (active) z += nb.proposal;
  }
  return z;
}

void TabularModel::subset_moves(PackedState x, std::span<const int> labels,
                                std::vector<CandidateMove>& out) const {
  out.clear();
  const int xi = static_cast<int>(check_state(x));
  bool x_in = false;
  for (int l : labels) {
    if (l < 0 || l >= state_count_int())
      throw std::out_of_range("label out of range");
    if (l == xi) x_in = true;
  }
  const double zx = restricted_mass(xi, labels);
  if (!(zx > 0.0)) return;
  for (const Neighbor& nb : adjacency_[xi]) {
    bool active = x_in;
    if (!active)
      for (int l : labels)
        if (l == nb.to) active = true;
    if (!active) continue;
    const double zy = restricted_mass(nb.to, labels);
    out.push_back(CandidateMove{static_cast<PackedState>(nb.to),
                                log_weights_[nb.to] - log_weights_[xi],
                                nb.proposal / zx,
                                proposal(nb.to, xi) / zy});
  }
}

bool TabularModel::scheme_covers(
    const std::vector<std::vector<int>>& sets) const {
  for (int x = 0; x < state_count_int(); ++x) {
    for (const Neighbor& nb : adjacency_[x]) {
      bool covered = false;
      for (const auto& s : sets) {
        for (int l : s)
          if (l == x || l == nb.to) covered = true;
        if (covered) break;
      }
      if (!covered) return false;
    }
  }
  return true;
}

TabularModel make_triangle() {
  std::vector<double> lw = {0.0, std::log(2.0), std::log(3.0)};
  std::vector<std::vector<TabularModel::Neighbor>> adj = {
      {{1, 0.5}, {2, 0.5}},
      {{0, 0.5}, {2, 0.5}},
      {{0, 0.5}, {1, 0.5}},
  };
  return TabularModel(std::move(lw), std::move(adj));
}

QuboModel make_hypercube16() {
  // x^T I x = popcount(x)
  std::vector<double> q(10, 0.0);
  for (int i = 0; i < 4; ++i) q[i * 4 - i * (i - 1) / 2] = 1.0;
  return QuboModel(4, std::move(q));
}

QuboModel load_qubo(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open QUBO file: " + path);
  int n = 0;
  if (!(in >> n)) throw std::runtime_error("QUBO file missing bit count");
  if (n < 1 || n > 62) throw std::runtime_error("QUBO bit count out of range");
  const std::size_t need =
      static_cast<std::size_t>(n) * (static_cast<std::size_t>(n) + 1) / 2;
  std::vector<double> q(need);
  for (std::size_t k = 0; k < need; ++k)
    if (!(in >> q[k]))
      throw std::runtime_error("QUBO file truncated: expected " +
                               std::to_string(need) + " entries");
  return QuboModel(n, std::move(q));
}

void save_qubo(const std::string& path, const QuboModel& model) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write QUBO file: " + path);
  out << model.n_bits() << "\n";
  out.precision(17);
  const auto& q = model.upper_triangular();
  for (std::size_t k = 0; k < q.size(); ++k)
    out << q[k] << (k + 1 == q.size() ? "\n" : " ");
}

}  // namespace pns
