#pragma once

#include <cstdint>
#include <vector>

#include "pns/rng.hpp"

namespace pns {

enum class SchemeKind {
  Full,
  SystematicPartition,
  RandomSubset,
  ExplicitSets,
  ContinuousSymmetricPairs,
};

// Rule producing the neighbor subset active for the current L0 window.
struct PartialNeighborScheme {
  SchemeKind kind = SchemeKind::Full;
  int set_size = 0;   // n, for systematic/random subsets
  int num_sets = 0;   // cycle length override for systematic; 0 = derive
  int num_pairs = 0;  // continuous: offsets come in +/- pairs
  std::uint64_t budget_l0 = 100;  // original samples per window
  std::vector<std::vector<int>> explicit_sets;

  static PartialNeighborScheme full(std::uint64_t l0 = 100);
  static PartialNeighborScheme systematic(int n, std::uint64_t l0,
                                          int num_sets = 0);
  static PartialNeighborScheme random_subset(int n, std::uint64_t l0);
  static PartialNeighborScheme explicit_list(std::vector<std::vector<int>> sets,
                                             std::uint64_t l0);
  static PartialNeighborScheme continuous_pairs(int pairs, std::uint64_t l0);
};

// n consecutive move indices starting at (i*n mod N), cyclic wrap-around;
// returned sorted. 0-based indices.
std::vector<int> systematic_index_set(int move_count, int set_size, int window);

// Number of distinct systematic sets before the cycle repeats.
int systematic_cycle_length(int move_count, int set_size);

// Uniformly distributed n-subset of {0..N-1}; returned sorted.
std::vector<int> random_index_set(int move_count, int set_size, Rng& rng);

// 2*num_pairs offset vectors: each standard-normal draw delta paired with
// -delta so candidate sets are reversible.
std::vector<std::vector<double>> symmetric_pair_offsets(int dim, int num_pairs,
                                                        Rng& rng);

// Iterates the window sets of a scheme over a model with `move_count` labels.
class SetSequence {
 public:
  static SetSequence make(const PartialNeighborScheme& scheme, int move_count,
                          Rng& rng);

  const std::vector<int>& current() const { return *current_; }
  std::size_t cycle_length() const { return sets_.size(); }

  // Advances to the next window's set; RandomSubset schemes redraw here.
  void advance(Rng& rng);

 private:
  SetSequence() = default;
  SchemeKind kind_ = SchemeKind::Full;
  int move_count_ = 0;
  int set_size_ = 0;
  std::size_t pos_ = 0;
  std::vector<std::vector<int>> sets_;  // systematic/explicit/full cycle
  std::vector<int> random_;             // RandomSubset storage
  const std::vector<int>* current_ = nullptr;

  void rebind();
};

}  // namespace pns
