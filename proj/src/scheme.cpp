#include "pns/scheme.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace pns {

namespace {

void check_set_size(int move_count, int set_size) {
  if (move_count < 1) throw std::invalid_argument("move count must be positive");
  if (set_size < 1 || set_size > move_count)
    throw std::invalid_argument("invalid scheme: set size must be in [1, N]");
}

}  // namespace

PartialNeighborScheme PartialNeighborScheme::full(std::uint64_t l0) {
  PartialNeighborScheme s;
  s.kind = SchemeKind::Full;
  s.budget_l0 = l0;
  return s;
}

PartialNeighborScheme PartialNeighborScheme::systematic(int n, std::uint64_t l0,
                                                        int num_sets) {
  PartialNeighborScheme s;
  s.kind = SchemeKind::SystematicPartition;
  s.set_size = n;
  s.num_sets = num_sets;
  s.budget_l0 = l0;
  return s;
}

PartialNeighborScheme PartialNeighborScheme::random_subset(int n,
                                                           std::uint64_t l0) {
  PartialNeighborScheme s;
  s.kind = SchemeKind::RandomSubset;
  s.set_size = n;
  s.budget_l0 = l0;
  return s;
}

PartialNeighborScheme PartialNeighborScheme::explicit_list(
    std::vector<std::vector<int>> sets, std::uint64_t l0) {
  PartialNeighborScheme s;
  s.kind = SchemeKind::ExplicitSets;
  s.explicit_sets = std::move(sets);
  s.budget_l0 = l0;
  return s;
}

PartialNeighborScheme PartialNeighborScheme::continuous_pairs(
    int pairs, std::uint64_t l0) {
  PartialNeighborScheme s;
  s.kind = SchemeKind::ContinuousSymmetricPairs;
  s.num_pairs = pairs;
  s.budget_l0 = l0;
  return s;
}

std::vector<int> systematic_index_set(int move_count, int set_size,
                                      int window) {
  check_set_size(move_count, set_size);
  if (window < 0) throw std::invalid_argument("window index must be >= 0");
  const int start = static_cast<int>(
      (static_cast<long long>(window) * set_size) % move_count);
  std::vector<int> out(static_cast<std::size_t>(set_size));
  for (int k = 0; k < set_size; ++k) out[k] = (start + k) % move_count;
  std::sort(out.begin(), out.end());
  return out;
}

int systematic_cycle_length(int move_count, int set_size) {
  check_set_size(move_count, set_size);
  return move_count / std::gcd(move_count, set_size);
}

std::vector<int> random_index_set(int move_count, int set_size, Rng& rng) {
  check_set_size(move_count, set_size);
  std::vector<int> pool(static_cast<std::size_t>(move_count));
  std::iota(pool.begin(), pool.end(), 0);
  for (int k = 0; k < set_size; ++k) {
    const std::uint64_t j =
        k + rng.below(static_cast<std::uint64_t>(move_count - k));
    std::swap(pool[k], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(set_size));
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<std::vector<double>> symmetric_pair_offsets(int dim, int num_pairs,
                                                        Rng& rng) {
  if (dim < 1 || num_pairs < 1)
    throw std::invalid_argument("offset scheme needs dim >= 1, num_pairs >= 1");
  std::vector<std::vector<double>> out;
  out.reserve(2 * static_cast<std::size_t>(num_pairs));
  for (int p = 0; p < num_pairs; ++p) {
    std::vector<double> delta(static_cast<std::size_t>(dim));
    for (auto& d : delta) d = rng.normal();
    std::vector<double> neg(delta);
    for (auto& d : neg) d = -d;
    out.push_back(std::move(delta));
    out.push_back(std::move(neg));
  }
  return out;
}

SetSequence SetSequence::make(const PartialNeighborScheme& scheme,
                              int move_count, Rng& rng) {
  SetSequence seq;
  seq.kind_ = scheme.kind;
  seq.move_count_ = move_count;
  seq.set_size_ = scheme.set_size;
  switch (scheme.kind) {
    case SchemeKind::Full: {
      std::vector<int> all(static_cast<std::size_t>(move_count));
      std::iota(all.begin(), all.end(), 0);
      seq.sets_.push_back(std::move(all));
      break;
    }
    case SchemeKind::SystematicPartition: {
      const int cycle = scheme.num_sets > 0
                            ? scheme.num_sets
                            : systematic_cycle_length(move_count,
                                                      scheme.set_size);
      for (int i = 0; i < cycle; ++i)
        seq.sets_.push_back(
            systematic_index_set(move_count, scheme.set_size, i));
      break;
    }
    case SchemeKind::RandomSubset:
      check_set_size(move_count, scheme.set_size);
      seq.random_ = random_index_set(move_count, scheme.set_size, rng);
      break;
    case SchemeKind::ExplicitSets: {
      if (scheme.explicit_sets.empty())
        throw std::invalid_argument("explicit scheme needs at least one set");
      for (const auto& s : scheme.explicit_sets) {
        if (s.empty())
          throw std::invalid_argument("explicit scheme sets must be nonempty");
        for (int idx : s)
          if (idx < 0 || idx >= move_count)
            throw std::invalid_argument("explicit set index out of range");
        auto sorted = s;
        std::sort(sorted.begin(), sorted.end());
        seq.sets_.push_back(std::move(sorted));
      }
      break;
    }
    case SchemeKind::ContinuousSymmetricPairs:
      throw std::invalid_argument(
          "continuous offset schemes have no discrete set sequence");
  }
  seq.rebind();
  return seq;
}

void SetSequence::rebind() {
  current_ = kind_ == SchemeKind::RandomSubset ? &random_ : &sets_[pos_];
}

void SetSequence::advance(Rng& rng) {
  if (kind_ == SchemeKind::RandomSubset) {
    random_ = random_index_set(move_count_, set_size_, rng);
  } else {
    pos_ = (pos_ + 1) % sets_.size();
  }
  rebind();
}

}  // namespace pns
