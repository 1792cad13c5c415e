#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

namespace pns {

// Discrete states are packed into 64 bits: bit patterns for QUBO models,
// plain indices for tabular models.
using PackedState = std::uint64_t;

// One candidate transition out of the current state under the active
// proposal. `proposal` is normalized over the active candidate set;
// `reverse` is the matching normalized proposal seen from the candidate,
// used in the Hastings ratio.
struct CandidateMove {
  PackedState to = 0;
  double log_ratio = 0.0;  // log weight(to) - log weight(from)
  double proposal = 0.0;
  double reverse = 0.0;
};

// Jump-chain representation: distinct states with multiplicities.
// Repeats are permitted across window boundaries only.
struct JumpChain {
  std::vector<PackedState> states;
  std::vector<std::uint64_t> multiplicities;

  void append(PackedState s, std::uint64_t m) {
    states.push_back(s);
    multiplicities.push_back(m);
  }
  std::size_t jump_size() const { return states.size(); }
  std::uint64_t original_size() const {
    return std::accumulate(multiplicities.begin(), multiplicities.end(),
                           std::uint64_t{0});
  }
};

struct ContinuousChain {
  std::vector<std::array<double, 2>> states;
  std::vector<std::uint64_t> multiplicities;

  void append(const std::array<double, 2>& s, std::uint64_t m) {
    states.push_back(s);
    multiplicities.push_back(m);
  }
  std::size_t jump_size() const { return states.size(); }
  std::uint64_t original_size() const {
    return std::accumulate(multiplicities.begin(), multiplicities.end(),
                           std::uint64_t{0});
  }
};

// Counters a run reports back; all optional to consume.
struct RunStats {
  std::uint64_t forced_window_repeats = 0;  // boundary repeats (m > L)
  std::uint64_t zero_escape_windows = 0;    // p == 0, window absorbed in place
  std::uint64_t multiplicity_cap_hits = 0;
  std::uint64_t jump_entries = 0;
};

}  // namespace pns
