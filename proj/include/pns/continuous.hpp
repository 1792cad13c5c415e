#pragma once

#include <array>
#include <concepts>
#include <cstdint>

#include "pns/core.hpp"
#include "pns/rng.hpp"
#include "pns/scheme.hpp"

namespace pns {

using Vec2 = std::array<double, 2>;

// Planar target with an unnormalized log density, finite on its support
// (-inf off support is fine).
template <class M>
concept ContinuousModel2D = requires(const M m, const Vec2& x) {
  { m.log_density(x) } -> std::convertible_to<double>;
};

// Ring-shaped density on R^2: log f(x) = -(|x|^2 - mu0)^2 / (2 sigma^2),
// up to a constant. Finite everywhere.
struct DonutsModel {
  double mu0 = 9.0;
  double sigma = 0.1;

  double log_density(const Vec2& x) const {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    const double d = r2 - mu0;
    return -d * d / (2.0 * sigma * sigma);
  }
};
static_assert(ContinuousModel2D<DonutsModel>);

struct ContinuousRunStats {
  std::uint64_t zero_escape_windows = 0;
  std::uint64_t forced_window_repeats = 0;
  std::uint64_t multiplicity_cap_hits = 0;
  std::uint64_t jump_entries = 0;
};

// Random-walk Metropolis with independent normal steps of the given scale
// on each coordinate. Output run-length compressed; starts at the origin.
ContinuousChain run_mh_continuous(const DonutsModel& model,
                                  double proposal_std, std::uint64_t budget,
                                  std::uint64_t seed);

template <ContinuousModel2D M, class Sink>
void mh_continuous_into(const M& model, double proposal_std,
                        std::uint64_t budget, std::uint64_t seed, Sink&& sink);

// Windowed rejection-free over a finite candidate set {x + delta_j} built
// from +/- paired normal offsets, regenerated every L0 original samples.
// The restricted proposal is uniform over the candidates, so acceptance
// reduces to the density ratio.
ContinuousChain run_unbiased_pns_continuous(const DonutsModel& model,
                                            int num_pairs, std::uint64_t l0,
                                            std::uint64_t budget,
                                            std::uint64_t seed,
                                            ContinuousRunStats* stats = nullptr);

template <ContinuousModel2D M, class Sink>
void unbiased_pns_continuous_into(const M& model, int num_pairs,
                                  std::uint64_t l0, std::uint64_t budget,
                                  std::uint64_t seed, Sink&& sink,
                                  ContinuousRunStats* stats = nullptr);

}  // namespace pns

#include "pns/continuous_impl.hpp"
