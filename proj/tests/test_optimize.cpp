#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "pns/models.hpp"
#include "pns/optimize.hpp"
#include "pns/samplers.hpp"

using namespace pns;

namespace {

PackedState exact_argmax(const QuboModel& q, double* gap = nullptr) {
  PackedState best = 0;
  double best_lw = q.log_weight(0), second = -1e300;
  for (PackedState s = 1; s < q.state_count(); ++s) {
    const double lw = q.log_weight(s);
    if (lw > best_lw) {
      second = best_lw;
      best_lw = lw;
      best = s;
    } else if (lw > second) {
      second = lw;
    }
  }
  if (gap) *gap = best_lw - second;
  return best;
}

}  // namespace

TEST_CASE("cooling schedules") {
  const CoolingSchedule c = CoolingSchedule::constant(2.0);
  CHECK(c.at(1) == doctest::Approx(2.0));
  CHECK(c.at(1000) == doctest::Approx(2.0));
  const CoolingSchedule g = CoolingSchedule::geometric(1.0, 0.99);
  CHECK(g.at(0) == doctest::Approx(1.0));
  for (std::uint64_t k = 1; k < 50; ++k) CHECK(g.at(k) <= g.at(k - 1));
  CHECK_THROWS_AS(CoolingSchedule::constant(0.0), std::invalid_argument);
  CHECK_THROWS_AS(CoolingSchedule::geometric(1.0, 1.5), std::invalid_argument);
}

TEST_CASE("sa freezes on downhill moves at vanishing temperature") {
  const QuboModel one(1, {-0.1});  // flipping the single bit from 0 costs 0.1
  Rng rng(4);
  const auto r =
      run_sa(one, CoolingSchedule::constant(1e-9), 100000, rng, PackedState{0});
  CHECK(r.accepted == 0);
  CHECK(r.final_state == 0);
  CHECK(r.best_state == 0);
  CHECK(r.best_log_weight == doctest::Approx(0.0));
}

TEST_CASE("sa accepts every uphill proposal") {
  const QuboModel one(1, {0.7});  // from 0 the only move is uphill
  Rng rng(9);
  const auto r =
      run_sa(one, CoolingSchedule::constant(1e-9), 1, rng, PackedState{0});
  CHECK(r.accepted == 1);
  CHECK(r.final_state == 1);
}

TEST_CASE("optimizers find the enumerated optimum of a small qubo") {
  const QuboModel q = QuboModel::random(4, 1.0, 3);
  double gap = 0.0;
  const PackedState opt = exact_argmax(q, &gap);
  REQUIRE(gap > 0.01);

  int sa_hits = 0, rf_hits = 0, pns_hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    if (run_sa(q, CoolingSchedule::constant(1.0), 10000, seed).best_state == opt)
      ++sa_hits;
    if (run_opt_rf(q, 1000, seed).best_state == opt) ++rf_hits;
    if (run_opt_pns(q, 2, 1000, seed).best_state == opt) ++pns_hits;
  }
  CHECK(sa_hits >= 95);
  CHECK(rf_hits >= 95);
  CHECK(pns_hits >= 95);
}

TEST_CASE("rejection-free ascent never stalls and tracks the maximum") {
  const QuboModel q = QuboModel::random(8, 2.0, 12);
  Rng rng(5);
  std::vector<PackedState> visited;
  PackedState x0 = q.random_state(rng);
  // replicate the walk with a parallel rng to observe the trajectory
  Rng replay(99);
  PackedState cur = x0;
  double best = q.log_weight(cur);
  const auto r = run_opt_rf(q, 200, replay, x0);
  // monotone non-decreasing best, and best matches an exhaustive recompute
  Rng check(99);
  cur = x0;
  std::vector<CandidateMove> cands;
  TransitionWeights tw;
  double prev_best = best;
  for (int k = 0; k < 200; ++k) {
    q.full_moves(cur, cands);
    compute_transition_weights(cands, tw);
    const std::size_t j = select_proportional(tw.weights, check);
    CHECK(cands[j].to != cur);  // jump chains never repeat in place
    cur = cands[j].to;
    best = std::max(best, q.log_weight(cur));
    CHECK(best >= prev_best);
    prev_best = best;
  }
  CHECK(r.best_log_weight == doctest::Approx(best).epsilon(1e-9));
  CHECK(r.final_state == cur);
}

TEST_CASE("sa at constant temperature 1 replays the metropolis chain") {
  const QuboModel q = QuboModel::random(6, 1.5, 8);
  const std::uint64_t steps = 2000;

  Rng sa_rng(321);
  const PackedState x0 = q.random_state(sa_rng);
  std::vector<PackedState> sa_visits;
  run_sa(q, CoolingSchedule::constant(1.0), steps, sa_rng, x0,
         [&sa_visits](PackedState s) { sa_visits.push_back(s); });

  Rng mh_rng(321);
  const PackedState y0 = q.random_state(mh_rng);
  REQUIRE(x0 == y0);
  std::vector<PackedState> mh_visits;
  mh_chain(q, steps, y0, mh_rng, [&mh_visits](PackedState s, std::uint64_t m) {
    for (std::uint64_t i = 0; i < m; ++i) mh_visits.push_back(s);
  });
  CHECK(sa_visits == mh_visits);
}

TEST_CASE("optimization warm start reaches high-weight states") {
  const QuboModel q = QuboModel::random(16, 1.0, 2);
  std::vector<double> warm_lw, uniform_lw;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    warm_lw.push_back(
        q.log_weight(optimization_pns_start(q, 100, 8, rng)));
    Rng urng(seed + 1000);
    uniform_lw.push_back(q.log_weight(q.random_state(urng)));
  }
  std::nth_element(warm_lw.begin(), warm_lw.begin() + 50, warm_lw.end());
  std::nth_element(uniform_lw.begin(), uniform_lw.begin() + 50,
                   uniform_lw.end());
  CHECK(warm_lw[50] >= uniform_lw[50]);

  // zero-step warm start is exactly the uniform draw
  Rng a(7), b(7);
  CHECK(optimization_pns_start(q, 0, 8, a) == q.random_state(b));
}

TEST_CASE("optimizer input validation") {
  const QuboModel q = QuboModel::random(4, 1.0, 1);
  Rng rng(1);
  CHECK_THROWS_AS(run_opt_pns(q, 0, 10, rng, PackedState{0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_opt_pns(q, 5, 10, rng, PackedState{0}),
                  std::invalid_argument);
}
