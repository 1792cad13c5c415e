// Acceptance suite: runs every gate criterion end to end and prints one
// PASS/FAIL line per criterion with the measured numbers. Returns nonzero
// if any non-advisory criterion fails.

#include <time.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <vector>

#include "pns/continuous.hpp"
#include "pns/experiment.hpp"
#include "pns/metrics.hpp"
#include "pns/models.hpp"
#include "pns/parallel.hpp"
#include "pns/samplers.hpp"
#include "pns/select.hpp"

using namespace pns;

namespace {

int g_failed = 0;
int g_passed = 0;

double wall_now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

double thread_cpu() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return ts.tv_sec + 1e-9 * ts.tv_nsec;
}

void report(int id, bool ok, bool advisory, const char* fmt, ...) {
  if (ok) {
    ++g_passed;
  } else if (!advisory) {
    ++g_failed;
  }
  std::printf("[%s] criterion %2d%s: ", ok ? "PASS" : "FAIL", id,
              advisory ? " (advisory)" : "");
  va_list args;
  va_start(args, fmt);
  std::vfprintf(stdout, fmt, args);
  va_end(args);
  std::printf("\n");
  std::fflush(stdout);
}

struct TvdStats {
  double tvd = 0.0;
  double work = 0.0;  // candidate evaluations per replication
};

TvdStats avg_tvd(const QuboModel& model, const ExactDistribution& exact,
                 Method method, const PartialNeighborScheme& scheme,
                 std::uint64_t budget, int reps, std::uint64_t tag,
                 BurnIn burn = BurnIn::discard()) {
  std::vector<double> tv(reps), work(reps);
  parallel_for(reps, [&](std::size_t i) {
    SamplerConfig sc;
    sc.method = method;
    sc.scheme = scheme;
    sc.budget = budget;
    sc.seed = derive_seed(tag, budget, i);
    sc.burn_in = burn;
    WeightedEmpirical emp;
    RunStats stats;
    run_sampler_into(model, sc, emp, &stats);
    tv[i] = tvd(emp, exact);
    const double cands = scheme.kind == SchemeKind::Full ||
                                 method == Method::MH || method == Method::RF
                             ? model.degree()
                             : scheme.set_size;
    work[i] = static_cast<double>(stats.jump_entries) * cands;
  });
  TvdStats out;
  for (int i = 0; i < reps; ++i) {
    out.tvd += tv[i];
    out.work += work[i];
  }
  out.tvd /= reps;
  out.work /= reps;
  return out;
}

std::vector<double> mean_proportions(const TabularModel& model, Method method,
                                     const PartialNeighborScheme& scheme,
                                     std::uint64_t budget, int reps,
                                     std::uint64_t tag) {
  std::vector<std::array<double, 3>> per(reps);
  parallel_for(reps, [&](std::size_t i) {
    SamplerConfig sc;
    sc.method = method;
    sc.scheme = scheme;
    sc.budget = budget;
    sc.seed = derive_seed(tag, 0, i);
    WeightedEmpirical emp;
    run_sampler_into(model, sc, emp);
    for (int s = 0; s < 3; ++s) {
      const auto it = emp.mass.find(s);
      per[i][s] = it == emp.mass.end()
                      ? 0.0
                      : double(it->second) / double(emp.total);
    }
  });
  std::vector<double> mean(3, 0.0);
  for (const auto& p : per)
    for (int s = 0; s < 3; ++s) mean[s] += p[s];
  for (double& v : mean) v /= reps;
  return mean;
}

// --------------------------------------------------------------------------

void criterion_1() {
  const double t0 = wall_now();
  const TabularModel tri = make_triangle();
  const auto mean = mean_proportions(
      tri, Method::BasicPNS, PartialNeighborScheme::random_subset(1, 100),
      1000000, 100, 101);
  const double claimed[3] = {2.0 / 9.0, 5.0 / 18.0, 0.5};
  const double derived[3] = {4.0 / 19.0, 6.0 / 19.0, 9.0 / 19.0};
  double dev = 0.0, dev_derived = 0.0;
  for (int s = 0; s < 3; ++s) {
    dev = std::max(dev, std::abs(mean[s] - claimed[s]));
    dev_derived = std::max(dev_derived, std::abs(mean[s] - derived[s]));
  }
  const double elapsed = wall_now() - t0;
  const bool ok = dev < 0.005 && elapsed < 60.0;
  report(1, ok, false,
         "basic PNS triangle proportions (%.4f, %.4f, %.4f); max deviation "
         "%.4f from (2/9, 5/18, 1/2) needs < 0.005 [%.0fs]",
         mean[0], mean[1], mean[2], dev, elapsed);
  if (!ok)
    std::printf(
        "       note: the chain's exact limit is (4/19, 6/19, 9/19) = "
        "(0.2105, 0.3158, 0.4737); measured max deviation from it is %.4f. "
        "The (2/9, 5/18, 1/2) target requires E(M_B) = 5/4, which the "
        "algorithm's own mechanics put at 3/2.\n",
        dev_derived);
}

void criterion_2() {
  const double t0 = wall_now();
  const TabularModel tri = make_triangle();
  const auto sets_bc = PartialNeighborScheme::explicit_list({{1}, {2}}, 100);
  const double target[3] = {1.0 / 6.0, 1.0 / 3.0, 0.5};
  const struct {
    Method m;
    PartialNeighborScheme s;
    const char* name;
  } cases[] = {
      {Method::MH, {}, "mh"},
      {Method::RF, {}, "rf"},
      {Method::MHAlternating, sets_bc, "mh_alt"},
      {Method::RFAlternating, sets_bc, "rf_alt"},
      {Method::UnbiasedPNS, sets_bc, "unbiased_pns"},
      {Method::UnbiasedPNSNaive, sets_bc, "naive"},
  };
  double worst = 0.0;
  const char* worst_name = "";
  for (const auto& tc : cases) {
    const auto mean = mean_proportions(tri, tc.m, tc.s, 1000000, 4,
                                       211 + (&tc - cases));
    for (int s = 0; s < 3; ++s) {
      const double d = std::abs(mean[s] - target[s]);
      if (d > worst) {
        worst = d;
        worst_name = tc.name;
      }
    }
  }
  const double elapsed = wall_now() - t0;
  const bool ok = worst < 0.005 && elapsed < 300.0;
  report(2, ok, false,
         "six unbiased methods on the triangle; worst deviation %.4f (%s) "
         "needs < 0.005 [%.0fs]",
         worst, worst_name, elapsed);
}

void criterion_3() {
  const double t0 = wall_now();
  const QuboModel cube = make_hypercube16();
  const auto exact = exact_distribution(cube);
  const auto scheme = PartialNeighborScheme::random_subset(1, 100);
  const double plateau_early =
      avg_tvd(cube, exact, Method::BasicPNS, scheme, 300000, 20, 301).tvd;
  const double plateau_late =
      avg_tvd(cube, exact, Method::BasicPNS, scheme, 1000000, 20, 302).tvd;
  const double rf_tvd = avg_tvd(cube, exact, Method::RF, {}, 1000000, 20,
                                303).tvd;
  const double elapsed = wall_now() - t0;
  const bool ok = plateau_early >= 0.2 && plateau_early <= 0.4 &&
                  plateau_late >= 0.2 && plateau_late <= 0.4 && rf_tvd < 0.02 &&
                  elapsed < 120.0;
  report(3, ok, false,
         "basic PNS plateau on hypercube-16: TVD %.3f @3e5, %.3f @1e6 "
         "(need [0.2, 0.4]); rf TVD %.4f (need < 0.02) [%.0fs]",
         plateau_early, plateau_late, rf_tvd, elapsed);
}

void criterion_4() {
  const double t0 = wall_now();
  const QuboModel cube = make_hypercube16();
  const auto exact = exact_distribution(cube);
  bool ok = true;
  char detail[160];
  std::string parts;
  for (std::uint64_t b : {10000ull, 100000ull, 1000000ull}) {
    const double mh = avg_tvd(cube, exact, Method::MH, {}, b, 100, 401).tvd;
    const double rf = avg_tvd(cube, exact, Method::RF, {}, b, 100, 402).tvd;
    const double diff = std::abs(mh - rf);
    if (diff >= 0.01) ok = false;
    std::snprintf(detail, sizeof detail, "|%.4f-%.4f|=%.4f@%llu ", rf, mh,
                  diff, (unsigned long long)b);
    parts += detail;
  }
  const double elapsed = wall_now() - t0;
  report(4, ok, false, "rf vs mh per original sample: %s(need < 0.01) [%.0fs]",
         parts.c_str(), elapsed);
}

void criterion_5() {
  const double t0 = wall_now();
  const QuboModel cube = make_hypercube16();
  const auto scheme = PartialNeighborScheme::systematic(2, 100);
  const int reps = 20;
  std::vector<WeightedEmpirical> ea(reps), eb(reps);
  parallel_for(reps, [&](std::size_t i) {
    SamplerConfig sc;
    sc.scheme = scheme;
    sc.budget = 1000000;
    sc.method = Method::UnbiasedPNS;
    sc.seed = derive_seed(501, 0, i);
    run_sampler_into(cube, sc, ea[i]);
    sc.method = Method::UnbiasedPNSNaive;
    sc.seed = derive_seed(502, 0, i);
    run_sampler_into(cube, sc, eb[i]);
  });
  WeightedEmpirical a, b;
  for (int i = 0; i < reps; ++i) {
    a.merge(ea[i]);
    b.merge(eb[i]);
  }
  double l1 = 0.0;
  for (PackedState s = 0; s < 16; ++s) {
    const double pa = a.mass.count(s) ? double(a.mass[s]) / a.total : 0.0;
    const double pb = b.mass.count(s) ? double(b.mass[s]) / b.total : 0.0;
    l1 += std::abs(pa - pb);
  }
  const double dist = 0.5 * l1;
  const double elapsed = wall_now() - t0;
  const bool ok = dist < 0.01;
  report(5, ok, false,
         "unbiased PNS vs one-proposal oracle, pooled %dx1e6: TVD %.4f "
         "(need < 0.01) [%.0fs]",
         reps, dist, elapsed);
}

void criterion_6() {
  const double t0 = wall_now();
  const QuboModel q = QuboModel::random(16, 10.0, 2);
  const auto exact = exact_distribution(q);
  const auto scheme = PartialNeighborScheme::systematic(8, 100);
  bool ordering = true;
  double upns_final = 0.0;
  std::string parts;
  char buf[160];
  for (std::uint64_t b : {10000ull, 100000ull, 1000000ull, 3000000ull}) {
    const double mh = avg_tvd(q, exact, Method::MH, {}, b, 100, 601).tvd;
    const double rf = avg_tvd(q, exact, Method::RF, {}, b, 100, 602).tvd;
    const double up =
        avg_tvd(q, exact, Method::UnbiasedPNS, scheme, b, 100, 603).tvd;
    if (b == 3000000ull) upns_final = up;
    // ordering with a small allowance for replication noise
    if (up < rf - 0.005 || std::abs(rf - mh) >= 0.01) ordering = false;
    std::snprintf(buf, sizeof buf, "@%llu: mh=%.4f rf=%.4f upns=%.4f; ",
                  (unsigned long long)b, mh, rf, up);
    parts += buf;
  }
  const double elapsed = wall_now() - t0;
  const bool ok = upns_final < 0.05 && ordering && elapsed < 600.0;
  report(6, ok, false,
         "qubo-16 convergence %s upns@3e6 %.4f needs < 0.05; ordering "
         "upns >= rf = mh %s [%.0fs]",
         parts.c_str(), upns_final, ordering ? "holds" : "violated", elapsed);
}

void criterion_7() {
  const double t0 = wall_now();
  const QuboModel q = QuboModel::random(16, 10.0, 2);
  const auto exact = exact_distribution(q);
  const std::uint64_t l0s[] = {10, 50, 100, 500, 1000};
  double tvds[5], work[5];
  std::string parts;
  char buf[120];
  for (int i = 0; i < 5; ++i) {
    const auto st = avg_tvd(q, exact, Method::UnbiasedPNS,
                            PartialNeighborScheme::systematic(8, l0s[i]),
                            1000000, 100, 701 + i);
    tvds[i] = st.tvd;
    work[i] = st.work;
    std::snprintf(buf, sizeof buf, "L0=%llu: tvd=%.5f work=%.2e; ",
                  (unsigned long long)l0s[i], st.tvd, work[i]);
    parts += buf;
  }
  double spread = 0.0;
  for (int i = 1; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      spread = std::max(spread, std::abs(tvds[i] - tvds[j]));
  bool worst10 = true;
  for (int i = 1; i < 5; ++i)
    if (tvds[0] <= tvds[i]) worst10 = false;
  const double elapsed = wall_now() - t0;
  const bool ok = spread < 0.02 && worst10;
  report(7, ok, false,
         "L0 sweep %sper-sample spread(L0>=50) %.4f needs < 0.02; L0=10 "
         "strictly worst per sample: %s [%.0fs]",
         parts.c_str(), spread, worst10 ? "yes" : "no", elapsed);
  if (!worst10)
    std::printf(
        "       note: per original sample L0=10 is the least biased, not the "
        "worst, and must be: each window confines moves to its label slice, "
        "so window correlation grows with L0 for every systematic scheme. "
        "The cost story is the reverse (L0=10 does %.0fx the candidate "
        "evaluations of L0=1000 for the same budget).\n",
        work[0] / work[4]);
}

void criterion_8() {
  const double crit[4] = {0.0, 10.828, 13.816, 16.266};  // df -> 0.1% level
  const std::vector<std::vector<double>> weight_sets = {
      {1.0, 2.0, 3.0}, {1.0, 1.0, 1.0, 1.0}, {1e-6, 1.0}};
  bool ok = true;
  std::string parts;
  char buf[80];
  std::uint64_t seed = 801;
  for (const auto& w : weight_sets) {
    Rng rng(seed++);
    double total = 0.0;
    for (double v : w) total += v;
    std::vector<std::uint64_t> counts(w.size(), 0);
    const std::uint64_t draws = 100000;
    for (std::uint64_t k = 0; k < draws; ++k)
      ++counts[select_proportional(w, rng)];
    double stat = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double expect = draws * w[i] / total;
      const double d = double(counts[i]) - expect;
      stat += d * d / expect;
    }
    const int df = static_cast<int>(w.size()) - 1;
    if (stat >= crit[df]) ok = false;
    std::snprintf(buf, sizeof buf, "chi2=%.2f(df%d,crit%.2f) ", stat, df,
                  crit[df]);
    parts += buf;
  }
  report(8, ok, false, "proportional selection goodness of fit: %s", parts.c_str());
}

void criterion_9() {
  bool ok = true;
  std::string parts;
  char buf[96];
  Rng rng(901);
  for (double p : {0.1, 0.25, 0.5, 1.0}) {
    const std::uint64_t draws = 1000000;
    double acc = 0.0, acc2 = 0.0;
    for (std::uint64_t k = 0; k < draws; ++k) {
      const double m = double(sample_multiplicity(p, rng));
      acc += m;
      acc2 += m * m;
    }
    const double mean = acc / draws;
    const double var = std::max(acc2 / draws - mean * mean, 0.0);
    const double se = std::sqrt(var / draws);
    const double dev = std::abs(mean - 1.0 / p);
    const bool this_ok = p == 1.0 ? dev == 0.0 : dev <= 3.0 * se;
    if (!this_ok) ok = false;
    std::snprintf(buf, sizeof buf, "p=%.2f: |%.4f-%.1f|<=3se=%.4f %s; ", p,
                  mean, 1.0 / p, 3.0 * se, this_ok ? "ok" : "FAIL");
    parts += buf;
  }
  report(9, ok, false, "multiplicity law: %s", parts.c_str());
}

void criterion_10() {
  const double t0 = wall_now();
  const DonutsModel m{9.0, 0.1};
  const int reps = 256;
  std::vector<RingMomentAccumulator> accs(reps);
  parallel_for(reps, [&](std::size_t i) {
    unbiased_pns_continuous_into(
        m, 25, 1000, 30000000ull, derive_seed(1001, 0, i),
        [&](const Vec2& s, std::uint64_t mm) { accs[i].add(s, mm); });
  });
  RingMomentAccumulator pooled;
  for (const auto& a : accs) pooled.merge(a);
  const RingMoments ref = ring_reference_moments(9.0, 0.1, 100000000ull);
  const DonutsBias b = donuts_bias(pooled, ref);
  const double elapsed = wall_now() - t0;
  const bool ok = b.first < 0.05 && b.second < 0.05 && b.fourth < 0.05 &&
                  b.positive_rate < 0.01 && elapsed < 600.0;
  report(10, ok, false,
         "donuts unbiased PNS pooled %dx3e7: bias1 %.4f bias2 %.4f bias4 "
         "%.4f (< 0.05 each), positive-rate %.4f (< 0.01) [%.0fs]",
         reps, b.first, b.second, b.fourth, b.positive_rate, elapsed);
}

void criterion_11() {
  const double t0 = wall_now();
  const QuboModel q = QuboModel::random(16, 1.0, 9);
  const auto exact = exact_distribution(q);
  const int reps = 30000;
  struct Point {
    double cpu = 0.0;
    double tvd = 0.0;
  };
  Point cold[3], warm[3];
  const std::uint64_t k1s[3] = {200, 500, 1000};
  for (int ki = 0; ki < 3; ++ki) {
    for (int w = 0; w < 2; ++w) {
      std::vector<PackedState> last(reps);
      std::vector<double> cpu(reps);
      parallel_for(reps, [&](std::size_t i) {
        const double c0 = thread_cpu();
        SamplerConfig sc;
        sc.method = Method::RF;
        sc.budget = k1s[ki];
        sc.seed = derive_seed(1100 + w, k1s[ki], i);
        sc.burn_in = w ? BurnIn::optimize(k1s[ki] / 20) : BurnIn::none();
        PackedState fs = 0;
        run_sampler_into(q, sc,
                         [&fs](PackedState s, std::uint64_t) { fs = s; });
        last[i] = fs;
        cpu[i] = thread_cpu() - c0;
      });
      Point& pt = w ? warm[ki] : cold[ki];
      pt.tvd = starting_distribution_tvd(last, exact);
      for (double c : cpu) pt.cpu += c;
    }
  }
  // matched-CPU comparison: the warm curve must not sit above the cold
  // curve (piecewise linear in cpu, clamped at the ends) beyond noise
  auto cold_at = [&](double cpu) {
    if (cpu <= cold[0].cpu) return cold[0].tvd;
    for (int i = 0; i < 2; ++i)
      if (cpu <= cold[i + 1].cpu) {
        const double f = (cpu - cold[i].cpu) / (cold[i + 1].cpu - cold[i].cpu);
        return cold[i].tvd + f * (cold[i + 1].tvd - cold[i].tvd);
      }
    return cold[2].tvd;
  };
  const double noise = 0.005;
  bool ok = true;
  std::string parts;
  char buf[160];
  for (int ki = 0; ki < 3; ++ki) {
    const double ref = cold_at(warm[ki].cpu);
    if (warm[ki].tvd > ref + noise) ok = false;
    std::snprintf(buf, sizeof buf,
                  "K1=%llu warm(%.2fs,%.4f) vs cold@same-cpu %.4f "
                  "[cold(%.2fs,%.4f)]; ",
                  (unsigned long long)k1s[ki], warm[ki].cpu, warm[ki].tvd, ref,
                  cold[ki].cpu, cold[ki].tvd);
    parts += buf;
  }
  const double elapsed = wall_now() - t0;
  report(11, ok, true,
         "warm-start convergence per cpu (single machine): %s[%.0fs]",
         parts.c_str(), elapsed);
}

}  // namespace

int main() {
  std::printf("acceptance suite: %u workers\n", resolve_worker_count());
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  std::printf("%d passed, %d failed\n", g_passed, 11 - g_passed);
  return g_failed > 0 ? 1 : 0;
}
