// Acceptance suite: one line per criterion, exit 0 only if all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "contention/analytic.hpp"
#include "contention/experiments.hpp"
#include "contention/simulator.hpp"

#ifndef CONTENTION_LAB_BINARY
#error "CONTENTION_LAB_BINARY must point at the CLI executable"
#endif

namespace analytic = contention::analytic;
namespace sim = contention::sim;
namespace experiments = contention::experiments;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool ok,
            const std::string& detail = "") {
  std::printf("criterion %2d  %-42s %s%s%s\n", number, name.c_str(),
              ok ? "PASS" : "FAIL", detail.empty() ? "" : "  ", detail.c_str());
  if (!ok) ++g_failures;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// 1. Closed form vs independent linear solve on the 4,900-point grid, < 1 s.
void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int m = 1; m <= 50; ++m) {
    for (int i = 1; i <= 99; ++i) {
      const auto matrix = analytic::transition_probabilities({m, i * 0.01});
      const auto cf = analytic::stationary_closed_form(matrix);
      const auto ls = analytic::stationary_linear_solve(matrix);
      worst = std::max(worst, std::abs(cf.pi1 - ls.pi1));
      worst = std::max(worst, std::abs(cf.pi2 - ls.pi2));
    }
  }
  const double seconds = elapsed_seconds(start);
  std::ostringstream detail;
  detail << "max |closed-linear| = " << worst << ", " << seconds << " s";
  report(1, "stationary oracle equivalence", worst < 1e-12 && seconds < 1.0,
         detail.str());
}

// 2. Corrected asymptotic limit m/(2m-1), and the validation report flags the
//    published exponent, which disagrees with its own derivation for m >= 3.
void criterion_2() {
  bool ok = true;
  for (int m = 2; m <= 50; ++m)
    ok = ok && std::abs(analytic::throughput({m, 1e-6}) -
                        analytic::asymptotic_throughput_limit(m)) < 1e-4;
  // published m/2^(m-1) and derived m/(2m-1) differ for every m >= 3
  for (int m = 3; m <= 50; ++m)
    ok = ok && std::abs(m / std::pow(2.0, m - 1) -
                        analytic::asymptotic_throughput_limit(m)) > 1e-3;
  bool flagged = false;
  for (const std::string& flag : experiments::known_discrepancy_flags())
    if (flag.find("m/(2m-1)") != std::string::npos &&
        flag.find("m >= 3") != std::string::npos)
      flagged = true;
  report(2, "asymptotic limit m/(2m-1), typo flagged", ok && flagged);
}

// 3. Throughput vs pr: strict decrease, vanishing near pr = 1, and the m = 10
//    threshold for the 0.15 level. The 1e-6 vanishing bound is checked
//    from m = 5 up; at m = 2 the closed form pi1 = 2(1-pr)/(3-2pr)
//    forces pi1(0.999) = 1.996e-3, so the exact closed-form value is asserted
//    there instead (pi1 is still ~zero at pr = 1 itself).
void criterion_3() {
  bool monotone = true;
  for (int m : {2, 5, 10, 20, 50}) {
    double prev = analytic::throughput({m, 0.01});
    for (int i = 2; i <= 99; ++i) {
      const double cur = analytic::throughput({m, i * 0.01});
      monotone = monotone && cur < prev;
      prev = cur;
    }
  }
  bool vanishing = true;
  for (int m : {5, 10, 20, 50})
    vanishing = vanishing && analytic::throughput({m, 0.999}) < 1e-6;
  const double pr999 = 0.999;
  vanishing = vanishing &&
              std::abs(analytic::throughput({2, pr999}) -
                       2 * (1 - pr999) / (3 - 2 * pr999)) < 1e-12 &&
              analytic::throughput({2, 1.0}) == 0.0;

  const bool threshold = analytic::throughput({10, 0.25}) > 0.15 &&
                         analytic::throughput({10, 0.27}) < 0.15;
  std::ostringstream detail;
  detail << "pi1=0.15 threshold for m=10 in (0.25,0.27), published bound 0.3";
  report(3, "throughput vs pr reproduction",
         monotone && vanishing && threshold, detail.str());
}

// 4. Throughput vs users at fixed occupancy.
void criterion_4() {
  bool near_half = true;
  for (int m = 10; m <= 50; ++m) {
    const double pi1 =
        analytic::throughput({m, analytic::pr_from_occupancy(24.0, m)});
    near_half = near_half && pi1 > 0.49 && pi1 < 0.53;
  }
  bool monotone = true;
  for (int m = 2; m <= 50; ++m) {
    double prev = 0.0;
    for (double u : {2.0, 4.0, 8.0, 16.0, 24.0}) {
      const double pi1 =
          analytic::throughput({m, analytic::pr_from_occupancy(u, m)});
      monotone = monotone && pi1 > prev;
      prev = pi1;
    }
  }
  report(4, "throughput vs users at fixed occupancy", near_half && monotone);
}

// 5. Delay trends.
void criterion_5() {
  bool ok = true;
  for (double u : {2.0, 16.0}) {
    double prev = 0.0;
    for (int m = 2; m <= 50; ++m) {
      const double d = analytic::delay({m, analytic::pr_from_occupancy(u, m)});
      ok = ok && d >= prev;
      prev = d;
    }
  }
  for (int m = 2; m <= 50; ++m)
    ok = ok && analytic::delay({m, analytic::pr_from_occupancy(16.0, m)}) <=
                   analytic::delay({m, analytic::pr_from_occupancy(2.0, m)});
  report(5, "delay trend reproduction", ok);
}

struct GridPoint {
  int m;
  double pr;
  sim::SimStats stats;
  double pi1;
  double u;
};

std::vector<GridPoint> run_grid(std::uint64_t seed) {
  std::vector<GridPoint> points;
  for (int m : {2, 5, 10, 20}) {
    for (double pr : {0.05, 0.1, 0.3, 0.5, 0.8}) {
      sim::SimConfig config;
      config.m = m;
      config.pr = pr;
      config.slots = 1'000'000;
      config.warmup = 10'000;
      config.seed = seed;
      GridPoint point{m, pr, sim::run(config), analytic::throughput({m, pr}),
                      analytic::occupancy({m, pr})};
      points.push_back(std::move(point));
    }
  }
  return points;
}

// 6. Simulation agrees with the closed forms on the 20-point grid, < 60 s.
void criterion_6(const std::vector<GridPoint>& points, double seconds) {
  bool ok = true;
  std::ostringstream detail;
  for (const GridPoint& p : points) {
    const bool pi_ok =
        std::abs(p.stats.busy_fraction - p.pi1) <
        std::max(3.0 * p.stats.ci_halfwidth, 0.005);
    const bool u_ok = std::isfinite(p.stats.mean_holding) &&
                      std::abs(p.stats.mean_holding - p.u) / p.u < 0.02;
    if (!(pi_ok && u_ok)) {
      ok = false;
      detail << " (m=" << p.m << ",pr=" << p.pr << (pi_ok ? " U" : " pi1")
             << ")";
    }
  }
  std::ostringstream head;
  head << seconds << " s" << detail.str();
  report(6, "simulation vs analytics", ok && seconds < 60.0, head.str());
}

// 7. Fairness on the same grid (all points have m <= 20).
void criterion_7(const std::vector<GridPoint>& points) {
  bool ok = true;
  std::ostringstream detail;
  for (const GridPoint& p : points) {
    bool point_ok = p.stats.jain_index > 0.99;
    const double expected_share = p.pi1 / p.m;
    for (std::uint64_t count : p.stats.per_user_success) {
      const double share = static_cast<double>(count) /
                           static_cast<double>(p.stats.measured_slots);
      point_ok =
          point_ok && std::abs(share - expected_share) < 0.1 * expected_share;
    }
    if (!point_ok) {
      ok = false;
      detail << " (m=" << p.m << ",pr=" << p.pr
             << ",jain=" << p.stats.jain_index << ")";
    }
  }
  report(7, "fairness across users", ok, detail.str());
}

std::string capture(const std::string& command) {
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return {};
  std::string output;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) output.append(buf, n);
  pclose(pipe);
  return output;
}

// 8. Byte-identical CLI output for identical flags and seed.
void criterion_8() {
  const std::string commands[] = {
      CONTENTION_LAB_BINARY
      " simulate --users 5 --pr 0.2 --slots 200000 --seed 42",
      CONTENTION_LAB_BINARY
      " sweep --kind throughput-vs-pr --users 5,10 --pr-grid 0.1:0.9:0.1",
      CONTENTION_LAB_BINARY " analyze --users 4 --pr 0.3 --format json",
  };
  bool ok = true;
  for (const std::string& command : commands) {
    const std::string a = capture(command);
    const std::string b = capture(command);
    ok = ok && !a.empty() && a == b;
  }
  report(8, "deterministic CLI output", ok);
}

// 9. Degenerate inputs give typed outcomes, never NaN or a crash.
void criterion_9() {
  bool ok = true;
  try {
    analytic::throughput({5, 0.0});
    ok = false;
  } catch (const analytic::DegenerateChain&) {
  }
  try {
    analytic::occupancy({1, 0.4});
    ok = false;
  } catch (const analytic::UnboundedOccupancy&) {
  }
  try {
    analytic::delay({5, 1.0});
    ok = false;
  } catch (const analytic::UnboundedDelay&) {
  }
  ok = ok && analytic::throughput({5, 1.0}) == 0.0;
  ok = ok && analytic::throughput({1, 0.4}) == 1.0;
  const auto lone = analytic::analyze({1, 0.4});
  ok = ok && std::isinf(lone.occupancy_u) && !std::isnan(lone.delay_d);
  const auto jammed = analytic::analyze({5, 1.0});
  ok = ok && std::isinf(jammed.delay_d) && !std::isnan(jammed.q_mean);
  report(9, "degenerate-input policy", ok);
}

// 10. delay * throughput == q_mean bit-exactly on the criterion-1 grid.
void criterion_10() {
  bool ok = true;
  for (int m = 1; m <= 50; ++m) {
    for (int i = 1; i <= 99; ++i) {
      const analytic::ModelParams params{m, i * 0.01};
      if (analytic::delay(params) * analytic::throughput(params) !=
          analytic::q_mean(params))
        ok = false;
    }
  }
  report(10, "exact Little consistency", ok);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  const auto start = std::chrono::steady_clock::now();
  const std::vector<GridPoint> points = run_grid(2);
  const double grid_seconds = elapsed_seconds(start);
  criterion_6(points, grid_seconds);
  criterion_7(points);
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures > 0)
    std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
