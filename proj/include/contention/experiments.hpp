#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "contention/simulator.hpp"

// Parameter sweeps over the closed-form model plus a validation harness that
// compares analytic predictions against the Monte Carlo simulator.

namespace contention::experiments {

struct SpecInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SweepKind { ThroughputVsPr, ThroughputVsUsers, DelayVsUsers, Validation };

struct SweepSpec {
  SweepKind kind = SweepKind::ThroughputVsPr;
  std::vector<int> m_values;
  std::vector<double> pr_values;  // ThroughputVsPr, Validation
  std::vector<double> u_values;   // ThroughputVsUsers, DelayVsUsers
  std::optional<sim::SimConfig> sim;  // Validation template (m, pr overridden)
};

enum class PointStatus { Pass, Fail, Degenerate };

std::string to_string(PointStatus status);

struct SweepRow {
  int m = 0;
  double pr = 0.0;
  double u = 0.0;  // occupancy; +inf when pc = 1
  double p0 = 0.0, pc = 0.0;
  double pi1 = 0.0, pi2 = 0.0;
  double q = 0.0;
  double d = 0.0;  // +inf when pi1 = 0
  std::optional<double> sim_pi1;
  std::optional<double> sim_u;
  std::optional<double> ci;
  std::optional<PointStatus> status;  // Validation only
};

// One row per (m, pr), ordered by pr within each m.
std::vector<SweepRow> sweep_throughput_vs_pr(const SweepSpec& spec);

// One row per (u, m); pr derived from u by exact occupancy inversion.
std::vector<SweepRow> sweep_throughput_vs_users(const SweepSpec& spec);

// Like the users sweep but the point of interest is the delay column.
std::vector<SweepRow> sweep_delay(const SweepSpec& spec);

struct ValidationReport {
  std::vector<SweepRow> rows;
  int pass = 0, fail = 0, degenerate = 0;
  // Known discrepancies between the published presentation of this model and
  // the algebra it is built from; carried in every report.
  std::vector<std::string> discrepancy_flags;

  bool all_pass() const { return fail == 0; }
};

// Discrepancy notes included in every validation report.
std::vector<std::string> known_discrepancy_flags();

// Runs the simulator at each (m, pr) grid point and marks it PASS when
// |busy_fraction - pi1| < max(3*ci, 0.005) and |mean_holding - U|/U < 0.02.
ValidationReport validate(const SweepSpec& spec);

}  // namespace contention::experiments
