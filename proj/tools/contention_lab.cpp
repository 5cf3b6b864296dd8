// contention-lab: closed-form analysis and Monte Carlo simulation of
// cooperative slotted ALOHA with channel reservation.
//
// Subcommands:
//   analyze   - closed-form quantities for one (m, pr) point
//   simulate  - one simulator run with analytic predictions side by side
//   sweep     - parameter sweep tables as CSV/JSON
//   validate  - analytic-vs-simulated agreement report over a grid
//
// Exit codes: 0 ok; 1 validation failure; 2 bad flags or grids;
// 3 degenerate model in analyze; 4 unsupported configuration (pt != 1).

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "contention/analytic.hpp"
#include "contention/experiments.hpp"
#include "contention/grid.hpp"
#include "contention/simulator.hpp"

namespace {

namespace analytic = contention::analytic;
namespace sim = contention::sim;
namespace experiments = contention::experiments;
using nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

std::string fmt10(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

// JSON has no inf/nan literals; encode them as strings.
ordered_json jnum(double value) {
  if (std::isfinite(value)) return value;
  if (std::isnan(value)) return "nan";
  return value > 0 ? "inf" : "-inf";
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

std::string csv_preamble(const std::string& command, const ordered_json& params,
                         const std::vector<std::string>& warnings) {
  std::ostringstream out;
  out << "# schema_version=" << kSchemaVersion << "\n";
  out << "# command=" << command << "\n";
  for (const auto& [key, value] : params.items()) {
    out << "# " << key << "=";
    if (value.is_string())
      out << value.get<std::string>();
    else
      out << value.dump();
    out << "\n";
  }
  for (const std::string& w : warnings) out << "# warning: " << w << "\n";
  return out.str();
}

std::string json_record(const std::string& command, const ordered_json& params,
                        const ordered_json& rows,
                        const std::vector<std::string>& warnings) {
  ordered_json record;
  record["schema_version"] = kSchemaVersion;
  record["command"] = command;
  record["parameters"] = params;
  record["rows"] = rows;
  record["warnings"] = warnings;
  return record.dump(2) + "\n";
}

struct CommonFlags {
  std::string format = "csv";
  std::string output;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--format", flags->format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--output", flags->output, "Output path (default stdout)");
}

std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t flag_value) {
  if (opt->count() > 0) return flag_value;
  if (const char* env = std::getenv("CONTENTION_LAB_SEED")) {
    char* end = nullptr;
    const std::uint64_t value = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return value;
    throw contention::grid::GridError("CONTENTION_LAB_SEED is not an integer");
  }
  return 1;
}

// ---------------------------------------------------------------- analyze

int cmd_analyze(int m, double pr, double pt, const CommonFlags& flags) {
  ordered_json params;
  params["users"] = m;
  params["pr"] = pr;
  params["pt"] = pt;

  std::vector<std::string> warnings;
  std::optional<analytic::ChainQuantities> cq;
  analytic::TransitionMatrix matrix;
  try {
    matrix = analytic::transition_probabilities({m, pr, pt});
    cq = analytic::analyze({m, pr, pt});
  } catch (const analytic::DegenerateChain&) {
    warnings.push_back(
        "degenerate chain: pr = 0 leaves every distribution stationary");
  }
  if (cq) {
    if (!std::isfinite(cq->occupancy_u))
      warnings.push_back(
          "unbounded occupancy: the holder is never interrupted (pc = 1)");
    if (!std::isfinite(cq->delay_d))
      warnings.push_back("unbounded delay: pi1 = 0, packets never get through");
  }

  std::string text;
  if (flags.format == "csv") {
    std::ostringstream out;
    out << csv_preamble("analyze", params, warnings);
    out << "m,pr,pt,p0,pc,pi1,pi2,per_user,u,q,d\n";
    out << m << "," << fmt10(pr) << "," << fmt10(pt) << ","
        << fmt10(matrix.p0) << "," << fmt10(matrix.pc) << ",";
    if (cq) {
      out << fmt10(cq->stationary.pi1) << "," << fmt10(cq->stationary.pi2)
          << "," << fmt10(cq->per_user_throughput) << ","
          << fmt10(cq->occupancy_u) << "," << fmt10(cq->q_mean) << ","
          << fmt10(cq->delay_d);
    } else {
      out << ",,,,,";
    }
    out << "\n";
    text = out.str();
  } else {
    ordered_json row;
    row["m"] = m;
    row["pr"] = pr;
    row["pt"] = pt;
    row["p0"] = jnum(matrix.p0);
    row["pc"] = jnum(matrix.pc);
    if (cq) {
      row["pi1"] = jnum(cq->stationary.pi1);
      row["pi2"] = jnum(cq->stationary.pi2);
      row["per_user"] = jnum(cq->per_user_throughput);
      row["u"] = jnum(cq->occupancy_u);
      row["q"] = jnum(cq->q_mean);
      row["d"] = jnum(cq->delay_d);
    }
    text = json_record("analyze", params, ordered_json::array({row}), warnings);
  }
  write_output(text, flags.output);
  return warnings.empty() ? 0 : 3;
}

// --------------------------------------------------------------- simulate

ordered_json sim_params_json(const sim::SimConfig& config) {
  ordered_json params;
  params["users"] = config.m;
  params["pr"] = config.pr;
  params["pt"] = config.pt;
  params["slots"] = config.slots;
  params["warmup"] = config.warmup;
  params["seed"] = config.seed;
  params["replications"] = config.replications;
  return params;
}

int cmd_simulate(const sim::SimConfig& config, const CommonFlags& flags) {
  const ordered_json params = sim_params_json(config);
  const sim::SimStats stats = sim::run(config);

  std::vector<std::string> warnings;
  std::optional<analytic::ChainQuantities> cq;
  try {
    cq = analytic::analyze({config.m, config.pr, config.pt});
  } catch (const analytic::DegenerateChain&) {
    warnings.push_back(
        "degenerate chain: no analytic prediction exists for pr = 0");
  }

  std::string text;
  if (flags.format == "csv") {
    std::ostringstream out;
    out << csv_preamble("simulate", params, warnings);
    out << "metric,simulated,analytic\n";
    auto line = [&out](const std::string& name, const std::string& simulated,
                       const std::string& predicted) {
      out << name << "," << simulated << "," << predicted << "\n";
    };
    line("busy_fraction", fmt10(stats.busy_fraction),
         cq ? fmt10(cq->stationary.pi1) : "");
    line("mean_holding", fmt10(stats.mean_holding),
         cq ? fmt10(cq->occupancy_u) : "");
    line("per_user_share", "", cq ? fmt10(cq->per_user_throughput) : "");
    line("ci_halfwidth", fmt10(stats.ci_halfwidth), "");
    line("jain_index", fmt10(stats.jain_index), "");
    line("mean_interacquisition", fmt10(stats.mean_interacquisition), "");
    line("between_rep_variance", fmt10(stats.between_rep_variance), "");
    line("measured_slots", std::to_string(stats.measured_slots), "");
    line("idle_slots", std::to_string(stats.idle_slots), "");
    line("success_slots", std::to_string(stats.success_slots), "");
    line("collision_slots", std::to_string(stats.collision_slots), "");
    line("censored_holdings", std::to_string(stats.censored_holdings), "");
    for (std::size_t u = 0; u < stats.per_user_success.size(); ++u)
      line("per_user_success_" + std::to_string(u),
           std::to_string(stats.per_user_success[u]), "");
    text = out.str();
  } else {
    ordered_json row;
    row["busy_fraction"] = jnum(stats.busy_fraction);
    row["mean_holding"] = jnum(stats.mean_holding);
    row["ci_halfwidth"] = jnum(stats.ci_halfwidth);
    row["jain_index"] = jnum(stats.jain_index);
    row["mean_interacquisition"] = jnum(stats.mean_interacquisition);
    row["between_rep_variance"] = jnum(stats.between_rep_variance);
    row["measured_slots"] = stats.measured_slots;
    row["idle_slots"] = stats.idle_slots;
    row["success_slots"] = stats.success_slots;
    row["collision_slots"] = stats.collision_slots;
    row["censored_holdings"] = stats.censored_holdings;
    row["per_user_success"] = stats.per_user_success;
    ordered_json holding = ordered_json::object();
    for (const auto& [len, count] : stats.holding_histogram)
      holding[std::to_string(len)] = count;
    row["holding_histogram"] = holding;
    if (cq) {
      ordered_json predicted;
      predicted["pi1"] = jnum(cq->stationary.pi1);
      predicted["u"] = jnum(cq->occupancy_u);
      predicted["per_user_share"] = jnum(cq->per_user_throughput);
      row["analytic"] = predicted;
    }
    text = json_record("simulate", params, ordered_json::array({row}), warnings);
  }
  write_output(text, flags.output);
  return 0;
}

// ------------------------------------------------------------ sweep rows

std::string sweep_csv(const std::vector<experiments::SweepRow>& rows,
                      bool with_sim, bool with_status) {
  std::ostringstream out;
  out << "m,pr,u,p0,pc,pi1,pi2,q,d";
  if (with_sim) out << ",sim_pi1,sim_u,ci";
  if (with_status) out << ",status";
  out << "\n";
  for (const experiments::SweepRow& row : rows) {
    out << row.m << "," << fmt10(row.pr) << "," << fmt10(row.u) << ","
        << fmt10(row.p0) << "," << fmt10(row.pc) << ",";
    const bool degenerate =
        row.status && *row.status == experiments::PointStatus::Degenerate;
    if (degenerate)
      out << ",,,";
    else
      out << fmt10(row.pi1) << "," << fmt10(row.pi2) << "," << fmt10(row.q)
          << "," << fmt10(row.d);
    if (with_sim) {
      out << "," << (row.sim_pi1 ? fmt10(*row.sim_pi1) : "") << ","
          << (row.sim_u ? fmt10(*row.sim_u) : "") << ","
          << (row.ci ? fmt10(*row.ci) : "");
    }
    if (with_status)
      out << "," << (row.status ? experiments::to_string(*row.status) : "");
    out << "\n";
  }
  return out.str();
}

ordered_json sweep_json(const std::vector<experiments::SweepRow>& rows) {
  ordered_json out = ordered_json::array();
  for (const experiments::SweepRow& row : rows) {
    ordered_json j;
    j["m"] = row.m;
    j["pr"] = jnum(row.pr);
    j["u"] = jnum(row.u);
    j["p0"] = jnum(row.p0);
    j["pc"] = jnum(row.pc);
    const bool degenerate =
        row.status && *row.status == experiments::PointStatus::Degenerate;
    if (!degenerate) {
      j["pi1"] = jnum(row.pi1);
      j["pi2"] = jnum(row.pi2);
      j["q"] = jnum(row.q);
      j["d"] = jnum(row.d);
    }
    if (row.sim_pi1) j["sim_pi1"] = jnum(*row.sim_pi1);
    if (row.sim_u) j["sim_u"] = jnum(*row.sim_u);
    if (row.ci) j["ci"] = jnum(*row.ci);
    if (row.status) j["status"] = experiments::to_string(*row.status);
    out.push_back(j);
  }
  return out;
}

int cmd_sweep(const std::string& kind, const std::string& users,
              const std::string& pr_grid, const std::string& u_grid,
              const CommonFlags& flags) {
  experiments::SweepSpec spec;
  ordered_json params;
  params["kind"] = kind;
  params["users"] = users;

  spec.m_values = contention::grid::parse_ints(users);
  std::vector<experiments::SweepRow> rows;
  if (kind == "throughput-vs-pr") {
    if (pr_grid.empty())
      throw contention::grid::GridError("--pr-grid is required for this kind");
    params["pr_grid"] = pr_grid;
    spec.kind = experiments::SweepKind::ThroughputVsPr;
    spec.pr_values = contention::grid::parse_doubles(pr_grid);
    rows = experiments::sweep_throughput_vs_pr(spec);
  } else {
    if (u_grid.empty())
      throw contention::grid::GridError("--u is required for this kind");
    params["u"] = u_grid;
    spec.u_values = contention::grid::parse_doubles(u_grid);
    if (kind == "throughput-vs-users") {
      spec.kind = experiments::SweepKind::ThroughputVsUsers;
      rows = experiments::sweep_throughput_vs_users(spec);
    } else {  // delay
      spec.kind = experiments::SweepKind::DelayVsUsers;
      rows = experiments::sweep_delay(spec);
    }
  }

  std::string text;
  if (flags.format == "csv")
    text = csv_preamble("sweep", params, {}) + sweep_csv(rows, false, false);
  else
    text = json_record("sweep", params, sweep_json(rows), {});
  write_output(text, flags.output);
  return 0;
}

// --------------------------------------------------------------- validate

int cmd_validate(const std::string& users, const std::string& pr_grid,
                 const sim::SimConfig& sim_template, const CommonFlags& flags) {
  experiments::SweepSpec spec;
  spec.kind = experiments::SweepKind::Validation;
  spec.m_values = contention::grid::parse_ints(users);
  spec.pr_values = contention::grid::parse_doubles(pr_grid);
  spec.sim = sim_template;

  ordered_json params;
  params["users"] = users;
  params["pr_grid"] = pr_grid;
  params["slots"] = sim_template.slots;
  params["warmup"] = sim_template.warmup;
  params["seed"] = sim_template.seed;
  params["replications"] = sim_template.replications;

  const experiments::ValidationReport report = experiments::validate(spec);
  std::vector<std::string> warnings = report.discrepancy_flags;

  std::string text;
  if (flags.format == "csv") {
    std::ostringstream out;
    out << csv_preamble("validate", params, warnings);
    out << sweep_csv(report.rows, true, true);
    out << "# points=" << report.rows.size() << " pass=" << report.pass
        << " fail=" << report.fail << " degenerate=" << report.degenerate
        << "\n";
    text = out.str();
  } else {
    ordered_json record;
    record["schema_version"] = kSchemaVersion;
    record["command"] = "validate";
    record["parameters"] = params;
    record["rows"] = sweep_json(report.rows);
    ordered_json summary;
    summary["points"] = report.rows.size();
    summary["pass"] = report.pass;
    summary["fail"] = report.fail;
    summary["degenerate"] = report.degenerate;
    record["summary"] = summary;
    record["warnings"] = warnings;
    text = record.dump(2) + "\n";
  }
  write_output(text, flags.output);
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative slotted ALOHA: closed-form model and simulator"};
  app.require_subcommand(1);

  // analyze
  CLI::App* analyze = app.add_subcommand("analyze", "Closed-form point analysis");
  int an_m = 2;
  double an_pr = 0.5, an_pt = 1.0;
  CommonFlags an_flags;
  analyze->add_option("--users", an_m, "User count")->required();
  analyze->add_option("--pr", an_pr, "Retransmission probability")->required();
  analyze->add_option("--pt", an_pt, "Free-state transmission probability")
      ->capture_default_str();
  add_common_flags(analyze, &an_flags);

  // simulate
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo run");
  sim::SimConfig sim_config;
  CommonFlags sim_flags;
  std::uint64_t sim_seed = 0;
  bool sim_warmup_set = false;
  simulate->add_option("--users", sim_config.m, "User count")->required();
  simulate->add_option("--pr", sim_config.pr, "Retransmission probability")
      ->required();
  simulate->add_option("--pt", sim_config.pt, "Free-state probability (must be 1)")
      ->capture_default_str();
  simulate->add_option("--slots", sim_config.slots, "Slot budget")
      ->capture_default_str();
  CLI::Option* sim_warmup_opt =
      simulate->add_option("--warmup", sim_config.warmup, "Warmup slots");
  CLI::Option* sim_seed_opt =
      simulate->add_option("--seed", sim_seed, "RNG seed");
  simulate
      ->add_option("--replications", sim_config.replications,
                   "Independent replications")
      ->capture_default_str();
  add_common_flags(simulate, &sim_flags);

  // sweep
  CLI::App* sweep = app.add_subcommand("sweep", "Parameter sweep tables");
  std::string sw_kind, sw_users, sw_pr_grid, sw_u_grid;
  CommonFlags sw_flags;
  sweep->add_option("--kind", sw_kind, "Sweep kind")
      ->check(CLI::IsMember({"throughput-vs-pr", "throughput-vs-users", "delay"}))
      ->required();
  sweep->add_option("--users", sw_users, "User counts (list or range)")
      ->required();
  sweep->add_option("--pr-grid", sw_pr_grid, "pr grid (start:end:step or list)");
  sweep->add_option("--u", sw_u_grid, "Occupancy grid (list or range)");
  add_common_flags(sweep, &sw_flags);

  // validate
  CLI::App* validate = app.add_subcommand("validate", "Analytic vs simulation");
  std::string va_users = "2,5,10,20";
  std::string va_pr_grid = "0.05,0.1,0.3,0.5,0.8";
  sim::SimConfig va_config;
  va_config.slots = 1'000'000;
  va_config.warmup = 10'000;
  CommonFlags va_flags;
  std::uint64_t va_seed = 0;
  bool va_warmup_set = false;
  validate->add_option("--users", va_users, "User counts")->capture_default_str();
  validate->add_option("--pr-grid", va_pr_grid, "pr grid")->capture_default_str();
  validate->add_option("--slots", va_config.slots, "Slot budget per point")
      ->capture_default_str();
  CLI::Option* va_warmup_opt =
      validate->add_option("--warmup", va_config.warmup, "Warmup slots");
  CLI::Option* va_seed_opt = validate->add_option("--seed", va_seed, "RNG seed");
  validate
      ->add_option("--replications", va_config.replications,
                   "Independent replications")
      ->capture_default_str();
  add_common_flags(validate, &va_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(an_m, an_pr, an_pt, an_flags);
    if (simulate->parsed()) {
      sim_warmup_set = sim_warmup_opt->count() > 0;
      if (!sim_warmup_set) sim_config.warmup = sim::default_warmup(sim_config.slots);
      sim_config.seed = resolve_seed(sim_seed_opt, sim_seed);
      return cmd_simulate(sim_config, sim_flags);
    }
    if (sweep->parsed())
      return cmd_sweep(sw_kind, sw_users, sw_pr_grid, sw_u_grid, sw_flags);
    if (validate->parsed()) {
      va_warmup_set = va_warmup_opt->count() > 0;
      if (!va_warmup_set) va_config.warmup = sim::default_warmup(va_config.slots);
      va_config.seed = resolve_seed(va_seed_opt, va_seed);
      return cmd_validate(va_users, va_pr_grid, va_config, va_flags);
    }
  } catch (const sim::NotSupported& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const contention::grid::GridError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const experiments::SpecInvalid& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const sim::ConfigInvalid& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const analytic::ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
