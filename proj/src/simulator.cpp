#include "contention/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace contention::sim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kBatches = 32;

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Two-sided 97.5% Student-t quantiles, df 1..30; normal beyond.
double t_quantile_975(int df) {
  static const double table[] = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) return 0.0;
  if (df <= 30) return table[df - 1];
  return 1.960;
}

// Everything accumulated over the measured region of one replication.
struct RepAccumulator {
  std::uint64_t idle = 0, success = 0, collision = 0, measured = 0;
  std::vector<std::uint64_t> per_user;
  std::map<std::uint64_t, std::uint64_t> histogram;
  std::uint64_t completed_holdings = 0;
  std::uint64_t completed_holding_slots = 0;
  std::uint64_t censored = 0;
  std::uint64_t busy_to_busy = 0, busy_steps = 0;
  std::uint64_t nonbusy_to_busy = 0, nonbusy_steps = 0;
  std::uint64_t gap_sum = 0, gap_count = 0;
  std::vector<std::uint64_t> batch_success;
  std::vector<std::uint64_t> batch_size;

  explicit RepAccumulator(int m)
      : per_user(m, 0), batch_success(kBatches, 0), batch_size(kBatches, 0) {}
};

RepAccumulator run_replication(const SimConfig& config, int rep) {
  Engine engine(config.m, config.pr, replication_seed(config.seed, rep));
  RepAccumulator acc(config.m);
  const std::uint64_t measured_total = config.slots - config.warmup;

  int run_holder = -1;
  std::uint64_t run_length = 0;
  std::vector<std::uint64_t> last_acquisition(config.m, 0);
  std::vector<bool> acquired_before(config.m, false);
  bool prev_busy = false;
  bool have_prev = false;

  for (std::uint64_t t = 0; t < config.slots; ++t) {
    const SlotOutcome outcome = engine.advance();
    const bool busy = outcome.kind == SlotOutcome::Kind::Success;

    // Holding runs are tracked across the warmup boundary; a run is recorded
    // if it completes inside the measured region.
    if (busy && outcome.user == run_holder) {
      ++run_length;
    } else {
      if (run_holder >= 0 && t >= config.warmup) {
        acc.histogram[run_length] += 1;
        acc.completed_holdings += 1;
        acc.completed_holding_slots += run_length;
      }
      if (busy) {
        run_holder = outcome.user;
        run_length = 1;
        if (t >= config.warmup) {
          if (acquired_before[outcome.user]) {
            acc.gap_sum += t - last_acquisition[outcome.user];
            acc.gap_count += 1;
          }
          last_acquisition[outcome.user] = t;
          acquired_before[outcome.user] = true;
        }
      } else {
        run_holder = -1;
        run_length = 0;
      }
    }

    if (t >= config.warmup) {
      ++acc.measured;
      switch (outcome.kind) {
        case SlotOutcome::Kind::Idle: ++acc.idle; break;
        case SlotOutcome::Kind::Success:
          ++acc.success;
          ++acc.per_user[outcome.user];
          break;
        case SlotOutcome::Kind::Collision: ++acc.collision; break;
      }
      const std::uint64_t batch = (t - config.warmup) * kBatches / measured_total;
      ++acc.batch_size[batch];
      if (busy) ++acc.batch_success[batch];
      if (have_prev) {
        if (prev_busy) {
          ++acc.busy_steps;
          if (busy) ++acc.busy_to_busy;
        } else {
          ++acc.nonbusy_steps;
          if (busy) ++acc.nonbusy_to_busy;
        }
      }
      prev_busy = busy;
      have_prev = true;
    }
  }
  if (run_holder >= 0) ++acc.censored;
  return acc;
}

double batch_means_halfwidth(const RepAccumulator& acc) {
  std::vector<double> means;
  means.reserve(kBatches);
  for (int b = 0; b < kBatches; ++b)
    if (acc.batch_size[b] > 0)
      means.push_back(static_cast<double>(acc.batch_success[b]) /
                      static_cast<double>(acc.batch_size[b]));
  const int n = static_cast<int>(means.size());
  if (n < 2) return kInf;
  const double mean = std::accumulate(means.begin(), means.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : means) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1));
  return t_quantile_975(n - 1) * sd / std::sqrt(static_cast<double>(n));
}

}  // namespace

void SimConfig::validate() const {
  if (m < 1) throw ConfigInvalid("user count must be >= 1");
  if (!(pr >= 0.0 && pr <= 1.0)) throw ConfigInvalid("pr must be in [0,1]");
  if (!(pt >= 0.0 && pt <= 1.0)) throw ConfigInvalid("pt must be in [0,1]");
  if (pt != 1.0)
    throw NotSupported("pt != 1 is not modeled: users are saturated");
  if (slots == 0) throw ConfigInvalid("slot budget must be positive");
  if (warmup >= slots) throw ConfigInvalid("warmup must be below the slot budget");
  if (replications < 1) throw ConfigInvalid("replications must be >= 1");
}

std::uint64_t default_warmup(std::uint64_t slots) {
  const std::uint64_t w = std::max<std::uint64_t>(slots / 100, 1000);
  return std::min(w, slots > 0 ? slots - 1 : 0);
}

std::uint64_t replication_seed(std::uint64_t base, int rep) {
  std::uint64_t state = base + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(rep);
  return splitmix64(state);
}

StepResult step(int m, double pr, int holder, std::span<const double> draws) {
  if (holder < 0) {
    int transmitters = 0;
    int winner = -1;
    for (int u = 0; u < m; ++u) {
      if (draws[u] < pr) {
        ++transmitters;
        if (winner < 0) winner = u;
      }
    }
    if (transmitters == 0) return {SlotOutcome::idle(), -1};
    if (transmitters == 1) return {SlotOutcome::success(winner), winner};
    return {SlotOutcome::collision(transmitters), -1};
  }
  // Holder transmits unconditionally; draws cover the other m-1 users in
  // increasing user id. Any interferer destroys the slot.
  int interferers = 0;
  for (int i = 0; i < m - 1; ++i)
    if (draws[i] < pr) ++interferers;
  if (interferers == 0) return {SlotOutcome::success(holder), holder};
  return {SlotOutcome::collision(interferers + 1), -1};
}

Engine::Engine(int m, double pr, std::uint64_t seed)
    : m_(m), pr_(pr), state_(seed), draws_(static_cast<std::size_t>(m)) {}

double Engine::draw() {
  return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53;
}

SlotOutcome Engine::advance() {
  const int contenders = holder_ < 0 ? m_ : m_ - 1;
  for (int i = 0; i < contenders; ++i) draws_[i] = draw();
  const StepResult result =
      step(m_, pr_, holder_, std::span<const double>(draws_.data(), contenders));
  holder_ = result.next_holder;
  return result.outcome;
}

SimStats run(const SimConfig& config) {
  config.validate();

  std::vector<RepAccumulator> reps;
  reps.reserve(config.replications);
  for (int r = 0; r < config.replications; ++r)
    reps.push_back(run_replication(config, r));

  SimStats stats;
  stats.per_user_success.assign(config.m, 0);
  std::uint64_t holding_count = 0, holding_slots = 0;
  std::vector<double> rep_fractions;
  rep_fractions.reserve(reps.size());
  std::uint64_t gap_sum = 0, gap_count = 0;

  for (const RepAccumulator& acc : reps) {
    stats.measured_slots += acc.measured;
    stats.idle_slots += acc.idle;
    stats.success_slots += acc.success;
    stats.collision_slots += acc.collision;
    stats.censored_holdings += acc.censored;
    stats.busy_to_busy += acc.busy_to_busy;
    stats.busy_steps += acc.busy_steps;
    stats.nonbusy_to_busy += acc.nonbusy_to_busy;
    stats.nonbusy_steps += acc.nonbusy_steps;
    for (int u = 0; u < config.m; ++u)
      stats.per_user_success[u] += acc.per_user[u];
    for (const auto& [len, count] : acc.histogram)
      stats.holding_histogram[len] += count;
    holding_count += acc.completed_holdings;
    holding_slots += acc.completed_holding_slots;
    gap_sum += acc.gap_sum;
    gap_count += acc.gap_count;
    rep_fractions.push_back(static_cast<double>(acc.success) /
                            static_cast<double>(acc.measured));
  }

  stats.busy_fraction = static_cast<double>(stats.success_slots) /
                        static_cast<double>(stats.measured_slots);
  stats.mean_holding =
      holding_count > 0
          ? static_cast<double>(holding_slots) / static_cast<double>(holding_count)
          : kInf;
  stats.mean_interacquisition =
      gap_count > 0 ? static_cast<double>(gap_sum) / static_cast<double>(gap_count)
                    : kInf;
  stats.jain_index = jain_index(stats.per_user_success);

  const int r = static_cast<int>(reps.size());
  if (r > 1) {
    const double mean = std::accumulate(rep_fractions.begin(), rep_fractions.end(), 0.0) / r;
    double ss = 0.0;
    for (double v : rep_fractions) ss += (v - mean) * (v - mean);
    stats.between_rep_variance = ss / (r - 1);
    stats.ci_halfwidth =
        t_quantile_975(r - 1) * std::sqrt(stats.between_rep_variance / r);
  } else {
    stats.ci_halfwidth = batch_means_halfwidth(reps.front());
  }
  return stats;
}

std::vector<SlotOutcome> trace(const SimConfig& config, std::uint64_t limit) {
  config.validate();
  if (limit > config.slots)
    throw ConfigInvalid("trace limit exceeds the slot budget");
  Engine engine(config.m, config.pr, replication_seed(config.seed, 0));
  std::vector<SlotOutcome> outcomes;
  outcomes.reserve(limit);
  for (std::uint64_t t = 0; t < limit; ++t) outcomes.push_back(engine.advance());
  return outcomes;
}

double jain_index(std::span<const std::uint64_t> shares) {
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t s : shares) {
    const double v = static_cast<double>(s);
    sum += v;
    sumsq += v * v;
  }
  if (sumsq == 0.0) return 1.0;  // all-zero shares are trivially equal
  return sum * sum / (static_cast<double>(shares.size()) * sumsq);
}

}  // namespace contention::sim
