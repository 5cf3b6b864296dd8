#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

// Slot-synchronous Monte Carlo model of m saturated users contending with
// probability pr; a winner reserves the channel and keeps it until another
// user transmits into its slot. Empirical oracle for the analytic module.

namespace contention::sim {

struct ConfigInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// pt != 1 has no defined semantics in the saturated model.
struct NotSupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SimConfig {
  int m = 2;
  double pr = 0.5;
  double pt = 1.0;
  std::uint64_t slots = 1'000'000;
  std::uint64_t warmup = 10'000;
  std::uint64_t seed = 1;
  int replications = 1;

  void validate() const;
};

// Default warmup: 1% of the slot budget, at least 1000 (capped below slots).
std::uint64_t default_warmup(std::uint64_t slots);

struct SlotOutcome {
  enum class Kind : std::uint8_t { Idle, Success, Collision };
  Kind kind = Kind::Idle;
  int user = -1;   // holder/winner for Success
  int count = 0;   // transmitter count for Collision, >= 2

  bool operator==(const SlotOutcome&) const = default;

  static SlotOutcome idle() { return {Kind::Idle, -1, 0}; }
  static SlotOutcome success(int user) { return {Kind::Success, user, 1}; }
  static SlotOutcome collision(int count) { return {Kind::Collision, -1, count}; }
};

struct HoldingRecord {
  int user_id = -1;
  std::uint64_t run_length = 0;  // consecutive success slots, >= 1
};

struct SimStats {
  double busy_fraction = 0.0;     // estimates pi1
  std::vector<std::uint64_t> per_user_success;
  double mean_holding = 0.0;      // estimates U; +inf if no completed holding
  std::map<std::uint64_t, std::uint64_t> holding_histogram;
  double ci_halfwidth = 0.0;      // 95% for busy_fraction
  double jain_index = 1.0;
  // Accounting over measured slots.
  std::uint64_t measured_slots = 0;
  std::uint64_t idle_slots = 0;
  std::uint64_t success_slots = 0;
  std::uint64_t collision_slots = 0;
  std::uint64_t censored_holdings = 0;
  // Empirical one-step transition counts (busy = Success slot).
  std::uint64_t busy_to_busy = 0;
  std::uint64_t busy_steps = 0;
  std::uint64_t nonbusy_to_busy = 0;
  std::uint64_t nonbusy_steps = 0;
  // Auxiliary: mean slots between a user's consecutive channel acquisitions.
  double mean_interacquisition = 0.0;
  double between_rep_variance = 0.0;  // of busy_fraction, replications > 1
};

// One slot transition. holder < 0 means contention: every user with
// draws[i] < pr transmits. With a holder, draws hold one value per
// non-holder in increasing user id; any interferer destroys the slot and
// the holder relinquishes. Returns the outcome and the next holder (or -1).
struct StepResult {
  SlotOutcome outcome;
  int next_holder = -1;
};
StepResult step(int m, double pr, int holder, std::span<const double> draws);

// Seed for replication `rep`, derived from the base seed by a splitmix64
// round so streams are decorrelated but reproducible.
std::uint64_t replication_seed(std::uint64_t base, int rep);

// Deterministic per-slot engine for one replication stream.
class Engine {
 public:
  Engine(int m, double pr, std::uint64_t seed);

  SlotOutcome advance();
  int holder() const { return holder_; }

 private:
  double draw();

  int m_;
  double pr_;
  int holder_ = -1;
  std::uint64_t state_;  // xorshift-multiply generator state
  std::vector<double> draws_;
};

SimStats run(const SimConfig& config);

// First `limit` outcomes of replication 0 for the given config.
std::vector<SlotOutcome> trace(const SimConfig& config, std::uint64_t limit);

double jain_index(std::span<const std::uint64_t> shares);

}  // namespace contention::sim
