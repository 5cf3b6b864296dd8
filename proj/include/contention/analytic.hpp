#pragma once

#include <stdexcept>
#include <string>

// Closed-form analysis of the two-state chain for m saturated users running
// cooperative slotted ALOHA with channel reservation after a success.
// State 1 ("busy") = exactly one user transmitting; state 2 = idle or collision.

namespace contention::analytic {

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// pr = 0 makes the busy state absorbing and unreachable at once: every
// distribution is stationary, so there is nothing to report.
struct DegenerateChain : ModelError {
  using ModelError::ModelError;
};

// pc = 1 (m = 1, or pr = 0): a holder is never interrupted, mean holding
// time is infinite.
struct UnboundedOccupancy : ModelError {
  using ModelError::ModelError;
};

// pi1 = 0 (pr = 1 with m >= 2): nothing ever gets through.
struct UnboundedDelay : ModelError {
  using ModelError::ModelError;
};

struct InvalidOccupancy : ModelError {
  using ModelError::ModelError;
};

// m = 1: occupancy does not depend on pr, the inversion is undefined.
struct DegenerateUsers : ModelError {
  using ModelError::ModelError;
};

struct ModelParams {
  int m = 1;           // user count, >= 1
  double pr = 0.5;     // per-slot retransmission probability of a backlogged user
  double pt = 1.0;     // free-state transmission probability; stored, unused
                       // analytically (the chain is saturated)

  void validate() const;
};

// Row-stochastic 2x2 matrix [[pc, 1-pc], [p0, 1-p0]].
struct TransitionMatrix {
  double pc = 0.0;  // busy -> busy
  double p0 = 0.0;  // nonbusy -> busy
};

struct StationaryDistribution {
  double pi1 = 0.0;  // long-run busy fraction = system throughput
  double pi2 = 1.0;
};

struct ChainQuantities {
  ModelParams params;
  TransitionMatrix matrix;
  StationaryDistribution stationary;
  double occupancy_u = 0.0;        // mean busy-run length, may be +inf
  double q_mean = 0.0;             // pi1*n1 + pi2*n2
  double delay_d = 0.0;            // Q / pi1, may be +inf
  double per_user_throughput = 0;  // pi1 / m
};

// p0 = m*pr*(1-pr)^(m-1), pc = (1-pr)^(m-1), with 0^0 = 1 so m = 1 gives pc = 1.
TransitionMatrix transition_probabilities(const ModelParams& params);

// pi1 = p0/(1-pc+p0). Throws DegenerateChain when 1-pc+p0 = 0.
StationaryDistribution stationary_closed_form(const TransitionMatrix& matrix);

// Independent route: Gaussian elimination on {pi1*pc + pi2*p0 = pi1,
// pi1 + pi2 = 1}. Must agree with the closed form within 1e-12.
StationaryDistribution stationary_linear_solve(const TransitionMatrix& matrix);

double throughput(const ModelParams& params);

// Limit of throughput as pr -> 0: m/(2m-1). The geometric-sum expansion of
// (1-(1-pr)^(m-1))/pr has m-1 terms, each -> 1, so the denominator of
// m / (sum/(1-pr)^(m-1) + m) tends to (m-1) + m.
double asymptotic_throughput_limit(int m);

// U = 1/(1-pc), the geometric mean busy-run length. Throws UnboundedOccupancy
// when pc = 1.
double occupancy(const ModelParams& params);

// The unique pr with occupancy((m, pr)) = u: pr = 1 - ((u-1)/u)^(1/(m-1)).
double pr_from_occupancy(double u, int m);

// Q = pi1*n1 + pi2*n2 with n1 = m(m+1)/2, n2 = (m-1)(m+2)/2.
// Since n1 - n2 = 1 this is n2 + pi1.
double q_mean(const ModelParams& params);

// D = Q/pi1 (Little's law). Throws UnboundedDelay when pi1 = 0.
double delay(const ModelParams& params);

// Everything at once; unbounded quantities come back as +infinity instead of
// throwing (pr = 0 still throws DegenerateChain: no stationary distribution).
ChainQuantities analyze(const ModelParams& params);

}  // namespace contention::analytic
