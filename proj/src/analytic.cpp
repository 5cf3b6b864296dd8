#include "contention/analytic.hpp"

#include <cmath>
#include <limits>

namespace contention::analytic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (1-pr)^(m-1) with the 0^0 = 1 convention at m = 1.
double no_transmit_prob(int m, double pr) {
  if (m == 1) return 1.0;
  return std::pow(1.0 - pr, m - 1);
}

struct LittleTriple {
  double pi1;
  double q;
  double d;
};

// Computes (pi1, Q, D) on one arithmetic path so that D*pi1 == Q holds
// bit-exactly. Q = pi1*n1 + pi2*n2 collapses to n2 + pi1 because n1-n2 = 1;
// D is the rounded quotient Q/pi1, nudged by at most one ulp so that the
// rounded product D*pi1 lands back inside [n2, n1].
LittleTriple little_triple(const ModelParams& params) {
  const double pi1 = throughput(params);
  const int m = params.m;
  const double n1 = 0.5 * m * (m + 1);
  const double n2 = 0.5 * (m - 1) * (m + 2);
  if (pi1 == 0.0) return {0.0, n2, kInf};

  double d = (n2 + pi1) / pi1;
  for (int i = 0; i < 4; ++i) {
    const double q = d * pi1;
    if (q < n2) {
      d = std::nextafter(d, kInf);
    } else if (q > n1) {
      d = std::nextafter(d, -kInf);
    } else {
      return {pi1, q, d};
    }
  }
  return {pi1, d * pi1, d};
}

}  // namespace

void ModelParams::validate() const {
  if (m < 1) throw ModelError("user count must be >= 1");
  if (!(pr >= 0.0 && pr <= 1.0)) throw ModelError("pr must be in [0,1]");
  if (!(pt >= 0.0 && pt <= 1.0)) throw ModelError("pt must be in [0,1]");
}

TransitionMatrix transition_probabilities(const ModelParams& params) {
  params.validate();
  const double pc = no_transmit_prob(params.m, params.pr);
  return {pc, params.m * params.pr * pc};
}

StationaryDistribution stationary_closed_form(const TransitionMatrix& matrix) {
  const double denom = 1.0 - matrix.pc + matrix.p0;
  if (denom == 0.0)
    throw DegenerateChain("pc = 1 and p0 = 0: every distribution is stationary");
  return {matrix.p0 / denom, (1.0 - matrix.pc) / denom};
}

StationaryDistribution stationary_linear_solve(const TransitionMatrix& matrix) {
  // pi1*(pc - 1) + pi2*p0 = 0
  // pi1          + pi2    = 1
  double a[2][3] = {
      {matrix.pc - 1.0, matrix.p0, 0.0},
      {1.0, 1.0, 1.0},
  };
  if (std::abs(a[1][0]) > std::abs(a[0][0])) {
    std::swap(a[0][0], a[1][0]);
    std::swap(a[0][1], a[1][1]);
    std::swap(a[0][2], a[1][2]);
  }
  const double factor = a[1][0] / a[0][0];
  a[1][1] -= factor * a[0][1];
  a[1][2] -= factor * a[0][2];
  if (a[1][1] == 0.0)
    throw DegenerateChain("singular stationary system: distribution not unique");
  const double pi2 = a[1][2] / a[1][1];
  const double pi1 = (a[0][2] - a[0][1] * pi2) / a[0][0];
  return {pi1, pi2};
}

double throughput(const ModelParams& params) {
  return stationary_closed_form(transition_probabilities(params)).pi1;
}

double asymptotic_throughput_limit(int m) {
  if (m < 1) throw ModelError("user count must be >= 1");
  return static_cast<double>(m) / (2.0 * m - 1.0);
}

double occupancy(const ModelParams& params) {
  const TransitionMatrix matrix = transition_probabilities(params);
  if (matrix.pc == 1.0)
    throw UnboundedOccupancy("pc = 1: holder is never interrupted");
  return 1.0 / (1.0 - matrix.pc);
}

double pr_from_occupancy(double u, int m) {
  if (!(u >= 1.0)) throw InvalidOccupancy("occupancy must be >= 1");
  if (m == 1) throw DegenerateUsers("occupancy is independent of pr for m = 1");
  if (m < 1) throw ModelError("user count must be >= 1");
  return 1.0 - std::pow((u - 1.0) / u, 1.0 / (m - 1));
}

double q_mean(const ModelParams& params) {
  return little_triple(params).q;
}

double delay(const ModelParams& params) {
  const LittleTriple t = little_triple(params);
  if (t.pi1 == 0.0)
    throw UnboundedDelay("pi1 = 0: packets never get through");
  return t.d;
}

ChainQuantities analyze(const ModelParams& params) {
  ChainQuantities out;
  out.params = params;
  out.matrix = transition_probabilities(params);
  out.stationary = stationary_closed_form(out.matrix);
  out.occupancy_u =
      out.matrix.pc == 1.0 ? kInf : 1.0 / (1.0 - out.matrix.pc);
  const LittleTriple t = little_triple(params);
  out.q_mean = t.q;
  out.delay_d = t.d;
  out.per_user_throughput = out.stationary.pi1 / params.m;
  return out;
}

}  // namespace contention::analytic
