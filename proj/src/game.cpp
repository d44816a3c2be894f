#include "ipdlab/game.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace ipdlab {

namespace {

double clamp01(double x, const char* what) {
  if (x < 0.0) {
    if (x < -kProbSlack)
      throw ConstraintError(std::string(what) + " below 0: " +
                            std::to_string(x));
    return 0.0;
  }
  if (x > 1.0) {
    if (x > 1.0 + kProbSlack)
      throw ConstraintError(std::string(what) + " above 1: " +
                            std::to_string(x));
    return 1.0;
  }
  return x;
}

}  // namespace

PayoffParams make_params(double t, double r, double p, double s) {
  if (!(std::isfinite(t) && std::isfinite(r) && std::isfinite(p) &&
        std::isfinite(s)))
    throw ConstraintError("payoffs must be finite");
  if (!(t > r)) throw ConstraintError("payoff constraint violated: T > R");
  if (!(r > p)) throw ConstraintError("payoff constraint violated: R > P");
  if (!(p > s)) throw ConstraintError("payoff constraint violated: P > S");
  if (!(2.0 * r > t + s))
    throw ConstraintError("payoff constraint violated: 2R > T + S");
  PayoffParams out{t, r, p, s, t == 1.0 && s == 0.0};
  return out;
}

PayoffParams conventional_params() { return make_params(5.0, 3.0, 1.0, 0.0); }

PayoffParams normalize(const PayoffParams& params) {
  if (params.normalized) return params;
  const double span = params.t - params.s;
  return PayoffParams{1.0, (params.r - params.s) / span,
                      (params.p - params.s) / span, 0.0, true};
}

std::pair<Vec4, Vec4> payoff_vectors(const PayoffParams& params) {
  Vec4 sx{params.r, params.s, params.t, params.p};
  Vec4 sy{params.r, params.t, params.s, params.p};
  return {sx, sy};
}

StrategyVector StrategyVector::checked(double p1, double p2, double p3,
                                       double p4, double init_coop) {
  StrategyVector out;
  out.p = {clamp01(p1, "strategy entry"), clamp01(p2, "strategy entry"),
           clamp01(p3, "strategy entry"), clamp01(p4, "strategy entry")};
  out.init_coop = clamp01(init_coop, "init_coop");
  return out;
}

StrategyVector StrategyVector::checked(const Vec4& p, double init_coop) {
  return checked(p[0], p[1], p[2], p[3], init_coop);
}

OutcomeDistribution OutcomeDistribution::checked(const Vec4& v) {
  OutcomeDistribution out;
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    out.v[i] = clamp01(v[i], "distribution entry");
    sum += out.v[i];
  }
  if (std::abs(sum - 1.0) > kProbSlack)
    throw ConstraintError("distribution does not sum to 1: " +
                          std::to_string(sum));
  for (auto& x : out.v) x /= sum;
  return out;
}

double OutcomeDistribution::l1_distance(const OutcomeDistribution& other) const {
  double d = 0.0;
  for (int i = 0; i < 4; ++i) d += std::abs(v[i] - other.v[i]);
  return d;
}

MarkovMatrix build_markov(const StrategyVector& p, const StrategyVector& q) {
  const Vec4 yr{q.p[0], q.p[2], q.p[1], q.p[3]};
  MarkovMatrix m;
  for (int i = 0; i < 4; ++i) {
    const double a = p.p[i];
    const double b = yr[i];
    m.m[i] = {a * b, a * (1.0 - b), (1.0 - a) * b, (1.0 - a) * (1.0 - b)};
  }
  return m;
}

OutcomeDistribution initial_distribution(double x_coop, double y_coop) {
  const double a = clamp01(x_coop, "init_coop");
  const double b = clamp01(y_coop, "init_coop");
  return OutcomeDistribution::checked(
      {a * b, a * (1.0 - b), (1.0 - a) * b, (1.0 - a) * (1.0 - b)});
}

std::pair<double, double> expected_payoffs(const OutcomeDistribution& v,
                                           const PayoffParams& params) {
  const auto [sx, sy] = payoff_vectors(params);
  double ex = 0.0;
  double ey = 0.0;
  for (int i = 0; i < 4; ++i) {
    ex += v.v[i] * sx[i];
    ey += v.v[i] * sy[i];
  }
  return {ex, ey};
}

}  // namespace ipdlab
