#include "ipdlab/press_dyson.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ipdlab {

namespace {

void require_normalized(const PayoffParams& params, const char* where) {
  if (!params.normalized)
    throw ConstraintError(std::string(where) + " requires normalized payoffs");
}

}  // namespace

Vec4 x_press_dyson(const StrategyVector& p) {
  return {p.p[0] - 1.0, p.p[1] - 1.0, p.p[2], p.p[3]};
}

Vec4 y_press_dyson(const StrategyVector& q) {
  return {q.p[0] - 1.0, q.p[2], q.p[1] - 1.0, q.p[3]};
}

PressDysonCoords decompose(const Vec4& w, const PayoffParams& params) {
  require_normalized(params, "decompose");
  const double r = params.r;
  const double p = params.p;
  const double f = -1.0 / (2.0 * (r - p));
  PressDysonCoords c;
  c.alpha = f * (-w[0] + (r - p) * w[1] + (p - r) * w[2] + w[3]);
  c.beta = f * (-w[0] + (p - r) * w[1] + (r - p) * w[2] + w[3]);
  c.gamma = f * (2.0 * p * w[0] - 2.0 * r * w[3]);
  c.delta = f * ((1.0 - 2.0 * p) * w[0] + (p - r) * w[1] + (p - r) * w[2] +
                 (2.0 * r - 1.0) * w[3]);
  return c;
}

Vec4 recompose(const PressDysonCoords& c, const PayoffParams& params) {
  require_normalized(params, "recompose");
  const double r = params.r;
  const double p = params.p;
  return {r * (c.alpha + c.beta) + c.gamma, c.beta + c.gamma + c.delta,
          c.alpha + c.gamma + c.delta, p * (c.alpha + c.beta) + c.gamma};
}

ConstraintReport check_constraints(const PressDysonCoords& c,
                                   const PayoffParams& params) {
  require_normalized(params, "check_constraints");
  const Vec4 w = recompose(c, params);
  ConstraintReport out;
  out.sign_ok = w[0] <= kProbSlack && w[1] <= kProbSlack &&
                w[2] >= -kProbSlack && w[3] >= -kProbSlack;
  out.size_ok = true;
  for (double x : w) out.size_ok = out.size_ok && std::abs(x) <= 1.0 + kProbSlack;
  const double ab = c.alpha + c.beta;
  const bool ab_zero = std::abs(ab) <= kProbSlack;
  const bool g_zero = std::abs(c.gamma) <= kProbSlack;
  out.coupling_ok = ab <= kProbSlack && c.gamma >= -kProbSlack &&
                    (ab_zero == g_zero);
  return out;
}

TopStrategy top_strategy(const StrategyVector& p, const PayoffParams& params) {
  require_normalized(params, "top_strategy");
  const Vec4 w = x_press_dyson(p);
  double scale = 0.0;
  for (double x : w) scale = std::max(scale, std::abs(x));
  if (scale <= kProbSlack)
    throw ConstraintError("Repeat has no top form: play differences are zero");
  TopStrategy out;
  out.scale = scale;
  out.top = StrategyVector::checked(w[0] / scale + 1.0, w[1] / scale + 1.0,
                                    w[2] / scale, w[3] / scale, p.init_coop);
  return out;
}

BarCoords bar_coords(const PressDysonCoords& c, const PayoffParams& params) {
  require_normalized(params, "bar_coords");
  if (c.gamma <= kProbSlack)
    throw ConstraintError(
        "bar coordinates undefined on the exceptional square (gamma = 0)");
  BarCoords out;
  out.alpha_bar = c.alpha / c.gamma;
  out.beta_bar = c.beta / c.gamma;
  out.delta_bar = c.delta / c.gamma;
  out.z = -1.0 / (out.alpha_bar + out.beta_bar);
  const double sum = out.alpha_bar + out.beta_bar;
  out.within_constraints =
      sum >= -1.0 / params.p - kStrictMargin &&
      sum <= -1.0 / params.r + kStrictMargin &&
      out.beta_bar <= -1.0 - out.delta_bar + kStrictMargin &&
      -1.0 - out.delta_bar <= out.alpha_bar + kStrictMargin;
  return out;
}

bool ZdsPoint::in_strip(const PayoffParams& params) const {
  const PayoffParams n = normalize(params);
  const double sum = x + y;
  return x >= -1.0 - kStrictMargin && y <= -1.0 + kStrictMargin &&
         sum <= -1.0 / n.r + kStrictMargin &&
         sum >= -1.0 / n.p - kStrictMargin;
}

double zds_delta(const Vec4& w, const PayoffParams& params) {
  require_normalized(params, "zds_delta");
  const double r = params.r;
  const double p = params.p;
  return ((2.0 * p - 1.0) * w[0] + (r - p) * (w[1] + w[2]) -
          (2.0 * r - 1.0) * w[3]) /
         (2.0 * (r - p));
}

StrategyVector strategy_from_zds_point(const ZdsPoint& pt,
                                       const PayoffParams& params,
                                       double gamma_scale) {
  const PayoffParams n = normalize(params);
  if (!pt.in_strip(n))
    throw ConstraintError("point (" + std::to_string(pt.x) + ", " +
                          std::to_string(pt.y) + ") is outside the ZDS strip");
  if (!(gamma_scale > 0.0 && gamma_scale <= 1.0))
    throw ConstraintError("gamma_scale must lie in (0, 1]");
  const Vec4 base{n.r * (pt.x + pt.y) + 1.0, pt.y + 1.0, pt.x + 1.0,
                  n.p * (pt.x + pt.y) + 1.0};
  double top = 0.0;
  for (double x : base) top = std::max(top, std::abs(x));
  if (top <= kProbSlack)
    throw ConstraintError("degenerate ZDS point: zero play differences");
  const double g = gamma_scale / top;
  return StrategyVector::checked(g * base[0] + 1.0, g * base[1] + 1.0,
                                 g * base[2], g * base[3]);
}

StrategyVector complier_top(double alpha_bar, const PayoffParams& params) {
  const PayoffParams n = normalize(params);
  if (!(alpha_bar > 0.0))
    throw ConstraintError("complier needs alpha_bar > 0");
  return StrategyVector::checked(
      1.0, (2.0 * n.r - 1.0) / (n.r * (alpha_bar + 1.0)), 1.0,
      (n.r - n.p) / (n.r * (alpha_bar + 1.0)));
}

StrategyVector tft() { return StrategyVector::checked(1, 0, 1, 0); }
StrategyVector repeat_strategy() { return StrategyVector::checked(1, 1, 0, 0); }
StrategyVector grim() { return StrategyVector::checked(1, 0, 0, 0); }
StrategyVector lame() { return StrategyVector::checked(1, 1, 1, 0); }
StrategyVector pavlov() { return StrategyVector::checked(1, 0, 0, 1); }
StrategyVector all_c() { return StrategyVector::checked(1, 1, 1, 1); }
StrategyVector all_d() { return StrategyVector::checked(0, 0, 0, 0); }

StrategyVector edge(const PayoffParams& params) {
  const PayoffParams n = normalize(params);
  return StrategyVector::checked(1.0, (2.0 * n.r - 1.0) / n.r, 1.0, 0.0);
}

}  // namespace ipdlab
