#include "ipdlab/classifier.hpp"

#include <algorithm>
#include <cmath>

namespace ipdlab {

namespace {

// Shared flag derivation from the play-difference vector and coordinates,
// so both classification routes agree bit-for-bit on the entry flags.
// Margins for Nash/good and strictly-firm are supplied by the caller, each
// route computing them from its own form of the inequalities.
ClassificationReport assemble(const Vec4& w, const PressDysonCoords& c,
                              const PayoffParams& n,
                              const ClassifierMargins& margins) {
  ClassificationReport rep;
  rep.coords = c;
  rep.margins = margins;

  rep.agreeable = std::abs(w[0]) <= kProbSlack;
  rep.firm = std::abs(w[3]) <= kProbSlack;
  const double p2 = 1.0 + w[1];
  const double p4 = w[3];
  rep.generous = p2 > kProbSlack && p4 > kProbSlack;
  double max_abs = 0.0;
  for (double x : w) max_abs = std::max(max_abs, std::abs(x));
  rep.is_repeat = max_abs <= kProbSlack;
  rep.exceptional = rep.agreeable && rep.firm;

  if (rep.agreeable && !rep.is_repeat) {
    rep.nash_type =
        margins.nash_1 >= -kStrictMargin && margins.nash_2 >= -kStrictMargin;
    rep.good = margins.nash_1 > kStrictMargin && margins.nash_2 > kStrictMargin;
  }
  if (rep.firm && !rep.is_repeat) {
    rep.strictly_firm =
        margins.firm_1 > kStrictMargin && margins.firm_2 > kStrictMargin;
  }

  rep.zds = std::abs(c.delta) <= kProbSlack && !rep.is_repeat;
  if (rep.zds) {
    rep.equalizer = std::abs(c.alpha) <= kProbSlack;
    rep.complier = rep.agreeable && c.alpha > kProbSlack;
    rep.extortion = rep.firm && !rep.exceptional && c.alpha > kProbSlack;
    if (c.gamma > kProbSlack) {
      const double ab = c.alpha / c.gamma;
      const double bb = c.beta / c.gamma;
      rep.vertex = std::abs(ab + 1.0) <= kProbSlack &&
                   std::abs(bb + 1.0) <= kProbSlack &&
                   n.p <= 0.5 + kProbSlack;
    }
  }
  return rep;
}

}  // namespace

ClassificationReport classify(const StrategyVector& p,
                              const PayoffParams& params) {
  const PayoffParams n = normalize(params);
  const double r = n.r;
  const double pp = n.p;
  const Vec4 w = x_press_dyson(p);
  const PressDysonCoords c = decompose(w, n);

  ClassifierMargins m;
  m.nash_1 = r * (1.0 - p.p[1]) - (1.0 - r) * p.p[2];
  m.nash_2 = ((r - pp) * (1.0 - p.p[1]) - (1.0 - r) * p.p[3]) / (r - pp);
  m.firm_1 = (pp * (1.0 - p.p[0]) - (r - pp) * p.p[2]) / (r - pp);
  m.firm_2 = pp * (1.0 - p.p[1]) - (1.0 - pp) * p.p[2];
  return assemble(w, c, n, m);
}

ClassificationReport classify_coords(const PressDysonCoords& c,
                                     const PayoffParams& params) {
  const PayoffParams n = normalize(params);
  const Vec4 w = recompose(c, n);

  ClassifierMargins m;
  m.nash_1 = (2.0 * n.r - 1.0) * c.alpha - c.delta;
  m.nash_2 = c.alpha - c.delta;
  m.firm_1 = -c.delta - c.alpha;
  m.firm_2 = -c.delta - (1.0 - 2.0 * n.p) * c.alpha;
  return assemble(w, c, n, m);
}

ExploitProbeReport exploit_probe(const StrategyVector& p,
                                 const PayoffParams& params) {
  const PayoffParams n = normalize(params);
  const ClassificationReport rep = classify(p, n);
  if (!rep.agreeable)
    throw ConstraintError("exploit probe needs an agreeable strategy");
  if (rep.is_repeat)
    throw ConstraintError("exploit probe is undefined for Repeat");

  const StrategyVector probes[2] = {
      StrategyVector::checked(0, 0, 0, 0, 0.0),
      StrategyVector::checked(0, 1, 1, 1, 0.0),
  };
  // The probe opens with defection; p opens with its own initial play.
  const OutcomeDistribution v1 = initial_distribution(p.init_coop, 0.0);

  ExploitProbeReport out;
  for (const auto& q : probes) {
    ProbeResult res;
    res.q = q;
    res.limit = limit_distribution(build_markov(p, q), v1);
    const auto [sx, sy] = expected_payoffs(res.limit, n);
    res.s_x = sx;
    res.s_y = sy;
    out.probes.push_back(res);
  }

  int best = -1;
  for (int i = 0; i < 2; ++i) {
    const double sy = out.probes[i].s_y;
    if (sy >= n.r - kStrictMargin && (best < 0 || sy > out.probes[best].s_y))
      best = i;
  }
  if (best >= 0) out.witness = out.probes[best];
  out.certified_good = !out.witness.has_value();
  return out;
}

PairConvergence pair_convergence(const StrategyVector& p,
                                 const StrategyVector& q,
                                 const PayoffParams& params) {
  const PayoffParams n = normalize(params);
  PairConvergence out;
  out.analysis = terminal_sets(build_markov(p, q));
  out.convergent_to_cc = out.analysis.convergent &&
                         out.analysis.terminal_sets[0] == std::vector<int>{kCC};
  const ClassificationReport cp = classify(p, n);
  const ClassificationReport cq = classify(q, n);
  out.hypotheses_met =
      cp.generous && cp.nash_type && cq.nash_type &&
      (cq.generous || q.p[2] + q.p[3] > kProbSlack);
  return out;
}

}  // namespace ipdlab
