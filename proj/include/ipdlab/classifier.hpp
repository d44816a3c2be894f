#pragma once

#include <optional>
#include <vector>

#include "ipdlab/game.hpp"
#include "ipdlab/markov.hpp"
#include "ipdlab/press_dyson.hpp"

namespace ipdlab {

// Margins of the classification inequalities; positive means strictly
// satisfied, |m| <= kStrictMargin counts as equality. nash_1/nash_2 are the
// two Nash inequalities for agreeable strategies, firm_1/firm_2 the two
// strictly-firm inequalities for firm strategies.
struct ClassifierMargins {
  double nash_1 = 0.0;
  double nash_2 = 0.0;
  double firm_1 = 0.0;
  double firm_2 = 0.0;
};

struct ClassificationReport {
  bool agreeable = false;      // cooperates after cc
  bool firm = false;           // defects after dd
  bool generous = false;       // p2 > 0 and p4 > 0
  bool is_repeat = false;      // play-difference vector is zero
  bool exceptional = false;    // agreeable and firm
  bool nash_type = false;
  bool good = false;
  bool strictly_firm = false;
  bool zds = false;            // delta = 0
  bool equalizer = false;      // zds with alpha = 0
  bool complier = false;       // agreeable zds with alpha > 0
  bool extortion = false;      // firm non-exceptional zds with alpha > 0
  bool vertex = false;         // bar point (-1,-1), requires P <= 1/2
  ClassifierMargins margins;
  PressDysonCoords coords;
};

// Classification from the strategy vector itself: entry flags read off p,
// Nash/good/strictly-firm from the direct payoff-space inequalities.
// Accepts raw or normalized params.
ClassificationReport classify(const StrategyVector& p,
                              const PayoffParams& params);

// The same report computed from coordinates: Nash/good from the
// coordinate-form inequalities (delta against alpha), strictly-firm from
// the coordinate form, entry flags from the recomposed vector. Requires
// normalized params.
ClassificationReport classify_coords(const PressDysonCoords& c,
                                     const PayoffParams& params);

// One probe play against p from the initial plays (p's init_coop versus an
// initial defection).
struct ProbeResult {
  StrategyVector q;
  OutcomeDistribution limit;
  double s_x = 0.0;
  double s_y = 0.0;
};

// Plays the two non-agreeable probes AllD and (0,1,1,1) against an
// agreeable p. A witness is a probe earning s_Y >= R (strictly above R when
// p is not Nash); good strategies admit none.
struct ExploitProbeReport {
  std::vector<ProbeResult> probes;
  std::optional<ProbeResult> witness;
  bool certified_good = false;  // both probes hold s_Y < R
};

ExploitProbeReport exploit_probe(const StrategyVector& p,
                                 const PayoffParams& params);

// Whether {cc} is the unique terminal set for the pair, together with the
// hypothesis under which that is guaranteed: p generous and Nash, q Nash
// and either generous or with q3 + q4 > 0.
struct PairConvergence {
  bool convergent_to_cc = false;
  bool hypotheses_met = false;
  TerminalSetAnalysis analysis;
};

PairConvergence pair_convergence(const StrategyVector& p,
                                 const StrategyVector& q,
                                 const PayoffParams& params);

}  // namespace ipdlab
