#pragma once

#include <string>
#include <vector>

#include "ipdlab/game.hpp"
#include "ipdlab/press_dyson.hpp"

namespace ipdlab {

// Compliance coefficient of a ZDS point: kappa*(s_X - Z) = s_Y - Z when X
// plays any strategy on the point and Y plays anything.
double kappa(const ZdsPoint& pt);

// Long-run payoffs when both players hold strip points, solved in closed
// form from the two payoff-line equations. Independent of the gamma scales.
struct DuelResult {
  double s_x = 0.0;
  double s_y = 0.0;
  double z_x = 0.0;
  double z_y = 0.0;
  double determinant = 0.0;  // beta_x*beta_y - alpha_x*alpha_y, >= 0
};

DuelResult duel_payoffs(const ZdsPoint& x, const ZdsPoint& y,
                        const PayoffParams& params);

// One verified relation in the payoff ordering chain.
struct OrderingRelation {
  std::string lhs;
  std::string rhs;
  double lhs_value = 0.0;
  double rhs_value = 0.0;
  bool strict = false;
  bool holds = false;
};

// The payoff/value-line ordering determined by the signs of the two
// alpha_bar components (with X relabeled so Z_X >= Z_Y).
struct OrderingReport {
  std::vector<OrderingRelation> relations;
  bool all_hold = false;
  bool swapped = false;  // true when the roles were exchanged to get Z_X >= Z_Y
};

OrderingReport ordering_report(const ZdsPoint& x, const ZdsPoint& y,
                               const PayoffParams& params);

}  // namespace ipdlab
