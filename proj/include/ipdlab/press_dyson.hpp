#pragma once

#include <optional>
#include <utility>

#include "ipdlab/game.hpp"

namespace ipdlab {

// X's play-difference vector p - (1,1,0,0): the per-round change in the
// probability that X's next play is c, given the current outcome.
Vec4 x_press_dyson(const StrategyVector& p);

// Y's play-difference vector: q reindexed to X's outcome labels minus
// (1,0,1,0).
Vec4 y_press_dyson(const StrategyVector& q);

// Coordinates of a play-difference vector in the basis
// {S_X, S_Y, 1, e23}; requires normalized payoffs. delta measures the
// failure to be a zero-determinant strategy.
struct PressDysonCoords {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
};

// Closed-form inverse of the basis matrix; exact up to rounding.
PressDysonCoords decompose(const Vec4& p_tilde, const PayoffParams& params);

// Basis combination alpha*S_X + beta*S_Y + gamma*1 + delta*e23.
Vec4 recompose(const PressDysonCoords& c, const PayoffParams& params);

// Feasibility of coordinates as a scaled strategy: the four entry sign
// conditions, entry sizes at most 1, and the alpha+beta <= 0 / gamma >= 0
// coupling.
struct ConstraintReport {
  bool sign_ok = false;
  bool size_ok = false;
  bool coupling_ok = false;
  bool ok() const { return sign_ok && size_ok && coupling_ok; }
};

ConstraintReport check_constraints(const PressDysonCoords& c,
                                   const PayoffParams& params);

// Largest admissible rescale of p's play-difference vector; the result has
// some entry of magnitude exactly 1. Undefined for Repeat.
struct TopStrategy {
  StrategyVector top;
  double scale = 0.0;  // max |p_tilde_i| of the input
};

TopStrategy top_strategy(const StrategyVector& p, const PayoffParams& params);

// gamma-normalized coordinates (defined when gamma > 0, i.e. away from the
// exceptional square). z = -1/(alpha_bar + beta_bar) is the strategy's
// value line, always within [P, R].
struct BarCoords {
  double alpha_bar = 0.0;
  double beta_bar = 0.0;
  double delta_bar = 0.0;
  double z = 0.0;
  bool within_constraints = false;
};

BarCoords bar_coords(const PressDysonCoords& c, const PayoffParams& params);

// A zero-determinant strategy's (alpha_bar, beta_bar) point. Admissible
// points fill the strip x >= -1 >= y, -1/R >= x + y >= -1/P.
struct ZdsPoint {
  double x = 0.0;
  double y = 0.0;

  double z() const { return -1.0 / (x + y); }
  bool in_strip(const PayoffParams& params) const;
};

inline constexpr ZdsPoint kVertexPoint{-1.0, -1.0};

// delta read directly off a play-difference vector (normalized payoffs);
// zero exactly for zero-determinant strategies.
double zds_delta(const Vec4& p_tilde, const PayoffParams& params);

// The maximally-scaled strategy at a strip point; gamma_scale in (0,1]
// selects a fraction of the top scale.
StrategyVector strategy_from_zds_point(const ZdsPoint& pt,
                                       const PayoffParams& params,
                                       double gamma_scale = 1.0);

// The maximally-scaled agreeable ZDS with given alpha_bar > 0: cooperates
// after cc, and its opponent's payoff s_Y determines its own through the
// line z = R.
StrategyVector complier_top(double alpha_bar, const PayoffParams& params);

// Named strategies. All are parameter-free except edge, whose second entry
// depends on the normalized R.
StrategyVector tft();
StrategyVector repeat_strategy();
StrategyVector grim();
StrategyVector lame();
StrategyVector pavlov();
StrategyVector all_c();
StrategyVector all_d();
StrategyVector edge(const PayoffParams& params);

}  // namespace ipdlab
