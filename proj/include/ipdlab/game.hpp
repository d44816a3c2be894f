#pragma once

#include <array>
#include <utility>

#include "ipdlab/errors.hpp"

namespace ipdlab {

using Vec4 = std::array<double, 4>;

// Outcome indices for one round of play, always in this order.
enum Outcome : int { kCC = 0, kCD = 1, kDC = 2, kDD = 3 };

inline constexpr const char* kOutcomeNames[4] = {"cc", "cd", "dc", "dd"};

// Entries at most this far outside [0,1] are treated as float noise and
// clamped; anything worse is rejected.
inline constexpr double kProbSlack = 1e-12;

// Inequalities evaluated with |margin| <= kStrictMargin count as equalities.
inline constexpr double kStrictMargin = 1e-9;

// A two-player symmetric game with payoffs T > R > P > S and 2R > T + S.
// `normalized` is true when T = 1 and S = 0.
struct PayoffParams {
  double t = 1.0;
  double r = 0.0;
  double p = 0.0;
  double s = 0.0;
  bool normalized = false;
};

// Validates the payoff inequalities; throws ConstraintError naming the one
// that failed.
PayoffParams make_params(double t, double r, double p, double s);

// The conventional (5,3,1,0) game.
PayoffParams conventional_params();

// Affine rescale onto T = 1, S = 0. Idempotent.
PayoffParams normalize(const PayoffParams& params);

// Payoff vectors over outcomes (cc, cd, dc, dd): X receives (R,S,T,P) and
// Y receives (R,T,S,P).
std::pair<Vec4, Vec4> payoff_vectors(const PayoffParams& params);

// A memory-one strategy: cooperation probabilities in response to the
// previous outcome (cc, cd, dc, dd), plus the first-round cooperation
// probability.
struct StrategyVector {
  Vec4 p{};
  double init_coop = 1.0;

  // Clamps entries within kProbSlack of [0,1]; throws ConstraintError on
  // larger violations.
  static StrategyVector checked(double p1, double p2, double p3, double p4,
                                double init_coop = 1.0);
  static StrategyVector checked(const Vec4& p, double init_coop = 1.0);
};

// A probability distribution over the four outcomes.
struct OutcomeDistribution {
  Vec4 v{};

  // Requires nonnegative entries summing to 1 within kProbSlack, then
  // rescales so the sum is exactly 1 up to one rounding.
  static OutcomeDistribution checked(const Vec4& v);

  double l1_distance(const OutcomeDistribution& other) const;
};

// Row-stochastic 4x4 transition matrix over outcomes; rows are the current
// outcome, columns the next.
struct MarkovMatrix {
  std::array<Vec4, 4> m{};

  const Vec4& row(int i) const { return m[static_cast<size_t>(i)]; }
};

// Transition matrix for X playing p against Y playing q. Y sees the outcome
// with the roles swapped, so its response vector is (q1, q3, q2, q4).
MarkovMatrix build_markov(const StrategyVector& p, const StrategyVector& q);

// First-round outcome distribution from independent initial cooperation
// probabilities.
OutcomeDistribution initial_distribution(double x_coop, double y_coop);

// Expected payoffs (to X, to Y) under an outcome distribution.
std::pair<double, double> expected_payoffs(const OutcomeDistribution& v,
                                           const PayoffParams& params);

}  // namespace ipdlab
