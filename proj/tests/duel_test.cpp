#include <doctest.h>

#include <cmath>

#include "ipdlab/duel.hpp"
#include "ipdlab/errors.hpp"
#include "ipdlab/markov.hpp"
#include "test_support.hpp"

using namespace ipdlab;
using ipdtest::fixture_params;

namespace {

const PayoffParams kNorm = normalize(fixture_params());

std::pair<double, double> markov_payoffs(const StrategyVector& x,
                                         const StrategyVector& y,
                                         double init_x, double init_y) {
  const OutcomeDistribution v = limit_distribution(
      build_markov(x, y), initial_distribution(init_x, init_y));
  return expected_payoffs(v, kNorm);
}

}  // namespace

TEST_CASE("compliance coefficients of the fixture points") {
  CHECK(kappa({1, -8.0 / 3}) == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(kappa({1, -6}) == doctest::Approx(1.0 / 6).epsilon(1e-12));
  CHECK(kappa({0, -2}) == doctest::Approx(0.0));
  CHECK(kappa(kVertexPoint) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("the compliance identity pins the opponent payoff") {
  const ZdsPoint pt{1, -8.0 / 3};
  const StrategyVector comp = complier_top(1.0, kNorm);
  const auto [s_x, s_y] = markov_payoffs(comp, all_d(), 1.0, 1.0);
  const double lhs = kappa(pt) * (s_x - pt.z());
  const double rhs = s_y - pt.z();
  CHECK(lhs == doctest::Approx(-6.0 / 35).epsilon(1e-12));
  CHECK(rhs == doctest::Approx(-6.0 / 35).epsilon(1e-12));

  Xoshiro256StarStar rng(41);
  for (int k = 0; k < 500; ++k) {
    const ZdsPoint p = ipdtest::random_strip_point(rng, kNorm);
    const StrategyVector x =
        strategy_from_zds_point(p, kNorm, ipdtest::uniform_in(rng, 0.2, 1));
    const StrategyVector q = ipdtest::random_strategy(rng);
    const auto [sx, sy] = markov_payoffs(x, q, x.init_coop, q.init_coop);
    CHECK(std::abs(kappa(p) * (sx - p.z()) - (sy - p.z())) < 1e-9);
  }
}

TEST_CASE("closed-form duel payoffs of the fixture pairs") {
  const DuelResult a = duel_payoffs({1, -8.0 / 3}, {1, -6}, kNorm);
  CHECK(a.determinant == doctest::Approx(15.0).epsilon(1e-12));
  CHECK(a.s_x == doctest::Approx(11.0 / 45).epsilon(1e-12));
  CHECK(a.s_y == doctest::Approx(7.0 / 15).epsilon(1e-12));
  CHECK(a.z_x == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(a.z_y == doctest::Approx(0.2).epsilon(1e-12));

  const DuelResult b = duel_payoffs({-0.5, -7.0 / 6}, {1, -6}, kNorm);
  CHECK(b.determinant == doctest::Approx(7.5).epsilon(1e-12));
  CHECK(b.s_x == doctest::Approx(13.0 / 45).epsilon(1e-12));
  CHECK(b.s_y == doctest::Approx(11.0 / 15).epsilon(1e-12));

  const DuelResult c = duel_payoffs(kVertexPoint, {1, -6}, kNorm);
  CHECK(c.determinant == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(c.s_x == doctest::Approx(2.0 / 7).epsilon(1e-12));
  CHECK(c.s_y == doctest::Approx(5.0 / 7).epsilon(1e-12));
}

TEST_CASE("swapping the players swaps the payoffs exactly") {
  Xoshiro256StarStar rng(42);
  for (int k = 0; k < 2000; ++k) {
    const PayoffParams np = normalize(ipdtest::random_params(rng));
    const ZdsPoint x = ipdtest::random_strip_point(rng, np);
    const ZdsPoint y = ipdtest::random_strip_point(rng, np);
    const DuelResult fwd = duel_payoffs(x, y, np);
    const DuelResult bwd = duel_payoffs(y, x, np);
    CHECK(fwd.s_x == bwd.s_y);
    CHECK(fwd.s_y == bwd.s_x);
    CHECK(fwd.determinant == bwd.determinant);
  }
}

TEST_CASE("the vertex self-duel splits the pot") {
  const DuelResult d = duel_payoffs(kVertexPoint, kVertexPoint, kNorm);
  CHECK(d.s_x == 0.5);
  CHECK(d.s_y == 0.5);
  CHECK(d.determinant == 0.0);
}

TEST_CASE("duel rejects points outside the strip") {
  CHECK_THROWS_AS(duel_payoffs({0.5, -1}, {1, -6}, kNorm), ConstraintError);
  CHECK_THROWS_AS(duel_payoffs({1, -6}, {-2, -1}, kNorm), ConstraintError);
}

TEST_CASE("closed-form duels match the Markov limit payoffs") {
  Xoshiro256StarStar rng(43);
  for (int k = 0; k < 1000; ++k) {
    const PayoffParams np = normalize(ipdtest::random_params(rng));
    const ZdsPoint px = ipdtest::random_strip_point(rng, np);
    const ZdsPoint py = ipdtest::random_strip_point(rng, np);
    const StrategyVector x =
        strategy_from_zds_point(px, np, ipdtest::uniform_in(rng, 0.2, 1));
    const StrategyVector y =
        strategy_from_zds_point(py, np, ipdtest::uniform_in(rng, 0.2, 1));
    const DuelResult d = duel_payoffs(px, py, np);
    const OutcomeDistribution v = limit_distribution(
        build_markov(x, y),
        initial_distribution(ipdtest::uniform_in(rng, 0, 1),
                             ipdtest::uniform_in(rng, 0, 1)));
    const auto [sx, sy] = expected_payoffs(v, np);
    CHECK(std::abs(sx - d.s_x) < 1e-8);
    CHECK(std::abs(sy - d.s_y) < 1e-8);
  }
}

TEST_CASE("duel payoffs do not depend on the strategy scales") {
  const ZdsPoint px{1, -8.0 / 3};
  const ZdsPoint py{1, -6};
  const DuelResult d = duel_payoffs(px, py, kNorm);
  for (double scale_x : {0.3, 0.7}) {
    for (double scale_y : {0.3, 0.7}) {
      const StrategyVector x = strategy_from_zds_point(px, kNorm, scale_x);
      const StrategyVector y = strategy_from_zds_point(py, kNorm, scale_y);
      const auto [sx, sy] = markov_payoffs(x, y, 0.5, 0.5);
      CHECK(sx == doctest::Approx(d.s_x).epsilon(1e-10));
      CHECK(sy == doctest::Approx(d.s_y).epsilon(1e-10));
    }
  }
}

TEST_CASE("payoff ordering between distinct value lines") {
  // Higher line holds a positive-pull point: its line caps both payoffs.
  const OrderingReport plus = ordering_report({1, -8.0 / 3}, {1, -6}, kNorm);
  CHECK(plus.all_hold);
  CHECK_FALSE(plus.swapped);
  REQUIRE(plus.relations.size() == 4);
  CHECK(plus.relations[0].lhs == "Z_X");
  CHECK(plus.relations[0].rhs == "s_Y");
  CHECK(plus.relations[0].lhs_value == doctest::Approx(0.6));
  CHECK(plus.relations[0].rhs_value == doctest::Approx(7.0 / 15));

  // Higher line holds a negative-pull point: the opponent beats its line.
  const OrderingReport minus =
      ordering_report({-0.5, -7.0 / 6}, {1, -6}, kNorm);
  CHECK(minus.all_hold);
  CHECK(minus.relations[0].lhs == "s_Y");
  CHECK(minus.relations[0].rhs == "Z_X");
  CHECK(minus.relations[0].lhs_value == doctest::Approx(11.0 / 15));

  // An equalizer pins the opposing payoff to its own line.
  const OrderingReport eq = ordering_report({0, -2}, {1, -6}, kNorm);
  CHECK(eq.all_hold);
  CHECK(eq.relations[0].lhs == "Z_X");
  CHECK(eq.relations[0].rhs == "s_Y");
  CHECK_FALSE(eq.relations[0].strict);

  // Lower line with a negative-pull point.
  const OrderingReport low =
      ordering_report({1, -8.0 / 3}, {-0.5, -4.5}, kNorm);
  CHECK(low.all_hold);
  CHECK(low.relations[2].lhs == "s_Y");
  CHECK(low.relations[2].rhs == "Z_Y");
  CHECK(low.relations[3].lhs == "Z_Y");
  CHECK(low.relations[3].rhs == "s_X");

  // Lower-line equalizer pins the opponent to its line.
  const OrderingReport loweq = ordering_report({1, -8.0 / 3}, {0, -5}, kNorm);
  CHECK(loweq.all_hold);
  CHECK(loweq.relations[3].lhs == "s_X");
  CHECK(loweq.relations[3].rhs == "Z_Y");
  CHECK_FALSE(loweq.relations[3].strict);

  const OrderingReport swapped =
      ordering_report({1, -6}, {1, -8.0 / 3}, kNorm);
  CHECK(swapped.all_hold);
  CHECK(swapped.swapped);
  CHECK(swapped.relations[0].lhs == "Z_X");
  CHECK(swapped.relations[0].lhs_value == doctest::Approx(0.6));
}

TEST_CASE("payoff ordering collapses on a shared value line") {
  const double xi = -1.0 / 0.41;
  const OrderingReport rep =
      ordering_report({0.3, xi - 0.3}, {-0.2, xi + 0.2}, kNorm);
  CHECK(rep.all_hold);
  REQUIRE(rep.relations.size() == 3);
  for (const auto& rel : rep.relations) {
    CHECK_FALSE(rel.strict);
    CHECK(rel.lhs_value == doctest::Approx(0.41).epsilon(1e-9));
  }
}

TEST_CASE("ordering chains hold across random strip pairs") {
  Xoshiro256StarStar rng(44);
  for (int k = 0; k < 2000; ++k) {
    const PayoffParams np = normalize(ipdtest::random_params(rng));
    const OrderingReport rep =
        ordering_report(ipdtest::random_strip_point(rng, np),
                        ipdtest::random_strip_point(rng, np), np);
    CHECK(rep.all_hold);
  }
}
