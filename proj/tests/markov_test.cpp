#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "ipdlab/errors.hpp"
#include "ipdlab/markov.hpp"
#include "ipdlab/press_dyson.hpp"
#include "test_support.hpp"

using namespace ipdlab;
using ipdtest::fixture_params;

namespace {

StrategyVector fixture_complier() {
  return complier_top(1.0, normalize(fixture_params()));
}

// Independent stationary oracle: eigenvector of the transposed matrix for
// eigenvalue 1, via a dense eigensolver.
Vec4 eigen_stationary(const MarkovMatrix& m) {
  Eigen::Matrix4d t;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) t(j, i) = m.row(i)[j];
  }
  Eigen::EigenSolver<Eigen::Matrix4d> solver(t);
  int best = 0;
  for (int k = 1; k < 4; ++k) {
    if (std::abs(solver.eigenvalues()(k) - 1.0) <
        std::abs(solver.eigenvalues()(best) - 1.0)) {
      best = k;
    }
  }
  Eigen::Vector4cd vc = solver.eigenvectors().col(best);
  Vec4 v{};
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    v[i] = vc(i).real();
    sum += v[i];
  }
  for (int i = 0; i < 4; ++i) v[i] /= sum;
  return v;
}

}  // namespace

TEST_CASE("tit-for-tat against itself splits into three terminal sets") {
  const MarkovMatrix m = build_markov(tft(), tft());
  const TerminalSetAnalysis a = terminal_sets(m);
  REQUIRE(a.terminal_sets.size() == 3);
  CHECK(a.terminal_sets[0] == std::vector<int>{kCC});
  CHECK(a.terminal_sets[1] == std::vector<int>{kCD, kDC});
  CHECK(a.terminal_sets[2] == std::vector<int>{kDD});
  CHECK(a.transient_states.empty());
  CHECK_FALSE(a.convergent);

  // The two-state class alternates, yet its stationary split is exact.
  CHECK(ipdtest::max_abs_diff(a.stationary[1].v, {0, 0.5, 0.5, 0}) < 1e-14);
}

TEST_CASE("defector against complier absorbs into the cd/dd class") {
  const MarkovMatrix m = build_markov(fixture_complier(), all_d());
  const TerminalSetAnalysis a = terminal_sets(m);
  REQUIRE(a.terminal_sets.size() == 1);
  CHECK(a.terminal_sets[0] == std::vector<int>{kCD, kDD});
  CHECK(a.convergent);
  CHECK(a.transient_states == std::vector<int>{kCC, kDC});
  CHECK(ipdtest::max_abs_diff(a.stationary[0].v, {0, 2.0 / 7, 0, 5.0 / 7}) <
        1e-12);
}

TEST_CASE("positive chains are convergent with a full terminal set") {
  Xoshiro256StarStar rng(11);
  for (int k = 0; k < 200; ++k) {
    const MarkovMatrix m = build_markov(ipdtest::random_interior_strategy(rng),
                                        ipdtest::random_interior_strategy(rng));
    const TerminalSetAnalysis a = terminal_sets(m);
    REQUIRE(a.convergent);
    CHECK(a.terminal_sets[0] == std::vector<int>{kCC, kCD, kDC, kDD});
  }
}

TEST_CASE("stationary distributions match a dense eigensolver") {
  Xoshiro256StarStar rng(12);
  for (int k = 0; k < 300; ++k) {
    const MarkovMatrix m = build_markov(ipdtest::random_interior_strategy(rng),
                                        ipdtest::random_interior_strategy(rng));
    const TerminalSetAnalysis a = terminal_sets(m);
    REQUIRE(a.convergent);
    CHECK(ipdtest::max_abs_diff(a.stationary[0].v, eigen_stationary(m)) < 1e-10);
  }
}

TEST_CASE("limit distribution mixes terminal classes by absorption mass") {
  const MarkovMatrix m = build_markov(grim(), grim());
  const OutcomeDistribution v =
      limit_distribution(m, initial_distribution(0.5, 0.5));
  CHECK(ipdtest::max_abs_diff(v.v, {0.25, 0, 0, 0.75}) < 1e-12);

  const OutcomeDistribution from_cc =
      limit_distribution(m, initial_distribution(1, 1));
  CHECK(ipdtest::max_abs_diff(from_cc.v, {1, 0, 0, 0}) < 1e-14);
}

TEST_CASE("limit distribution agrees with long iteration") {
  Xoshiro256StarStar rng(13);
  for (int k = 0; k < 200; ++k) {
    const StrategyVector p = ipdtest::random_interior_strategy(rng);
    const StrategyVector q = ipdtest::random_interior_strategy(rng);
    const MarkovMatrix m = build_markov(p, q);
    const OutcomeDistribution v1 =
        initial_distribution(p.init_coop, q.init_coop);
    const OutcomeDistribution v = limit_distribution(m, v1);
    const Vec4 oracle = ipdtest::iterated_limit(m, v1.v, 2000, 1024);
    CHECK(ipdtest::max_abs_diff(v.v, oracle) < 1e-8);
  }
}

TEST_CASE("limit distribution handles chains with transient starts") {
  // Lame against a defector: cd and dd are separate absorbing states, so
  // the limit depends on the initial split.
  const MarkovMatrix m = build_markov(lame(), all_d());
  const OutcomeDistribution from_c =
      limit_distribution(m, initial_distribution(1, 0));
  CHECK(ipdtest::max_abs_diff(from_c.v, {0, 1, 0, 0}) < 1e-14);
  const OutcomeDistribution from_d =
      limit_distribution(m, initial_distribution(0, 0));
  CHECK(ipdtest::max_abs_diff(from_d.v, {0, 0, 0, 1}) < 1e-14);
}

TEST_CASE("hitting times for the complier pair") {
  const MarkovMatrix m = build_markov(fixture_complier(), fixture_complier());
  const HittingTimes t = hitting_times(m);
  CHECK(t.from_cd == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(t.from_dc == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(t.from_dd == doctest::Approx(6.6).epsilon(1e-12));
}

TEST_CASE("hitting times require unique absorption at mutual cooperation") {
  CHECK_THROWS_AS(hitting_times(build_markov(tft(), tft())), ConstraintError);
  CHECK_THROWS_AS(hitting_times(build_markov(all_d(), all_d())),
                  ConstraintError);
}

TEST_CASE("hitting times match simulated first-passage averages") {
  const MarkovMatrix m = build_markov(fixture_complier(), fixture_complier());
  const HittingTimes t = hitting_times(m);

  Xoshiro256StarStar rng(2718);
  auto simulate = [&](int start) {
    const int trials = 200000;
    double total = 0.0;
    for (int k = 0; k < trials; ++k) {
      int state = start;
      int steps = 0;
      while (state != kCC) {
        const double u = rng.uniform01();
        double acc = 0.0;
        int next = 3;
        for (int j = 0; j < 4; ++j) {
          acc += m.row(state)[j];
          if (u < acc) {
            next = j;
            break;
          }
        }
        state = next;
        ++steps;
      }
      total += steps;
    }
    return total / trials;
  };

  // Standard error is about 0.013 at this trial count; 5 sigma bands.
  CHECK(std::abs(simulate(kCD) - t.from_cd) < 0.07);
  CHECK(std::abs(simulate(kDD) - t.from_dd) < 0.08);
}

TEST_CASE("exact rollout alternates for tit-for-tat after a sucker start") {
  const MarkovMatrix m = build_markov(tft(), tft());
  const Rollout r = exact_rollout(m, OutcomeDistribution::checked({0, 1, 0, 0}), 2);
  CHECK(ipdtest::max_abs_diff(r.averages.back().v, {0, 0.5, 0.5, 0}) < 1e-15);
  CHECK(ipdtest::max_abs_diff(r.final_step.v, {0, 0, 1, 0}) < 1e-15);

  const Rollout one =
      exact_rollout(m, OutcomeDistribution::checked({0, 1, 0, 0}), 1);
  CHECK(ipdtest::max_abs_diff(one.averages.back().v, {0, 1, 0, 0}) < 1e-15);
}

TEST_CASE("complier pair rollout approaches mutual cooperation") {
  const MarkovMatrix m = build_markov(fixture_complier(), fixture_complier());
  const Rollout r = exact_rollout(
      m, OutcomeDistribution::checked({0, 0, 0, 1}), 10000);
  const OutcomeDistribution cc = OutcomeDistribution::checked({1, 0, 0, 0});
  CHECK(r.final_step.l1_distance(cc) < 1e-6);
}

TEST_CASE("monte carlo rollout tracks the exact distribution") {
  const StrategyVector p = StrategyVector::checked(0.9, 0.3, 0.6, 0.2, 0.7);
  const StrategyVector q = StrategyVector::checked(0.8, 0.4, 0.1, 0.5, 0.3);
  const MarkovMatrix m = build_markov(p, q);
  const OutcomeDistribution v1 = initial_distribution(p.init_coop, q.init_coop);

  const int n = 1000000;
  const Rollout exact = exact_rollout(m, v1, n);
  const Rollout mc = mc_rollout(p, q, v1, n, 42);
  // Empirical frequencies fluctuate at the 1/sqrt(n) scale.
  CHECK(ipdtest::max_abs_diff(exact.averages.back().v, mc.averages.back().v) <
        5e-3);

  const Rollout again = mc_rollout(p, q, v1, n, 42);
  CHECK(again.final_step.v == mc.final_step.v);
}

TEST_CASE("play-difference residual vanishes on limit distributions") {
  Xoshiro256StarStar rng(14);
  for (int k = 0; k < 500; ++k) {
    const StrategyVector p = ipdtest::random_strategy(rng);
    const StrategyVector q = ipdtest::random_strategy(rng);
    const MarkovMatrix m = build_markov(p, q);
    const OutcomeDistribution v =
        limit_distribution(m, initial_distribution(p.init_coop, q.init_coop));
    CHECK(std::abs(press_dyson_residual(v, x_press_dyson(p))) < 1e-9);
    CHECK(std::abs(press_dyson_residual(v, y_press_dyson(q))) < 1e-9);
  }
}
