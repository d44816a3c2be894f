#pragma once

#include <cstdint>
#include <vector>

#include "ipdlab/game.hpp"

namespace ipdlab {

// Terminal sets (closed communicating classes) of the chain, each with its
// stationary distribution. The chain is convergent exactly when there is a
// single terminal set; then every limit distribution equals its stationary
// distribution regardless of the initial state.
struct TerminalSetAnalysis {
  std::vector<std::vector<int>> terminal_sets;
  std::vector<int> transient_states;
  std::vector<OutcomeDistribution> stationary;
  bool convergent = false;
};

// Edges are taken on exact positivity of the transition probability.
TerminalSetAnalysis terminal_sets(const MarkovMatrix& m);

// Long-run average outcome distribution started from v1: the mixture of
// terminal-set stationary distributions weighted by absorption
// probabilities (fundamental-matrix solve over the transient states).
OutcomeDistribution limit_distribution(const MarkovMatrix& m,
                                       const OutcomeDistribution& v1);

// Expected times to reach mutual cooperation from each other outcome.
// Defined only when {cc} is the unique terminal set.
struct HittingTimes {
  double from_cd = 0.0;
  double from_dc = 0.0;
  double from_dd = 0.0;
};

HittingTimes hitting_times(const MarkovMatrix& m);

// Rollout of n rounds. `averages[k]` is the average outcome distribution
// over rounds 1..k+1 (for Monte Carlo, the empirical frequencies);
// `final_step` is the round-n distribution itself (for Monte Carlo, equal
// to the final frequencies).
struct Rollout {
  std::vector<OutcomeDistribution> averages;
  OutcomeDistribution final_step;
};

Rollout exact_rollout(const MarkovMatrix& m, const OutcomeDistribution& v1,
                      int n);

// Samples a single play path with the pinned xoshiro256** generator. The
// initial outcome is drawn from v1.
Rollout mc_rollout(const StrategyVector& p, const StrategyVector& q,
                   const OutcomeDistribution& v1, int n, uint64_t seed);

// <v, w> for a strategy's play-difference vector w; zero for every limit
// distribution of the pair's chain.
double press_dyson_residual(const OutcomeDistribution& v, const Vec4& w);

}  // namespace ipdlab
