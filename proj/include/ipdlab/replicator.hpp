#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ipdlab/duel.hpp"
#include "ipdlab/game.hpp"
#include "ipdlab/press_dyson.hpp"

namespace ipdlab {

struct RosterEntry {
  std::string name;
  StrategyVector strategy;
  std::optional<ZdsPoint> zds_point;
};

struct Roster {
  PayoffParams params;  // as given, possibly unnormalized
  std::vector<RosterEntry> entries;

  size_t size() const { return entries.size(); }
  int index_of(const std::string& name) const;  // -1 when absent
};

struct SquareMatrix {
  int n = 0;
  std::vector<double> a;

  explicit SquareMatrix(int n = 0) : n(n), a(static_cast<size_t>(n) * n, 0.0) {}
  double& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  double at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

// Fitness matrix: entry (i,j) is i's long-run payoff against j, from the
// pair's Markov chain started at the entries' initial plays. A cell is
// marked initial-play dependent when its chain has several terminal sets.
// Cells fan out over at most `threads` workers (0 = hardware default).
struct PayoffMatrixResult {
  SquareMatrix a;
  std::vector<uint8_t> init_dependent;  // row-major bools

  bool cell_init_dependent(int i, int j) const {
    return init_dependent[static_cast<size_t>(i) * a.n + j] != 0;
  }
};

PayoffMatrixResult payoff_matrix(const Roster& roster, int threads = 0);

// Closed-form fitness matrix for strip points (diagonal Z_i, off-diagonal
// from the duel solve).
SquareMatrix zds_payoff_matrix(const std::vector<ZdsPoint>& points,
                               const PayoffParams& params);

// dpi_i/dt = pi_i (A_i.pi - A_pi.pi); components at exactly zero stay zero.
std::vector<double> replicator_field(const std::vector<double>& pi,
                                     const SquareMatrix& a);

enum class FlowMode { kStandard, kZeroSum };

// Antisymmetric interaction matrix and value-line levels for an all-ZDS
// roster; the population mean of xi never increases along the flow.
struct ZeroSumSystem {
  SquareMatrix s;
  SquareMatrix k;             // symmetric positive weights
  std::vector<double> xi;     // -1/Z per strategy
  bool frozen = false;        // all on one value line: the field vanishes
};

ZeroSumSystem zero_sum_dynamics(const Roster& roster);

// Fixed-step fourth-order Runge-Kutta on the simplex with per-step
// renormalization. Stops early once max|dpi/dt| < convergence_tol.
struct IntegrateOptions {
  double dt = 0.01;
  double t_max = 500.0;
  double convergence_tol = 1e-10;
  int stride = 1;  // record every stride-th step
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<double> mean_payoff;      // A_pi.pi (standard mode)
  std::vector<double> xi_mean;          // zero-sum mode only
  bool converged = false;
  bool frozen = false;
};

Trajectory integrate(const std::vector<double>& pi0, const SquareMatrix& a,
                     const IntegrateOptions& opts);

Trajectory integrate_zero_sum(const std::vector<double>& pi0,
                              const ZeroSumSystem& sys,
                              const IntegrateOptions& opts);

enum class StabilityClass { kEss, kEus, kNeither };

// ESS: every other strategy scores strictly less against i than i does
// against itself; EUS is the mirror. margin is the worst-case gap.
struct StabilityReport {
  StabilityClass status = StabilityClass::kNeither;
  double ess_margin = 0.0;  // min over j != i of A_ii - A_ji
  double eus_margin = 0.0;  // min over j != i of A_ji - A_ii
};

StabilityReport detect_ess_eus(const SquareMatrix& a, int i);

// One removal step of a domination sequence: i beats `removed` everywhere
// on the surviving set by margin at least m; M is the largest gap outside
// it, and any invasion barrier below m/(m+M) suffices for the step.
struct DominationStep {
  int removed = -1;
  double m = 0.0;
  double big_m = 0.0;
  double eps_bound = 0.0;
};

struct DominationSequence {
  std::vector<DominationStep> steps;
};

// Greedy search scanning candidates in index order; removing a dominated
// strategy only relaxes later checks, so the greedy finds a sequence
// whenever one exists.
std::optional<DominationSequence> domination_analysis(const SquareMatrix& a,
                                                      int i);

// Interior rest point of the two-strategy reduction
// dw/dt = w(1-w)[(A11-A21)w + (A12-A22)(1-w)]; stable when the bracket's
// slope at the root is negative.
struct InteriorEquilibrium {
  double w_star = 0.0;
  bool stable = false;
};

std::optional<InteriorEquilibrium> interior_equilibrium_2(
    const SquareMatrix& a);

}  // namespace ipdlab
