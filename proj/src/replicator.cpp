#include "ipdlab/replicator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "ipdlab/errors.hpp"
#include "ipdlab/markov.hpp"

namespace ipdlab {

namespace {

constexpr double kDegenerateTol = 1e-12;

// The flow is unchanged by adding a function of the column to every entry,
// so it vanishes identically exactly when all rows of A coincide.
bool rows_identical(const SquareMatrix& a) {
  for (int i = 1; i < a.n; ++i) {
    for (int j = 0; j < a.n; ++j) {
      if (std::abs(a.at(i, j) - a.at(0, j)) > kDegenerateTol) return false;
    }
  }
  return true;
}

std::vector<double> checked_simplex_point(const std::vector<double>& pi,
                                          int n) {
  if (static_cast<int>(pi.size()) != n) {
    throw ConstraintError("population state has wrong dimension");
  }
  std::vector<double> out(pi);
  double sum = 0.0;
  for (double& w : out) {
    if (w < 0.0) {
      if (w < -kProbSlack) {
        throw ConstraintError("population weights must be nonnegative");
      }
      w = 0.0;
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9 || sum <= 0.0) {
    throw ConstraintError("population weights must sum to 1");
  }
  for (double& w : out) w /= sum;
  return out;
}

void validate_options(const IntegrateOptions& opts) {
  if (!(opts.dt > 0.0)) throw ConstraintError("integration step must be positive");
  if (!(opts.t_max >= 0.0)) throw ConstraintError("integration horizon must be nonnegative");
  if (opts.stride < 1) throw ConstraintError("record stride must be at least 1");
}

double mean_payoff_at(const std::vector<double>& pi, const SquareMatrix& a) {
  double mean = 0.0;
  for (int i = 0; i < a.n; ++i) {
    if (pi[i] == 0.0) continue;
    double row = 0.0;
    for (int j = 0; j < a.n; ++j) row += a.at(i, j) * pi[j];
    mean += pi[i] * row;
  }
  return mean;
}

// Shared fixed-step fourth-order Runge-Kutta driver. `field` must map zero
// components to exactly zero so that faces of the simplex stay invariant.
template <typename Field, typename Record>
Trajectory run_integrator(std::vector<double> pi,
                          const IntegrateOptions& opts, Field field,
                          Record record) {
  Trajectory traj;
  const int n = static_cast<int>(pi.size());
  const long n_steps = std::max<long>(std::llround(opts.t_max / opts.dt), 0);

  record(traj, 0.0, pi);

  std::vector<double> k1(n), k2(n), k3(n), k4(n), stage(n);
  for (long step = 1; step <= n_steps; ++step) {
    field(pi, k1);
    for (int i = 0; i < n; ++i) stage[i] = pi[i] + 0.5 * opts.dt * k1[i];
    field(stage, k2);
    for (int i = 0; i < n; ++i) stage[i] = pi[i] + 0.5 * opts.dt * k2[i];
    field(stage, k3);
    for (int i = 0; i < n; ++i) stage[i] = pi[i] + opts.dt * k3[i];
    field(stage, k4);
    for (int i = 0; i < n; ++i) {
      pi[i] += opts.dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    double sum = 0.0;
    for (double& w : pi) {
      if (w < 0.0) {
        if (w < -1e-9) {
          throw NumericError("integration left the simplex; reduce the step size");
        }
        w = 0.0;
      }
      sum += w;
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) {
      throw NumericError("integration produced a non-finite population state");
    }
    for (double& w : pi) w /= sum;

    field(pi, k1);
    double fmax = 0.0;
    for (int i = 0; i < n; ++i) fmax = std::max(fmax, std::abs(k1[i]));
    const bool done = fmax < opts.convergence_tol;
    if (step % opts.stride == 0 || step == n_steps || done) {
      record(traj, static_cast<double>(step) * opts.dt, pi);
    }
    if (done) {
      traj.converged = true;
      break;
    }
  }
  return traj;
}

}  // namespace

int Roster::index_of(const std::string& name) const {
  for (size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

PayoffMatrixResult payoff_matrix(const Roster& roster, int threads) {
  const int n = static_cast<int>(roster.size());
  if (n == 0) throw ConstraintError("roster is empty");
  const PayoffParams params = normalize(roster.params);

  PayoffMatrixResult result{SquareMatrix(n),
                            std::vector<uint8_t>(static_cast<size_t>(n) * n, 0)};

  const int n_cells = n * n;
  int workers = threads > 0 ? threads
                            : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, n_cells);

  auto compute_range = [&](int first, int stride) {
    for (int c = first; c < n_cells; c += stride) {
      const int i = c / n;
      const int j = c % n;
      const RosterEntry& row = roster.entries[static_cast<size_t>(i)];
      const RosterEntry& col = roster.entries[static_cast<size_t>(j)];
      const MarkovMatrix m = build_markov(row.strategy, col.strategy);
      const TerminalSetAnalysis analysis = terminal_sets(m);
      const OutcomeDistribution v1 =
          initial_distribution(row.strategy.init_coop, col.strategy.init_coop);
      const OutcomeDistribution v = limit_distribution(m, v1);
      result.a.at(i, j) = expected_payoffs(v, params).first;
      result.init_dependent[static_cast<size_t>(c)] =
          analysis.terminal_sets.size() > 1 ? 1 : 0;
    }
  };

  if (workers == 1) {
    compute_range(0, 1);
    return result;
  }

  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        compute_range(w, workers);
      } catch (...) {
        errors[static_cast<size_t>(w)] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return result;
}

SquareMatrix zds_payoff_matrix(const std::vector<ZdsPoint>& points,
                               const PayoffParams& params) {
  const int n = static_cast<int>(points.size());
  if (n == 0) throw ConstraintError("no strip points given");
  const PayoffParams np = normalize(params);
  SquareMatrix a(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        a.at(i, j) = points[static_cast<size_t>(i)].z();
      } else {
        a.at(i, j) = duel_payoffs(points[static_cast<size_t>(i)],
                                  points[static_cast<size_t>(j)], np)
                         .s_x;
      }
    }
  }
  return a;
}

std::vector<double> replicator_field(const std::vector<double>& pi,
                                     const SquareMatrix& a) {
  const int n = a.n;
  if (static_cast<int>(pi.size()) != n) {
    throw ConstraintError("population state has wrong dimension");
  }
  std::vector<double> row_payoff(static_cast<size_t>(n), 0.0);
  double mean = 0.0;
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += a.at(i, j) * pi[j];
    row_payoff[static_cast<size_t>(i)] = acc;
    mean += pi[i] * acc;
  }
  std::vector<double> field(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    field[static_cast<size_t>(i)] =
        pi[i] == 0.0 ? 0.0 : pi[i] * (row_payoff[static_cast<size_t>(i)] - mean);
  }
  return field;
}

ZeroSumSystem zero_sum_dynamics(const Roster& roster) {
  const int n = static_cast<int>(roster.size());
  if (n < 2) throw ConstraintError("zero-sum dynamics needs at least two strategies");

  std::vector<ZdsPoint> pts;
  pts.reserve(static_cast<size_t>(n));
  for (const RosterEntry& e : roster.entries) {
    if (!e.zds_point) {
      throw ConstraintError("zero-sum dynamics requires a strip point for every entry; missing for \"" +
                            e.name + "\"");
    }
    pts.push_back(*e.zds_point);
  }

  ZeroSumSystem sys{SquareMatrix(n), SquareMatrix(n), {}, false};
  sys.xi.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    sys.xi[static_cast<size_t>(i)] = pts[static_cast<size_t>(i)].x +
                                     pts[static_cast<size_t>(i)].y;
  }

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const ZdsPoint& pi_ = pts[static_cast<size_t>(i)];
      const ZdsPoint& pj = pts[static_cast<size_t>(j)];
      const double det = pi_.y * pj.y - pi_.x * pj.x;
      if (det <= kDegenerateTol) {
        const double dxi = sys.xi[static_cast<size_t>(j)] - sys.xi[static_cast<size_t>(i)];
        if (std::abs(dxi) > kDegenerateTol) {
          throw NumericError("degenerate strip pair with distinct value lines");
        }
        continue;
      }
      const double k = 1.0 / det;
      const double s = k * (sys.xi[static_cast<size_t>(j)] -
                            sys.xi[static_cast<size_t>(i)]);
      sys.k.at(i, j) = k;
      sys.k.at(j, i) = k;
      sys.s.at(i, j) = s;
      sys.s.at(j, i) = -s;
    }
  }

  const auto [lo, hi] = std::minmax_element(sys.xi.begin(), sys.xi.end());
  sys.frozen = (*hi - *lo) <= kDegenerateTol;
  return sys;
}

Trajectory integrate(const std::vector<double>& pi0, const SquareMatrix& a,
                     const IntegrateOptions& opts) {
  validate_options(opts);
  std::vector<double> pi = checked_simplex_point(pi0, a.n);

  auto record = [&a](Trajectory& traj, double t, const std::vector<double>& state) {
    traj.times.push_back(t);
    traj.states.push_back(state);
    traj.mean_payoff.push_back(mean_payoff_at(state, a));
  };

  if (rows_identical(a)) {
    Trajectory traj;
    record(traj, 0.0, pi);
    traj.frozen = true;
    traj.converged = true;
    return traj;
  }

  const int n = a.n;
  auto field = [&a, n](const std::vector<double>& state,
                       std::vector<double>& out) {
    double mean = 0.0;
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += a.at(i, j) * state[static_cast<size_t>(j)];
      out[static_cast<size_t>(i)] = acc;
      mean += state[static_cast<size_t>(i)] * acc;
    }
    for (int i = 0; i < n; ++i) {
      const double w = state[static_cast<size_t>(i)];
      out[static_cast<size_t>(i)] = w == 0.0 ? 0.0 : w * (out[static_cast<size_t>(i)] - mean);
    }
  };
  return run_integrator(std::move(pi), opts, field, record);
}

Trajectory integrate_zero_sum(const std::vector<double>& pi0,
                              const ZeroSumSystem& sys,
                              const IntegrateOptions& opts) {
  validate_options(opts);
  std::vector<double> pi = checked_simplex_point(pi0, sys.s.n);
  const int n = sys.s.n;

  auto record = [&sys, n](Trajectory& traj, double t,
                          const std::vector<double>& state) {
    traj.times.push_back(t);
    traj.states.push_back(state);
    double xi = 0.0;
    for (int i = 0; i < n; ++i) xi += state[static_cast<size_t>(i)] * sys.xi[static_cast<size_t>(i)];
    traj.xi_mean.push_back(xi);
  };

  if (sys.frozen) {
    Trajectory traj;
    record(traj, 0.0, pi);
    traj.frozen = true;
    traj.converged = true;
    return traj;
  }

  auto field = [&sys, n](const std::vector<double>& state,
                         std::vector<double>& out) {
    for (int i = 0; i < n; ++i) {
      if (state[static_cast<size_t>(i)] == 0.0) {
        out[static_cast<size_t>(i)] = 0.0;
        continue;
      }
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += sys.s.at(i, j) * state[static_cast<size_t>(j)];
      out[static_cast<size_t>(i)] = state[static_cast<size_t>(i)] * acc;
    }
  };
  return run_integrator(std::move(pi), opts, field, record);
}

StabilityReport detect_ess_eus(const SquareMatrix& a, int i) {
  if (a.n < 2) throw ConstraintError("stability analysis needs at least two strategies");
  if (i < 0 || i >= a.n) throw ConstraintError("strategy index out of range");

  StabilityReport report;
  double ess = std::numeric_limits<double>::infinity();
  double eus = std::numeric_limits<double>::infinity();
  for (int j = 0; j < a.n; ++j) {
    if (j == i) continue;
    const double gap = a.at(i, i) - a.at(j, i);
    ess = std::min(ess, gap);
    eus = std::min(eus, -gap);
  }
  report.ess_margin = ess;
  report.eus_margin = eus;
  if (ess > kStrictMargin) {
    report.status = StabilityClass::kEss;
  } else if (eus > kStrictMargin) {
    report.status = StabilityClass::kEus;
  }
  return report;
}

std::optional<DominationSequence> domination_analysis(const SquareMatrix& a,
                                                      int i) {
  if (a.n < 2) throw ConstraintError("domination analysis needs at least two strategies");
  if (i < 0 || i >= a.n) throw ConstraintError("strategy index out of range");

  std::vector<uint8_t> alive(static_cast<size_t>(a.n), 1);
  DominationSequence seq;
  int remaining = a.n - 1;

  while (remaining > 0) {
    int removed = -1;
    double m = 0.0;
    for (int j = 0; j < a.n && removed < 0; ++j) {
      if (j == i || !alive[static_cast<size_t>(j)]) continue;
      double gap = std::numeric_limits<double>::infinity();
      for (int k = 0; k < a.n; ++k) {
        if (!alive[static_cast<size_t>(k)]) continue;
        gap = std::min(gap, a.at(i, k) - a.at(j, k));
      }
      if (gap > kDegenerateTol) {
        removed = j;
        m = gap;
      }
    }
    if (removed < 0) return std::nullopt;

    double big_m = 0.0;
    for (int k = 0; k < a.n; ++k) {
      if (alive[static_cast<size_t>(k)]) continue;
      big_m = std::max(big_m, std::abs(a.at(i, k) - a.at(removed, k)));
    }
    seq.steps.push_back({removed, m, big_m, m / (m + big_m)});
    alive[static_cast<size_t>(removed)] = 0;
    --remaining;
  }
  return seq;
}

std::optional<InteriorEquilibrium> interior_equilibrium_2(
    const SquareMatrix& a) {
  if (a.n != 2) throw ConstraintError("interior equilibrium analysis is for two strategies");
  const double c1 = a.at(0, 0) - a.at(1, 0);
  const double c2 = a.at(1, 1) - a.at(0, 1);
  const bool both_pos = c1 > 0.0 && c2 > 0.0;
  const bool both_neg = c1 < 0.0 && c2 < 0.0;
  if (!both_pos && !both_neg) return std::nullopt;
  return InteriorEquilibrium{c2 / (c1 + c2), both_neg};
}

}  // namespace ipdlab
