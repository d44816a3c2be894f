#include "ipdlab/markov.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "ipdlab/rng.hpp"

namespace ipdlab {

namespace {

// Stationary distribution restricted to one closed class: solve
// (M|_set^T - I) x = 0 with the last equation replaced by sum(x) = 1.
OutcomeDistribution stationary_on(const MarkovMatrix& m,
                                  const std::vector<int>& set) {
  const int k = static_cast<int>(set.size());
  Eigen::MatrixXd a(k, k);
  for (int col = 0; col < k; ++col)
    for (int row = 0; row < k; ++row)
      a(row, col) = m.row(set[col])[set[row]] - (row == col ? 1.0 : 0.0);
  a.row(k - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
  b(k - 1) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible())
    throw NumericError("stationary solve is singular on a terminal set");
  Eigen::VectorXd x = lu.solve(b);
  Vec4 v{0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < k; ++i) v[set[i]] = x(i);
  return OutcomeDistribution::checked(v);
}

}  // namespace

TerminalSetAnalysis terminal_sets(const MarkovMatrix& m) {
  // Mutual-reachability closure; four nodes, so the n^3 closure is exact
  // and cheap. Edges on exact positivity.
  bool reach[4][4] = {};
  for (int i = 0; i < 4; ++i) {
    reach[i][i] = true;
    for (int j = 0; j < 4; ++j)
      if (m.row(i)[j] > 0.0) reach[i][j] = true;
  }
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;

  TerminalSetAnalysis out;
  bool assigned[4] = {};
  for (int i = 0; i < 4; ++i) {
    if (assigned[i]) continue;
    std::vector<int> comp;
    for (int j = 0; j < 4; ++j)
      if (reach[i][j] && reach[j][i]) comp.push_back(j);
    for (int j : comp) assigned[j] = true;
    bool closed = true;
    for (int u : comp)
      for (int w = 0; w < 4; ++w)
        if (m.row(u)[w] > 0.0 &&
            std::find(comp.begin(), comp.end(), w) == comp.end())
          closed = false;
    if (closed)
      out.terminal_sets.push_back(comp);
    else
      for (int u : comp) out.transient_states.push_back(u);
  }
  std::sort(out.transient_states.begin(), out.transient_states.end());
  std::sort(out.terminal_sets.begin(), out.terminal_sets.end());
  for (const auto& set : out.terminal_sets)
    out.stationary.push_back(stationary_on(m, set));
  out.convergent = out.terminal_sets.size() == 1;
  return out;
}

OutcomeDistribution limit_distribution(const MarkovMatrix& m,
                                       const OutcomeDistribution& v1) {
  const TerminalSetAnalysis an = terminal_sets(m);
  const auto& trans = an.transient_states;
  const size_t nsets = an.terminal_sets.size();

  std::vector<double> weight(nsets, 0.0);
  for (size_t s = 0; s < nsets; ++s)
    for (int i : an.terminal_sets[s]) weight[s] += v1.v[i];

  if (!trans.empty()) {
    const int k = static_cast<int>(trans.size());
    Eigen::MatrixXd iq(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        iq(i, j) = (i == j ? 1.0 : 0.0) - m.row(trans[i])[trans[j]];
    Eigen::FullPivLU<Eigen::MatrixXd> lu(iq);
    if (!lu.isInvertible())
      throw NumericError("absorption solve is singular");
    for (size_t s = 0; s < nsets; ++s) {
      Eigen::VectorXd r = Eigen::VectorXd::Zero(k);
      for (int i = 0; i < k; ++i)
        for (int j : an.terminal_sets[s]) r(i) += m.row(trans[i])[j];
      Eigen::VectorXd absorb = lu.solve(r);
      for (int i = 0; i < k; ++i) weight[s] += v1.v[trans[i]] * absorb(i);
    }
  }

  Vec4 v{0.0, 0.0, 0.0, 0.0};
  for (size_t s = 0; s < nsets; ++s)
    for (int i = 0; i < 4; ++i) v[i] += weight[s] * an.stationary[s].v[i];
  return OutcomeDistribution::checked(v);
}

HittingTimes hitting_times(const MarkovMatrix& m) {
  const TerminalSetAnalysis an = terminal_sets(m);
  if (!(an.convergent && an.terminal_sets[0] == std::vector<int>{kCC}))
    throw ConstraintError(
        "hitting times need mutual cooperation as the unique terminal set");
  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      a(i, j) = m.row(i + 1)[j + 1] - (i == j ? 1.0 : 0.0);
  Eigen::Vector3d rhs(-1.0, -1.0, -1.0);
  Eigen::FullPivLU<Eigen::Matrix3d> lu(a);
  if (!lu.isInvertible()) throw NumericError("hitting-time solve is singular");
  Eigen::Vector3d t = lu.solve(rhs);
  return HittingTimes{t(0), t(1), t(2)};
}

Rollout exact_rollout(const MarkovMatrix& m, const OutcomeDistribution& v1,
                      int n) {
  if (n < 1) throw ConstraintError("rollout length must be positive");
  Rollout out;
  out.averages.reserve(static_cast<size_t>(n));
  Vec4 v = v1.v;
  Vec4 acc{0.0, 0.0, 0.0, 0.0};
  for (int k = 1; k <= n; ++k) {
    for (int i = 0; i < 4; ++i) acc[i] += v[i];
    Vec4 avg;
    double mass = 0.0;
    for (int i = 0; i < 4; ++i) mass += (avg[i] = acc[i] / k);
    for (int i = 0; i < 4; ++i) avg[i] /= mass;
    out.averages.push_back(OutcomeDistribution::checked(avg));
    if (k == n) break;
    Vec4 next{0.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) next[j] += v[i] * m.row(i)[j];
    // The exact iterate keeps unit mass; dividing out the rounding drift
    // stops it compounding over long rollouts.
    double sum = 0.0;
    for (double x : next) sum += x;
    for (int i = 0; i < 4; ++i) v[i] = next[i] / sum;
  }
  out.final_step = OutcomeDistribution::checked(v);
  return out;
}

Rollout mc_rollout(const StrategyVector& p, const StrategyVector& q,
                   const OutcomeDistribution& v1, int n, uint64_t seed) {
  if (n < 1) throw ConstraintError("rollout length must be positive");
  Xoshiro256StarStar rng(seed);
  const Vec4 yr{q.p[0], q.p[2], q.p[1], q.p[3]};

  int state = 3;
  {
    const double u = rng.uniform01();
    double cdf = 0.0;
    for (int i = 0; i < 4; ++i) {
      cdf += v1.v[i];
      if (u < cdf) {
        state = i;
        break;
      }
    }
  }

  Rollout out;
  out.averages.reserve(static_cast<size_t>(n));
  long counts[4] = {0, 0, 0, 0};
  for (int k = 1; k <= n; ++k) {
    ++counts[state];
    Vec4 avg;
    for (int i = 0; i < 4; ++i) avg[i] = static_cast<double>(counts[i]) / k;
    out.averages.push_back(OutcomeDistribution::checked(avg));
    const bool x_coop = rng.uniform01() < p.p[state];
    const bool y_coop = rng.uniform01() < yr[state];
    state = (x_coop ? 0 : 2) + (y_coop ? 0 : 1);
  }
  out.final_step = out.averages.back();
  return out;
}

double press_dyson_residual(const OutcomeDistribution& v, const Vec4& w) {
  double dot = 0.0;
  for (int i = 0; i < 4; ++i) dot += v.v[i] * w[i];
  return dot;
}

}  // namespace ipdlab
