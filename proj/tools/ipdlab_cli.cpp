#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ipdlab/classifier.hpp"
#include "ipdlab/duel.hpp"
#include "ipdlab/errors.hpp"
#include "ipdlab/game.hpp"
#include "ipdlab/markov.hpp"
#include "ipdlab/press_dyson.hpp"
#include "ipdlab/replicator.hpp"
#include "ipdlab/roster_io.hpp"

namespace {

using ipdlab::ClassificationReport;
using ipdlab::OutcomeDistribution;
using ipdlab::PayoffParams;
using ipdlab::Roster;
using ipdlab::StrategyVector;
using ipdlab::Vec4;
using nlohmann::json;

json vec4_json(const Vec4& v) { return json{v[0], v[1], v[2], v[3]}; }

json params_json(const PayoffParams& p) {
  return json{{"T", p.t}, {"R", p.r}, {"P", p.p}, {"S", p.s}};
}

json strategy_json(const StrategyVector& s) {
  return json{{"p", vec4_json(s.p)}, {"init_coop", s.init_coop}};
}

json coords_json(const ipdlab::PressDysonCoords& c) {
  return json{{"alpha", c.alpha},
              {"beta", c.beta},
              {"gamma", c.gamma},
              {"delta", c.delta}};
}

json report_json(const ClassificationReport& r) {
  return json{{"agreeable", r.agreeable},
              {"firm", r.firm},
              {"generous", r.generous},
              {"repeat", r.is_repeat},
              {"exceptional", r.exceptional},
              {"nash_type", r.nash_type},
              {"good", r.good},
              {"strictly_firm", r.strictly_firm},
              {"zds", r.zds},
              {"equalizer", r.equalizer},
              {"complier", r.complier},
              {"extortion", r.extortion},
              {"vertex", r.vertex},
              {"margins",
               {{"nash_1", r.margins.nash_1},
                {"nash_2", r.margins.nash_2},
                {"firm_1", r.margins.firm_1},
                {"firm_2", r.margins.firm_2}}},
              {"coords", coords_json(r.coords)}};
}

json bar_json_or_null(const StrategyVector& s, const PayoffParams& np) {
  try {
    const ipdlab::BarCoords bc =
        ipdlab::bar_coords(ipdlab::decompose(ipdlab::x_press_dyson(s), np), np);
    return json{{"alpha_bar", bc.alpha_bar},
                {"beta_bar", bc.beta_bar},
                {"delta_bar", bc.delta_bar},
                {"z", bc.z},
                {"within_constraints", bc.within_constraints}};
  } catch (const ipdlab::ConstraintError&) {
    return json(nullptr);
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ipdlab::ConstraintError("cannot open output file: " + path);
  return out;
}

int resolve_threads(int flag_threads) {
  int threads = flag_threads;
  if (const char* env = std::getenv("IPD_LAB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) threads = threads > 0 ? std::min(threads, cap) : cap;
  }
  return threads;
}

std::vector<double> parse_number_list(const std::string& text,
                                      const std::string& label) {
  std::vector<double> out;
  size_t start = 0;
  while (start <= text.size()) {
    const size_t comma = text.find(',', start);
    const std::string piece =
        text.substr(start, comma == std::string::npos ? comma : comma - start);
    try {
      size_t used = 0;
      out.push_back(std::stod(piece, &used));
      if (used != piece.size()) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      throw ipdlab::ConstraintError("cannot parse number \"" + piece + "\" in " +
                                    label);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

const ipdlab::RosterEntry& entry_by_name(const Roster& roster,
                                         const std::string& name) {
  const int idx = roster.index_of(name);
  if (idx < 0) {
    throw ipdlab::ConstraintError("no strategy named \"" + name + "\" in the roster");
  }
  return roster.entries[static_cast<size_t>(idx)];
}

json outcome_names(const std::vector<int>& states) {
  json arr = json::array();
  for (int s : states) arr.push_back(ipdlab::kOutcomeNames[s]);
  return arr;
}

void cmd_classify(const std::string& roster_path,
                  const std::string& strategy_name) {
  const Roster roster = ipdlab::load_roster(roster_path);
  const PayoffParams np = ipdlab::normalize(roster.params);
  if (!strategy_name.empty()) entry_by_name(roster, strategy_name);

  for (const ipdlab::RosterEntry& e : roster.entries) {
    if (!strategy_name.empty() && e.name != strategy_name) continue;
    const ClassificationReport from_p = ipdlab::classify(e.strategy, np);
    const ClassificationReport from_c = ipdlab::classify_coords(
        ipdlab::decompose(ipdlab::x_press_dyson(e.strategy), np), np);
    json line{{"name", e.name},
              {"strategy", strategy_json(e.strategy)},
              {"from_strategy", report_json(from_p)},
              {"from_coords", report_json(from_c)},
              {"bar", bar_json_or_null(e.strategy, np)}};
    std::cout << line.dump() << "\n";
  }
}

void cmd_duel(const std::string& roster_path, const std::string& x_name,
              const std::string& y_name, std::optional<double> init_x,
              std::optional<double> init_y, int rollout_n, uint64_t seed) {
  const Roster roster = ipdlab::load_roster(roster_path);
  const PayoffParams np = ipdlab::normalize(roster.params);

  StrategyVector x = entry_by_name(roster, x_name).strategy;
  StrategyVector y = entry_by_name(roster, y_name).strategy;
  if (init_x) x = StrategyVector::checked(x.p, *init_x);
  if (init_y) y = StrategyVector::checked(y.p, *init_y);

  const ipdlab::MarkovMatrix m = ipdlab::build_markov(x, y);
  const ipdlab::TerminalSetAnalysis analysis = ipdlab::terminal_sets(m);
  const OutcomeDistribution v1 =
      ipdlab::initial_distribution(x.init_coop, y.init_coop);
  const OutcomeDistribution v = ipdlab::limit_distribution(m, v1);
  const auto [sx_raw, sy_raw] = ipdlab::expected_payoffs(v, roster.params);
  const auto [sx, sy] = ipdlab::expected_payoffs(v, np);

  json terminal = json::array();
  for (size_t k = 0; k < analysis.terminal_sets.size(); ++k) {
    terminal.push_back(json{{"states", outcome_names(analysis.terminal_sets[k])},
                            {"stationary", vec4_json(analysis.stationary[k].v)}});
  }

  json matrix = json::array();
  for (int i = 0; i < 4; ++i) matrix.push_back(vec4_json(m.row(i)));

  json hitting(nullptr);
  if (analysis.convergent && analysis.terminal_sets.size() == 1 &&
      analysis.terminal_sets[0] == std::vector<int>{ipdlab::kCC}) {
    const ipdlab::HittingTimes ht = ipdlab::hitting_times(m);
    hitting = json{{"from_cd", ht.from_cd},
                   {"from_dc", ht.from_dc},
                   {"from_dd", ht.from_dd}};
  }

  json rollout(nullptr);
  if (rollout_n > 0) {
    const ipdlab::Rollout exact = ipdlab::exact_rollout(m, v1, rollout_n);
    const ipdlab::Rollout mc = ipdlab::mc_rollout(x, y, v1, rollout_n, seed);
    rollout = json{{"n", rollout_n},
                   {"seed", seed},
                   {"exact_average", vec4_json(exact.averages.back().v)},
                   {"exact_final", vec4_json(exact.final_step.v)},
                   {"mc_average", vec4_json(mc.averages.back().v)},
                   {"mc_final", vec4_json(mc.final_step.v)}};
  }

  json out{{"x", json{{"name", x_name}, {"strategy", strategy_json(x)}}},
           {"y", json{{"name", y_name}, {"strategy", strategy_json(y)}}},
           {"payoffs", params_json(roster.params)},
           {"payoffs_normalized", params_json(np)},
           {"transition_matrix", matrix},
           {"terminal_sets", terminal},
           {"transient_states", outcome_names(analysis.transient_states)},
           {"convergent", analysis.convergent},
           {"initial_distribution", vec4_json(v1.v)},
           {"limit_distribution", vec4_json(v.v)},
           {"s_x", sx_raw},
           {"s_y", sy_raw},
           {"s_x_normalized", sx},
           {"s_y_normalized", sy},
           {"press_dyson_residuals",
            json{{"x", ipdlab::press_dyson_residual(v, ipdlab::x_press_dyson(x))},
                 {"y", ipdlab::press_dyson_residual(v, ipdlab::y_press_dyson(y))}}},
           {"hitting_times", hitting},
           {"rollout", rollout}};
  std::cout << out.dump(2) << "\n";
}

void cmd_matrix(const std::string& roster_path, const std::string& out_path,
                int threads) {
  const Roster roster = ipdlab::load_roster(roster_path);
  const ipdlab::PayoffMatrixResult result =
      ipdlab::payoff_matrix(roster, resolve_threads(threads));
  const int n = result.a.n;

  std::ofstream out = open_output(out_path);
  out << "x,y,payoff,init_play_dependent\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out << csv_escape(roster.entries[static_cast<size_t>(i)].name) << ","
          << csv_escape(roster.entries[static_cast<size_t>(j)].name) << ","
          << ipdlab::format_number(result.a.at(i, j)) << ","
          << (result.cell_init_dependent(i, j) ? 1 : 0) << "\n";
    }
  }
  out.close();

  json names = json::array();
  for (const ipdlab::RosterEntry& e : roster.entries) names.push_back(e.name);
  json a = json::array();
  json dep = json::array();
  for (int i = 0; i < n; ++i) {
    json arow = json::array();
    json drow = json::array();
    for (int j = 0; j < n; ++j) {
      arow.push_back(result.a.at(i, j));
      drow.push_back(result.cell_init_dependent(i, j));
    }
    a.push_back(arow);
    dep.push_back(drow);
  }
  json summary{{"names", names}, {"a", a}, {"init_play_dependent", dep}};
  std::cout << summary.dump(2) << "\n";
}

std::string stability_name(ipdlab::StabilityClass s) {
  switch (s) {
    case ipdlab::StabilityClass::kEss:
      return "ess";
    case ipdlab::StabilityClass::kEus:
      return "eus";
    default:
      return "neither";
  }
}

void cmd_evolve(const std::string& roster_path, const std::string& out_path,
                const std::string& pi0_text, double dt, double t_max,
                const std::string& mode, int stride, int threads) {
  const Roster roster = ipdlab::load_roster(roster_path);
  const int n = static_cast<int>(roster.size());
  if (n < 2) throw ipdlab::ConstraintError("evolve needs at least two strategies");

  std::vector<double> pi0;
  if (pi0_text.empty()) {
    pi0.assign(static_cast<size_t>(n), 1.0 / n);
  } else {
    pi0 = parse_number_list(pi0_text, "--pi0");
    if (static_cast<int>(pi0.size()) != n) {
      throw ipdlab::ConstraintError("--pi0 needs exactly one weight per strategy");
    }
  }

  const bool zerosum = mode == "zerosum";
  ipdlab::IntegrateOptions opts;
  opts.dt = dt;
  opts.t_max = t_max;
  opts.stride = stride;

  ipdlab::SquareMatrix flow(n);
  json dep(nullptr);
  json xi(nullptr);
  ipdlab::Trajectory traj;
  if (zerosum) {
    const ipdlab::ZeroSumSystem sys = ipdlab::zero_sum_dynamics(roster);
    traj = ipdlab::integrate_zero_sum(pi0, sys, opts);
    flow = sys.s;
    xi = json(sys.xi);
  } else {
    const ipdlab::PayoffMatrixResult result =
        ipdlab::payoff_matrix(roster, resolve_threads(threads));
    traj = ipdlab::integrate(pi0, result.a, opts);
    flow = result.a;
    dep = json::array();
    for (int i = 0; i < n; ++i) {
      json drow = json::array();
      for (int j = 0; j < n; ++j) drow.push_back(result.cell_init_dependent(i, j));
      dep.push_back(drow);
    }
  }

  std::ofstream out = open_output(out_path);
  out << "t";
  for (const ipdlab::RosterEntry& e : roster.entries) {
    out << "," << csv_escape("pi_" + e.name);
  }
  out << (zerosum ? ",xi_mean" : ",payoff_mean") << "\n";
  for (size_t k = 0; k < traj.times.size(); ++k) {
    out << ipdlab::format_number(traj.times[k]);
    for (double w : traj.states[k]) out << "," << ipdlab::format_number(w);
    out << ","
        << ipdlab::format_number(zerosum ? traj.xi_mean[k] : traj.mean_payoff[k])
        << "\n";
  }
  out.close();

  const std::vector<double>& final_state = traj.states.back();
  const double final_time = traj.times.back();
  std::vector<double> tail(static_cast<size_t>(n), 0.0);
  size_t tail_rows = 0;
  for (size_t k = 0; k < traj.times.size(); ++k) {
    if (traj.times[k] >= 0.9 * final_time) {
      for (int i = 0; i < n; ++i) tail[static_cast<size_t>(i)] += traj.states[k][static_cast<size_t>(i)];
      ++tail_rows;
    }
  }
  for (double& w : tail) w /= static_cast<double>(tail_rows);

  json flow_json = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j = 0; j < n; ++j) row.push_back(flow.at(i, j));
    flow_json.push_back(row);
  }

  json stability = json::array();
  for (int i = 0; i < n; ++i) {
    const ipdlab::StabilityReport rep = ipdlab::detect_ess_eus(flow, i);
    stability.push_back(json{{"name", roster.entries[static_cast<size_t>(i)].name},
                             {"status", stability_name(rep.status)},
                             {"ess_margin", rep.ess_margin},
                             {"eus_margin", rep.eus_margin}});
  }

  int leader = 0;
  for (int i = 1; i < n; ++i) {
    if (final_state[static_cast<size_t>(i)] > final_state[static_cast<size_t>(leader)]) leader = i;
  }
  json domination(nullptr);
  if (const auto seq = ipdlab::domination_analysis(flow, leader)) {
    json steps = json::array();
    for (const ipdlab::DominationStep& st : seq->steps) {
      steps.push_back(json{{"removed", roster.entries[static_cast<size_t>(st.removed)].name},
                           {"m", st.m},
                           {"M", st.big_m},
                           {"eps_bound", st.eps_bound}});
    }
    domination = json{{"strategy", roster.entries[static_cast<size_t>(leader)].name},
                      {"sequence", steps}};
  }

  json interior(nullptr);
  if (n == 2) {
    if (const auto eq = ipdlab::interior_equilibrium_2(flow)) {
      interior = json{{"w_star", eq->w_star}, {"stable", eq->stable}};
    }
  }

  json names = json::array();
  for (const ipdlab::RosterEntry& e : roster.entries) names.push_back(e.name);
  json summary{{"mode", zerosum ? "zerosum" : "standard"},
               {"names", names},
               {"matrix", flow_json},
               {"init_play_dependent", dep},
               {"xi", xi},
               {"frozen", traj.frozen},
               {"converged", traj.converged},
               {"final_time", final_time},
               {"final_state", json(final_state)},
               {"tail_mean", json(tail)},
               {"stability", stability},
               {"domination", domination},
               {"interior_equilibrium", interior}};
  std::cout << summary.dump(2) << "\n";
}

void cmd_zds(const std::string& point_text, const std::string& params_text) {
  const std::vector<double> pt_vals = parse_number_list(point_text, "--point");
  if (pt_vals.size() != 2) {
    throw ipdlab::ConstraintError("--point needs exactly two numbers");
  }
  PayoffParams params = ipdlab::conventional_params();
  if (!params_text.empty()) {
    const std::vector<double> pv = parse_number_list(params_text, "--params");
    if (pv.size() != 4) {
      throw ipdlab::ConstraintError("--params needs exactly four numbers T,R,P,S");
    }
    params = ipdlab::make_params(pv[0], pv[1], pv[2], pv[3]);
  }
  const PayoffParams np = ipdlab::normalize(params);
  const ipdlab::ZdsPoint pt{pt_vals[0], pt_vals[1]};

  json out{{"point", json{pt.x, pt.y}},
           {"params", params_json(params)},
           {"params_normalized", params_json(np)},
           {"in_strip", pt.in_strip(np)},
           {"z", nullptr},
           {"kappa", nullptr},
           {"top_strategy", nullptr},
           {"classification", nullptr}};
  if (pt.in_strip(np)) {
    const StrategyVector top = ipdlab::strategy_from_zds_point(pt, np);
    out["z"] = pt.z();
    out["kappa"] = ipdlab::kappa(pt);
    out["top_strategy"] = strategy_json(top);
    out["classification"] = report_json(ipdlab::classify(top, np));
  }
  std::cout << out.dump(2) << "\n";
}

void cmd_probe(const std::string& roster_path, const std::string& name) {
  const Roster roster = ipdlab::load_roster(roster_path);
  const PayoffParams np = ipdlab::normalize(roster.params);
  const ipdlab::RosterEntry& e = entry_by_name(roster, name);
  const ipdlab::ExploitProbeReport report =
      ipdlab::exploit_probe(e.strategy, np);

  auto probe_json = [](const ipdlab::ProbeResult& pr) {
    return json{{"q", strategy_json(pr.q)},
                {"limit", vec4_json(pr.limit.v)},
                {"s_x", pr.s_x},
                {"s_y", pr.s_y}};
  };
  json probes = json::array();
  for (const ipdlab::ProbeResult& pr : report.probes) probes.push_back(probe_json(pr));

  json out{{"name", name},
           {"strategy", strategy_json(e.strategy)},
           {"r_normalized", np.r},
           {"probes", probes},
           {"witness", report.witness ? probe_json(*report.witness) : json(nullptr)},
           {"certified_good", report.certified_good}};
  std::cout << out.dump(2) << "\n";
}

json error_json(const std::string& type, const std::string& message) {
  return json{{"error", {{"type", type}, {"message", message}}}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Memory-one iterated prisoner's dilemma laboratory"};
  app.require_subcommand(1);

  std::string roster_path;
  std::string strategy_name;
  std::string x_name;
  std::string y_name;
  std::string out_path;
  std::string pi0_text;
  std::string mode = "standard";
  std::string point_text;
  std::string params_text;
  std::optional<double> init_x;
  std::optional<double> init_y;
  int rollout_n = 0;
  uint64_t seed = 1;
  int threads = 0;
  int stride = 1;
  double dt = 0.01;
  double t_max = 500.0;

  CLI::App* classify = app.add_subcommand(
      "classify", "Classify every roster strategy (JSON lines)");
  classify->add_option("roster", roster_path, "Roster JSON file")->required();
  classify->add_option("--strategy", strategy_name, "Only this strategy");

  CLI::App* duel = app.add_subcommand(
      "duel", "Analyze one strategy pair's Markov chain and payoffs");
  duel->add_option("roster", roster_path, "Roster JSON file")->required();
  duel->add_option("--x", x_name, "Row strategy name")->required();
  duel->add_option("--y", y_name, "Column strategy name")->required();
  duel->add_option("--init-x", init_x, "Override x's initial cooperation");
  duel->add_option("--init-y", init_y, "Override y's initial cooperation");
  duel->add_option("--rollout", rollout_n, "Also roll the chain out this many rounds");
  duel->add_option("--seed", seed, "Monte Carlo seed (default 1)");

  CLI::App* matrix = app.add_subcommand(
      "matrix", "Pairwise payoff matrix as CSV plus a JSON summary");
  matrix->add_option("roster", roster_path, "Roster JSON file")->required();
  matrix->add_option("-o,--out", out_path, "Output CSV path")->required();
  matrix->add_option("--threads", threads, "Worker cap (0 = hardware)");

  CLI::App* evolve = app.add_subcommand(
      "evolve", "Integrate replicator dynamics and report stability");
  evolve->add_option("roster", roster_path, "Roster JSON file")->required();
  evolve->add_option("-o,--out", out_path, "Trajectory CSV path")->required();
  evolve->add_option("--pi0", pi0_text, "Initial weights, comma-separated (default uniform)");
  evolve->add_option("--dt", dt, "Step size (default 0.01)");
  evolve->add_option("--t-max", t_max, "Time horizon (default 500)");
  evolve->add_option("--mode", mode, "standard or zerosum")
      ->check(CLI::IsMember({"standard", "zerosum"}));
  evolve->add_option("--stride", stride, "Record every k-th step (default 1)");
  evolve->add_option("--threads", threads, "Worker cap for the payoff matrix");

  CLI::App* zds = app.add_subcommand(
      "zds", "Inspect a strip point: Z, kappa, top strategy, classification");
  zds->add_option("--point", point_text, "alpha_bar,beta_bar")->required();
  zds->add_option("--params", params_text, "T,R,P,S (default 5,3,1,0)");

  CLI::App* probe = app.add_subcommand(
      "probe", "Exploit-probe an agreeable strategy");
  probe->add_option("roster", roster_path, "Roster JSON file")->required();
  probe->add_option("--strategy", strategy_name, "Strategy to probe")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << error_json("usage", e.what()).dump() << "\n";
    return 2;
  }

  try {
    if (classify->parsed()) {
      cmd_classify(roster_path, strategy_name);
    } else if (duel->parsed()) {
      cmd_duel(roster_path, x_name, y_name, init_x, init_y, rollout_n, seed);
    } else if (matrix->parsed()) {
      cmd_matrix(roster_path, out_path, threads);
    } else if (evolve->parsed()) {
      cmd_evolve(roster_path, out_path, pi0_text, dt, t_max, mode, stride,
                 threads);
    } else if (zds->parsed()) {
      cmd_zds(point_text, params_text);
    } else if (probe->parsed()) {
      cmd_probe(roster_path, strategy_name);
    }
  } catch (const ipdlab::ConstraintError& e) {
    std::cerr << error_json("constraint", e.what()).dump() << "\n";
    return 2;
  } catch (const ipdlab::NumericError& e) {
    std::cerr << error_json("numeric", e.what()).dump() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << error_json("internal", e.what()).dump() << "\n";
    return 3;
  }
  return 0;
}
