#include "ipdlab/roster_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ipdlab/errors.hpp"
#include "ipdlab/press_dyson.hpp"

namespace ipdlab {

namespace {

using nlohmann::json;

constexpr double kTagTol = 1e-9;

double require_num(const json& obj, const std::string& key,
                   const std::string& where) {
  if (!obj.contains(key)) {
    throw ConstraintError(where + " is missing \"" + key + "\"");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw ConstraintError(where + " field \"" + key + "\" must be a number");
  }
  return v.get<double>();
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    if (!known.count(item.key())) {
      throw ConstraintError("unrecognized field \"" + item.key() + "\" in " +
                            where);
    }
  }
}

struct ParamName {
  std::string base;
  double value = 0.0;
};

// Splits "complier:1.5" style names; returns nothing for plain names.
std::optional<ParamName> split_parameterized(const std::string& name) {
  const size_t colon = name.find(':');
  if (colon == std::string::npos) return std::nullopt;
  ParamName out;
  out.base = name.substr(0, colon);
  const std::string arg = name.substr(colon + 1);
  const char* first = arg.data();
  const char* last = arg.data() + arg.size();
  auto [ptr, ec] = std::from_chars(first, last, out.value);
  if (ec != std::errc() || ptr != last || arg.empty()) {
    throw ConstraintError("cannot parse the parameter in strategy name \"" +
                          name + "\"");
  }
  return out;
}

std::optional<ZdsPoint> builtin_zds_point(const std::string& name,
                                          const PayoffParams& normalized) {
  const auto parsed = split_parameterized(name);
  if (!parsed) return std::nullopt;
  if (parsed->base == "complier") {
    return ZdsPoint{parsed->value, -1.0 / normalized.r - parsed->value};
  }
  if (parsed->base == "extortion") {
    return ZdsPoint{parsed->value, -1.0 / normalized.p - parsed->value};
  }
  if (parsed->base == "equalizer") {
    return ZdsPoint{0.0, -1.0 / parsed->value};
  }
  return std::nullopt;
}

}  // namespace

StrategyVector builtin_strategy(const std::string& name,
                                const PayoffParams& params) {
  const PayoffParams np = normalize(params);
  if (const auto parsed = split_parameterized(name)) {
    if (parsed->base == "complier") {
      if (!(parsed->value > 0.0)) {
        throw ConstraintError("complier parameter must be positive in \"" +
                              name + "\"");
      }
      return complier_top(parsed->value, np);
    }
    if (parsed->base == "extortion") {
      if (!(parsed->value > 0.0)) {
        throw ConstraintError("extortion parameter must be positive in \"" +
                              name + "\"");
      }
      return strategy_from_zds_point(*builtin_zds_point(name, np), np);
    }
    if (parsed->base == "equalizer") {
      if (!(parsed->value >= np.p - kStrictMargin &&
            parsed->value <= np.r + kStrictMargin)) {
        throw ConstraintError(
            "equalizer parameter must lie between the normalized P and R in \"" +
            name + "\"");
      }
      return strategy_from_zds_point(*builtin_zds_point(name, np), np);
    }
    throw ConstraintError("unknown parameterized strategy \"" + name + "\"");
  }
  if (name == "tft") return tft();
  if (name == "repeat") return repeat_strategy();
  if (name == "grim") return grim();
  if (name == "lame") return lame();
  if (name == "pavlov") return pavlov();
  if (name == "allc") return all_c();
  if (name == "alld") return all_d();
  if (name == "edge") return edge(np);
  throw ConstraintError("unknown built-in strategy \"" + name + "\"");
}

bool is_builtin_strategy(const std::string& name) {
  static const std::set<std::string> kPlain = {
      "tft", "repeat", "grim", "lame", "pavlov", "allc", "alld", "edge"};
  if (kPlain.count(name)) return true;
  try {
    const auto parsed = split_parameterized(name);
    return parsed && (parsed->base == "complier" ||
                      parsed->base == "extortion" ||
                      parsed->base == "equalizer");
  } catch (const ConstraintError&) {
    return false;
  }
}

Roster parse_roster(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConstraintError(std::string("roster is not valid JSON: ") +
                          e.what());
  }
  if (!doc.is_object()) throw ConstraintError("roster must be a JSON object");
  reject_unknown_keys(doc, {"payoffs", "strategies"}, "the roster");

  if (!doc.contains("payoffs") || !doc.at("payoffs").is_object()) {
    throw ConstraintError("roster needs a \"payoffs\" object");
  }
  const json& pay = doc.at("payoffs");
  reject_unknown_keys(pay, {"T", "R", "P", "S"}, "\"payoffs\"");
  const PayoffParams params =
      make_params(require_num(pay, "T", "\"payoffs\""),
                  require_num(pay, "R", "\"payoffs\""),
                  require_num(pay, "P", "\"payoffs\""),
                  require_num(pay, "S", "\"payoffs\""));
  const PayoffParams np = normalize(params);

  if (!doc.contains("strategies") || !doc.at("strategies").is_array() ||
      doc.at("strategies").empty()) {
    throw ConstraintError("roster needs a nonempty \"strategies\" array");
  }

  Roster roster{params, {}};
  std::set<std::string> seen;
  for (const json& entry : doc.at("strategies")) {
    if (!entry.is_object()) {
      throw ConstraintError("each strategy entry must be a JSON object");
    }
    reject_unknown_keys(entry, {"name", "p", "init_coop", "zds_point"},
                        "a strategy entry");
    if (!entry.contains("name") || !entry.at("name").is_string()) {
      throw ConstraintError("each strategy entry needs a string \"name\"");
    }
    const std::string name = entry.at("name").get<std::string>();
    const std::string where = "strategy \"" + name + "\"";
    if (!seen.insert(name).second) {
      throw ConstraintError("duplicate strategy name \"" + name + "\"");
    }

    StrategyVector strat;
    std::optional<ZdsPoint> tag;
    if (entry.contains("p")) {
      const json& parr = entry.at("p");
      if (!parr.is_array() || parr.size() != 4) {
        throw ConstraintError(where + " field \"p\" must be an array of 4 numbers");
      }
      Vec4 p{};
      for (size_t i = 0; i < 4; ++i) {
        if (!parr.at(i).is_number()) {
          throw ConstraintError(where + " field \"p\" must be an array of 4 numbers");
        }
        p[i] = parr.at(i).get<double>();
      }
      strat = StrategyVector::checked(p);
    } else {
      if (!is_builtin_strategy(name)) {
        throw ConstraintError(where + " has no \"p\" and is not a built-in name");
      }
      strat = builtin_strategy(name, np);
      tag = builtin_zds_point(name, np);
    }

    if (entry.contains("init_coop")) {
      const json& ic = entry.at("init_coop");
      if (!ic.is_number()) {
        throw ConstraintError(where + " field \"init_coop\" must be a number");
      }
      strat = StrategyVector::checked(strat.p, ic.get<double>());
    }

    if (entry.contains("zds_point")) {
      const json& zp = entry.at("zds_point");
      if (!zp.is_array() || zp.size() != 2 || !zp.at(0).is_number() ||
          !zp.at(1).is_number()) {
        throw ConstraintError(where + " field \"zds_point\" must be an array of 2 numbers");
      }
      tag = ZdsPoint{zp.at(0).get<double>(), zp.at(1).get<double>()};
    }

    if (tag) {
      if (!tag->in_strip(np)) {
        throw ConstraintError(where + " zds_point lies outside the feasible strip");
      }
      BarCoords bc;
      try {
        bc = bar_coords(decompose(x_press_dyson(strat), np), np);
      } catch (const ConstraintError&) {
        throw ConstraintError(where + " has a zds_point but no defined value-line coordinates");
      }
      if (std::abs(bc.delta_bar) > kTagTol ||
          std::abs(bc.alpha_bar - tag->x) > kTagTol ||
          std::abs(bc.beta_bar - tag->y) > kTagTol) {
        throw ConstraintError(where + " zds_point does not match the strategy's coordinates");
      }
    }

    roster.entries.push_back({name, strat, tag});
  }
  return roster;
}

Roster load_roster(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConstraintError("cannot open roster file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_roster(buf.str());
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

}  // namespace ipdlab
