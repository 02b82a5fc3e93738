#include "phi4/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "phi4/error.hpp"

namespace phi4 {

int KRule::resolve(double eps) const {
  if (fixed) return K;
  if (!(eps > 0.0)) fail(ErrorKind::config, "eps = 0 needs a fixed K rule");
  return int(std::ceil(factor / eps - 1e-9));
}

namespace {

template <class T>
T get(const YAML::Node& n, const char* key, const T& fallback) {
  const YAML::Node v = n[key];
  if (!v) return fallback;
  try {
    return v.as<T>();
  } catch (const YAML::Exception& e) {
    fail(ErrorKind::config, fmt::format("bad value for '{}': {}", key, e.what()));
  }
}

Mode as_mode(const YAML::Node& n) {
  if (!n.IsSequence() || n.size() != 3) fail(ErrorKind::config, "a mode is a list of three integers");
  return {n[0].as<int>(), n[1].as<int>(), n[2].as<int>()};
}

void check_keys(const YAML::Node& n, std::initializer_list<const char*> allowed, const char* where) {
  if (!n.IsMap()) fail(ErrorKind::config, fmt::format("'{}' must be a mapping", where));
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(ErrorKind::config, fmt::format("unknown key '{}' in {}", key, where));
  }
}

SolverMode parse_mode(const std::string& s) {
  if (s == "sequential") return SolverMode::sequential;
  if (s == "picard") return SolverMode::picard;
  fail(ErrorKind::config, fmt::format("unknown solver mode '{}'", s));
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    fail(ErrorKind::config, fmt::format("YAML parse error: {}", e.what()));
  }
  ExperimentConfig c;
  if (!root || root.IsNull()) return c;
  check_keys(root,
             {"experiment", "symbol", "potential", "eps", "k_rule", "seed", "samples", "solver", "burn_in", "moments",
              "output"},
             "config");
  try {
    c.experiment = get(root, "experiment", c.experiment);
    if (const YAML::Node s = root["symbol"]) {
      check_keys(s, {"family", "params"}, "symbol");
      c.family = get(s, "family", c.family);
      if (s["params"]) c.params = s["params"].as<std::map<std::string, double>>();
      else if (c.family != "bilaplacian") c.params.clear();
    }
    c.potential = get(root, "potential", c.potential);
    c.eps = get(root, "eps", c.eps);
    if (const YAML::Node k = root["k_rule"]) {
      check_keys(k, {"factor", "fixed"}, "k_rule");
      if (k["fixed"] && k["factor"]) fail(ErrorKind::config, "k_rule takes either 'factor' or 'fixed'");
      if (k["fixed"]) {
        c.k_rule.fixed = true;
        c.k_rule.K = k["fixed"].as<int>();
      } else if (k["factor"]) {
        c.k_rule.fixed = false;
        c.k_rule.factor = k["factor"].as<double>();
      }
    }
    c.seed = get(root, "seed", c.seed);
    c.samples = get(root, "samples", c.samples);
    if (const YAML::Node s = root["solver"]) {
      check_keys(s,
                 {"dt", "T", "kappa", "delta0", "mode", "picard_iters", "picard_tol", "matched_constants",
                  "snapshot_stride", "init_amplitude", "init_mode"},
                 "solver");
      SolverConfig& sc = c.solver.config;
      sc.dt = get(s, "dt", sc.dt);
      sc.T = get(s, "T", sc.T);
      sc.kappa = get(s, "kappa", sc.kappa);
      sc.delta0 = get(s, "delta0", sc.delta0);
      sc.picard_iters = get(s, "picard_iters", sc.picard_iters);
      sc.picard_tol = get(s, "picard_tol", sc.picard_tol);
      if (s["mode"]) sc.mode = parse_mode(s["mode"].as<std::string>());
      c.solver.matched_constants = get(s, "matched_constants", c.solver.matched_constants);
      c.solver.snapshot_stride = get(s, "snapshot_stride", c.solver.snapshot_stride);
      c.solver.init_amplitude = get(s, "init_amplitude", c.solver.init_amplitude);
      if (s["init_mode"]) c.solver.init_mode = as_mode(s["init_mode"]);
    }
    if (const YAML::Node b = root["burn_in"]) {
      check_keys(b, {"T", "dt"}, "burn_in");
      c.burn.T = get(b, "T", c.burn.T);
      c.burn.dt = get(b, "dt", c.burn.dt);
    }
    if (const YAML::Node m = root["moments"]) {
      check_keys(m, {"symbols", "modes", "dt", "burn_in"}, "moments");
      c.moments.symbols = get(m, "symbols", c.moments.symbols);
      if (m["modes"]) {
        c.moments.modes.clear();
        for (const auto& k : m["modes"]) c.moments.modes.push_back(as_mode(k));
      }
      c.moments.dt = get(m, "dt", c.moments.dt);
      c.moments.burn_in = get(m, "burn_in", c.moments.burn_in);
    }
    c.output = get(root, "output", c.output);
  } catch (const YAML::Exception& e) {
    fail(ErrorKind::config, e.what());
  }
  // Family and parameters are checked by constructing the symbol.
  (void)c.symbol();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, fmt::format("cannot read config '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const ExperimentConfig& c) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "experiment" << YAML::Value << c.experiment;
  e << YAML::Key << "symbol" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "family" << YAML::Value << c.family;
  e << YAML::Key << "params" << YAML::Value << YAML::Flow << c.params;
  e << YAML::EndMap;
  e << YAML::Key << "potential" << YAML::Value << YAML::Flow << c.potential;
  e << YAML::Key << "eps" << YAML::Value << YAML::Flow << c.eps;
  e << YAML::Key << "k_rule" << YAML::Value << YAML::Flow << YAML::BeginMap;
  if (c.k_rule.fixed) e << YAML::Key << "fixed" << YAML::Value << c.k_rule.K;
  else e << YAML::Key << "factor" << YAML::Value << c.k_rule.factor;
  e << YAML::EndMap;
  e << YAML::Key << "seed" << YAML::Value << c.seed;
  e << YAML::Key << "samples" << YAML::Value << c.samples;
  const SolverConfig& s = c.solver.config;
  e << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "dt" << YAML::Value << s.dt;
  e << YAML::Key << "T" << YAML::Value << s.T;
  e << YAML::Key << "kappa" << YAML::Value << s.kappa;
  e << YAML::Key << "delta0" << YAML::Value << s.delta0;
  e << YAML::Key << "mode" << YAML::Value << (s.mode == SolverMode::picard ? "picard" : "sequential");
  e << YAML::Key << "picard_iters" << YAML::Value << s.picard_iters;
  e << YAML::Key << "picard_tol" << YAML::Value << s.picard_tol;
  e << YAML::Key << "matched_constants" << YAML::Value << c.solver.matched_constants;
  e << YAML::Key << "snapshot_stride" << YAML::Value << c.solver.snapshot_stride;
  e << YAML::Key << "init_amplitude" << YAML::Value << c.solver.init_amplitude;
  e << YAML::Key << "init_mode" << YAML::Value << YAML::Flow << std::vector<int>(c.solver.init_mode.begin(), c.solver.init_mode.end());
  e << YAML::EndMap;
  e << YAML::Key << "burn_in" << YAML::Value << YAML::Flow << YAML::BeginMap;
  e << YAML::Key << "T" << YAML::Value << c.burn.T << YAML::Key << "dt" << YAML::Value << c.burn.dt;
  e << YAML::EndMap;
  e << YAML::Key << "moments" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "symbols" << YAML::Value << YAML::Flow << c.moments.symbols;
  e << YAML::Key << "modes" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const Mode& k : c.moments.modes) e << YAML::Flow << std::vector<int>(k.begin(), k.end());
  e << YAML::EndSeq;
  e << YAML::Key << "dt" << YAML::Value << c.moments.dt;
  e << YAML::Key << "burn_in" << YAML::Value << c.moments.burn_in;
  e << YAML::EndMap;
  e << YAML::Key << "output" << YAML::Value << c.output;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

}  // namespace phi4
