#pragma once

// Experiment configuration in YAML; the grammar is documented in docs/config.md.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "phi4/diagrams.hpp"
#include "phi4/dispersion.hpp"
#include "phi4/solver.hpp"

namespace phi4 {

// Lattice cutoff as a function of eps: K = ceil(factor / eps), or a fixed K.
struct KRule {
  bool fixed = false;
  double factor = 4.0;
  int K = 8;
  int resolve(double eps) const;
  bool operator==(const KRule&) const = default;
};

struct MomentsSection {
  // free | wick<n> | one_prime | two_prime | three0
  std::vector<std::string> symbols{"free", "wick2", "one_prime", "two_prime"};
  std::vector<Mode> modes{{0, 0, 0}, {1, 0, 0}};
  double dt = 0.01;        // Duhamel step for three0
  double burn_in = 10.0;   // burn-in horizon for three0
  bool operator==(const MomentsSection&) const = default;
};

struct SolverSection {
  SolverConfig config;
  bool matched_constants = true;  // C2, C3 for the exponential Euler step instead of the continuum
  std::size_t snapshot_stride = 0;  // 0: first and last state only
  double init_amplitude = 0.0;      // w(0) = a (e_k + e_{-k}); v(0) = 0
  Mode init_mode{1, 0, 0};
  bool operator==(const SolverSection&) const = default;
};

struct ExperimentConfig {
  std::string experiment = "run";
  std::string family = "bilaplacian";
  std::map<std::string, double> params{{"nu", 1.0}};
  std::vector<double> potential{0.0, 0.25};
  std::vector<double> eps{0.2, 0.1};
  KRule k_rule;
  std::uint64_t seed = 1;
  std::size_t samples = 1000;
  SolverSection solver;
  BurnIn burn;
  MomentsSection moments;
  std::string output = "out";
  bool operator==(const ExperimentConfig&) const = default;

  DispersionQ symbol(double eps = 0.0) const { return DispersionQ::from_family(family, params, eps); }
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
// Canonical text; parse_config(emit_config(c)) == c.
std::string emit_config(const ExperimentConfig& c);

}  // namespace phi4
