#pragma once

// Command layer behind the phi4 CLI. Every command writes into options.out_dir,
// stamps its outputs with the library version, the SHA-256 of the canonical
// config and the seed, and reports failures as phi4::Error.

#include <iosfwd>
#include <string>

#include "phi4/config.hpp"
#include "phi4/error.hpp"

namespace phi4 {

struct RunOptions {
  std::string out_dir = "out";
  bool summary = false;  // moments: fail when any |z| > 4
  bool resume = false;   // solve: keep verified per-eps outputs
};

// 0 success, 1 audit failure, 2 usage, larger values per ErrorKind.
int exit_code(ErrorKind kind);
constexpr int kAuditFailure = 1;

std::string config_hash(const ExperimentConfig& c);
// "version=... config_sha256=... seed=..."
std::string provenance(const ExperimentConfig& c);

// Renormalisation constants per eps (constants.csv).
int cmd_constants(const ExperimentConfig& c, const RunOptions& o, std::ostream& log);
// Monte Carlo second moments against the contraction oracle (moments.csv).
int cmd_moments(const ExperimentConfig& c, const RunOptions& o, std::ostream& log);
// Remainder trajectories per eps with snapshots and manifest.yaml.
int cmd_solve(const ExperimentConfig& c, const RunOptions& o, std::ostream& log);
// Matched-seed runs at each eps and at eps = 0; Y distances and a trend verdict.
int cmd_converge(const ExperimentConfig& c, const RunOptions& o, std::ostream& log);
// Symbol, potential and config checks without running anything heavy.
int cmd_validate(const ExperimentConfig& c, const RunOptions& o, std::ostream& log);

}  // namespace phi4
