#include "phi4/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "phi4/renorm.hpp"
#include "phi4/snapshot.hpp"

#ifndef PHI4_VERSION
#define PHI4_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;

namespace phi4 {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage: return 2;
    case ErrorKind::config: return 3;
    case ErrorKind::growth_violation: return 4;
    case ErrorKind::domain: return 5;
    case ErrorKind::checksum: return 6;
    case ErrorKind::io: return 7;
    case ErrorKind::blow_up: return 8;
    case ErrorKind::non_contraction: return 9;
    case ErrorKind::infeasible: return 10;
    case ErrorKind::unsupported: return 11;
    case ErrorKind::shape_mismatch: return 12;
    case ErrorKind::symbol_evaluation: return 13;
  }
  return 20;
}

std::string config_hash(const ExperimentConfig& c) { return sha256_hex(emit_config(c)); }

std::string provenance(const ExperimentConfig& c) {
  return fmt::format("version={} config_sha256={} seed={}", PHI4_VERSION, config_hash(c), c.seed);
}

namespace {

Potential potential_of(const ExperimentConfig& c) {
  bool zero = std::all_of(c.potential.begin(), c.potential.end(), [](double v) { return v == 0.0; });
  return zero ? Potential::zero() : Potential(c.potential);
}

void require_eps(const ExperimentConfig& c, bool allow_zero) {
  if (c.eps.empty()) fail(ErrorKind::usage, "empty eps list");
  for (double e : c.eps) {
    if (!std::isfinite(e) || e < 0.0 || (!allow_zero && e == 0.0))
      fail(ErrorKind::usage, fmt::format("eps = {} is outside the admissible range", e));
  }
}

fs::path prepare_dir(const RunOptions& o) {
  fs::path dir(o.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::io, fmt::format("cannot create '{}': {}", o.out_dir, ec.message()));
  return dir;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) fail(ErrorKind::io, fmt::format("cannot write '{}'", p.string()));
  out << text;
  if (!out) fail(ErrorKind::io, fmt::format("write failed for '{}'", p.string()));
}

void write_config_copy(const fs::path& dir, const ExperimentConfig& c) { write_text(dir / "config.yaml", emit_config(c)); }

std::vector<double> time_grid(double dt, double T) {
  const auto n = std::size_t(std::llround(T / dt));
  std::vector<double> t(n + 1);
  for (std::size_t i = 0; i <= n; ++i) t[i] = double(i) * dt;
  return t;
}

MomentSpec parse_symbol(const std::string& s) {
  MomentSpec m;
  if (s == "free") m.symbol = MomentSymbol::free;
  else if (s == "one_prime") m.symbol = MomentSymbol::one_prime;
  else if (s == "two_prime") m.symbol = MomentSymbol::two_prime;
  else if (s == "three0") m.symbol = MomentSymbol::three0;
  else if (s.rfind("wick", 0) == 0 && s.size() > 4) {
    m.symbol = MomentSymbol::wick;
    try {
      m.power = std::stoi(s.substr(4));
    } catch (const std::exception&) {
      fail(ErrorKind::config, fmt::format("bad moment symbol '{}'", s));
    }
    if (m.power < 1) fail(ErrorKind::config, fmt::format("bad moment symbol '{}'", s));
  } else {
    fail(ErrorKind::config, fmt::format("unknown moment symbol '{}'", s));
  }
  return m;
}

// One remainder run on a shared lattice.
struct Run {
  double eps = 0.0;
  int K = 0;
  double lambda = 1.0;
  EnhancedNoise U;
  RemainderPair P;
  std::optional<double> blow_up_time;
};

EnhancedNoise noise_for(const ExperimentConfig& c, double eps, int K, const std::vector<double>& t) {
  const FrequencyLattice grid = FrequencyLattice::minimal(K);
  const NoiseSeed seed{c.seed};
  const Potential V = potential_of(c);
  if (eps == 0.0) {
    EnhancedNoise U = build_limit_upsilon(seed, 0, grid, 0.0, t, c.burn);
    U.lambda = V.is_zero() ? 0.0 : coupling_lambda(V, sigma2_limit(c.symbol()));
    return U;
  }
  if (V.is_zero()) return zero_noise(grid, t, c.symbol(eps));
  const double dt = c.solver.matched_constants ? t[1] - t[0] : 0.0;
  const RenormSet r = compute_renorm(c.symbol(), V, eps, K, dt);
  return build_upsilon(seed, 0, grid, c.symbol(), V, eps, t, r, c.burn);
}

Run run_one(const ExperimentConfig& c, double eps, int K) {
  Run r;
  r.eps = eps;
  r.K = K;
  const SolverConfig& sc = c.solver.config;
  r.U = noise_for(c, eps, K, time_grid(sc.dt, sc.T));
  r.lambda = r.U.lambda;
  SolverConfig cfg = sc;
  cfg.lambda = r.lambda;
  const FrequencyLattice& grid = r.U.grid();
  const FourierField v0(grid);
  FourierField w0(grid);
  if (c.solver.init_amplitude != 0.0) {
    if (!grid.contains(c.solver.init_mode)) fail(ErrorKind::config, "init_mode lies outside the lattice");
    w0 = FourierField::real_mode(grid, c.solver.init_mode, c.solver.init_amplitude);
  }
  try {
    r.P = solve(cfg, r.U, v0, w0);
  } catch (const BlowUp& b) {
    r.P = b.partial();
    r.blow_up_time = b.time();
  }
  return r;
}

std::vector<std::size_t> snapshot_steps(std::size_t n, std::size_t stride) {
  std::vector<std::size_t> s;
  if (n == 0) return s;
  if (stride == 0) stride = n;
  for (std::size_t i = 0; i < n; i += stride) s.push_back(i);
  if (s.back() != n - 1) s.push_back(n - 1);
  return s;
}

double l2(const FourierField& f) {
  double s = 0.0;
  for (const cplx& z : f.coeffs()) s += std::norm(z);
  return std::sqrt(s);
}

void emit_header(YAML::Emitter& e, const ExperimentConfig& c, const char* command) {
  e << YAML::Key << "schema" << YAML::Value << 1;
  e << YAML::Key << "command" << YAML::Value << command;
  e << YAML::Key << "version" << YAML::Value << PHI4_VERSION;
  e << YAML::Key << "config_sha256" << YAML::Value << config_hash(c);
  e << YAML::Key << "seed" << YAML::Value << c.seed;
}

struct EpsEntry {
  double eps = 0.0;
  int K = 0;
  std::string status;  // complete | blow_up
  std::optional<double> blow_up_time;
  std::vector<std::pair<std::string, std::string>> files;  // name, sha256
};

std::string solve_manifest(const ExperimentConfig& c, const std::vector<EpsEntry>& entries) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  emit_header(e, c, "solve");
  e << YAML::Key << "runs" << YAML::Value << YAML::BeginSeq;
  for (const EpsEntry& r : entries) {
    e << YAML::BeginMap;
    e << YAML::Key << "eps" << YAML::Value << r.eps;
    e << YAML::Key << "K" << YAML::Value << r.K;
    e << YAML::Key << "status" << YAML::Value << r.status;
    if (r.blow_up_time) e << YAML::Key << "blow_up_time" << YAML::Value << *r.blow_up_time;
    e << YAML::Key << "files" << YAML::Value << YAML::BeginSeq;
    for (const auto& [name, sha] : r.files)
      e << YAML::Flow << YAML::BeginMap << YAML::Key << "path" << YAML::Value << name << YAML::Key << "sha256"
        << YAML::Value << sha << YAML::EndMap;
    e << YAML::EndSeq << YAML::EndMap;
  }
  e << YAML::EndSeq << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

// Verified entries of an existing manifest written for the same config.
std::vector<EpsEntry> resume_entries(const fs::path& dir, const ExperimentConfig& c) {
  const fs::path mp = dir / "manifest.yaml";
  if (!fs::exists(mp)) return {};
  YAML::Node m;
  try {
    m = YAML::LoadFile(mp.string());
  } catch (const YAML::Exception& e) {
    fail(ErrorKind::io, fmt::format("unreadable manifest: {}", e.what()));
  }
  if (m["config_sha256"].as<std::string>("") != config_hash(c))
    fail(ErrorKind::config, "manifest was written for a different config; refusing to resume");
  std::vector<EpsEntry> out;
  for (const auto& run : m["runs"]) {
    EpsEntry e;
    e.eps = run["eps"].as<double>();
    e.K = run["K"].as<int>();
    e.status = run["status"].as<std::string>();
    if (run["blow_up_time"]) e.blow_up_time = run["blow_up_time"].as<double>();
    for (const auto& f : run["files"]) {
      const auto name = f["path"].as<std::string>();
      const auto sha = f["sha256"].as<std::string>();
      if (name.size() > 4 && name.substr(name.size() - 4) == ".fld") (void)read_snapshot((dir / name).string(), sha);
      else {
        std::ifstream in(dir / name, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        if (!in || sha256_hex(ss.str()) != sha) fail(ErrorKind::checksum, fmt::format("checksum mismatch for '{}'", name));
      }
      e.files.emplace_back(name, sha);
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

int cmd_constants(const ExperimentConfig& c, const RunOptions& o, std::ostream& log) {
  require_eps(c, false);
  const Potential V = potential_of(c);
  if (V.is_zero()) fail(ErrorKind::usage, "constants need a nonzero potential");
  const DispersionQ Q = c.symbol();
  std::ostringstream csv;
  write_renorm_csv_header(csv, provenance(c));
  for (double eps : c.eps) {
    const RenormSet r = compute_renorm(Q, V, eps, c.k_rule.resolve(eps));
    write_renorm_csv_row(csv, r);
    log << fmt::format("eps={} K={} lambda={:.6f} C2={:.6g} C3={:.6g}\n", eps, r.K, r.lambda, r.C2, r.C3);
  }
  const fs::path dir = prepare_dir(o);
  write_text(dir / "constants.csv", csv.str());
  write_config_copy(dir, c);
  return 0;
}

int cmd_moments(const ExperimentConfig& c, const RunOptions& o, std::ostream& log) {
  require_eps(c, false);
  if (c.samples == 0) fail(ErrorKind::usage, "samples must be positive");
  if (c.moments.symbols.empty() || c.moments.modes.empty()) fail(ErrorKind::usage, "no moment symbols or modes");
  const Potential V = potential_of(c);
  const DispersionQ Q = c.symbol();
  std::vector<MomentSpec> specs;
  for (const auto& s : c.moments.symbols) specs.push_back(parse_symbol(s));
  for (const MomentSpec& s : specs)
    if (s.symbol != MomentSymbol::free && s.symbol != MomentSymbol::wick && V.is_zero())
      fail(ErrorKind::usage, "primed objects need a nonzero potential");
  McOptions opt;
  opt.dt = c.moments.dt;
  opt.burn = BurnIn{c.moments.burn_in, 0.0};
  std::ostringstream csv;
  write_moment_csv_header(csv, provenance(c));
  double worst = 0.0;
  for (double eps : c.eps) {
    const int K = c.k_rule.resolve(eps);
    csv << fmt::format("# eps={} K={}\n", eps, K);
    for (MomentSpec spec : specs) {
      for (const Mode& k : c.moments.modes) {
        spec.k = k;
        const MomentReport r = mc_moment(spec, Q, V, eps, K, c.samples, NoiseSeed{c.seed}, opt);
        write_moment_csv_row(csv, r);
        if (r.z) worst = std::max(worst, std::abs(*r.z));
        log << fmt::format("eps={} {} k=({},{},{}) mean={:.6g} oracle={:.6g} z={}\n", eps, r.symbol, k[0], k[1], k[2],
                           r.mean, r.oracle, r.z ? fmt::format("{:.3f}", *r.z) : "NA");
      }
    }
  }
  const fs::path dir = prepare_dir(o);
  write_text(dir / "moments.csv", csv.str());
  write_config_copy(dir, c);
  if (o.summary) {
    log << fmt::format("summary: max |z| = {:.3f}\n", worst);
    if (worst > 4.0) {
      log << "reason=moment audit failed\n";
      return kAuditFailure;
    }
  }
  return 0;
}

int cmd_solve(const ExperimentConfig& c, const RunOptions& o, std::ostream& log) {
  require_eps(c, true);
  const fs::path dir = prepare_dir(o);
  std::vector<EpsEntry> entries;
  if (o.resume) {
    entries = resume_entries(dir, c);
    log << fmt::format("resume: {} verified run(s)\n", entries.size());
  }
  std::optional<double> blew;
  for (std::size_t idx = 0; idx < c.eps.size(); ++idx) {
    const double eps = c.eps[idx];
    const bool done = std::any_of(entries.begin(), entries.end(), [&](const EpsEntry& e) { return e.eps == eps; });
    if (done) continue;
    const int K = c.k_rule.resolve(eps);
    const Run r = run_one(c, eps, K);
    const std::vector<FourierField> phi = reconstruct_phi(r.U, r.P, r.lambda);
    EpsEntry e;
    e.eps = eps;
    e.K = K;
    e.status = r.blow_up_time ? "blow_up" : "complete";
    e.blow_up_time = r.blow_up_time;
    std::ostringstream traj;
    traj << "# schema=1\n# " << provenance(c) << fmt::format("\n# eps={} K={}\nt,v_l2,w_l2,phi_l2\n", eps, K);
    for (std::size_t n = 0; n < r.P.t_grid.size(); ++n)
      traj << fmt::format("{:.10g},{:.12g},{:.12g},{:.12g}\n", r.P.t_grid[n], l2(r.P.v[n]), l2(r.P.w[n]), l2(phi[n]));
    const std::string tname = fmt::format("trajectory_{}.csv", idx);
    write_text(dir / tname, traj.str());
    e.files.emplace_back(tname, sha256_hex(traj.str()));
    for (std::size_t n : snapshot_steps(r.P.t_grid.size(), c.solver.snapshot_stride)) {
      for (const auto& [tag, f] : {std::pair{"v", &r.P.v[n]}, std::pair{"w", &r.P.w[n]}, std::pair{"phi", &phi[n]}}) {
        const std::string name = fmt::format("snap_{}_{:06d}_{}.fld", idx, n, tag);
        e.files.emplace_back(name, write_snapshot((dir / name).string(), *f));
      }
    }
    entries.push_back(std::move(e));
    std::sort(entries.begin(), entries.end(), [](const EpsEntry& a, const EpsEntry& b) { return a.eps > b.eps; });
    write_text(dir / "manifest.yaml", solve_manifest(c, entries));
    log << fmt::format("eps={} K={} steps={} {}\n", eps, K, r.P.t_grid.size(),
                       r.blow_up_time ? fmt::format("blow-up at t={}", *r.blow_up_time) : "complete");
    if (r.blow_up_time && !blew) blew = r.blow_up_time;
  }
  write_text(dir / "manifest.yaml", solve_manifest(c, entries));
  write_config_copy(dir, c);
  if (blew) fail(ErrorKind::blow_up, fmt::format("solution blew up at t = {}; partial outputs kept", *blew));
  return 0;
}

int cmd_converge(const ExperimentConfig& c, const RunOptions& o, std::ostream& log) {
  require_eps(c, false);
  std::vector<double> eps = c.eps;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  // One lattice for every run, so the difference is taken mode by mode.
  const int K = c.k_rule.fixed ? c.k_rule.K : c.k_rule.resolve(eps.back());
  const SolverConfig sc = resolved(c.solver.config, std::max<int>(2, int(c.potential.size())));
  const Run limit = run_one(c, 0.0, K);
  if (limit.blow_up_time) fail(ErrorKind::blow_up, fmt::format("limit run blew up at t = {}", *limit.blow_up_time));
  const std::vector<FourierField> phi0 = reconstruct_phi(limit.U, limit.P, limit.lambda);
  std::ostringstream csv;
  csv << "# schema=1\n# " << provenance(c) << "\neps,K,y_distance,phi_rel_l2\n";
  std::vector<double> dist;
  for (double e : eps) {
    const Run r = run_one(c, e, K);
    if (r.blow_up_time) fail(ErrorKind::blow_up, fmt::format("eps = {} run blew up at t = {}", e, *r.blow_up_time));
    const double d = y_norm(difference(r.P, limit.P), e, sc.T, sc.kappa, sc.delta0);
    const double rel = relative_l2(reconstruct_phi(r.U, r.P, r.lambda), phi0);
    dist.push_back(d);
    csv << fmt::format("{},{},{:.12g},{:.12g}\n", e, K, d, rel);
    log << fmt::format("eps={} K={} Y-distance={:.6g} phi rel L2={:.6g}\n", e, K, d, rel);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < dist.size(); ++i) decreasing = decreasing && dist[i] < dist[i - 1];
  const char* verdict = decreasing ? "decreasing" : "not decreasing";
  csv << "# trend=" << verdict << "\n";
  log << "trend: " << verdict << "\n";
  const fs::path dir = prepare_dir(o);
  write_text(dir / "converge.csv", csv.str());
  write_config_copy(dir, c);
  return 0;
}

int cmd_validate(const ExperimentConfig& c, const RunOptions&, std::ostream& log) {
  const DispersionQ Q = c.symbol();
  const ValidationReport v = validate_symbol(Q, 1e4, 400);
  log << fmt::format("normalisation: {} {}\n", v.normalisation.pass ? "ok" : "FAIL", v.normalisation.detail);
  log << fmt::format("positivity: {} {}\n", v.positivity.pass ? "ok" : "FAIL", v.positivity.detail);
  log << fmt::format("growth: {} {}\n", v.growth.pass ? "ok" : "FAIL", v.growth.detail);
  if (!v.growth.pass) fail(ErrorKind::growth_violation, "symbol does not grow faster than z^3");
  if (!v.pass()) fail(ErrorKind::domain, "symbol fails the normalisation or positivity check");
  const Potential V = potential_of(c);
  log << fmt::format("potential: degree {}\n", V.degree());
  for (double e : c.eps) {
    if (!(e >= 0.0)) fail(ErrorKind::usage, fmt::format("eps = {} is negative", e));
    if (e > 0.0 || c.k_rule.fixed) log << fmt::format("eps={} K={}\n", e, c.k_rule.resolve(e));
  }
  (void)resolved(c.solver.config, std::max(2, V.n()));
  log << "config: ok\n";
  return 0;
}

}  // namespace phi4
