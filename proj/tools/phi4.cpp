// phi4 command-line front end: constants | moments | solve | converge | validate.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "phi4/harness.hpp"
#include "phi4/parallel.hpp"

namespace {

std::vector<double> parse_eps_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      phi4::fail(phi4::ErrorKind::usage, "bad --eps entry '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral toolkit for weakly universal Phi^4_3 models on the 3-torus"};
  app.require_subcommand(1, 1);

  std::string config_path, out_dir, eps_list;
  std::uint64_t seed = 0;
  int threads = 0;
  bool summary = false, resume = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "YAML experiment config (docs/config.md)");
    sub->add_option("--out", out_dir, "output directory (default: config 'output')");
    sub->add_option("--seed", seed, "master seed, overrides the config");
    sub->add_option("--threads", threads, "OpenMP threads (env PHI4_THREADS)");
    sub->add_option("--eps", eps_list, "comma-separated eps list, overrides the config");
  };
  auto* constants = app.add_subcommand("constants", "renormalisation constants per eps");
  auto* moments = app.add_subcommand("moments", "Monte Carlo second moments vs contraction oracle");
  auto* solve = app.add_subcommand("solve", "remainder trajectories, snapshots and manifest");
  auto* converge = app.add_subcommand("converge", "Y distances to the eps = 0 limit");
  auto* validate = app.add_subcommand("validate", "check symbol, potential and config");
  for (auto* s : {constants, moments, solve, converge, validate}) add_common(s);
  moments->add_flag("--summary", summary, "exit nonzero when any |z| > 4");
  solve->add_flag("--resume", resume, "keep verified outputs of an earlier run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    phi4::ExperimentConfig cfg = config_path.empty() ? phi4::ExperimentConfig{} : phi4::load_config(config_path);
    auto* sub = app.get_subcommands().front();
    if (sub->count("--seed")) cfg.seed = seed;
    if (sub->count("--eps")) cfg.eps = parse_eps_list(eps_list);
    if (!sub->count("--threads")) {
      if (const char* env = std::getenv("PHI4_THREADS")) threads = std::atoi(env);
    }
    if (threads < 0) phi4::fail(phi4::ErrorKind::usage, "--threads must be non-negative");
    phi4::set_threads(threads);

    phi4::RunOptions opt;
    opt.out_dir = out_dir.empty() ? cfg.output : out_dir;
    opt.summary = summary;
    opt.resume = resume;
    std::cerr << "# " << phi4::provenance(cfg) << "\n";
    if (sub == constants) return phi4::cmd_constants(cfg, opt, std::cout);
    if (sub == moments) return phi4::cmd_moments(cfg, opt, std::cout);
    if (sub == solve) return phi4::cmd_solve(cfg, opt, std::cout);
    if (sub == converge) return phi4::cmd_converge(cfg, opt, std::cout);
    return phi4::cmd_validate(cfg, opt, std::cout);
  } catch (const phi4::Error& e) {
    std::cerr << "error: " << e.what() << "\nreason=" << phi4::reason(e.kind()) << "\n";
    return phi4::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 20;
  }
}
