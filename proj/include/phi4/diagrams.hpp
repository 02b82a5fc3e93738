#pragma once

// The seven stochastic objects driving the remainder system, their standard
// Phi^4_3 counterparts, Wick-contraction second moments and the Monte Carlo
// checks against them.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "phi4/dispersion.hpp"
#include "phi4/field.hpp"
#include "phi4/potential.hpp"
#include "phi4/renorm.hpp"
#include "phi4/rng.hpp"

namespace phi4 {

// Components in the order <0'>, <1'>, <2'>, <3'0>, <3'1'>, <2'2'>, <3'2'>.
enum class Tree : int { zero = 0, one, two, three0, three1, two2, three2 };
inline constexpr std::array<Tree, 7> all_trees{Tree::zero,   Tree::one,    Tree::two,   Tree::three0,
                                               Tree::three1, Tree::two2, Tree::three2};
const char* tree_tag(Tree t);
// Besov exponent of each component: -k, -1/2-k, -1-k, 1/2-k, -k, -k, -1/2-k.
double tree_regularity(Tree t, double kappa);

// Integration from -T towards t = 0 that stands in for the stationary
// integral from -infinity. dt <= 0 uses the grid step (exact discrete
// stationarity); otherwise the larger of dt and the grid step.
struct BurnIn {
  double T = 10.0;
  double dt = 0.01;
  bool operator==(const BurnIn&) const = default;
};

struct EnhancedNoise {
  std::vector<double> t_grid;
  std::array<std::vector<FourierField>, 7> comp;
  std::vector<FourierField> free_field;  // <1> on t_grid
  std::vector<FourierField> c20;         // <2'0> on t_grid, h(0) = c20[0]
  double eps = 0.0;                      // 0 for the standard model
  double lambda = 1.0;
  NoiseSeed seed;
  std::uint64_t sample = 0;
  BurnIn burn;
  std::optional<RenormSet> constants;         // eps > 0
  std::optional<StandardConstants> standard;  // eps = 0
  DispersionQ Q = DispersionQ::laplacian();   // symbol at scale eps
  std::vector<double> potential;              // even coefficients of V, empty in the limit

  const std::vector<FourierField>& operator[](Tree t) const { return comp[std::size_t(t)]; }
  const FourierField& at(Tree t, std::size_t n) const { return comp[std::size_t(t)].at(n); }
  const FrequencyLattice& grid() const { return free_field.front().grid(); }
  std::size_t steps() const { return t_grid.size(); }
};

// Objects at scale eps from the OU free field of Q. The constants must come
// from compute_renorm at the same (eps, K); when their dt is nonzero it must
// equal the grid step.
EnhancedNoise build_upsilon(const NoiseSeed& seed, std::uint64_t sample, const FrequencyLattice& grid,
                            const DispersionQ& Q, const Potential& V, double eps, const std::vector<double>& t_grid,
                            const RenormSet& renorm, const BurnIn& burn = {});

// Standard trees for the Laplacian with the free field truncated at
// |k|_inf <= floor(1/eps_cutoff) (eps_cutoff = 0: no truncation). Shares the
// noise counters with build_upsilon, so equal seeds couple the two. The
// constants use the grid step when burn.dt <= 0 and the continuum otherwise.
EnhancedNoise build_limit_upsilon(const NoiseSeed& seed, std::uint64_t sample, const FrequencyLattice& grid,
                                  double eps_cutoff, const std::vector<double>& t_grid, const BurnIn& burn = {});

enum class MomentSymbol { free, wick, one_prime, two_prime, three0 };
const char* moment_tag(MomentSymbol s, int power);

struct MomentSpec {
  MomentSymbol symbol = MomentSymbol::free;
  int power = 1;  // Wick power for MomentSymbol::wick
  Mode k{0, 0, 0};
  double lag = 0.0;  // |t - s|; nonzero only for free and wick
};

// Scalar data the oracle needs for the primed objects.
struct ObjectConstants {
  double lambda = 1.0;
  std::vector<double> a_m;
};
ObjectConstants object_constants(const DispersionQ& Q, const Potential& V, double eps, int K);

// E[tau^(t,k) conj tau^(s,k)] by Wick contraction over the box |l|_inf <= K.
// dt > 0 gives the exponential left-point Duhamel value for <3'0>.
double second_moment_oracle(const MomentSpec& spec, const DispersionQ& Q, double eps, int K,
                            const ObjectConstants& c, double dt = 0.0);

struct MomentReport {
  std::string symbol;
  Mode k{0, 0, 0};
  std::size_t samples = 0;
  double mean = 0.0;
  std::optional<double> se;  // unavailable for a single sample
  double oracle = 0.0;
  std::optional<double> z;
};
// Jackknife standard error of the sample mean.
MomentReport summarize_moment(std::string symbol, const Mode& k, const std::vector<double>& values, double oracle);

struct McOptions {
  double dt = 0.01;  // Duhamel step for <3'0>
  BurnIn burn{10.0, 0.0};
};
// Monte Carlo |tau^(k)|^2 (or the lagged product) over M independent samples.
MomentReport mc_moment(const MomentSpec& spec, const DispersionQ& Q, const Potential& V, double eps, int K,
                       std::size_t M, const NoiseSeed& seed, const McOptions& opt = {});

void write_moment_csv_header(std::ostream& os, const std::string& meta = {});
void write_moment_csv_row(std::ostream& os, const MomentReport& r);

struct RegularityReport {
  double sup = 0.0;
  Mode argmax{0, 0, 0};
  std::vector<double> shells;  // max weighted moment per dyadic shell of |k|
  double growth = 0.0;         // largest shell value over the first one
  bool consistent = true;      // growth <= 4
};
// sup_k <k>^{d + 2 alpha} m(k) for per-mode second moments m indexed like the lattice.
RegularityReport regularity_diagnostic(const FrequencyLattice& grid, const std::vector<double>& moments, double alpha,
                                       int d = 3);

// Sum over components of sup_{t <= T} ||tau(t)||_{reg} plus the grid Hoelder-1/8
// seminorm of <3'0> in B^{1/4 - kappa}.
double x_norm(const EnhancedNoise& U, double T, double kappa = 0.05);

}  // namespace phi4
