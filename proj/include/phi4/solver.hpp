#pragma once

// Paracontrolled remainder system for (v, w) with Phi = <1> - lambda <3'0> + v + w,
// integrated with the exponential Euler rule on the noise time grid.

#include <array>
#include <vector>

#include "phi4/diagrams.hpp"
#include "phi4/error.hpp"
#include "phi4/field.hpp"
#include "phi4/potential.hpp"

namespace phi4 {

enum class SolverMode { sequential, picard };

struct SolverConfig {
  double lambda = 1.0;
  double dt = 1e-3;
  double T = 0.1;
  double kappa = 0.05;
  double delta0 = 0.0;  // 0 selects kappa / (2n)
  int picard_iters = 50;
  double picard_tol = 1e-8;
  SolverMode mode = SolverMode::sequential;
  bool operator==(const SolverConfig&) const = default;
};
// delta0 in (0, kappa/n) after defaulting; dt > 0; T > 0.
SolverConfig resolved(const SolverConfig& c, int n);

struct RemainderPair {
  std::vector<double> t_grid;
  std::vector<FourierField> v, w;
};

// Thrown when a mode stops being finite; carries the trajectory up to the
// last finite state.
class BlowUp : public Error {
 public:
  BlowUp(double t, RemainderPair partial);
  double time() const { return t_; }
  const RemainderPair& partial() const { return partial_; }

 private:
  double t_;
  RemainderPair partial_;
};

// V'(x + y) - sum_{j <= 3} V^{(j+1)}(x) y^j / j!, summed as the exact tail of
// the Taylor expansion.
double taylor_remainder(const Potential& V, double x, double y);

// F_0..F_3 from the noise at grid index n.
std::array<FourierField, 4> coeffs_F(double lambda, const EnhancedNoise& U, std::size_t n);

// Inputs of G at one time beyond u and the noise.
struct GContext {
  const FourierField* psi = nullptr;  // <1> for eps > 0; the V' remainder term is dropped when null
  FourierField h;                     // e^{t(L-1)} <2'0>(0)
  FourierField I2;                    // I(<2'>)(t) = <2'0>(t) - h(t)
  FourierField comm;                  // [I, <](u - lambda <3'0>, <2'>)(t)
};
FourierField g_map(double lambda, const EnhancedNoise& U, std::size_t n, const FourierField& u,
                   const std::array<FourierField, 4>& F, const GContext& ctx);

// Zero noise on a grid, for linear runs.
EnhancedNoise zero_noise(const FrequencyLattice& grid, const std::vector<double>& t_grid, const DispersionQ& Qe);

// Trajectory on the noise grid up to T (T <= last grid time). Throws BlowUp, or
// non_contraction when Picard distances grow two sweeps in a row.
RemainderPair solve(const SolverConfig& config, const EnhancedNoise& U, const FourierField& v0,
                    const FourierField& w0);

// Grid version of the Y norm of (v, w); eps = 0 selects the limit norm. The
// Hoelder seminorm uses at most max_holder_points evenly strided grid times.
double y_norm(const RemainderPair& P, double eps, double T, double kappa, double delta0,
              std::size_t max_holder_points = 64);
RemainderPair difference(const RemainderPair& a, const RemainderPair& b);

std::vector<FourierField> reconstruct_phi(const EnhancedNoise& U, const RemainderPair& P, double lambda);

// Exponential Euler for dPhi = (L - 1)Phi - eps^{-3/2} V'(sqrt(eps) Phi) + xi + C Phi,
// driven by the OU increments of U.free_field (same noise path).
std::vector<FourierField> brute_force_reference(const EnhancedNoise& U, const Potential& V, double C,
                                                const FourierField& phi0, double T);

// max_n ||a_n - b_n||_2 / ||b_n||_2.
double relative_l2(const std::vector<FourierField>& a, const std::vector<FourierField>& b);

}  // namespace phi4
