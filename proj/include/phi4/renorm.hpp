#pragma once

// Scalar constants: limiting and finite-K variances, the effective coupling,
// chaos coefficients and the renormalisation constants C1, C2, C3.

#include <iosfwd>
#include <vector>

#include "phi4/dispersion.hpp"
#include "phi4/potential.hpp"

namespace phi4 {

// (1/2) int_{R^3} dtheta / Q(2 pi |theta|) by log-decade adaptive quadrature up
// to the radius where the analytic power-law tail drops below tol (relative),
// capped at rmax. Throws growth_violation when the fitted growth exponent of Q
// does not exceed 3.
double sigma2_limit(const DispersionQ& Q, double rmax = 1e8, double tol = 1e-10);

struct Sigma2Eps {
  double value = 0.0;
  double tail_estimate = 0.0;  // power-law estimate of the modes beyond K; inf if Q grows too slowly
};
// (eps/2) sum_{|k|_inf <= K} 1/<k>_eps^2 with Q taken at scale eps.
Sigma2Eps sigma2_eps(const DispersionQ& Q, double eps, int K);

// (1/6) E V''''(N(0, sigma2)).
double coupling_lambda(const Potential& V, double sigma2);
// a_m = E V^{(2m+2)}(N(0, s2)) / (6 lambda (2m-1)!), m = 1..n-1 (index m-1).
std::vector<double> a_coeffs(const Potential& V, double eps, double lambda, double sigma2_eps);
// E V''(N(0, s2)) / (3 lambda eps).
double c1(const Potential& V, double eps, double lambda, double sigma2_eps);

enum class SumMethod { automatic, direct, fft };

// Whether direct summation over p legs at cutoff K fits the time budget.
bool direct_feasible(int p, int K);

// E[I~(X^<>p) o X^<>p] for the free field of Q on |k|_inf <= K:
// (p!/2^p) sum over legs and total momentum in the box. dt > 0 gives the value
// for the exponential left-point Duhamel rule with that step. leg_cut < K
// restricts the legs to a smaller box (truncated free field).
double wick_resonance_mean(const DispersionQ& Q, int p, int K, double dt = 0.0,
                           SumMethod method = SumMethod::automatic, int leg_cut = -1);

// Time integral of the Fourier kernel of G_{eps,m} at external mode k:
// ((2m+1)!/2^{2m}) sum over 2m legs of the resonance weight times
// prod <l_j>^{-2} / (<l+k>^2 + sum <l_j>^2). Direct summation only for k != 0.
double g_kernel_time_integral(const DispersionQ& Q, int m, int K, const Mode& k);

// C2 = sum_m a_m^2/m^2 eps^{2m-2} J_{2m}; C3 = sum_m 3 a_m a_{m+1}/(m(2m+1)) eps^{2m-1} J_{2m+1}.
double c2(const DispersionQ& Q, const Potential& V, double eps, double lambda, int K, double dt = 0.0);
double c3(const DispersionQ& Q, const Potential& V, double eps, double lambda, int K, double dt = 0.0);
double c_total(double lambda, double C1, double C2, double C3);

struct RenormSet {
  double sigma2 = 0.0;
  double sigma2_eps = 0.0;
  double sigma2_eps_tail = 0.0;
  double lambda = 0.0;
  std::vector<double> a_m;
  double C1 = 0.0, C2 = 0.0, C3 = 0.0, C_total = 0.0;
  double eps = 0.0;
  int K = 0;
  double dt = 0.0;  // 0: continuum Duhamel integral
};

// All constants at (eps, K). Requires eps > 0 and a nonzero V.
RenormSet compute_renorm(const DispersionQ& Q, const Potential& V, double eps, int K, double dt = 0.0);

// Constants of the standard Phi^4_3 model with the free field truncated at
// |k|_inf <= min(K, floor(1/eps_cutoff)) (no truncation for eps_cutoff = 0):
// c1 = E X~^2 and c2 = E[I(X~^<>2) o X~^<>2] on the lattice of cutoff K.
struct StandardConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  int cutoff = 0;
};
int truncation_radius(double eps_cutoff, int K);
StandardConstants standard_constants(double eps_cutoff, int K, double dt = 0.0);

// Computational cutoff K = ceil(4/eps).
int default_cutoff(double eps);

// meta, when given, becomes a "# ..." line under the schema tag.
void write_renorm_csv_header(std::ostream& os, const std::string& meta = {});
void write_renorm_csv_row(std::ostream& os, const RenormSet& r);

}  // namespace phi4
