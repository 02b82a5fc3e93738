#include "phi4/renorm.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <limits>
#include <memory>
#include <ostream>

#include <fmt/format.h>

#include "phi4/besov.hpp"
#include "phi4/error.hpp"
#include "phi4/gaussian.hpp"
#include "phi4/kernels.hpp"

namespace phi4 {

namespace {

constexpr double two_pi = 2.0 * M_PI;

struct PowerLaw {
  double p = 0.0;  // exponent
  double c = 0.0;  // prefactor, Q(z) ~ c z^p
};

// Least-squares slope of log Q against log z on [z0, z1].
PowerLaw fit_growth(const DispersionQ& Q, double z0, double z1) {
  const int n = 11;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(z0) + (std::log(z1) - std::log(z0)) * i / (n - 1);
    const double y = std::log(Q(std::exp(x)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  PowerLaw pl;
  pl.p = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  pl.c = Q(z1) / std::pow(z1, pl.p);
  return pl;
}

// 2 pi int_R^inf r^2 / (c (2 pi r)^p) dr.
double radial_tail(const PowerLaw& pl, double R) {
  if (pl.p <= 3.0) return std::numeric_limits<double>::infinity();
  return two_pi * std::pow(R, 3.0 - pl.p) / (pl.c * std::pow(two_pi, pl.p) * (pl.p - 3.0));
}

struct GslIntegrand {
  const DispersionQ* Q;
};

double radial_integrand(double r, void* params) {
  const auto* g = static_cast<GslIntegrand*>(params);
  if (r == 0.0) return 1.0 / (two_pi * two_pi);
  return r * r / (*g->Q)(two_pi * r);
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void require_lambda(double lambda) {
  if (lambda == 0.0) fail(ErrorKind::domain, "coupling lambda is zero");
}

}  // namespace

double sigma2_limit(const DispersionQ& Q, double rmax, double tol) {
  const PowerLaw global = fit_growth(Q, 1e3, 1e4);
  if (!(global.p > 3.0 + 1e-6))
    fail(ErrorKind::growth_violation,
         fmt::format("fitted growth exponent {:.4f} does not exceed 3; the variance integral diverges", global.p));

  gsl_set_error_handler_off();
  std::unique_ptr<gsl_integration_workspace, void (*)(gsl_integration_workspace*)> ws(
      gsl_integration_workspace_alloc(1000), gsl_integration_workspace_free);
  GslIntegrand params{&Q};
  gsl_function F{&radial_integrand, &params};

  double sum = 0.0;
  double lo = 0.0, hi = 1e-3;
  while (true) {
    double val = 0.0, err = 0.0;
    const int status = gsl_integration_qag(&F, lo, hi, 0.0, 0.1 * tol, 1000, GSL_INTEG_GAUSS61, ws.get(), &val, &err);
    if (status != GSL_SUCCESS && status != GSL_EROUND)
      fail(ErrorKind::symbol_evaluation, fmt::format("radial quadrature failed on [{}, {}]", lo, hi));
    sum += two_pi * val;
    if (hi >= 1.0) {
      // local exponent over one octave
      const double z = two_pi * hi;
      PowerLaw local;
      local.p = std::log(Q(2.0 * z) / Q(z)) / std::log(2.0);
      local.c = Q(z) / std::pow(z, local.p);
      const double tail = radial_tail(local, hi);
      if (std::isfinite(tail) && tail < tol * sum) return sum + tail;
      if (hi >= rmax) return sum + radial_tail(global, hi);
    }
    lo = hi;
    hi *= 10.0;
  }
}

Sigma2Eps sigma2_eps(const DispersionQ& Q, double eps, int K) {
  if (!(eps > 0.0)) fail(ErrorKind::domain, "sigma2_eps requires eps > 0");
  if (K < 0) fail(ErrorKind::domain, "negative cutoff");
  const DispersionQ Qe = Q.with_eps(eps);
  const std::vector<double> a = bracket_sq_table(Qe, FrequencyLattice::minimal(K));
  double s = 0.0;
  for (double x : a) s += 1.0 / x;
  Sigma2Eps out;
  out.value = 0.5 * eps * s;
  // Modes beyond the cube lie outside the inscribed ball of radius K + 1/2;
  // in theta = eps k the sum is a Riemann sum of the radial tail.
  const PowerLaw pl = fit_growth(Q, 1e3, 1e4);
  out.tail_estimate = radial_tail(pl, eps * (K + 0.5));
  return out;
}

double coupling_lambda(const Potential& V, double sigma2) {
  if (sigma2 < 0.0) fail(ErrorKind::domain, "negative variance");
  return gaussian_expectation(V.derivative(4), sigma2) / 6.0;
}

std::vector<double> a_coeffs(const Potential& V, double /*eps*/, double lambda, double sigma2_eps) {
  require_lambda(lambda);
  std::vector<double> a;
  for (int m = 1; m <= V.n() - 1; ++m)
    a.push_back(gaussian_expectation(V.derivative(2 * m + 2), sigma2_eps) / (6.0 * lambda * factorial(2 * m - 1)));
  return a;
}

double c1(const Potential& V, double eps, double lambda, double sigma2_eps) {
  require_lambda(lambda);
  if (!(eps > 0.0)) fail(ErrorKind::domain, "C1 requires eps > 0");
  return gaussian_expectation(V.derivative(2), sigma2_eps) / (3.0 * lambda * eps);
}

bool direct_feasible(int p, int K) {
  switch (p) {
    case 1: return K <= 200;
    case 2: return K <= 16;
    case 3: return K <= 3;
    case 4: return K <= 2;
    default: return K <= 1;
  }
}

double wick_resonance_mean(const DispersionQ& Q, int p, int K, double dt, SumMethod method, int leg_cut) {
  if (p < 1) fail(ErrorKind::domain, "resonance mean needs at least one leg");
  if (dt < 0.0) fail(ErrorKind::domain, "negative time step");
  const kernels::BoxRates r = kernels::BoxRates::from_symbol(Q, K, leg_cut);
  if (method == SumMethod::automatic) method = direct_feasible(p, K) ? SumMethod::direct : SumMethod::fft;
  if (method == SumMethod::direct && !direct_feasible(p, K))
    fail(ErrorKind::infeasible, fmt::format("direct summation with {} legs at K = {} is infeasible", p, K));
  const double raw = method == SumMethod::direct ? kernels::wick_resonance_direct_omp(r, p, dt)
                                                 : kernels::wick_resonance_fft_omp(r, p, dt);
  return factorial(p) / std::pow(2.0, p) * raw;
}

double g_kernel_time_integral(const DispersionQ& Q, int m, int K, const Mode& k) {
  if (m < 1) fail(ErrorKind::domain, "kernel index m must be >= 1");
  const int p = 2 * m;
  if (k == Mode{0, 0, 0}) return (2 * m + 1) * wick_resonance_mean(Q, p, K);
  if (!direct_feasible(p, K))
    fail(ErrorKind::infeasible, fmt::format("kernel integral with {} legs at K = {} is infeasible", p, K));
  const FrequencyLattice box = FrequencyLattice::minimal(K);
  const std::vector<double> a = bracket_sq_table(Q, box);
  const DyadicPartition part(K);
  const int jtop = part.jmax() + 2;
  auto res_weight = [&](double r1, double r2) {
    double w = 0.0;
    for (int i = -1; i <= jtop; ++i)
      for (int j = std::max(-1, i - 1); j <= std::min(jtop, i + 1); ++j)
        w += DyadicPartition::weight(i, r1) * DyadicPartition::weight(j, r2);
    return w;
  };
  // Odometer over p legs in the box.
  std::vector<std::size_t> idx(std::size_t(p), 0);
  double total = 0.0;
  while (true) {
    Mode l{0, 0, 0};
    double S = 0.0, prod = 1.0;
    for (std::size_t i : idx) {
      const Mode li = box.mode(i);
      for (int c = 0; c < 3; ++c) l[c] += li[c];
      S += a[i];
      prod *= a[i];
    }
    if (box.contains(l)) {
      const Mode lk{l[0] + k[0], l[1] + k[1], l[2] + k[2]};
      const double w = res_weight(std::sqrt(norm2(lk)), std::sqrt(norm2(l)));
      if (w != 0.0) total += w / (prod * (Q.bracket_sq(std::sqrt(norm2(lk))) + S));
    }
    std::size_t d = 0;
    for (; d < idx.size(); ++d) {
      if (++idx[d] < box.size()) break;
      idx[d] = 0;
    }
    if (d == idx.size()) break;
  }
  return factorial(2 * m + 1) / std::pow(2.0, 2 * m) * total;
}

double c2(const DispersionQ& Q, const Potential& V, double eps, double lambda, int K, double dt) {
  const double s2 = sigma2_eps(Q, eps, K).value;
  const std::vector<double> a = a_coeffs(V, eps, lambda, s2);
  const DispersionQ Qe = Q.with_eps(eps);
  double s = 0.0;
  for (int m = 1; m <= int(a.size()); ++m) {
    const double am = a[std::size_t(m - 1)];
    if (am == 0.0) continue;
    s += am * am / double(m * m) * std::pow(eps, 2 * m - 2) * wick_resonance_mean(Qe, 2 * m, K, dt);
  }
  return s;
}

double c3(const DispersionQ& Q, const Potential& V, double eps, double lambda, int K, double dt) {
  const double s2 = sigma2_eps(Q, eps, K).value;
  const std::vector<double> a = a_coeffs(V, eps, lambda, s2);
  const DispersionQ Qe = Q.with_eps(eps);
  double s = 0.0;
  for (int m = 1; m + 1 <= int(a.size()); ++m) {
    const double coef = 3.0 * a[std::size_t(m - 1)] * a[std::size_t(m)] / double(m * (2 * m + 1));
    if (coef == 0.0) continue;
    s += coef * std::pow(eps, 2 * m - 1) * wick_resonance_mean(Qe, 2 * m + 1, K, dt);
  }
  return s;
}

double c_total(double lambda, double C1, double C2, double C3) {
  return 3.0 * lambda * C1 - 9.0 * lambda * lambda * C2 - 6.0 * lambda * lambda * C3;
}

RenormSet compute_renorm(const DispersionQ& Q, const Potential& V, double eps, int K, double dt) {
  if (V.is_zero()) fail(ErrorKind::domain, "renormalisation constants need a nonzero potential");
  RenormSet r;
  r.eps = eps;
  r.K = K;
  r.dt = dt;
  r.sigma2 = sigma2_limit(Q);
  const Sigma2Eps se = sigma2_eps(Q, eps, K);
  r.sigma2_eps = se.value;
  r.sigma2_eps_tail = se.tail_estimate;
  r.lambda = coupling_lambda(V, r.sigma2);
  r.a_m = a_coeffs(V, eps, r.lambda, r.sigma2_eps);
  r.C1 = c1(V, eps, r.lambda, r.sigma2_eps);
  r.C2 = c2(Q, V, eps, r.lambda, K, dt);
  r.C3 = c3(Q, V, eps, r.lambda, K, dt);
  r.C_total = c_total(r.lambda, r.C1, r.C2, r.C3);
  return r;
}

int truncation_radius(double eps_cutoff, int K) {
  if (eps_cutoff < 0.0) fail(ErrorKind::domain, "negative truncation scale");
  if (eps_cutoff == 0.0) return K;
  return std::min(K, int(std::floor(1.0 / eps_cutoff + 1e-12)));
}

StandardConstants standard_constants(double eps_cutoff, int K, double dt) {
  StandardConstants s;
  s.cutoff = truncation_radius(eps_cutoff, K);
  const DispersionQ lap = DispersionQ::laplacian(0.0);
  const std::vector<double> a = bracket_sq_table(lap, FrequencyLattice::minimal(s.cutoff));
  for (double x : a) s.c1 += 0.5 / x;
  s.c2 = wick_resonance_mean(lap, 2, K, dt, SumMethod::automatic, s.cutoff);
  return s;
}

int default_cutoff(double eps) {
  if (!(eps > 0.0)) fail(ErrorKind::domain, "default cutoff needs eps > 0");
  return int(std::ceil(4.0 / eps - 1e-9));
}

void write_renorm_csv_header(std::ostream& os, const std::string& meta) {
  os << "# schema=1\n";
  if (!meta.empty()) os << "# " << meta << "\n";
  os << "# K rule: ceil(4/eps) unless overridden; the cutoff is a computational choice\n"
     << "eps,K,sigma2_eps,C1,C2,C3,C_total,lambda\n";
}

void write_renorm_csv_row(std::ostream& os, const RenormSet& r) {
  os << fmt::format("{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.eps, r.K, r.sigma2_eps, r.C1, r.C2,
                    r.C3, r.C_total, r.lambda);
}

}  // namespace phi4
