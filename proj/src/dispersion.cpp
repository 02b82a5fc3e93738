#include "phi4/dispersion.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "phi4/error.hpp"

namespace phi4 {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double checked_eval(const DispersionQ::Fn& f, double z) {
  const double q = f(z);
  if (!std::isfinite(q)) {
    std::ostringstream os;
    os << "Q(" << z << ") is not finite";
    fail(ErrorKind::symbol_evaluation, os.str());
  }
  return q;
}

}  // namespace

DispersionQ::DispersionQ(std::string family, std::map<std::string, double> params, Fn eval, double eps)
    : family_(std::move(family)), params_(std::move(params)), eval_(std::move(eval)), eps_(eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) fail(ErrorKind::domain, "eps must lie in [0,1]");
}

DispersionQ DispersionQ::laplacian(double eps) {
  return DispersionQ("laplacian", {}, [](double z) { return z * z; }, eps);
}

DispersionQ DispersionQ::bilaplacian(double nu, double eps) {
  return DispersionQ("bilaplacian", {{"nu", nu}}, [nu](double z) { return z * z + nu * z * z * z * z; },
                     eps);
}

DispersionQ DispersionQ::polynomial(const std::vector<double>& c, double eps) {
  std::map<std::string, double> params;
  for (std::size_t j = 0; j < c.size(); ++j) params["c" + std::to_string(j + 1)] = c[j];
  return DispersionQ(
      "polynomial", std::move(params),
      [c](double z) {
        const double z2 = z * z;
        double acc = 0.0;
        for (std::size_t j = c.size(); j-- > 0;) acc = (acc + c[j]) * z2;
        return acc;
      },
      eps);
}

DispersionQ DispersionQ::from_family(const std::string& family, const std::map<std::string, double>& params,
                                     double eps) {
  if (family == "laplacian") return laplacian(eps);
  if (family == "bilaplacian") {
    auto it = params.find("nu");
    if (it == params.end()) fail(ErrorKind::config, "bilaplacian symbol needs parameter nu");
    return bilaplacian(it->second, eps);
  }
  if (family == "polynomial") {
    std::vector<double> c;
    for (int j = 1;; ++j) {
      auto it = params.find("c" + std::to_string(j));
      if (it == params.end()) break;
      c.push_back(it->second);
    }
    if (c.empty()) fail(ErrorKind::config, "polynomial symbol needs parameters c1, c2, ...");
    return polynomial(c, eps);
  }
  fail(ErrorKind::config, "unknown symbol family '" + family + "'");
}

double DispersionQ::operator()(double z) const { return checked_eval(eval_, z); }

DispersionQ DispersionQ::with_eps(double eps) const {
  DispersionQ q = *this;
  if (!(eps >= 0.0 && eps <= 1.0)) fail(ErrorKind::domain, "eps must lie in [0,1]");
  q.eps_ = eps;
  return q;
}

double DispersionQ::bracket_sq(double knorm) const {
  if (eps_ == 0.0) return 1.0 + two_pi * two_pi * knorm * knorm;
  const double z = two_pi * eps_ * knorm;
  const double q = (*this)(z);
  if (q < 0.0) {
    std::ostringstream os;
    os << "Q(" << z << ") = " << q << " < 0";
    fail(ErrorKind::domain, os.str());
  }
  return 1.0 + q / (eps_ * eps_);
}

double bracket_eps(const DispersionQ& Q, const Mode& k) { return std::sqrt(Q.bracket_sq(norm2(k))); }

std::vector<double> bracket_sq_table(const DispersionQ& Q, const FrequencyLattice& grid) {
  // Radial symbol: evaluate once per distinct |k|^2.
  const int K = grid.K();
  std::vector<double> by_r2(std::size_t(3 * K * K + 1), -1.0);
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Mode k = grid.mode(i);
    const int r2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (by_r2[std::size_t(r2)] < 0.0) by_r2[std::size_t(r2)] = Q.bracket_sq(std::sqrt(double(r2)));
    out[i] = by_r2[std::size_t(r2)];
  }
  return out;
}

ValidationReport validate_symbol(const DispersionQ& Q, double zmax, int nsamples) {
  if (!(zmax > 1.0)) fail(ErrorKind::domain, "zmax must exceed 1");
  if (nsamples < 100) fail(ErrorKind::domain, "need at least 100 samples");
  ValidationReport rep;

  {
    const double q0 = Q(0.0);
    const double h = 1e-2;
    const double r1 = Q(h) / (h * h);
    const double r2 = Q(h / 2) / (h * h / 4);
    const double curv = (4.0 * r2 - r1) / 3.0;  // Richardson limit of Q(h)/h^2
    rep.normalisation.pass = std::abs(q0) <= 1e-14 && std::abs(curv - 1.0) <= 1e-6;
    std::ostringstream os;
    os << "Q(0)=" << q0 << " Q''(0)/2~" << curv;
    rep.normalisation.detail = os.str();
  }

  const double zmin = 1e-3;
  std::vector<double> lz, lq;
  bool positive = true;
  double first_bad = 0.0;
  for (int i = 0; i < nsamples; ++i) {
    const double z = zmin * std::pow(zmax / zmin, double(i) / (nsamples - 1));
    const double q = Q(z);
    if (!(q > 0.0)) {
      if (positive) first_bad = z;
      positive = false;
      continue;
    }
    if (z >= 1.0) {
      lz.push_back(std::log(z));
      lq.push_back(std::log(q));
    }
  }
  rep.positivity.pass = positive;
  rep.positivity.detail = positive ? "Q>0 on sample grid" : "non-positive value at z=" + std::to_string(first_bad);

  if (!positive || lz.size() < 2) {
    rep.growth.pass = false;
    rep.growth.detail = "growth exponent not evaluable";
    return rep;
  }
  const double n = double(lz.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lz.size(); ++i) {
    mx += lz[i];
    my += lq[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lz.size(); ++i) {
    sxy += (lz[i] - mx) * (lq[i] - my);
    sxx += (lz[i] - mx) * (lz[i] - mx);
  }
  rep.eta_hat = sxy / sxx - 3.0;
  rep.growth.pass = rep.eta_hat > 0.0;
  std::ostringstream os;
  os << "fitted exponent " << sxy / sxx << " (eta_hat=" << rep.eta_hat << ")";
  rep.growth.detail = os.str();
  return rep;
}

}  // namespace phi4
