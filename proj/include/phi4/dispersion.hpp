#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "phi4/lattice.hpp"

namespace phi4 {

// Radial smoothing symbol Q with the scale eps. eps = 0 selects the analytic
// limit <k>^2 = 1 + 4 pi^2 |k|^2 instead of evaluating Q at a vanishing
// argument.
class DispersionQ {
 public:
  using Fn = std::function<double(double)>;

  DispersionQ(std::string family, std::map<std::string, double> params, Fn eval, double eps);

  static DispersionQ laplacian(double eps = 0.0);
  // Q(z) = z^2 + nu z^4.
  static DispersionQ bilaplacian(double nu, double eps = 0.0);
  // Q(z) = sum_j c[j] z^{2(j+1)}.
  static DispersionQ polynomial(const std::vector<double>& c, double eps = 0.0);
  // Named family with parameters: laplacian | bilaplacian{nu} | polynomial{c1,c2,...}.
  static DispersionQ from_family(const std::string& family, const std::map<std::string, double>& params,
                                 double eps);

  double operator()(double z) const;
  double eps() const { return eps_; }
  DispersionQ with_eps(double eps) const;
  const std::string& family() const { return family_; }
  const std::map<std::string, double>& params() const { return params_; }

  // <k>_eps^2 for |k| = knorm.
  double bracket_sq(double knorm) const;

 private:
  std::string family_;
  std::map<std::string, double> params_;
  Fn eval_;
  double eps_;
};

double bracket_eps(const DispersionQ& Q, const Mode& k);

// <k>_eps^2 for every lattice index.
std::vector<double> bracket_sq_table(const DispersionQ& Q, const FrequencyLattice& grid);

struct SymbolCheck {
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  SymbolCheck normalisation;  // Q(0) = 0, Q''(0)/2 = 1
  SymbolCheck positivity;     // Q > 0 on the sample grid
  SymbolCheck growth;         // Q(z) >= c z^{3+eta} with eta > 0
  double eta_hat = 0.0;       // fitted log-log slope minus 3
  bool pass() const { return normalisation.pass && positivity.pass && growth.pass; }
};

// Checks the symbol assumptions on a log-spaced grid in [1e-3, zmax]. The
// derivative-growth condition is analytic and not checked.
ValidationReport validate_symbol(const DispersionQ& Q, double zmax, int nsamples);

}  // namespace phi4
