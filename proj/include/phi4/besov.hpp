#pragma once

#include <iosfwd>
#include <vector>

#include "phi4/dispersion.hpp"
#include "phi4/field.hpp"

namespace phi4 {

// Littlewood-Paley partition built from a C^2 radial step psi (quintic
// smoothstep between r = 0.8 and r = 1.3): chi_tilde = psi, chi(r) =
// psi(r/2) - psi(r). Then supp chi_tilde is inside B(0, 4/3), supp chi inside
// B(0, 8/3) minus B(0, 3/4), and the dyadic sum telescopes to 1.
class DyadicPartition {
 public:
  static constexpr double inner = 0.8;
  static constexpr double outer = 1.3;

  explicit DyadicPartition(int K);

  // Smallest j >= 0 with 2^j >= 8K/3.
  int jmax() const { return jmax_; }
  int nblocks() const { return jmax_ + 2; }

  static double psi(double r);
  static double chi_tilde(double r) { return psi(r); }
  static double chi(double r) { return psi(0.5 * r) - psi(r); }
  // chi_j(r): chi_tilde for j = -1, chi(r / 2^j) for j >= 0.
  static double weight(int j, double r);

 private:
  int jmax_;
};

// Per-block sup norms b_j = ||Delta_j f||_inf on the padded grid, j = -1..jmax.
struct BesovProfile {
  std::vector<double> b;
  double norm(double alpha) const;
  void write_csv(std::ostream& os) const;
};

// Block filter values chi_j(k) for every lattice index, shared per K.
const std::vector<double>& block_weights(const FrequencyLattice& grid, int j);

FourierField block(const FourierField& f, int j);
BesovProfile besov_profile(const FourierField& f);
double besov_norm(const FourierField& f, double alpha);

struct ParaSplit {
  FourierField lt;   // f < g
  FourierField gt;   // f > g
  FourierField res;  // f o g
};

ParaSplit para_split(const FourierField& f, const FourierField& g);
FourierField para_lt(const FourierField& f, const FourierField& g);
FourierField para_gt(const FourierField& f, const FourierField& g);
FourierField resonance(const FourierField& f, const FourierField& g);

// Com(f, g, h) = (f < g) o h - f (g o h).
FourierField commutator_com(const FourierField& f, const FourierField& g, const FourierField& h);

// e^{t(L-1)}(f < g) - f < e^{t(L-1)} g.
FourierField heat_para_commutator(const FourierField& f, const FourierField& g, const DispersionQ& Q, double t);

// Duhamel integral from t_grid[0] with the exponential left-endpoint rule:
// I(t_{n+1}) = e^{-dt a} I(t_n) + (1 - e^{-dt a})/a f(t_n), I(t_0) = 0.
std::vector<FourierField> duhamel_integral(const std::vector<FourierField>& f_traj, const DispersionQ& Q,
                                           const std::vector<double>& t_grid);

// I(f < g)(t) - f(t) < I(g)(t) on the grid.
std::vector<FourierField> duhamel_para_commutator(const std::vector<FourierField>& f_traj,
                                                  const std::vector<FourierField>& g_traj, const DispersionQ& Q,
                                                  const std::vector<double>& t_grid);

}  // namespace phi4
