#include "wigner/moyal.hpp"

#include <cmath>

#include "wigner/carrier.hpp"
#include "wigner/spectral.hpp"

namespace wigner {

Eigen::VectorXcd residual_multiplier(const GridSpec& grid, const Potential& v, double q) {
  const Eigen::VectorXd k = fft_wavenumbers(grid.n_p, grid.dp);
  Eigen::VectorXcd m = Eigen::VectorXcd::Zero(grid.n_p);
  double factorial = 1.0;  // (2n+1)!
  double half_pow = 1.0;   // (1/2)^{2n}
  for (int n = 1; 2 * n + 1 <= v.degree(); ++n) {
    factorial *= (2.0 * n) * (2.0 * n + 1.0);
    half_pow *= 0.25;
    const double coeff = (n % 2 == 0 ? 1.0 : -1.0) / factorial * half_pow *
                         v.derivative(2 * n + 1, q);
    if (coeff == 0.0) continue;
    const int order = 2 * n + 1;
    for (int j = 0; j < grid.n_p; ++j) m(j) += coeff * std::pow(cdouble(0.0, k(j)), order);
  }
  m(grid.n_p / 2) = 0.0;
  return m;
}

PhaseField moyal_residual(const PhaseField& w, const Potential& v) {
  if (v.degree() < 3) return PhaseField(w.grid);
  const GridSpec& g = w.grid;
  return apply_p_multiplier(w, [&](int i) { return residual_multiplier(g, v, g.q(i)); });
}

ResidualDiagnostics residual_diagnostics(const PhaseField& w, const Potential& v) {
  ResidualDiagnostics d;
  const PhaseField residual = moyal_residual(w, v);
  const PhaseField classical = apply_classical_generator(w, v);
  d.residual_norm = l2_norm(residual);
  d.classical_norm = l2_norm(classical);
  const SignedSplit split = hahn_jordan_split(residual);
  d.source_mass = split.source_mass();
  d.sink_mass = split.sink_mass();
  d.activity = l1_norm(residual);
  const double denom = d.classical_norm + d.residual_norm;
  d.chi_q = denom > 0.0 ? d.residual_norm / denom : 0.0;
  if (d.classical_norm > 0.0) d.epsilon_q = d.residual_norm / d.classical_norm;
  return d;
}

MinimalityResult minimality_check(const PhaseField& k, const PhaseField& k1, const PhaseField& k2) {
  require_same_grid(k.grid, k1.grid, "minimality_check");
  require_same_grid(k.grid, k2.grid, "minimality_check");
  if (k1.values.minCoeff() < 0.0 || k2.values.minCoeff() < 0.0) {
    throw Error("minimality_check: decomposition parts must be nonnegative");
  }
  if ((k1.values - k2.values - k.values).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error("minimality_check: K1 - K2 does not reproduce K");
  }
  const PhaseField::Matrix gap = k1.values + k2.values - k.values.cwiseAbs();
  MinimalityResult r;
  r.holds = gap.minCoeff() >= -1e-12;
  r.excess = gap.sum() * k.grid.cell_area();
  return r;
}

}  // namespace wigner
