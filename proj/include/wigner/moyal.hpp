// Signed Moyal residual beyond classical Liouville transport, its Hahn-Jordan
// split and the residual-strength diagnostics.
#pragma once

#include <optional>

#include "wigner/fields.hpp"
#include "wigner/potential.hpp"

namespace wigner {

/// Fourier multiplier of the residual along p at position q:
/// sum_{n>=1} (-1)^n / (2n+1)! (1/2)^{2n} V^{(2n+1)}(q) (ik)^{2n+1}.
/// Purely imaginary; the Nyquist entry is zero.
Eigen::VectorXcd residual_multiplier(const GridSpec& grid, const Potential& v, double q);

/// Q[W]; exactly zero for quadratic V. For V = q^2/2 + lambda q^4 this is
/// -lambda q d^3 W / dp^3.
PhaseField moyal_residual(const PhaseField& w, const Potential& v);

template <typename Scalar>
struct SignedSplitT {
  PhaseFieldT<Scalar> positive_part;
  PhaseFieldT<Scalar> negative_part;

  Scalar source_mass() const { return integrate(positive_part); }
  Scalar sink_mass() const { return integrate(negative_part); }
  Scalar activity() const { return source_mass() + sink_mass(); }
  PhaseFieldT<Scalar> reconstruct() const { return positive_part - negative_part; }
};

using SignedSplit = SignedSplitT<double>;

/// K+ = max(K, 0), K- = max(-K, 0).
template <typename Scalar>
SignedSplitT<Scalar> hahn_jordan_split(const PhaseFieldT<Scalar>& k) {
  return {PhaseFieldT<Scalar>(k.grid, k.values.cwiseMax(Scalar(0))),
          PhaseFieldT<Scalar>(k.grid, (-k.values).cwiseMax(Scalar(0)))};
}

struct ResidualDiagnostics {
  double chi_q = 0.0;
  std::optional<double> epsilon_q;  // empty when ||L_cl W|| = 0
  double activity = 0.0;            // sum |Q[W]| dq dp
  double source_mass = 0.0;
  double sink_mass = 0.0;
  double residual_norm = 0.0;       // ||Q[W]||_2
  double classical_norm = 0.0;      // ||L_cl W||_2
};

/// chi_Q = ||Q W|| / (||L_cl W|| + ||Q W||) with chi_Q = 0 when both vanish.
ResidualDiagnostics residual_diagnostics(const PhaseField& w, const Potential& v);

struct MinimalityResult {
  bool holds = false;
  double excess = 0.0;  // sum (K1 + K2 - |K|) dq dp
};

/// Checks K1 + K2 >= |K| pointwise for a positive decomposition K = K1 - K2.
/// Throws when K1 or K2 is negative or K1 - K2 differs from K by more than
/// 1e-12.
MinimalityResult minimality_check(const PhaseField& k, const PhaseField& k1, const PhaseField& k2);

}  // namespace wigner
