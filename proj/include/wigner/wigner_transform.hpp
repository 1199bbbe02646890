// Wigner transform W(q,p) = (1/2pi) int dy e^{-ipy} psi(q+y/2) psi*(q-y/2),
// its marginals, Weyl expectations and inverse.
#pragma once

#include <functional>

#include "wigner/fields.hpp"

namespace wigner {

/// psi resampled on the half-step grid x_m = (m - n_q) dq/2, m in [0, 2 n_q),
/// by band-limited (spectral) interpolation. Even entries are the original
/// samples.
Eigen::VectorXcd half_step_samples(const WaveField& psi);

/// Chord products f(q_i, y_k) = psi(q_i + y_k/2) psi*(q_i - y_k/2), with psi
/// taken as zero outside the position domain. Rows are q, columns are y.
Eigen::MatrixXcd chord_products(const WaveField& psi, const GridSpec& grid);

/// FFT evaluation of the y -> p integral per q row.
PhaseField wigner_from_wavefunction(const WaveField& psi, const GridSpec& grid);

/// Same quadrature evaluated as a direct O(n_q n_y n_p) double sum. Kept as a
/// slow cross-check of the FFT path.
PhaseField wigner_direct_quadrature(const WaveField& psi, const GridSpec& grid);

/// Largest imaginary part left by the FFT path before it is discarded.
double wigner_imaginary_residue(const WaveField& psi, const GridSpec& grid);

struct Marginals {
  Eigen::VectorXd position;  // int dp W, length n_q
  Eigen::VectorXd momentum;  // int dq W, length n_p
};

Marginals marginals(const PhaseField& w);

using WeylSymbol = std::function<double(double q, double p)>;

/// int dq dp W(q,p) A(q,p).
double weyl_expectation(const PhaseField& w, const WeylSymbol& symbol);

/// rho(x, x') = int dp e^{ip(x-x')} W((x+x')/2, p) on the position grid.
/// Midpoints (x+x')/2 that fall between grid rows use the half-step rows
/// obtained by spectral interpolation of W along q.
Eigen::MatrixXcd inverse_wigner(const PhaseField& w);

/// 2 pi int W^2 dq dp; equals 1 for pure states.
double purity(const PhaseField& w);

}  // namespace wigner
