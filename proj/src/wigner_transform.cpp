#include "wigner/wigner_transform.hpp"

#include <cmath>
#include <numbers>

#include "wigner/spectral.hpp"

namespace wigner {

namespace {

void require_compatible(const WaveField& psi, const GridSpec& grid) {
  if (psi.grid.n_q != grid.n_q || std::abs(psi.grid.dq - grid.dq) > 1e-15 * grid.dq) {
    throw Error("wigner transform: wavefunction grid does not match phase-space grid");
  }
  const int r = grid.chord_ratio();
  if (r < 1 || std::abs(grid.dy - r * grid.dq) > 1e-12 * grid.dq) {
    throw Error("wigner transform: dy must be a positive integer multiple of dq");
  }
  if (grid.n_p != grid.n_y) {
    throw Error("wigner transform: n_p must equal n_y");
  }
}

// Shifts every column of `values` by +dq/2 along q with a band-limited
// interpolant; returns rows at q_i + dq/2.
PhaseField::Matrix half_shift_rows(const PhaseField& w) {
  const GridSpec& g = w.grid;
  const Eigen::VectorXd k = fft_wavenumbers(g.n_q, g.dq);
  Eigen::VectorXcd shift(g.n_q);
  for (int m = 0; m < g.n_q; ++m) shift(m) = std::polar(1.0, 0.5 * k(m) * g.dq);
  shift(g.n_q / 2) = 0.0;
  PhaseField::Matrix out(g.n_q, g.n_p);
  Fft1D fft(g.n_q);
  std::vector<cdouble> col(g.n_q), spec(g.n_q), back(g.n_q);
  for (int j = 0; j < g.n_p; ++j) {
    for (int i = 0; i < g.n_q; ++i) col[i] = w.values(i, j);
    fft.forward(col, spec);
    for (int i = 0; i < g.n_q; ++i) spec[i] *= shift(i);
    fft.inverse(spec, back);
    for (int i = 0; i < g.n_q; ++i) out(i, j) = back[i].real();
  }
  return out;
}

}  // namespace

Eigen::VectorXcd half_step_samples(const WaveField& psi) {
  const GridSpec& g = psi.grid;
  const int n = g.n_q;
  const Eigen::VectorXd k = fft_wavenumbers(n, g.dq);
  Fft1D fft(n);
  std::vector<cdouble> in(psi.values.data(), psi.values.data() + n), spec(n), back(n);
  fft.forward(in, spec);
  for (int m = 0; m < n; ++m) spec[m] *= std::polar(1.0, 0.5 * k(m) * g.dq);
  // cos(k_nyquist dq / 2) = 0: the symmetric Nyquist term vanishes at half steps.
  spec[n / 2] = 0.0;
  fft.inverse(spec, back);
  Eigen::VectorXcd fine(2 * n);
  for (int i = 0; i < n; ++i) {
    fine(2 * i) = psi.values(i);
    fine(2 * i + 1) = back[i];
  }
  return fine;
}

Eigen::MatrixXcd chord_products(const WaveField& psi, const GridSpec& grid) {
  require_compatible(psi, grid);
  const Eigen::VectorXcd fine = half_step_samples(psi);
  const int n_fine = static_cast<int>(fine.size());
  const int r = grid.chord_ratio();
  auto at = [&](int m) -> cdouble { return (m >= 0 && m < n_fine) ? fine(m) : cdouble(0.0); };
  Eigen::MatrixXcd f(grid.n_q, grid.n_y);
  for (int i = 0; i < grid.n_q; ++i) {
    for (int k = 0; k < grid.n_y; ++k) {
      const int s = (k - grid.n_y / 2) * r;
      f(i, k) = at(2 * i + s) * std::conj(at(2 * i - s));
    }
  }
  return f;
}

namespace {

Eigen::MatrixXcd wigner_fft_complex(const WaveField& psi, const GridSpec& grid) {
  const Eigen::MatrixXcd f = chord_products(psi, grid);
  const int n = grid.n_y;
  const double pref = grid.dy / (2.0 * std::numbers::pi) * ((n / 2) % 2 == 0 ? 1.0 : -1.0);
  Eigen::MatrixXcd out(grid.n_q, n);
  Fft1D fft(n);
  std::vector<cdouble> row(n), spec(n);
  for (int i = 0; i < grid.n_q; ++i) {
    for (int k = 0; k < n; ++k) row[k] = (k % 2 == 0 ? 1.0 : -1.0) * f(i, k);
    fft.forward(row, spec);
    for (int j = 0; j < n; ++j) out(i, j) = pref * (j % 2 == 0 ? 1.0 : -1.0) * spec[j];
  }
  return out;
}

}  // namespace

PhaseField wigner_from_wavefunction(const WaveField& psi, const GridSpec& grid) {
  PhaseField w(grid, wigner_fft_complex(psi, grid).real());
  // A real wavefunction has a Wigner function even in p; remove the FFT's
  // rounding asymmetry so Theta-reflection is exact for such states.
  if ((psi.values.imag().array() == 0.0).all()) {
    const int n = grid.n_p;
    for (int i = 0; i < grid.n_q; ++i) {
      for (int j = 1; j < n / 2; ++j) {
        const double avg = 0.5 * (w.values(i, j) + w.values(i, n - j));
        w.values(i, j) = avg;
        w.values(i, n - j) = avg;
      }
    }
  }
  return w;
}

double wigner_imaginary_residue(const WaveField& psi, const GridSpec& grid) {
  return wigner_fft_complex(psi, grid).imag().cwiseAbs().maxCoeff();
}

PhaseField wigner_direct_quadrature(const WaveField& psi, const GridSpec& grid) {
  const Eigen::MatrixXcd f = chord_products(psi, grid);
  PhaseField w(grid);
  const double pref = grid.dy / (2.0 * std::numbers::pi);
  for (int i = 0; i < grid.n_q; ++i) {
    for (int j = 0; j < grid.n_p; ++j) {
      cdouble acc = 0.0;
      for (int k = 0; k < grid.n_y; ++k) acc += std::polar(1.0, -grid.p(j) * grid.y(k)) * f(i, k);
      w.values(i, j) = pref * acc.real();
    }
  }
  return w;
}

Marginals marginals(const PhaseField& w) {
  Marginals m;
  m.position = w.values.rowwise().sum() * w.grid.dp;
  m.momentum = w.values.colwise().sum().transpose() * w.grid.dq;
  return m;
}

double weyl_expectation(const PhaseField& w, const WeylSymbol& symbol) {
  const GridSpec& g = w.grid;
  double acc = 0.0;
  for (int i = 0; i < g.n_q; ++i) {
    const double q = g.q(i);
    for (int j = 0; j < g.n_p; ++j) acc += w.values(i, j) * symbol(q, g.p(j));
  }
  return acc * g.cell_area();
}

Eigen::MatrixXcd inverse_wigner(const PhaseField& w) {
  const GridSpec& g = w.grid;
  const int n = g.n_q;
  const PhaseField::Matrix half = half_shift_rows(w);
  auto fine_row = [&](int m) { return (m % 2 == 0) ? w.values.row(m / 2) : half.row(m / 2); };

  // phase(s, j) = e^{i p_j s dq} for separations s in [-(n-1), n-1].
  Eigen::MatrixXcd phase(2 * n - 1, g.n_p);
  for (int s = -(n - 1); s <= n - 1; ++s) {
    for (int j = 0; j < g.n_p; ++j) phase(s + n - 1, j) = std::polar(1.0, g.p(j) * s * g.dq);
  }
  Eigen::MatrixXcd rho(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const auto mid = fine_row(a + b);
      rho(a, b) = g.dp * (phase.row(a - b + n - 1).array() * mid.array()).sum();
    }
  }
  return rho;
}

double purity(const PhaseField& w) {
  return 2.0 * std::numbers::pi * w.values.squaredNorm() * w.grid.cell_area();
}

}  // namespace wigner
