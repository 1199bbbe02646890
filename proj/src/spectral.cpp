#include "wigner/spectral.hpp"

#include <numbers>

namespace wigner {

Eigen::VectorXd fft_wavenumbers(int n, double dx) {
  Eigen::VectorXd k(n);
  const double base = 2.0 * std::numbers::pi / (n * dx);
  for (int m = 0; m < n; ++m) k(m) = base * (m < n / 2 ? m : m - n);
  return k;
}

Fft1D::Fft1D(int n) : n_(n) {}

void Fft1D::forward(const std::vector<cdouble>& in, std::vector<cdouble>& out) {
  fft_.fwd(out, in);
}

void Fft1D::inverse(const std::vector<cdouble>& in, std::vector<cdouble>& out) {
  fft_.inv(out, in);
}

Eigen::VectorXcd derivative_multiplier(int n, double dx, int order) {
  const Eigen::VectorXd k = fft_wavenumbers(n, dx);
  Eigen::VectorXcd m(n);
  for (int j = 0; j < n; ++j) m(j) = std::pow(cdouble(0.0, k(j)), order);
  if (order % 2 == 1 && n % 2 == 0) m(n / 2) = 0.0;
  if (order == 0) m.setOnes();
  return m;
}

// Multipliers used here map real signals to real signals, so two real rows
// are packed into one complex transform as a + ib.
PhaseField apply_p_multiplier(const PhaseField& f,
                              const std::function<Eigen::VectorXcd(int)>& multiplier) {
  const GridSpec& g = f.grid;
  PhaseField out(g);
  Fft1D fft(g.n_p);
  std::vector<cdouble> row(g.n_p), spec(g.n_p), back(g.n_p);
  for (int i = 0; i < g.n_q; i += 2) {
    const bool pair = i + 1 < g.n_q;
    for (int j = 0; j < g.n_p; ++j) {
      row[j] = cdouble(f.values(i, j), pair ? f.values(i + 1, j) : 0.0);
    }
    fft.forward(row, spec);
    const Eigen::VectorXcd m = multiplier(i);
    if (pair) {
      const Eigen::VectorXcd m2 = multiplier(i + 1);
      if (m2 != m) {
        // Different multipliers per row: split the packed spectrum first.
        const int n = g.n_p;
        std::vector<cdouble> mixed(n);
        for (int k = 0; k < n; ++k) {
          const cdouble s = spec[k];
          const cdouble c = std::conj(spec[(n - k) % n]);
          const cdouble a = 0.5 * (s + c);
          const cdouble b = cdouble(0.0, -0.5) * (s - c);
          mixed[k] = a * m(k) + cdouble(0.0, 1.0) * (b * m2(k));
        }
        spec.swap(mixed);
      } else {
        for (int j = 0; j < g.n_p; ++j) spec[j] *= m(j);
      }
    } else {
      for (int j = 0; j < g.n_p; ++j) spec[j] *= m(j);
    }
    fft.inverse(spec, back);
    for (int j = 0; j < g.n_p; ++j) {
      out.values(i, j) = back[j].real();
      if (pair) out.values(i + 1, j) = back[j].imag();
    }
  }
  return out;
}

PhaseField derivative_p(const PhaseField& f, int order) {
  const Eigen::VectorXcd m = derivative_multiplier(f.grid.n_p, f.grid.dp, order);
  return apply_p_multiplier(f, [&m](int) { return m; });
}

PhaseField derivative_q(const PhaseField& f, int order) {
  const GridSpec& g = f.grid;
  const Eigen::VectorXcd m = derivative_multiplier(g.n_q, g.dq, order);
  PhaseField out(g);
  Fft1D fft(g.n_q);
  std::vector<cdouble> col(g.n_q), spec(g.n_q), back(g.n_q);
  for (int j = 0; j < g.n_p; j += 2) {
    const bool pair = j + 1 < g.n_p;
    for (int i = 0; i < g.n_q; ++i) {
      col[i] = cdouble(f.values(i, j), pair ? f.values(i, j + 1) : 0.0);
    }
    fft.forward(col, spec);
    for (int i = 0; i < g.n_q; ++i) spec[i] *= m(i);
    fft.inverse(spec, back);
    for (int i = 0; i < g.n_q; ++i) {
      out.values(i, j) = back[i].real();
      if (pair) out.values(i, j + 1) = back[i].imag();
    }
  }
  return out;
}

Eigen::VectorXd derivative_1d(const Eigen::VectorXd& f, double dx, int order) {
  const int n = static_cast<int>(f.size());
  const Eigen::VectorXcd m = derivative_multiplier(n, dx, order);
  Fft1D fft(n);
  std::vector<cdouble> in(n), spec(n), back(n);
  for (int i = 0; i < n; ++i) in[i] = f(i);
  fft.forward(in, spec);
  for (int i = 0; i < n; ++i) spec[i] *= m(i);
  fft.inverse(spec, back);
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out(i) = back[i].real();
  return out;
}

}  // namespace wigner
