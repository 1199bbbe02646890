// Field containers on a GridSpec.
//
// PhaseField values are stored row-major with q as the outer (row) index and
// p as the inner (column) index, so a q row is contiguous in memory.
#pragma once

#include <complex>

#include <Eigen/Dense>

#include "wigner/grid.hpp"

namespace wigner {

template <typename Scalar>
struct WaveFieldT {
  using Vector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

  GridSpec grid;
  Vector values;

  WaveFieldT() = default;
  explicit WaveFieldT(const GridSpec& g) : grid(g), values(Vector::Zero(g.n_q)) {}
  WaveFieldT(const GridSpec& g, Vector v) : grid(g), values(std::move(v)) {
    if (values.size() != g.n_q) throw Error("WaveField: size does not match grid");
  }
};

template <typename Scalar>
struct PhaseFieldT {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  GridSpec grid;
  Matrix values;

  PhaseFieldT() = default;
  explicit PhaseFieldT(const GridSpec& g) : grid(g), values(Matrix::Zero(g.n_q, g.n_p)) {}
  PhaseFieldT(const GridSpec& g, Matrix v) : grid(g), values(std::move(v)) {
    if (values.rows() != g.n_q || values.cols() != g.n_p) {
      throw Error("PhaseField: shape does not match grid");
    }
  }

  Scalar operator()(int i, int j) const { return values(i, j); }
  Scalar& operator()(int i, int j) { return values(i, j); }

  /// Samples f(q, p) at every grid point.
  template <typename F>
  static PhaseFieldT sample(const GridSpec& g, F&& f) {
    PhaseFieldT out(g);
    for (int i = 0; i < g.n_q; ++i) {
      const Scalar q = g.q(i);
      for (int j = 0; j < g.n_p; ++j) out.values(i, j) = f(q, Scalar(g.p(j)));
    }
    return out;
  }
};

using WaveField = WaveFieldT<double>;
using PhaseField = PhaseFieldT<double>;

// Quadratures with the dq*dp (or dq) cell weight.

template <typename Scalar>
Scalar integrate(const PhaseFieldT<Scalar>& f) {
  return f.values.sum() * Scalar(f.grid.cell_area());
}

template <typename Scalar>
Scalar l1_norm(const PhaseFieldT<Scalar>& f) {
  return f.values.cwiseAbs().sum() * Scalar(f.grid.cell_area());
}

template <typename Scalar>
Scalar l2_norm(const PhaseFieldT<Scalar>& f) {
  return std::sqrt(f.values.squaredNorm() * Scalar(f.grid.cell_area()));
}

template <typename Scalar>
Scalar max_abs(const PhaseFieldT<Scalar>& f) {
  return f.values.cwiseAbs().maxCoeff();
}

template <typename Scalar>
Scalar norm_squared(const WaveFieldT<Scalar>& psi) {
  return psi.values.squaredNorm() * Scalar(psi.grid.dq);
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> density(const WaveFieldT<Scalar>& psi) {
  return psi.values.cwiseAbs2();
}

template <typename Scalar>
PhaseFieldT<Scalar> operator-(const PhaseFieldT<Scalar>& a, const PhaseFieldT<Scalar>& b) {
  require_same_grid(a.grid, b.grid, "PhaseField subtraction");
  return PhaseFieldT<Scalar>(a.grid, a.values - b.values);
}

template <typename Scalar>
PhaseFieldT<Scalar> operator+(const PhaseFieldT<Scalar>& a, const PhaseFieldT<Scalar>& b) {
  require_same_grid(a.grid, b.grid, "PhaseField addition");
  return PhaseFieldT<Scalar>(a.grid, a.values + b.values);
}

template <typename Scalar>
PhaseFieldT<Scalar> operator*(Scalar s, const PhaseFieldT<Scalar>& a) {
  return PhaseFieldT<Scalar>(a.grid, s * a.values);
}

template <typename Scalar>
PhaseFieldT<Scalar> operator-(const PhaseFieldT<Scalar>& a) {
  return PhaseFieldT<Scalar>(a.grid, -a.values);
}

}  // namespace wigner
