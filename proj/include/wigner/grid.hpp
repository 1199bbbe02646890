// Joint (q, p, y) discretization shared by every phase-space module.
//
// Units are fixed to hbar = m = omega = 1. All axes are uniform periodic grids
// of even length with points x_j = (j - n/2) * dx, so index n/2 sits at the
// origin and the axis is symmetric under j -> (n - j) mod n.
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace wigner {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  int n_q = 0;
  int n_p = 0;
  int n_y = 0;
  double dq = 0.0;
  double dp = 0.0;
  double dy = 0.0;
  double q_max = 0.0;
  double p_max = 0.0;

  double q(int i) const { return (i - n_q / 2) * dq; }
  double p(int j) const { return (j - n_p / 2) * dp; }
  double y(int k) const { return (k - n_y / 2) * dy; }

  double cell_area() const { return dq * dp; }

  /// Ratio dy/dq; chord points q +- y/2 land on the half-step q grid only
  /// when this is a positive integer.
  int chord_ratio() const { return static_cast<int>(std::lround(dy / dq)); }

  Eigen::VectorXd q_axis() const {
    return Eigen::VectorXd::NullaryExpr(n_q, [this](Eigen::Index i) { return q(int(i)); });
  }
  Eigen::VectorXd p_axis() const {
    return Eigen::VectorXd::NullaryExpr(n_p, [this](Eigen::Index j) { return p(int(j)); });
  }

  bool operator==(const GridSpec&) const = default;
};

/// Builds a grid from the position step and the chord sampling; the momentum
/// step follows from FFT duality, dp = 2 pi / (n_y dy), and n_p = n_y.
GridSpec make_grid(int n_q, double dq, int n_y, double dy);

/// Builds a grid from position and momentum steps (n_y = n_p, dy from
/// duality).
GridSpec make_phase_grid(int n_q, double dq, int n_p, double dp);

/// n_q = 384, n_y = n_p = 768, dq = dy = 0.0625: q_max = 12, p_max ~ 50.27.
GridSpec make_balanced_grid();

/// Small 32 x 64 x 64 grid (dq = dy = 0.5) for brute-force oracles.
GridSpec make_oracle_grid();

/// 128 x 256 x 256 grid with dq = dy = 0.125 for quick runs.
GridSpec make_reduced_grid();

/// Throws wigner::Error when the two grids differ.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

}  // namespace wigner
