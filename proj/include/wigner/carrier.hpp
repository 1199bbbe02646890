// Classical carrier: Hamiltonian characteristics and semi-Lagrangian Liouville
// transport of phase-space fields.
#pragma once

#include <vector>

#include "wigner/fields.hpp"
#include "wigner/potential.hpp"

namespace wigner {

struct PhasePoint {
  double q = 0.0;
  double p = 0.0;
};

struct FlowConfig {
  double dt = 0.005;
  /// Runge-Kutta stages used to trace a characteristic over one step (1, 2 or 4).
  int integrator_order = 4;
  /// Lagrange stencil width per axis: 4 (cubic), 6 (quintic) or 8 (septic).
  int interpolation_points = 6;

  void validate() const;
};

/// One explicit Runge-Kutta step of q' = p, p' = -V'(q). Negative h runs the
/// flow backwards.
PhasePoint flow_step(PhasePoint z, const Potential& v, double h, int order = 4);

/// Endpoint of Hamilton's equations after duration t using steps of at most
/// |dt| (the last step is shortened to land on t).
PhasePoint classical_flow(PhasePoint z, const Potential& v, double t, double dt);

double classical_energy(PhasePoint z, const Potential& v);

/// Separable Lagrange resampling of a field at arbitrary phase-space points.
/// Points whose stencils leave the grid read the missing nodes as zero;
/// points outside the domain evaluate to zero.
class PhaseInterpolator {
 public:
  PhaseInterpolator(const GridSpec& grid, int points);

  /// Precomputes stencils for the foot points, row-major (q outer, p inner).
  void prepare(const std::vector<PhasePoint>& feet);
  PhaseField apply(const PhaseField& w) const;

  int points() const { return points_; }

 private:
  GridSpec grid_;
  int points_;
  std::vector<int> base_q_;
  std::vector<int> base_p_;
  std::vector<double> weights_q_;
  std::vector<double> weights_p_;
  std::vector<char> inside_;
};

/// Samples W at backward-rotated points: W(Phi_{-t} z) for the unit harmonic
/// oscillator.
PhaseField rotate_exact_harmonic(const PhaseField& w, double t, int interpolation_points = 8);

/// Semi-Lagrangian transport with cached foot points for a fixed (V, dt).
class LiouvilleStepper {
 public:
  LiouvilleStepper(const GridSpec& grid, const Potential& v, const FlowConfig& cfg);
  PhaseField step(const PhaseField& w) const;

 private:
  PhaseInterpolator interp_;
  bool identity_ = false;
};

/// W'(z) = W(Phi_{-dt} z).
PhaseField liouville_step(const PhaseField& w, const Potential& v, double dt,
                          const FlowConfig& cfg = {});

/// L_cl W = -p dW/dq + V'(q) dW/dp with spectral derivatives.
PhaseField apply_classical_generator(const PhaseField& w, const Potential& v);

}  // namespace wigner
