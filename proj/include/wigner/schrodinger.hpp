// Reference Schrodinger evolution on the position grid.
#pragma once

#include <vector>

#include "wigner/fields.hpp"
#include "wigner/potential.hpp"
#include "wigner/spectral.hpp"

namespace wigner {

struct TdseConfig {
  double dt = 0.005;
  double t_final = std::numbers::pi / 2.0;
  int n_samples = 65;
  /// Order of the symmetric split-operator composition: 2 (Strang),
  /// 4 (triple jump) or 6 (Yoshida).
  int splitting_order = 6;
  /// Mass in this many cells at each edge counts as boundary mass.
  int boundary_cells = 4;
  double boundary_threshold = 1e-10;

  void validate() const;
};

/// Time stepping shared by every evolution driver: the requested dt is
/// shortened so that each of the (n_samples - 1) snapshot intervals holds the
/// same whole number of steps.
struct StepSchedule {
  int n_steps = 0;
  int steps_per_sample = 0;
  double dt = 0.0;

  double time_of_step(int step) const { return step * dt; }
};

StepSchedule make_schedule(const TdseConfig& cfg);

struct TdseResult {
  std::vector<double> times;
  std::vector<WaveField> snapshots;
  std::vector<double> norm_drift;
  std::vector<double> boundary_mass;
  bool boundary_flag = false;
  StepSchedule schedule;
};

/// n-th harmonic oscillator eigenfunction from the Hermite recurrence.
/// Throws when the state carries more than 1e-12 of its mass in the
/// boundary band.
WaveField hermite_eigenstate(const GridSpec& grid, int n);

/// (|0> + |2>) / sqrt(2).
WaveField init_superposition_02(const GridSpec& grid);

/// Mass sum |psi|^2 dq over the outermost `cells` points at each edge.
double boundary_mass(const WaveField& psi, int cells);

/// <psi|H|psi> with a spectral kinetic term.
double energy_expectation(const WaveField& psi, const Potential& v);

/// Momentum density |phi(p)|^2 on the p grid of `grid`, where
/// phi(p) = (2 pi)^{-1/2} int dq e^{-ipq} psi(q). Needs n_p * dp to cover
/// the spectrum of psi; evaluated by direct summation.
Eigen::VectorXd momentum_density(const WaveField& psi);

/// Split-operator propagation with periodic boundaries.
TdseResult evolve_tdse(const WaveField& psi0, const Potential& v, const TdseConfig& cfg);

/// Advances psi by `steps` split-operator steps of size dt in place.
class SplitOperatorPropagator {
 public:
  SplitOperatorPropagator(const GridSpec& grid, const Potential& v, double dt, int order);
  void step(Eigen::VectorXcd& psi) const;

 private:
  void strang(Eigen::VectorXcd& psi, double h) const;

  GridSpec grid_;
  Eigen::VectorXd potential_;
  Eigen::VectorXd kinetic_;
  std::vector<double> weights_;
  double dt_;
  mutable Fft1D fft_;
};

}  // namespace wigner
