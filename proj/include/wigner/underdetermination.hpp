// Executable form of the marginal underdetermination argument: phase-space
// currents, null-current perturbations, Fokker-Planck transport and
// conditional momentum moments.
#pragma once

#include <functional>
#include <vector>

#include "wigner/fields.hpp"

namespace wigner {

/// Phase-space current (J_q, J_p), or a drift vector field (A_q, A_p).
struct CurrentPair {
  PhaseField q;
  PhaseField p;
};

/// Symmetric diffusion matrix field D = [[qq, qp], [qp, pp]].
struct DiffusionField {
  PhaseField qq;
  PhaseField qp;
  PhaseField pp;

  static DiffusionField isotropic(const GridSpec& g, double d);
  static DiffusionField zero(const GridSpec& g);
};

/// dJ_q/dq + dJ_p/dp (spectral).
PhaseField divergence(const CurrentPair& j);

/// J_q -> J_q + dC/dp, J_p -> J_p - dC/dq.
CurrentPair null_current_perturbation(const CurrentPair& j, const PhaseField& c);

/// int dp J_q(q, p), one value per q row.
Eigen::VectorXd marginal_current(const PhaseField& j_q);

/// J_i = A_i P - 1/2 d_j (D_ij P).
CurrentPair current_from_drift(const CurrentPair& drift, const DiffusionField& diffusion,
                               const PhaseField& density);

/// A_i = (J_i + 1/2 d_j (D_ij P)) / P where P >= floor; elsewhere `fallback`.
CurrentPair drift_from_current(const CurrentPair& current, const DiffusionField& diffusion,
                               const PhaseField& density, const CurrentPair& fallback,
                               double floor = 1e-12);

/// Drift as a function of the current density (state-dependent drifts arise
/// when a prescribed current is translated back into a drift).
using DriftProvider = std::function<CurrentPair(const PhaseField& density)>;

struct FokkerPlanckResult {
  std::vector<double> times;
  std::vector<PhaseField> snapshots;
  std::vector<double> mass_drift;
  double min_value = 0.0;
  /// Set when some snapshot undershoots below -1e-8.
  bool positivity_warning = false;
};

/// dP/dt = -d_i (A_i P) + 1/2 d_i d_j (D_ij P), integrated with classical RK4
/// on spectral derivatives (each stage is a divergence, so mass is conserved).
/// Throws when dt exceeds the explicit stability limit of the grid and
/// coefficients. Snapshots are stored every `sample_every` steps.
FokkerPlanckResult fokker_planck_evolve(const PhaseField& p0, const DriftProvider& drift,
                                        const DiffusionField& diffusion, double dt, int steps,
                                        int sample_every = 1);

FokkerPlanckResult fokker_planck_evolve(const PhaseField& p0, const CurrentPair& drift,
                                        const DiffusionField& diffusion, double dt, int steps,
                                        int sample_every = 1);

/// M_k(q) = int dp p^k P(q, p) for k = 0..n; column k of the result.
Eigen::MatrixXd moment_constraints(const PhaseField& density, int n);

/// Localized momentum profile h(p) = e^{-p^2 / (2 width^2)} r(p) with r a
/// monic polynomial of degree n+1, chosen so that sum_j p_j^k h(p_j) = 0 for
/// k <= n on the grid while the (n+1)-th moment is nonzero.
Eigen::VectorXd orthogonal_momentum_profile(const GridSpec& g, int n, double width);

}  // namespace wigner
