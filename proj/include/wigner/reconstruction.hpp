// Wigner evolution by classical carrier alone and by carrier plus signed
// residual, with per-snapshot diagnostics against a reference field.
#pragma once

#include <string>
#include <vector>

#include "wigner/carrier.hpp"
#include "wigner/fields.hpp"
#include "wigner/moyal.hpp"
#include "wigner/potential.hpp"
#include "wigner/schrodinger.hpp"

namespace wigner {

enum class Splitting {
  kLie,     // carrier step, then residual step
  kStrang,  // half residual, carrier, half residual
};

enum class ResidualScheme {
  kExponential,  // exact unit-modulus phase per p-Fourier mode
  kRk4,          // explicit RK4 on the same Fourier modes, substepped for stability
};

Splitting parse_splitting(const std::string& s);
ResidualScheme parse_residual_scheme(const std::string& s);
std::string to_string(Splitting s);
std::string to_string(ResidualScheme s);

struct EvolutionConfig {
  TdseConfig time;
  int interpolation_points = 8;
  int integrator_order = 4;
  Splitting splitting = Splitting::kStrang;
  ResidualScheme residual_scheme = ResidualScheme::kExponential;
  /// Abort when max|W| exceeds this multiple of its initial value.
  double instability_factor = 10.0;
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<PhaseField> snapshots;
  StepSchedule schedule;
};

/// Repeated semi-Lagrangian carrier steps.
EvolutionResult evolve_classical_only(const PhaseField& w0, const Potential& v,
                                      const EvolutionConfig& cfg);

/// Carrier steps composed with the signed residual flow. Nothing else enters
/// the update: no smoothing, clipping, damping, diffusion or noise.
EvolutionResult evolve_with_residual(const PhaseField& w0, const Potential& v,
                                     const EvolutionConfig& cfg);

/// Residual-only flow over dt via the selected scheme.
class ResidualStepper {
 public:
  ResidualStepper(const GridSpec& grid, const Potential& v, double dt, ResidualScheme scheme);
  PhaseField step(const PhaseField& w) const;
  int substeps() const { return substeps_; }

 private:
  GridSpec grid_;
  Eigen::MatrixXcd factors_;
  bool trivial_ = false;
  int substeps_ = 1;
};

struct L2Error {
  double absolute = 0.0;
  double relative = 0.0;
};

/// Grid-weighted ||W - W_ref||_2, and that divided by ||W_ref||_2.
L2Error l2_error(const PhaseField& w, const PhaseField& w_ref);

struct WeylMoments {
  double q = 0.0;
  double p = 0.0;
  double q2 = 0.0;
  double p2 = 0.0;
  double energy = 0.0;
};

WeylMoments weyl_moments(const PhaseField& w, const Potential& v);

struct DiagnosticsRecord {
  double time = 0.0;
  double wigner_norm_error = 0.0;
  double marginal_error_q = 0.0;
  double marginal_error_p = 0.0;
  double l2_error_absolute = 0.0;
  double l2_error_relative = 0.0;
  double total_variation = 0.0;
  double sign_cancellation_ratio = 0.0;
  double negativity_mass = 0.0;
  double residual_activity = 0.0;
  double source_mass = 0.0;
  double sink_mass = 0.0;
  double chi_q = 0.0;
  double boundary_leakage = 0.0;
  WeylMoments moments;
};

/// Sum of |W| dq dp over the outermost `cells` rows and columns.
double boundary_leakage(const PhaseField& w, int cells = 4);

DiagnosticsRecord compute_diagnostics(const PhaseField& w, const PhaseField& w_ref,
                                      const Potential& v, double t, int boundary_cells = 4);

}  // namespace wigner
