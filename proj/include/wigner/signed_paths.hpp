// Forward/reverse comparison of signed path measures on finite ensembles.
//
// Each path carries positive sampling probabilities P_F and P_RTheta and signed
// weights W_F and W_RTheta. On the common support (both weights nonzero) the
// density ratio factors as
//
//   dmu_F / dmu_RTheta = a_sign * exp(a_mag),
//   a_mag  = log(P_F / P_RTheta) + log(|W_F| / |W_RTheta|),
//   a_sign = sgn(W_F) sgn(W_RTheta).
#pragma once

#include <optional>
#include <vector>

#include "wigner/carrier.hpp"
#include "wigner/fields.hpp"

namespace wigner {

struct PathEnsemble {
  Eigen::VectorXd prob_forward;
  Eigen::VectorXd prob_reverse;
  Eigen::VectorXd weight_forward;
  Eigen::VectorXd weight_reverse;
  /// Optional terminal phase-space point per path.
  std::vector<PhasePoint> labels;

  Eigen::Index size() const { return prob_forward.size(); }

  /// Probabilities strictly positive and summing to one within 1e-12.
  void validate() const;

  double max_abs_weight() const;
};

/// Theta(q, p) = (q, -p). The protocol reversal is the identity for the
/// closed systems handled here.
struct ThetaMap {
  PhasePoint operator()(PhasePoint z) const { return {z.q, -z.p}; }
};

struct RatioDecomposition {
  Eigen::VectorXd a_mag;   // zero on excluded paths
  Eigen::VectorXd a_cl;    // log(P_F / P_RTheta)
  Eigen::VectorXd a_w;     // log(|W_F| / |W_RTheta|)
  Eigen::VectorXi a_sign;  // +1 / -1, 0 on excluded paths
  std::vector<bool> included;
  Eigen::Index included_count = 0;
};

/// 1e-12 times the largest |weight| in the ensemble.
double default_weight_floor(const PathEnsemble& e);

/// Paths with |W_F| or |W_RTheta| <= weight_floor are excluded. Throws when
/// nothing remains.
RatioDecomposition ratio_decomposition(const PathEnsemble& e, double weight_floor);

struct IntegralIdentity {
  double lhs = 0.0;  // sum over support of W_F a_sign exp(-a_mag) P_F
  double rhs = 0.0;  // sum over support of W_RTheta P_RTheta
  double residual = 0.0;
  /// sum a_sign exp(-a_mag) dmu_F / sum dmu_F over the support; empty when
  /// the forward signed mass on the support vanishes.
  std::optional<double> normalized_ratio;
  double excluded_forward_mass = 0.0;  // sum of |W_F| P_F off the support
  double excluded_reverse_mass = 0.0;
};

IntegralIdentity integral_identity_check(const PathEnsemble& e, double weight_floor);

/// W(q, p) -> W(q, -p), i.e. column j -> (n_p - j) mod n_p.
PhaseField theta_reflect(const PhaseField& w);

/// Envelope proportional to |W| + eps * max|W|, normalized to unit mass.
PhaseField default_envelope(const PhaseField& w, double eps = 1e-8);

/// One path per grid cell with P_F = P_RTheta = envelope dq dp,
/// W_F = W_fwd / envelope and W_RTheta = W_rev / envelope. `w_rev` must
/// already be pulled back through Theta.
PathEnsemble ensemble_from_wigner_fields(const PhaseField& w_fwd, const PhaseField& w_rev,
                                         const PhaseField& envelope);

struct ParityStats {
  double by_count = 0.0;
  double by_mass = 0.0;  // weighted by |W_F| P_F
};

/// Fraction of included paths with a_sign = -1.
ParityStats interference_parity_stats(const RatioDecomposition& d, const PathEnsemble& e);

}  // namespace wigner
