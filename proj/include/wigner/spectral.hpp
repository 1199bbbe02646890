// FFT-based spectral operations along one axis of a PhaseField.
#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "wigner/fields.hpp"

namespace wigner {

using cdouble = std::complex<double>;

/// Angular wavenumbers in FFT storage order for an n-point axis of step dx.
/// The Nyquist entry (index n/2) carries -pi/dx.
Eigen::VectorXd fft_wavenumbers(int n, double dx);

/// Reusable 1-D transform with scratch buffers. Not thread safe; use one per
/// thread.
class Fft1D {
 public:
  explicit Fft1D(int n);

  int size() const { return n_; }

  void forward(const std::vector<cdouble>& in, std::vector<cdouble>& out);
  void inverse(const std::vector<cdouble>& in, std::vector<cdouble>& out);

 private:
  int n_;
  Eigen::FFT<double> fft_;
};

/// Multiplier for d^order/dx^order: (i k)^order, with the Nyquist mode zeroed
/// for odd orders so real input stays real.
Eigen::VectorXcd derivative_multiplier(int n, double dx, int order);

/// Applies a per-row Fourier multiplier along p. `multiplier(i)` returns the
/// multiplier vector (FFT order, length n_p) for q row i. Each multiplier
/// must satisfy m(-k) = conj(m(k)) (real in, real out); rows are transformed
/// in pairs under that assumption.
PhaseField apply_p_multiplier(const PhaseField& f,
                              const std::function<Eigen::VectorXcd(int)>& multiplier);

/// d^order f / dp^order, spectrally per q row.
PhaseField derivative_p(const PhaseField& f, int order);

/// d^order f / dq^order, spectrally per p column.
PhaseField derivative_q(const PhaseField& f, int order);

/// Spectral derivative of a periodic 1-D sample vector.
Eigen::VectorXd derivative_1d(const Eigen::VectorXd& f, double dx, int order);

}  // namespace wigner
