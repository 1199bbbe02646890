#pragma once

#include <string>
#include <vector>

#include "wigner/grid.hpp"

namespace wigner {

/// Polynomial potential V(q) = sum_k c_k q^k. Restricting to polynomials makes
/// the Moyal series terminate after finitely many odd derivatives.
template <typename Scalar>
class PolynomialPotentialT {
 public:
  static constexpr int kMaxDegree = 8;

  PolynomialPotentialT() : coeffs_{Scalar(0)} {}

  explicit PolynomialPotentialT(std::vector<Scalar> coeffs, std::string name = "polynomial")
      : coeffs_(std::move(coeffs)), name_(std::move(name)) {
    if (coeffs_.empty()) coeffs_.push_back(Scalar(0));
    while (coeffs_.size() > 1 && coeffs_.back() == Scalar(0)) coeffs_.pop_back();
    if (degree() > kMaxDegree) throw Error("potential degree exceeds supported maximum");
  }

  static PolynomialPotentialT harmonic() {
    return PolynomialPotentialT({Scalar(0), Scalar(0), Scalar(0.5)}, "harmonic");
  }

  /// V = q^2/2 + lambda q^4.
  static PolynomialPotentialT quartic(Scalar lambda) {
    if (lambda < Scalar(0)) throw Error("quartic coupling must be nonnegative");
    PolynomialPotentialT v({Scalar(0), Scalar(0), Scalar(0.5), Scalar(0), lambda}, "quartic");
    v.lambda_ = lambda;
    return v;
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Scalar>& coefficients() const { return coeffs_; }
  const std::string& name() const { return name_; }
  Scalar lambda() const { return lambda_; }

  /// d^order V / dq^order at q (Horner on the differentiated coefficients).
  Scalar derivative(int order, Scalar q) const {
    if (order < 0) throw Error("derivative order must be nonnegative");
    if (order > degree()) return Scalar(0);
    Scalar acc(0);
    for (int k = degree(); k >= order; --k) {
      Scalar c = coeffs_[k];
      for (int m = 0; m < order; ++m) c *= Scalar(k - m);
      acc = acc * q + c;
    }
    return acc;
  }

  Scalar operator()(Scalar q) const { return derivative(0, q); }
  Scalar force(Scalar q) const { return -derivative(1, q); }

  bool is_quadratic() const { return degree() <= 2; }

 private:
  std::vector<Scalar> coeffs_;
  std::string name_ = "polynomial";
  Scalar lambda_ = Scalar(0);
};

using Potential = PolynomialPotentialT<double>;

inline double potential_derivative(const Potential& v, int order, double q) {
  return v.derivative(order, q);
}

}  // namespace wigner
