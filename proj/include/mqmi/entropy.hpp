#pragma once

#include <string>
#include <vector>

#include "mqmi/qmatrix.hpp"

namespace mqmi {

/// Entropy in bits, or the +infinity sentinel produced by a relative entropy
/// whose support condition fails.
class EntropyValue {
 public:
  constexpr EntropyValue() = default;
  constexpr explicit EntropyValue(double bits) : bits_(bits) {}
  static constexpr EntropyValue infinity() {
    EntropyValue v;
    v.infinite_ = true;
    return v;
  }

  bool is_infinite() const { return infinite_; }
  /// Finite value; calling this on the sentinel throws NumericalError.
  double bits() const;

 private:
  double bits_ = 0.0;
  bool infinite_ = false;
};

/// -tr(rho log2 rho) from clamped eigenvalues. Throws NumericalError if the
/// state fails validation at `tol`.
double von_neumann(const MultipartiteState& state, double tol = kDefaultTol);

/// Binary entropy; throws std::domain_error outside [0, 1].
double binary_entropy(double p);

/// D(tau || sigma) in bits, evaluated in sigma's eigenbasis. Returns the
/// infinity sentinel when tau puts weight above `tol` on sigma's numerical
/// kernel (eigenvalues <= tol).
EntropyValue relative_entropy(const MultipartiteState& tau, const MultipartiteState& sigma,
                              double tol = kDefaultTol);
EntropyValue relative_entropy(const ComplexMatrix& tau, const ComplexMatrix& sigma,
                              double tol = kDefaultTol);

struct InequalityResidual {
  std::string name;
  double residual;  // >= 0 when the inequality holds
};

/// Signed residuals of the basic entropy inequalities for disjoint X, Y, Z:
///   araki_lieb_xy   S(XY) - S(X) + S(Y)
///   araki_lieb_yx   S(XY) - S(Y) + S(X)
///   subadditivity   S(X) + S(Y) - S(XY)
///   weak_monotonicity  S(XZ) + S(YZ) - S(X) - S(Y)      (Z nonempty)
///   strong_subadditivity  S(XY) + S(YZ) - S(Y) - S(XYZ) (Z nonempty)
std::vector<InequalityResidual> basic_inequality_report(const MultipartiteState& state,
                                                        SubsystemSet x, SubsystemSet y,
                                                        SubsystemSet z);

}  // namespace mqmi
