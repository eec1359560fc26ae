#include "mqmi/entropy.hpp"

#include <array>
#include <cmath>

#include "mqmi/kernels.hpp"

namespace mqmi {

double EntropyValue::bits() const {
  if (infinite_) throw NumericalError("relative entropy is infinite (support condition failed)");
  return bits_;
}

double von_neumann(const MultipartiteState& state, double tol) {
  const auto report = state.validate(tol);
  if (!report.valid) throw NumericalError("invalid state: " + report.describe());
  return kernels::matrix_entropy(state.matrix(), tol);
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary entropy needs p in [0, 1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

EntropyValue relative_entropy(const ComplexMatrix& tau, const ComplexMatrix& sigma, double tol) {
  if (tau.rows() != sigma.rows() || tau.cols() != sigma.cols()) {
    throw DimensionError("relative entropy needs operators of equal dimension");
  }
  const Spectrum sig = hermitian_eig(0.5 * (sigma + sigma.adjoint()), tol);
  const ComplexMatrix rotated = sig.eigenvectors.adjoint() * tau * sig.eigenvectors;
  double kernel_weight = 0.0;
  double cross = 0.0;  // tr(tau log2 sigma)
  for (std::size_t i = 0; i < sig.eigenvalues.size(); ++i) {
    const double w = rotated(i, i).real();
    const double s = sig.eigenvalues[i];
    if (s <= tol) {
      kernel_weight += w;
    } else {
      cross += w * std::log2(s);
    }
  }
  if (kernel_weight > tol) return EntropyValue::infinity();
  const double s_tau = kernels::matrix_entropy(tau, tol);
  const double d = -s_tau - cross;
  return EntropyValue(d);
}

EntropyValue relative_entropy(const MultipartiteState& tau, const MultipartiteState& sigma,
                              double tol) {
  if (tau.dims() != sigma.dims()) throw DimensionError("relative entropy needs identical dims");
  return relative_entropy(tau.matrix(), sigma.matrix(), tol);
}

std::vector<InequalityResidual> basic_inequality_report(const MultipartiteState& state,
                                                        SubsystemSet x, SubsystemSet y,
                                                        SubsystemSet z) {
  if (x.empty() || y.empty()) throw DimensionError("X and Y must be nonempty");
  if (x.intersects(y) || x.intersects(z) || y.intersects(z)) {
    throw DimensionError("X, Y, Z must be disjoint");
  }
  if (!(x | y | z).is_subset_of(state.all_parties())) {
    throw DimensionError("subsystem outside the state");
  }
  const std::array<SubsystemSet, 8> sets{x, y, x | y, z, x | z, y | z, x | y | z, SubsystemSet{}};
  const auto s = kernels::subset_entropies(state, sets);
  const double sx = s[0], sy = s[1], sxy = s[2], sxz = s[4], syz = s[5], sxyz = s[6];
  std::vector<InequalityResidual> out{
      {"araki_lieb_xy", sxy - sx + sy},
      {"araki_lieb_yx", sxy - sy + sx},
      {"subadditivity", sx + sy - sxy},
  };
  if (!z.empty()) {
    out.push_back({"weak_monotonicity", sxz + syz - sx - sy});
    out.push_back({"strong_subadditivity", sxy + syz - sy - sxyz});
  }
  return out;
}

}  // namespace mqmi
