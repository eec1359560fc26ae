#include "mqmi/qmatrix.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "mqmi/kernels.hpp"

namespace mqmi {

SubsystemSet SubsystemSet::from_indices(std::span<const int> zero_based) {
  std::uint32_t mask = 0;
  for (int i : zero_based) {
    if (i < 0 || i >= kMaxParties) {
      throw DimensionError("party index out of range: " + std::to_string(i));
    }
    if (mask & (1u << i)) {
      throw DimensionError("duplicate party index: " + std::to_string(i));
    }
    mask |= 1u << i;
  }
  return SubsystemSet(mask);
}

SubsystemSet SubsystemSet::from_one_based(std::span<const int> one_based, int n_parties) {
  std::vector<int> zero;
  zero.reserve(one_based.size());
  for (int i : one_based) {
    if (i < 1 || i > n_parties) {
      throw DimensionError("party " + std::to_string(i) + " outside 1.." + std::to_string(n_parties));
    }
    zero.push_back(i - 1);
  }
  return from_indices(zero);
}

SubsystemSet SubsystemSet::single(int index) {
  const int idx[] = {index};
  return from_indices(idx);
}

SubsystemSet SubsystemSet::range(int first, int last) {
  if (first < 0 || last > kMaxParties || first > last) {
    throw DimensionError("bad party range");
  }
  std::uint32_t mask = 0;
  for (int i = first; i < last; ++i) mask |= 1u << i;
  return SubsystemSet(mask);
}

int SubsystemSet::size() const { return std::popcount(mask_); }

bool SubsystemSet::contains(int index) const {
  return index >= 0 && index < kMaxParties && (mask_ & (1u << index)) != 0;
}

int SubsystemSet::max_index() const {
  return mask_ == 0 ? -1 : 31 - std::countl_zero(mask_);
}

std::vector<int> SubsystemSet::indices() const {
  std::vector<int> out;
  for (int i = 0; i < kMaxParties; ++i) {
    if (mask_ & (1u << i)) out.push_back(i);
  }
  return out;
}

std::vector<int> SubsystemSet::one_based() const {
  auto out = indices();
  for (int& i : out) ++i;
  return out;
}

std::string SubsystemSet::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int i : one_based()) {
    if (!first) os << ',';
    os << i;
    first = false;
  }
  os << '}';
  return os.str();
}

std::string ValidationReport::describe() const {
  std::ostringstream os;
  os << (valid ? "valid" : "invalid") << ": hermiticity defect " << hermiticity_defect
     << ", min eigenvalue " << min_eigenvalue << ", trace defect " << trace_defect
     << (dims_consistent ? "" : ", dims inconsistent");
  return os.str();
}

int product_of(std::span<const int> dims) {
  long long p = 1;
  for (int d : dims) {
    p *= d;
    if (p > (1LL << 30)) throw DimensionError("total dimension overflow");
  }
  return static_cast<int>(p);
}

void check_dims(std::span<const int> dims) {
  if (dims.empty()) throw DimensionError("at least one subsystem is required");
  if (dims.size() > static_cast<std::size_t>(SubsystemSet::kMaxParties)) {
    throw DimensionError("too many subsystems");
  }
  for (int d : dims) {
    if (d < 2) throw DimensionError("subsystem dimension must be >= 2, got " + std::to_string(d));
  }
}

MultipartiteState::MultipartiteState(ComplexMatrix matrix, std::vector<int> dims,
                                     std::vector<std::string> labels)
    : matrix_(std::move(matrix)), dims_(std::move(dims)), labels_(std::move(labels)) {
  check_dims(dims_);
  if (matrix_.rows() != matrix_.cols()) {
    throw DimensionError("density matrix must be square");
  }
  const int side = product_of(dims_);
  if (matrix_.rows() != side) {
    throw DimensionError("matrix side " + std::to_string(matrix_.rows()) +
                         " does not match product of dims " + std::to_string(side));
  }
  if (!labels_.empty() && labels_.size() != dims_.size()) {
    throw DimensionError("label count must match party count");
  }
}

MultipartiteState MultipartiteState::from_pure(const ComplexVector& amplitudes,
                                               std::vector<int> dims) {
  return MultipartiteState(amplitudes * amplitudes.adjoint(), std::move(dims));
}

ValidationReport MultipartiteState::validate(double tol) const { return mqmi::validate(*this, tol); }

double hermiticity_defect(const ComplexMatrix& matrix) {
  if (matrix.rows() != matrix.cols()) throw DimensionError("matrix must be square");
  double worst = 0.0;
  for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      worst = std::max(worst, std::abs(matrix(i, j) - std::conj(matrix(j, i))));
    }
  }
  return worst;
}

ValidationReport validate(const MultipartiteState& state, double tol) {
  ValidationReport r;
  const auto& m = state.matrix();
  r.dims_consistent = m.rows() == product_of(state.dims());
  r.hermiticity_defect = hermiticity_defect(m);
  r.trace_defect = std::abs(m.trace() - Complex(1.0, 0.0));
  const ComplexMatrix herm = 0.5 * (m + m.adjoint());
  const auto eig = hermitian_eigenvalues(herm);
  r.min_eigenvalue = eig.empty() ? 0.0 : eig.back();
  r.valid = r.dims_consistent && r.hermiticity_defect <= tol && r.min_eigenvalue >= -tol &&
            r.trace_defect <= tol;
  return r;
}

Spectrum hermitian_eig(const ComplexMatrix& matrix, double tol) {
  const double defect = hermiticity_defect(matrix);
  if (defect > tol) {
    throw NumericalError("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  const Eigen::Index n = matrix.rows();
  Spectrum s;
  s.eigenvalues.resize(n);
  s.eigenvectors.resize(n, n);
  // Eigen returns ascending order.
  for (Eigen::Index i = 0; i < n; ++i) {
    s.eigenvalues[i] = solver.eigenvalues()(n - 1 - i);
    s.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return s;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& matrix) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  std::vector<double> out(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + solver.eigenvalues().size());
  std::reverse(out.begin(), out.end());
  return out;
}

MultipartiteState tensor(const MultipartiteState& a, const MultipartiteState& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  std::vector<std::string> labels;
  if (!a.labels().empty() && !b.labels().empty()) {
    labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  }
  ComplexMatrix m = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  return MultipartiteState(std::move(m), std::move(dims), std::move(labels));
}

std::vector<int> inverse_permutation(std::span<const int> perm) {
  std::vector<int> inv(perm.size(), -1);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    const int p = perm[i];
    if (p < 0 || static_cast<std::size_t>(p) >= perm.size() || inv[p] != -1) {
      throw DimensionError("permutation is not a bijection");
    }
    inv[p] = static_cast<int>(i);
  }
  return inv;
}

MultipartiteState permute_subsystems(const MultipartiteState& state, std::span<const int> perm) {
  const int n = state.num_parties();
  if (static_cast<int>(perm.size()) != n) throw DimensionError("permutation length mismatch");
  inverse_permutation(perm);  // validates

  const auto& old_dims = state.dims();
  std::vector<int> new_dims(n);
  for (int i = 0; i < n; ++i) new_dims[i] = old_dims[perm[i]];

  std::vector<long long> old_stride(n);
  long long s = 1;
  for (int i = n - 1; i >= 0; --i) {
    old_stride[i] = s;
    s *= old_dims[i];
  }
  const int dim = state.dimension();
  // old_index[new_index]
  std::vector<int> map(dim);
  std::vector<int> digit(n, 0);
  for (int idx = 0; idx < dim; ++idx) {
    long long old_idx = 0;
    for (int i = 0; i < n; ++i) old_idx += digit[i] * old_stride[perm[i]];
    map[idx] = static_cast<int>(old_idx);
    for (int i = n - 1; i >= 0; --i) {
      if (++digit[i] < new_dims[i]) break;
      digit[i] = 0;
    }
  }
  ComplexMatrix m(dim, dim);
  const auto& src = state.matrix();
  for (int c = 0; c < dim; ++c) {
    for (int r = 0; r < dim; ++r) m(r, c) = src(map[r], map[c]);
  }
  std::vector<std::string> labels;
  if (!state.labels().empty()) {
    for (int i = 0; i < n; ++i) labels.push_back(state.labels()[perm[i]]);
  }
  return MultipartiteState(std::move(m), std::move(new_dims), std::move(labels));
}

MultipartiteState partial_trace(const MultipartiteState& state, SubsystemSet keep) {
  if (keep.empty()) throw DimensionError("partial trace needs a nonempty keep set");
  if (keep.max_index() >= state.num_parties()) {
    throw DimensionError("keep set " + keep.to_string() + " exceeds party count");
  }
  if (keep == state.all_parties()) return state;
  std::vector<int> dims;
  std::vector<std::string> labels;
  for (int i : keep.indices()) {
    dims.push_back(state.dims()[i]);
    if (!state.labels().empty()) labels.push_back(state.labels()[i]);
  }
  return MultipartiteState(kernels::partial_trace(state.matrix(), state.dims(), keep),
                           std::move(dims), std::move(labels));
}

ComplexMatrix embed_local(const ComplexMatrix& op, std::span<const int> dims, int party) {
  if (party < 0 || party >= static_cast<int>(dims.size())) {
    throw DimensionError("target party out of range");
  }
  if (op.rows() != dims[party] || op.cols() != dims[party]) {
    throw DimensionError("operator dimension does not match target party");
  }
  int left = 1, right = 1;
  for (int i = 0; i < party; ++i) left *= dims[i];
  for (int i = party + 1; i < static_cast<int>(dims.size()); ++i) right *= dims[i];
  ComplexMatrix out = Eigen::kroneckerProduct(
      ComplexMatrix::Identity(left, left),
      Eigen::kroneckerProduct(op, ComplexMatrix::Identity(right, right)).eval());
  return out;
}

}  // namespace mqmi
