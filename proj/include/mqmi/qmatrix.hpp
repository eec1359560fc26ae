#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mqmi {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kDefaultTol = 1e-9;

// Dense storage only; every routine assumes the total dimension stays small
// (256 is the documented working ceiling, e.g. eight qubits).
inline constexpr int kMaxTotalDimension = 256;

/// Raised when dims, partitions or subsystem selections are inconsistent.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a matrix fails a numerical precondition (hermiticity, trace,
/// positivity, trace preservation).
class NumericalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A set of party indices, stored as a bitmask of 0-based indices.
///
/// Conversion from the 1-based labels used at user interfaces happens in
/// `from_one_based`; everything else in the library works 0-based. The empty
/// set is the trivial conditioning system with zero entropy.
class SubsystemSet {
 public:
  static constexpr int kMaxParties = 32;

  constexpr SubsystemSet() = default;
  static SubsystemSet from_mask(std::uint32_t mask) { return SubsystemSet(mask); }
  static SubsystemSet from_indices(std::span<const int> zero_based);
  static SubsystemSet from_one_based(std::span<const int> one_based, int n_parties);
  static SubsystemSet single(int index);
  static SubsystemSet range(int first, int last);  // [first, last)
  static SubsystemSet all(int n_parties) { return range(0, n_parties); }

  std::uint32_t mask() const { return mask_; }
  bool empty() const { return mask_ == 0; }
  int size() const;
  bool contains(int index) const;
  bool intersects(SubsystemSet other) const { return (mask_ & other.mask_) != 0; }
  bool is_subset_of(SubsystemSet other) const { return (mask_ & ~other.mask_) == 0; }
  int max_index() const;  // -1 when empty

  std::vector<int> indices() const;  // ascending, 0-based
  std::vector<int> one_based() const;
  std::string to_string() const;  // "{1,3}" in 1-based labels

  SubsystemSet operator|(SubsystemSet o) const { return SubsystemSet(mask_ | o.mask_); }
  SubsystemSet operator&(SubsystemSet o) const { return SubsystemSet(mask_ & o.mask_); }
  SubsystemSet operator-(SubsystemSet o) const { return SubsystemSet(mask_ & ~o.mask_); }
  SubsystemSet& operator|=(SubsystemSet o) {
    mask_ |= o.mask_;
    return *this;
  }
  auto operator<=>(const SubsystemSet&) const = default;

 private:
  explicit constexpr SubsystemSet(std::uint32_t mask) : mask_(mask) {}
  std::uint32_t mask_ = 0;
};

struct ValidationReport {
  double hermiticity_defect = 0.0;  // max |rho - rho^dagger| entry
  double min_eigenvalue = 0.0;
  double trace_defect = 0.0;  // |tr rho - 1|
  bool dims_consistent = true;
  bool valid = false;

  std::string describe() const;
};

/// Density matrix over an ordered list of subsystems.
///
/// Party 0 is the most significant tensor factor, so the basis index of
/// |x_0 x_1 ... x_{n-1}> is x_0 d_1...d_{n-1} + ... + x_{n-1}. Construction
/// checks shape only; numerical validity is reported by `validate`.
class MultipartiteState {
 public:
  MultipartiteState(ComplexMatrix matrix, std::vector<int> dims,
                    std::vector<std::string> labels = {});

  /// |psi><psi| for an amplitude vector; the vector is not renormalized.
  static MultipartiteState from_pure(const ComplexVector& amplitudes, std::vector<int> dims);

  const ComplexMatrix& matrix() const { return matrix_; }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<std::string>& labels() const { return labels_; }
  int num_parties() const { return static_cast<int>(dims_.size()); }
  int dimension() const { return static_cast<int>(matrix_.rows()); }
  SubsystemSet all_parties() const { return SubsystemSet::all(num_parties()); }

  ValidationReport validate(double tol = kDefaultTol) const;

 private:
  ComplexMatrix matrix_;
  std::vector<int> dims_;
  std::vector<std::string> labels_;
};

struct Spectrum {
  std::vector<double> eigenvalues;  // descending
  ComplexMatrix eigenvectors;       // column i pairs with eigenvalues[i]
};

int product_of(std::span<const int> dims);
void check_dims(std::span<const int> dims);

ValidationReport validate(const MultipartiteState& state, double tol = kDefaultTol);

/// Eigendecomposition of a Hermitian matrix. Throws NumericalError when the
/// hermiticity defect exceeds `tol`.
Spectrum hermitian_eig(const ComplexMatrix& matrix, double tol = kDefaultTol);

/// Eigenvalues only, descending.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& matrix);

double hermiticity_defect(const ComplexMatrix& matrix);

MultipartiteState tensor(const MultipartiteState& a, const MultipartiteState& b);

/// New party i is old party perm[i] (0-based). Throws DimensionError unless
/// perm is a bijection on the parties.
MultipartiteState permute_subsystems(const MultipartiteState& state, std::span<const int> perm);

std::vector<int> inverse_permutation(std::span<const int> perm);

/// Reduced state on `keep`, parties kept in their original relative order.
MultipartiteState partial_trace(const MultipartiteState& state, SubsystemSet keep);

/// kron(I_left, op, I_right) acting on party `party` only.
ComplexMatrix embed_local(const ComplexMatrix& op, std::span<const int> dims, int party);

}  // namespace mqmi
