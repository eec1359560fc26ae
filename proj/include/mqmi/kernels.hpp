#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP path and a serial
// reference path; both produce bitwise-identical results because every output
// element is reduced by a single thread in a fixed order.

#include <span>
#include <vector>

#include "mqmi/qmatrix.hpp"

namespace mqmi {

enum class Execution { serial, parallel };

namespace kernels {

/// Partial trace over the complement of `keep`, written as a gather over
/// precomputed kept/traced index offsets.
ComplexMatrix partial_trace(const ComplexMatrix& rho, std::span<const int> dims,
                            SubsystemSet keep, Execution exec = Execution::parallel);

/// Straightforward digit-by-digit partial trace over every (row, col) pair.
/// Slow; kept as an independent reference for tests and the benchmark.
ComplexMatrix partial_trace_reference(const ComplexMatrix& rho, std::span<const int> dims,
                                      SubsystemSet keep);

/// -sum lambda log2 lambda over eigenvalues clamped at zero. Eigenvalues below
/// -tol raise NumericalError.
double entropy_from_eigenvalues(std::span<const double> eigenvalues, double tol = kDefaultTol);

/// Von Neumann entropy (bits) of a density matrix.
double matrix_entropy(const ComplexMatrix& rho, double tol = kDefaultTol);

/// Entropies of many reduced states of one global state. Results are placed
/// in the same order as `subsets`; the empty set maps to 0.
std::vector<double> subset_entropies(const MultipartiteState& state,
                                     std::span<const SubsystemSet> subsets,
                                     Execution exec = Execution::parallel,
                                     double tol = kDefaultTol);

}  // namespace kernels
}  // namespace mqmi
