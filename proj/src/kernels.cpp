#include "mqmi/kernels.hpp"

#include <cmath>
#include <string>

#include <omp.h>

namespace mqmi::kernels {
namespace {

struct TraceLayout {
  int kept_dim = 1;
  int traced_dim = 1;
  std::vector<int> kept_offset;    // full-space offset of each kept multi-index
  std::vector<int> traced_offset;  // full-space offset of each traced multi-index
};

// Offsets of every multi-index over the parties in `group`, in row-major order
// of those parties.
std::vector<int> offsets_for(std::span<const int> dims, std::span<const long long> stride,
                             const std::vector<int>& group) {
  int count = 1;
  for (int p : group) count *= dims[p];
  std::vector<int> out(count);
  std::vector<int> digit(group.size(), 0);
  for (int idx = 0; idx < count; ++idx) {
    long long off = 0;
    for (std::size_t g = 0; g < group.size(); ++g) off += digit[g] * stride[group[g]];
    out[idx] = static_cast<int>(off);
    for (int g = static_cast<int>(group.size()) - 1; g >= 0; --g) {
      if (++digit[g] < dims[group[g]]) break;
      digit[g] = 0;
    }
  }
  return out;
}

TraceLayout layout_for(std::span<const int> dims, SubsystemSet keep) {
  const int n = static_cast<int>(dims.size());
  std::vector<long long> stride(n);
  long long s = 1;
  for (int i = n - 1; i >= 0; --i) {
    stride[i] = s;
    s *= dims[i];
  }
  std::vector<int> kept, traced;
  for (int i = 0; i < n; ++i) (keep.contains(i) ? kept : traced).push_back(i);
  TraceLayout L;
  L.kept_offset = offsets_for(dims, stride, kept);
  L.traced_offset = offsets_for(dims, stride, traced);
  L.kept_dim = static_cast<int>(L.kept_offset.size());
  L.traced_dim = static_cast<int>(L.traced_offset.size());
  return L;
}

void check_keep(std::span<const int> dims, SubsystemSet keep) {
  if (keep.empty()) throw DimensionError("partial trace needs a nonempty keep set");
  if (keep.max_index() >= static_cast<int>(dims.size())) {
    throw DimensionError("keep set exceeds party count");
  }
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& rho, std::span<const int> dims,
                            SubsystemSet keep, Execution exec) {
  check_keep(dims, keep);
  const TraceLayout L = layout_for(dims, keep);
  ComplexMatrix out(L.kept_dim, L.kept_dim);
  const int kd = L.kept_dim;
  const int td = L.traced_dim;
#pragma omp parallel for schedule(static) if (exec == Execution::parallel && kd >= 16)
  for (int c = 0; c < kd; ++c) {
    const int co = L.kept_offset[c];
    for (int r = 0; r < kd; ++r) {
      const int ro = L.kept_offset[r];
      Complex acc(0.0, 0.0);
      for (int t = 0; t < td; ++t) acc += rho(ro + L.traced_offset[t], co + L.traced_offset[t]);
      out(r, c) = acc;
    }
  }
  return out;
}

ComplexMatrix partial_trace_reference(const ComplexMatrix& rho, std::span<const int> dims,
                                      SubsystemSet keep) {
  check_keep(dims, keep);
  const int n = static_cast<int>(dims.size());
  const int full = static_cast<int>(rho.rows());
  auto digits = [&](int idx) {
    std::vector<int> d(n);
    for (int i = n - 1; i >= 0; --i) {
      d[i] = idx % dims[i];
      idx /= dims[i];
    }
    return d;
  };
  int kept_dim = 1;
  for (int i = 0; i < n; ++i) {
    if (keep.contains(i)) kept_dim *= dims[i];
  }
  ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
  for (int r = 0; r < full; ++r) {
    const auto dr = digits(r);
    for (int c = 0; c < full; ++c) {
      const auto dc = digits(c);
      bool diagonal_on_traced = true;
      int kr = 0, kc = 0;
      for (int i = 0; i < n; ++i) {
        if (keep.contains(i)) {
          kr = kr * dims[i] + dr[i];
          kc = kc * dims[i] + dc[i];
        } else if (dr[i] != dc[i]) {
          diagonal_on_traced = false;
          break;
        }
      }
      if (diagonal_on_traced) out(kr, kc) += rho(r, c);
    }
  }
  return out;
}

double entropy_from_eigenvalues(std::span<const double> eigenvalues, double tol) {
  double s = 0.0;
  for (double l : eigenvalues) {
    if (l < -tol) {
      throw NumericalError("negative eigenvalue " + std::to_string(l) + " beyond tolerance");
    }
    if (l > 0.0) s -= l * std::log2(l);
  }
  return s < 0.0 ? 0.0 : s;
}

double matrix_entropy(const ComplexMatrix& rho, double tol) {
  if (rho.rows() == 1) return 0.0;
  return entropy_from_eigenvalues(hermitian_eigenvalues(rho), tol);
}

std::vector<double> subset_entropies(const MultipartiteState& state,
                                     std::span<const SubsystemSet> subsets, Execution exec,
                                     double tol) {
  const int count = static_cast<int>(subsets.size());
  std::vector<double> out(count, 0.0);
  const SubsystemSet all = state.all_parties();
  for (const auto& s : subsets) {
    if (!s.is_subset_of(all)) throw DimensionError("subset " + s.to_string() + " exceeds party count");
  }
  // Per-subset work is independent; an exception inside the parallel region is
  // captured and rethrown outside it.
  std::vector<std::string> errors(count);
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel && count > 1)
  for (int i = 0; i < count; ++i) {
    try {
      if (subsets[i].empty()) continue;
      const ComplexMatrix reduced =
          subsets[i] == all ? state.matrix()
                            : partial_trace(state.matrix(), state.dims(), subsets[i], Execution::serial);
      out[i] = matrix_entropy(reduced, tol);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw NumericalError(e);
  }
  return out;
}

}  // namespace mqmi::kernels
