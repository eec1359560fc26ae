#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "mqmi/json_io.hpp"
#include "mqmi/measures.hpp"
#include "mqmi/qmatrix.hpp"

namespace mqmi {

/// Trace-preserving map on one party, given by Kraus operators.
struct KrausChannel {
  std::vector<ComplexMatrix> operators;
  int target = 0;  // 0-based party index

  int dimension() const { return operators.empty() ? 0 : static_cast<int>(operators.front().rows()); }
  /// max |sum K^dagger K - I| entry.
  double trace_preservation_defect() const;
  /// Throws DimensionError on shape problems, NumericalError if not trace preserving.
  void check(double tol = kDefaultTol) const;
};

KrausChannel identity_channel(int d, int target);
/// rho -> (1 - p) rho + p tr(rho) I/d, via Weyl-Heisenberg Kraus operators.
KrausChannel depolarizing_channel(int d, double p, int target);
KrausChannel unitary_channel(const ComplexMatrix& u, int target);

/// Random isometry d -> d * kraus_rank cut into kraus_rank blocks of d x d.
/// kraus_rank 1 gives a Haar unitary.
KrausChannel random_local_channel(int d, int kraus_rank, std::uint64_t seed, int target = 0);

MultipartiteState apply_local(const KrausChannel& channel, const MultipartiteState& state,
                              double tol = kDefaultTol);

/// Outcome o of a projective measurement: probability and post-measurement state.
struct MeasurementBranch {
  double probability;
  MultipartiteState state;
};

/// Projective measurement of `party` in the orthonormal columns of `basis`.
/// Branches with zero probability are dropped.
std::vector<MeasurementBranch> measurement_branches(const MultipartiteState& state, int party,
                                                    const ComplexMatrix& basis,
                                                    double tol = kDefaultTol);

struct BroadcastResult {
  /// sum_o p_o rho_o (x) |o><o|^{(x) n}; registers are parties n .. 2n-1, the
  /// register of party i sitting at index n + i.
  MultipartiteState state;
  /// Block i = {party i, register of party i}.
  Partition owner_grouping;
};

/// Public announcement: measure `party` in `basis` and give every party a
/// classical copy of the outcome.
BroadcastResult measure_and_broadcast(const MultipartiteState& state, int party,
                                      const ComplexMatrix& basis, double tol = kDefaultTol);

/// |Q(channel(rho)) - Q(rho)|.
double deviation(const MultipartiteState& state, const KrausChannel& channel, const MeasureId& id,
                 const Partition& parts);

// Channel JSON schema: {"target": int (1-based), "kraus": [matrix, ...]}.
Json channel_to_json(const KrausChannel& channel);
KrausChannel channel_from_json(const Json& j);

/// Inline channel specs with 1-based parties: `identity:party=1`,
/// `depolarize:party=1,p=1`, `random:party=2,rank=2,seed=5`, or
/// `kraus@file.json`. `party_dims` supplies d. Throws ParseError.
KrausChannel parse_channel_spec(std::string_view text, const std::vector<int>& party_dims);

}  // namespace mqmi
