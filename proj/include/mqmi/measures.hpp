#pragma once

// Entropic correlation measures on blocks of parties.
//
// Every measure here is a linear combination of subsystem entropies, so each
// is built as an EntropyForm (set -> coefficient) and evaluated against an
// EntropyCache. The one exception is the relative-entropy form of the total
// correlation, which is computed from matrices directly.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mqmi/kernels.hpp"
#include "mqmi/qmatrix.hpp"

namespace mqmi {

/// Ordered list of disjoint nonempty blocks; each block acts as one party.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<SubsystemSet> blocks);

  static Partition singletons(int n_parties);
  /// Blocks given as 1-based party lists, checked against `n_parties`.
  static Partition from_one_based(const std::vector<std::vector<int>>& blocks, int n_parties);

  const std::vector<SubsystemSet>& blocks() const { return blocks_; }
  const SubsystemSet& operator[](int i) const { return blocks_[i]; }
  int size() const { return static_cast<int>(blocks_.size()); }
  SubsystemSet support() const;
  bool covers(int n_parties) const { return support() == SubsystemSet::all(n_parties); }

  /// Union of the blocks selected by the bits of `block_mask`.
  SubsystemSet union_of(std::uint32_t block_mask) const;

  Partition without(int block) const;
  /// Blocks i and j fused into one block at position min(i, j).
  Partition merged(int i, int j) const;
  /// New block b is old block order[b].
  Partition reordered(std::span<const int> order) const;
  /// Relabels party indices: party p becomes new_index[p].
  Partition relabeled(std::span<const int> new_index) const;

  std::string to_string() const;  // "{1}:{2,3}"

 private:
  std::vector<SubsystemSet> blocks_;
};

/// Memoized subsystem entropies of one state.
///
/// Holds a reference to the state; the cache must not outlive it. Not safe for
/// concurrent use; create one per evaluation.
class EntropyCache {
 public:
  explicit EntropyCache(const MultipartiteState& state, Execution exec = Execution::parallel,
                        double tol = kDefaultTol);

  const MultipartiteState& state() const { return state_; }
  double entropy(SubsystemSet set);
  /// Fills every missing entry, in parallel when enabled.
  void prefetch(std::span<const SubsystemSet> sets);
  /// Prefetches S(union of any sub-collection of blocks, plus `extra`).
  void prefetch_unions(const Partition& parts, SubsystemSet extra = {});
  std::size_t size() const { return values_.size(); }

 private:
  const MultipartiteState& state_;
  Execution exec_;
  double tol_;
  std::map<SubsystemSet, double> values_;
};

/// sum_c coefficient(c) * S(c), with terms kept in sorted subset order so
/// evaluation order is fixed.
class EntropyForm {
 public:
  EntropyForm() = default;
  static EntropyForm entropy(SubsystemSet set, double coefficient = 1.0);

  EntropyForm& add(SubsystemSet set, double coefficient);
  EntropyForm& operator+=(const EntropyForm& other);
  EntropyForm& operator-=(const EntropyForm& other);
  EntropyForm& operator*=(double factor);
  friend EntropyForm operator+(EntropyForm a, const EntropyForm& b) { return a += b; }
  friend EntropyForm operator-(EntropyForm a, const EntropyForm& b) { return a -= b; }
  friend EntropyForm operator*(double f, EntropyForm a) { return a *= f; }

  /// Nonzero terms only.
  const std::map<SubsystemSet, double>& terms() const { return terms_; }
  double evaluate(EntropyCache& cache) const;

 private:
  std::map<SubsystemSet, double> terms_;
};

double binomial(int n, int k);

// ---- Forms -----------------------------------------------------------------

/// I(A:B|C) = S(AC) + S(BC) - S(C) - S(ABC).
EntropyForm mutual_information_form(SubsystemSet a, SubsystemSet b, SubsystemSet cond = {});

/// Generalized conditional mutual information I(B_1 : ... : B_m | Y):
/// -S(Y) + sum_j (-1)^{j+1} sum_{|J| = j} S(B_J Y). One block gives S(B|Y).
EntropyForm gcmi_form(const Partition& blocks, SubsystemSet cond = {});

/// M_k over the blocks: sum of all k-block entropies minus C(m-1, k-1) S(all).
/// With a conditioning set every entropy becomes conditional on it.
EntropyForm mqmi_form(const Partition& parts, int k, SubsystemSet cond = {});

enum class TotalCorrelationForm { entropic, relative, chain, regions };
enum class DualTotalCorrelationForm { entropic, chain, regions, complement };

/// Linear forms of T (relative has no linear form and is rejected).
EntropyForm total_correlation_form(const Partition& parts, TotalCorrelationForm form);
EntropyForm dual_total_correlation_form(const Partition& parts, DualTotalCorrelationForm form);
EntropyForm common_information_form(const Partition& parts);

// ---- Values ----------------------------------------------------------------

double gcmi(const MultipartiteState& state, const Partition& blocks, SubsystemSet cond = {});
double mqmi_k(const MultipartiteState& state, const Partition& parts, int k);
double mqmi_k(EntropyCache& cache, const Partition& parts, int k, SubsystemSet cond = {});

/// M_1 ... M_m sharing one set of entropy evaluations.
std::vector<double> mqmi_profile(const MultipartiteState& state, const Partition& parts);
std::vector<double> mqmi_profile(EntropyCache& cache, const Partition& parts,
                                 SubsystemSet cond = {});

double total_correlation(const MultipartiteState& state, const Partition& parts,
                         TotalCorrelationForm form = TotalCorrelationForm::entropic);
double total_correlation(EntropyCache& cache, const Partition& parts, TotalCorrelationForm form);

/// D(rho_blocks || rho_B1 (x) ... (x) rho_Bm); +inf only in degenerate numerics.
double total_correlation_relative(const MultipartiteState& state, const Partition& parts,
                                  double tol = kDefaultTol);

double dual_total_correlation(const MultipartiteState& state, const Partition& parts,
                              DualTotalCorrelationForm form = DualTotalCorrelationForm::entropic);
double dual_total_correlation(EntropyCache& cache, const Partition& parts,
                              DualTotalCorrelationForm form);

/// Weights for the convex combination sum_k lambda_k M_k.
struct WeightVector {
  std::vector<double> weights;
  /// Throws DimensionError unless nonnegative, summing to 1 within 1e-12,
  /// with one weight per block.
  void check(int n_blocks) const;
};

double combined(const MultipartiteState& state, const Partition& parts, const WeightVector& lambda);
double common_information(const MultipartiteState& state, const Partition& parts);

// ---- Identity and region evaluators -----------------------------------------

struct IdentityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual() const { return lhs - rhs; }
};

struct TripartiteRegions {
  double a = 0, b = 0, c = 0;     // information held by one block only
  double ab = 0, ac = 0, bc = 0;  // shared by exactly two blocks
  double abc = 0;                 // shared by all three
  double t3 = 0, s3 = 0;
  std::vector<IdentityCheck> checks;
};

TripartiteRegions tripartite_regions(const MultipartiteState& state, const Partition& parts);

/// M_p + M_q against the sum of bipartite mutual informations over every
/// split of the blocks into p and q = m - p blocks.
IdentityCheck partition_identity_residual(const MultipartiteState& state, const Partition& parts,
                                          int p);
IdentityCheck partition_identity_residual(EntropyCache& cache, const Partition& parts, int p);

/// Recurrences for T and S, relations between neighbouring M_k, and the
/// M_2 recurrence. Needs at least three blocks.
std::vector<IdentityCheck> recurrence_residuals(const MultipartiteState& state,
                                                const Partition& parts);
std::vector<IdentityCheck> recurrence_residuals(EntropyCache& cache, const Partition& parts);

struct LeakageReport {
  double i_ab_e = 0;        // I(AB:E)
  double i_ae_given_b = 0;  // I(A:E|B)
  double i_be_given_a = 0;  // I(B:E|A)
  double i_abe = 0;         // I(A:B:E)
  double m2 = 0;            // M_2 over A:B:E
  double i_ab_given_e = 0;  // I(A:B|E)
  std::vector<IdentityCheck> checks;
};

LeakageReport secret_sharing_leakage(const MultipartiteState& state, SubsystemSet a,
                                     SubsystemSet b, SubsystemSet e);

// ---- Reports and measure selection -----------------------------------------

struct MeasureTerm {
  SubsystemSet set;
  double coefficient;
  double entropy;
};

struct MeasureReport {
  std::string name;
  double value = 0.0;
  Partition partition;
  SubsystemSet cond;
  std::vector<MeasureTerm> terms;

  /// sum coefficient * entropy, in stored order.
  double recomputed_value() const;
};

/// Which quantity an evaluation refers to.
struct MeasureId {
  enum class Kind { mk, total, dual_total, combined, common, gcmi };
  Kind kind = Kind::mk;
  int k = 1;
  WeightVector lambda;
  SubsystemSet cond;  // gcmi only

  std::string name(int n_blocks) const;
};

MeasureReport measure_report(const MultipartiteState& state, const Partition& parts,
                             const MeasureId& id);
double evaluate_measure(const MultipartiteState& state, const Partition& parts, const MeasureId& id);

}  // namespace mqmi
