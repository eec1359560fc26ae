#include "mqmi/measures.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "mqmi/entropy.hpp"

namespace mqmi {
namespace {

// Block subsets of size k as bitmasks over block positions, ascending.
std::vector<std::uint32_t> block_subsets(int m, int k) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (std::popcount(mask) == k) out.push_back(mask);
  }
  return out;
}

std::uint32_t all_blocks(int m) { return m == 32 ? ~0u : (1u << m) - 1; }

void require_blocks(const Partition& parts, int at_least, const char* what) {
  if (parts.size() < at_least) {
    throw DimensionError(std::string(what) + " needs at least " + std::to_string(at_least) + " blocks");
  }
}

void check_support(const MultipartiteState& state, const Partition& parts, SubsystemSet cond = {}) {
  if (!(parts.support() | cond).is_subset_of(state.all_parties())) {
    throw DimensionError("partition " + parts.to_string() + " refers to parties outside the state");
  }
  if (parts.support().intersects(cond)) {
    throw DimensionError("conditioning set overlaps the blocks");
  }
}

}  // namespace

// ---- Partition ---------------------------------------------------------------

Partition::Partition(std::vector<SubsystemSet> blocks) : blocks_(std::move(blocks)) {
  SubsystemSet seen;
  for (const auto& b : blocks_) {
    if (b.empty()) throw DimensionError("partition blocks must be nonempty");
    if (b.intersects(seen)) throw DimensionError("partition blocks must be disjoint");
    seen |= b;
  }
}

Partition Partition::singletons(int n_parties) {
  std::vector<SubsystemSet> blocks;
  for (int i = 0; i < n_parties; ++i) blocks.push_back(SubsystemSet::single(i));
  return Partition(std::move(blocks));
}

Partition Partition::from_one_based(const std::vector<std::vector<int>>& blocks, int n_parties) {
  std::vector<SubsystemSet> out;
  for (const auto& b : blocks) out.push_back(SubsystemSet::from_one_based(b, n_parties));
  return Partition(std::move(out));
}

SubsystemSet Partition::support() const {
  SubsystemSet s;
  for (const auto& b : blocks_) s |= b;
  return s;
}

SubsystemSet Partition::union_of(std::uint32_t block_mask) const {
  SubsystemSet s;
  for (int i = 0; i < size(); ++i) {
    if (block_mask & (1u << i)) s |= blocks_[i];
  }
  return s;
}

Partition Partition::without(int block) const {
  if (block < 0 || block >= size()) throw DimensionError("block index out of range");
  auto b = blocks_;
  b.erase(b.begin() + block);
  return Partition(std::move(b));
}

Partition Partition::merged(int i, int j) const {
  if (i == j || i < 0 || j < 0 || i >= size() || j >= size()) {
    throw DimensionError("merge needs two distinct block indices");
  }
  const int lo = std::min(i, j), hi = std::max(i, j);
  auto b = blocks_;
  b[lo] = b[lo] | b[hi];
  b.erase(b.begin() + hi);
  return Partition(std::move(b));
}

Partition Partition::reordered(std::span<const int> order) const {
  if (static_cast<int>(order.size()) != size()) throw DimensionError("block order length mismatch");
  inverse_permutation(order);
  std::vector<SubsystemSet> b;
  for (int o : order) b.push_back(blocks_[o]);
  return Partition(std::move(b));
}

Partition Partition::relabeled(std::span<const int> new_index) const {
  std::vector<SubsystemSet> b;
  for (const auto& block : blocks_) {
    std::vector<int> idx;
    for (int p : block.indices()) {
      if (p >= static_cast<int>(new_index.size())) throw DimensionError("relabel map too short");
      idx.push_back(new_index[p]);
    }
    b.push_back(SubsystemSet::from_indices(idx));
  }
  return Partition(std::move(b));
}

std::string Partition::to_string() const {
  std::ostringstream os;
  for (int i = 0; i < size(); ++i) {
    if (i) os << ':';
    os << blocks_[i].to_string();
  }
  return os.str();
}

// ---- EntropyCache ------------------------------------------------------------

EntropyCache::EntropyCache(const MultipartiteState& state, Execution exec, double tol)
    : state_(state), exec_(exec), tol_(tol) {}

double EntropyCache::entropy(SubsystemSet set) {
  if (set.empty()) return 0.0;
  if (auto it = values_.find(set); it != values_.end()) return it->second;
  const SubsystemSet one[] = {set};
  const double v = kernels::subset_entropies(state_, one, Execution::serial, tol_)[0];
  values_.emplace(set, v);
  return v;
}

void EntropyCache::prefetch(std::span<const SubsystemSet> sets) {
  std::vector<SubsystemSet> missing;
  for (const auto& s : sets) {
    if (!s.empty() && !values_.contains(s)) missing.push_back(s);
  }
  std::sort(missing.begin(), missing.end());
  missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
  if (missing.empty()) return;
  const auto values = kernels::subset_entropies(state_, missing, exec_, tol_);
  for (std::size_t i = 0; i < missing.size(); ++i) values_.emplace(missing[i], values[i]);
}

void EntropyCache::prefetch_unions(const Partition& parts, SubsystemSet extra) {
  const int m = parts.size();
  std::vector<SubsystemSet> sets;
  sets.reserve(std::size_t{1} << m);
  for (std::uint32_t mask = 0; mask <= all_blocks(m); ++mask) {
    sets.push_back(parts.union_of(mask) | extra);
    if (mask == all_blocks(m)) break;
  }
  prefetch(sets);
}

// ---- EntropyForm -------------------------------------------------------------

EntropyForm EntropyForm::entropy(SubsystemSet set, double coefficient) {
  EntropyForm f;
  f.add(set, coefficient);
  return f;
}

EntropyForm& EntropyForm::add(SubsystemSet set, double coefficient) {
  if (set.empty()) return *this;  // S of the trivial system is zero
  auto& c = terms_[set];
  c += coefficient;
  if (c == 0.0) terms_.erase(set);
  return *this;
}

EntropyForm& EntropyForm::operator+=(const EntropyForm& other) {
  for (const auto& [s, c] : other.terms_) add(s, c);
  return *this;
}

EntropyForm& EntropyForm::operator-=(const EntropyForm& other) {
  for (const auto& [s, c] : other.terms_) add(s, -c);
  return *this;
}

EntropyForm& EntropyForm::operator*=(double factor) {
  if (factor == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [s, c] : terms_) c *= factor;
  return *this;
}

double EntropyForm::evaluate(EntropyCache& cache) const {
  std::vector<SubsystemSet> sets;
  sets.reserve(terms_.size());
  for (const auto& [s, c] : terms_) sets.push_back(s);
  cache.prefetch(sets);
  double v = 0.0;
  for (const auto& [s, c] : terms_) v += c * cache.entropy(s);
  return v;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

// ---- Forms -------------------------------------------------------------------

EntropyForm mutual_information_form(SubsystemSet a, SubsystemSet b, SubsystemSet cond) {
  if (a.intersects(b) || a.intersects(cond) || b.intersects(cond)) {
    throw DimensionError("mutual information arguments must be disjoint");
  }
  EntropyForm f;
  f.add(a | cond, 1.0).add(b | cond, 1.0).add(cond, -1.0).add(a | b | cond, -1.0);
  return f;
}

EntropyForm gcmi_form(const Partition& blocks, SubsystemSet cond) {
  require_blocks(blocks, 1, "gcmi");
  if (blocks.support().intersects(cond)) throw DimensionError("conditioning set overlaps the blocks");
  const int m = blocks.size();
  EntropyForm f;
  f.add(cond, -1.0);
  for (int j = 1; j <= m; ++j) {
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    for (auto mask : block_subsets(m, j)) f.add(blocks.union_of(mask) | cond, sign);
  }
  return f;
}

EntropyForm mqmi_form(const Partition& parts, int k, SubsystemSet cond) {
  const int m = parts.size();
  if (k < 1 || k > m) {
    throw DimensionError("k = " + std::to_string(k) + " outside 1.." + std::to_string(m));
  }
  if (parts.support().intersects(cond)) throw DimensionError("conditioning set overlaps the blocks");
  EntropyForm f;
  for (auto mask : block_subsets(m, k)) f.add(parts.union_of(mask) | cond, 1.0);
  const double pascal = binomial(m - 1, k - 1);
  f.add(parts.support() | cond, -pascal);
  f.add(cond, -(binomial(m, k) - pascal));
  return f;
}

EntropyForm total_correlation_form(const Partition& parts, TotalCorrelationForm form) {
  require_blocks(parts, 2, "total correlation");
  const int m = parts.size();
  EntropyForm f;
  switch (form) {
    case TotalCorrelationForm::entropic:
      for (const auto& b : parts.blocks()) f.add(b, 1.0);
      f.add(parts.support(), -1.0);
      return f;
    case TotalCorrelationForm::chain:
      for (int k = 0; k + 1 < m; ++k) {
        const SubsystemSet tail = parts.union_of(all_blocks(m) & ~((2u << k) - 1));
        f += mutual_information_form(parts[k], tail);
      }
      return f;
    case TotalCorrelationForm::regions:
      for (int j = 2; j <= m; ++j) {
        for (auto mask : block_subsets(m, j)) {
          std::vector<SubsystemSet> chosen;
          for (int i = 0; i < m; ++i) {
            if (mask & (1u << i)) chosen.push_back(parts[i]);
          }
          const SubsystemSet rest = parts.union_of(all_blocks(m) & ~mask);
          f += static_cast<double>(j - 1) * gcmi_form(Partition(chosen), rest);
        }
      }
      return f;
    case TotalCorrelationForm::relative:
      break;
  }
  throw std::invalid_argument("the relative-entropy form of T has no linear entropy form");
}

EntropyForm dual_total_correlation_form(const Partition& parts, DualTotalCorrelationForm form) {
  require_blocks(parts, 2, "dual total correlation");
  const int m = parts.size();
  const SubsystemSet all = parts.support();
  EntropyForm f;
  switch (form) {
    case DualTotalCorrelationForm::entropic:
      for (const auto& b : parts.blocks()) f.add(all - b, 1.0);
      f.add(all, -static_cast<double>(m - 1));
      return f;
    case DualTotalCorrelationForm::chain:
      for (int k = 0; k + 1 < m; ++k) {
        const SubsystemSet head = parts.union_of((1u << k) - 1);
        const SubsystemSet tail = parts.union_of(all_blocks(m) & ~((2u << k) - 1));
        f += mutual_information_form(parts[k], tail, head);
      }
      return f;
    case DualTotalCorrelationForm::regions:
      for (int j = 2; j <= m; ++j) {
        for (auto mask : block_subsets(m, j)) {
          std::vector<SubsystemSet> chosen;
          for (int i = 0; i < m; ++i) {
            if (mask & (1u << i)) chosen.push_back(parts[i]);
          }
          f += gcmi_form(Partition(chosen), parts.union_of(all_blocks(m) & ~mask));
        }
      }
      return f;
    case DualTotalCorrelationForm::complement:
      f.add(all, 1.0);
      for (const auto& b : parts.blocks()) f -= gcmi_form(Partition({b}), all - b);
      return f;
  }
  throw std::invalid_argument("unknown dual total correlation form");
}

EntropyForm common_information_form(const Partition& parts) {
  EntropyForm f;
  for (int k = 1; k <= parts.size(); ++k) {
    f += (k % 2 == 1 ? 1.0 : -1.0) * mqmi_form(parts, k);
  }
  return f;
}

// ---- Values ------------------------------------------------------------------

double gcmi(const MultipartiteState& state, const Partition& blocks, SubsystemSet cond) {
  check_support(state, blocks, cond);
  EntropyCache cache(state);
  cache.prefetch_unions(blocks, cond);
  return gcmi_form(blocks, cond).evaluate(cache);
}

double mqmi_k(EntropyCache& cache, const Partition& parts, int k, SubsystemSet cond) {
  return mqmi_form(parts, k, cond).evaluate(cache);
}

double mqmi_k(const MultipartiteState& state, const Partition& parts, int k) {
  check_support(state, parts);
  EntropyCache cache(state);
  return mqmi_k(cache, parts, k);
}

std::vector<double> mqmi_profile(EntropyCache& cache, const Partition& parts, SubsystemSet cond) {
  require_blocks(parts, 1, "profile");
  cache.prefetch_unions(parts, cond);
  std::vector<double> out;
  for (int k = 1; k <= parts.size(); ++k) out.push_back(mqmi_k(cache, parts, k, cond));
  return out;
}

std::vector<double> mqmi_profile(const MultipartiteState& state, const Partition& parts) {
  check_support(state, parts);
  EntropyCache cache(state);
  return mqmi_profile(cache, parts);
}

double total_correlation_relative(const MultipartiteState& state, const Partition& parts,
                                  double tol) {
  check_support(state, parts);
  require_blocks(parts, 2, "total correlation");
  const SubsystemSet support = parts.support();
  const MultipartiteState reduced = partial_trace(state, support);
  // Position of each original party inside `reduced`.
  std::vector<int> position(state.num_parties(), -1);
  {
    int pos = 0;
    for (int p : support.indices()) position[p] = pos++;
  }
  std::vector<int> order;
  for (const auto& b : parts.blocks()) {
    for (int p : b.indices()) order.push_back(position[p]);
  }
  const MultipartiteState grouped = permute_subsystems(reduced, order);
  MultipartiteState product = partial_trace(state, parts[0]);
  for (int i = 1; i < parts.size(); ++i) product = tensor(product, partial_trace(state, parts[i]));
  const EntropyValue d = relative_entropy(grouped.matrix(), product.matrix(), tol);
  return d.is_infinite() ? std::numeric_limits<double>::infinity() : d.bits();
}

double total_correlation(EntropyCache& cache, const Partition& parts, TotalCorrelationForm form) {
  if (form == TotalCorrelationForm::relative) return total_correlation_relative(cache.state(), parts);
  return total_correlation_form(parts, form).evaluate(cache);
}

double total_correlation(const MultipartiteState& state, const Partition& parts,
                         TotalCorrelationForm form) {
  check_support(state, parts);
  EntropyCache cache(state);
  return total_correlation(cache, parts, form);
}

double dual_total_correlation(EntropyCache& cache, const Partition& parts,
                              DualTotalCorrelationForm form) {
  return dual_total_correlation_form(parts, form).evaluate(cache);
}

double dual_total_correlation(const MultipartiteState& state, const Partition& parts,
                              DualTotalCorrelationForm form) {
  check_support(state, parts);
  EntropyCache cache(state);
  return dual_total_correlation(cache, parts, form);
}

void WeightVector::check(int n_blocks) const {
  if (static_cast<int>(weights.size()) != n_blocks) {
    throw DimensionError("expected " + std::to_string(n_blocks) + " weights, got " +
                         std::to_string(weights.size()));
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw DimensionError("weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw DimensionError("weights must sum to 1");
}

double combined(const MultipartiteState& state, const Partition& parts, const WeightVector& lambda) {
  lambda.check(parts.size());
  const auto profile = mqmi_profile(state, parts);
  double v = 0.0;
  for (std::size_t k = 0; k < profile.size(); ++k) v += lambda.weights[k] * profile[k];
  return v;
}

double common_information(const MultipartiteState& state, const Partition& parts) {
  const auto profile = mqmi_profile(state, parts);
  double v = 0.0;
  for (std::size_t k = 0; k < profile.size(); ++k) v += (k % 2 == 0 ? 1.0 : -1.0) * profile[k];
  return v;
}

// ---- Identities --------------------------------------------------------------

TripartiteRegions tripartite_regions(const MultipartiteState& state, const Partition& parts) {
  if (parts.size() != 3) throw DimensionError("tripartite regions need exactly 3 blocks");
  check_support(state, parts);
  EntropyCache cache(state);
  cache.prefetch_unions(parts);
  const SubsystemSet A = parts[0], B = parts[1], C = parts[2];
  auto g = [&](std::vector<SubsystemSet> blocks, SubsystemSet cond) {
    return gcmi_form(Partition(std::move(blocks)), cond).evaluate(cache);
  };
  auto mi = [&](SubsystemSet x, SubsystemSet y, SubsystemSet z = {}) {
    return mutual_information_form(x, y, z).evaluate(cache);
  };
  TripartiteRegions r;
  r.a = g({A}, B | C);
  r.b = g({B}, A | C);
  r.c = g({C}, A | B);
  r.ab = g({A, B}, C);
  r.ac = g({A, C}, B);
  r.bc = g({B, C}, A);
  r.abc = g({A, B, C}, {});
  r.t3 = total_correlation_form(parts, TotalCorrelationForm::entropic).evaluate(cache);
  r.s3 = dual_total_correlation_form(parts, DualTotalCorrelationForm::entropic).evaluate(cache);
  const double s_abc = cache.entropy(A | B | C);
  r.checks = {
      {"T3 = D(rho_ABC || rho_A x rho_B x rho_C)", r.t3, total_correlation_relative(state, parts)},
      {"T3 = I(A:BC) + I(B:C)", r.t3, mi(A, B | C) + mi(B, C)},
      {"T3 = I(A:B|C) + I(A:C|B) + I(B:C|A) + 2 I(A:B:C)", r.t3, r.ab + r.ac + r.bc + 2.0 * r.abc},
      {"S3 = I(A:BC) + I(B:C|A)", r.s3, mi(A, B | C) + mi(B, C, A)},
      {"S3 = I(A:B|C) + I(A:C|B) + I(B:C|A) + I(A:B:C)", r.s3, r.ab + r.ac + r.bc + r.abc},
      {"S3 = S(ABC) - I(A|BC) - I(B|AC) - I(C|AB)", r.s3, s_abc - r.a - r.b - r.c},
      {"a + b + c + ab + ac + bc + abc = S(ABC)", r.a + r.b + r.c + r.ab + r.ac + r.bc + r.abc, s_abc},
  };
  return r;
}

IdentityCheck partition_identity_residual(EntropyCache& cache, const Partition& parts, int p) {
  const int m = parts.size();
  if (p < 1 || p > m - 1) throw DimensionError("p must be in 1..m-1");
  const int q = m - p;
  IdentityCheck c;
  c.name = "M_" + std::to_string(p) + " + M_" + std::to_string(q) + " = sum of I over " +
           std::to_string(p) + "|" + std::to_string(q) + " splits";
  c.lhs = mqmi_k(cache, parts, p) + mqmi_k(cache, parts, q);
  EntropyForm rhs;
  for (auto mask : block_subsets(m, p)) {
    rhs += mutual_information_form(parts.union_of(mask), parts.union_of(all_blocks(m) & ~mask));
  }
  c.rhs = rhs.evaluate(cache);
  return c;
}

IdentityCheck partition_identity_residual(const MultipartiteState& state, const Partition& parts,
                                          int p) {
  check_support(state, parts);
  EntropyCache cache(state);
  cache.prefetch_unions(parts);
  return partition_identity_residual(cache, parts, p);
}

std::vector<IdentityCheck> recurrence_residuals(EntropyCache& cache, const Partition& parts) {
  const int m = parts.size();
  if (m < 3) throw DimensionError("recurrence relations need at least 3 blocks");
  cache.prefetch_unions(parts);
  const SubsystemSet all = parts.support();
  auto T = [&](const Partition& p) { return mqmi_k(cache, p, 1); };
  auto S = [&](const Partition& p) { return mqmi_k(cache, p, p.size() - 1); };
  auto mi = [&](SubsystemSet x, SubsystemSet y, SubsystemSet z = {}) {
    return mutual_information_form(x, y, z).evaluate(cache);
  };
  auto label = [](int i) { return std::to_string(i + 1); };

  std::vector<IdentityCheck> out;
  const double t_full = T(parts);
  const double s_full = S(parts);
  for (int j = 0; j < m; ++j) {
    out.push_back({"T_n = T_{n-1}(drop " + label(j) + ") + I(rest : " + label(j) + ")", t_full,
                   T(parts.without(j)) + mi(all - parts[j], parts[j])});
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const Partition g = parts.merged(i, j);
      const std::string tag = label(i) + label(j);
      out.push_back({"T_n = T_{n-1}(group " + tag + ") + I(" + label(i) + ":" + label(j) + ")",
                     t_full, T(g) + mi(parts[i], parts[j])});
      out.push_back({"S_n = S_{n-1}(group " + tag + ") + I(" + label(i) + ":" + label(j) + "|rest)",
                     s_full, S(g) + mi(parts[i], parts[j], all - parts[i] - parts[j])});
    }
  }

  const double m1 = mqmi_k(cache, parts, 1);
  {
    double pair_sum = 0.0;
    for (int j = 0; j < m; ++j) {
      for (int k = j + 1; k < m; ++k) pair_sum += mi(parts[j], parts[k]);
    }
    out.push_back({"M_2 + sum I(X_j:X_k) = (n-1) M_1", mqmi_k(cache, parts, 2) + pair_sum, (m - 1) * m1});
  }
  for (int k = 1; k < m; ++k) {
    double cross = 0.0;
    for (auto mask : block_subsets(m, k)) {
      const SubsystemSet group = parts.union_of(mask);
      for (int i = 0; i < m; ++i) {
        if (!(mask & (1u << i))) cross += mi(group, parts[i]);
      }
    }
    out.push_back({"(k+1) M_{k+1} + sum I(X_J:X_i) = (n-k) M_k + (1-k/n) C(n,k) M_1 at k=" +
                       std::to_string(k),
                   (k + 1) * mqmi_k(cache, parts, k + 1) + cross,
                   (m - k) * mqmi_k(cache, parts, k) +
                       (1.0 - static_cast<double>(k) / m) * binomial(m, k) * m1});
  }
  {
    const SubsystemSet last = parts[m - 1];
    double extra = 0.0;
    for (int k = 0; k + 1 < m; ++k) {
      extra += cache.entropy(all - parts[k]) + cache.entropy(all - last) - cache.entropy(all) -
               cache.entropy(all - parts[k] - last);
    }
    const Partition head = parts.without(m - 1);
    out.push_back({"M_{n-1}^(n) = M_{n-2}^(n-1) + sum_k (S_~k + S_~n - S - S_~kn)",
                   mqmi_k(cache, parts, m - 1), mqmi_k(cache, head, m - 2) + extra});
  }
  {
    const Partition head = parts.without(m - 1);
    const SubsystemSet last = parts[m - 1];
    const SubsystemSet head_all = head.support();
    double rhs = mqmi_k(cache, head, 2) + mqmi_k(cache, head, 1) + mi(last, head_all - parts[0], parts[0]);
    for (int j = 1; j + 1 < m; ++j) rhs += mi(last, head_all - parts[j], parts[j]);
    out.push_back({"M_2^(n) recurrence via M_2^(n-1), M_1^(n-1) and conditional MIs",
                   mqmi_k(cache, parts, 2), rhs});
  }
  return out;
}

std::vector<IdentityCheck> recurrence_residuals(const MultipartiteState& state,
                                                const Partition& parts) {
  check_support(state, parts);
  EntropyCache cache(state);
  return recurrence_residuals(cache, parts);
}

LeakageReport secret_sharing_leakage(const MultipartiteState& state, SubsystemSet a,
                                     SubsystemSet b, SubsystemSet e) {
  if (a.empty() || b.empty() || e.empty()) throw DimensionError("A, B and E must be nonempty");
  const Partition parts({a, b, e});  // checks disjointness
  if (!parts.covers(state.num_parties())) throw DimensionError("A, B, E must cover every party");
  EntropyCache cache(state);
  cache.prefetch_unions(parts);
  LeakageReport r;
  r.i_ab_e = mutual_information_form(a | b, e).evaluate(cache);
  r.i_ae_given_b = mutual_information_form(a, e, b).evaluate(cache);
  r.i_be_given_a = mutual_information_form(b, e, a).evaluate(cache);
  r.i_abe = gcmi_form(parts).evaluate(cache);
  r.m2 = mqmi_k(cache, parts, 2);
  r.i_ab_given_e = mutual_information_form(a, b, e).evaluate(cache);
  const double sum = r.i_ae_given_b + r.i_be_given_a + r.i_abe;
  r.checks = {
      {"I(A:E|B) + I(B:E|A) + I(A:B:E) = M_2(A:B:E) - I(A:B|E)", sum, r.m2 - r.i_ab_given_e},
      {"I(A:E|B) + I(B:E|A) + I(A:B:E) = I(AB:E)", sum, r.i_ab_e},
  };
  return r;
}

// ---- Reports -----------------------------------------------------------------

double MeasureReport::recomputed_value() const {
  double v = 0.0;
  for (const auto& t : terms) v += t.coefficient * t.entropy;
  return v;
}

std::string MeasureId::name(int n_blocks) const {
  const std::string sup = "^(" + std::to_string(n_blocks) + ")";
  switch (kind) {
    case Kind::mk:
      return "M_" + std::to_string(k) + sup;
    case Kind::total:
      return "T_" + std::to_string(n_blocks);
    case Kind::dual_total:
      return "S_" + std::to_string(n_blocks);
    case Kind::combined:
      return "M" + sup;
    case Kind::common:
      return "C" + sup;
    case Kind::gcmi:
      return "I(" + std::to_string(n_blocks) + " blocks | " + cond.to_string() + ")";
  }
  return "?";
}

namespace {

EntropyForm form_for(const Partition& parts, const MeasureId& id) {
  switch (id.kind) {
    case MeasureId::Kind::mk:
      return mqmi_form(parts, id.k);
    case MeasureId::Kind::total:
      return total_correlation_form(parts, TotalCorrelationForm::entropic);
    case MeasureId::Kind::dual_total:
      return dual_total_correlation_form(parts, DualTotalCorrelationForm::entropic);
    case MeasureId::Kind::combined: {
      id.lambda.check(parts.size());
      EntropyForm f;
      for (int k = 1; k <= parts.size(); ++k) f += id.lambda.weights[k - 1] * mqmi_form(parts, k);
      return f;
    }
    case MeasureId::Kind::common:
      return common_information_form(parts);
    case MeasureId::Kind::gcmi:
      return gcmi_form(parts, id.cond);
  }
  throw std::invalid_argument("unknown measure");
}

}  // namespace

MeasureReport measure_report(const MultipartiteState& state, const Partition& parts,
                             const MeasureId& id) {
  const SubsystemSet cond = id.kind == MeasureId::Kind::gcmi ? id.cond : SubsystemSet{};
  check_support(state, parts, cond);
  const EntropyForm form = form_for(parts, id);
  EntropyCache cache(state);
  MeasureReport r;
  r.name = id.name(parts.size());
  r.partition = parts;
  r.cond = cond;
  r.value = form.evaluate(cache);
  for (const auto& [set, coeff] : form.terms()) r.terms.push_back({set, coeff, cache.entropy(set)});
  return r;
}

double evaluate_measure(const MultipartiteState& state, const Partition& parts, const MeasureId& id) {
  return measure_report(state, parts, id).value;
}

}  // namespace mqmi
