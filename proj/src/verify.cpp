#include "mqmi/verify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "mqmi/channels.hpp"
#include "mqmi/entropy.hpp"
#include "mqmi/measures.hpp"
#include "mqmi/rng.hpp"

namespace mqmi {

namespace {

struct Trial {
  int index = -1;
  StateSpec spec;
  std::uint64_t aux_seed = 0;
  MultipartiteState state;
  bool pure = false;
  // Per-trial scratch shared between properties; a trial is owned by one thread.
  mutable std::optional<std::vector<double>> register_profile;
};

using Evaluator = std::function<std::optional<double>(const Trial&, EntropyCache&, const SuiteConfig&)>;

struct Property {
  std::string name;
  std::string description;
  double threshold;
  bool control = false;
  Evaluator eval;
  std::vector<StateSpec> enumerated;  // extra fixed states evaluated after the random trials
};

Property make_property(std::string name, std::string description, double threshold, bool control,
                       Evaluator eval, std::vector<StateSpec> enumerated = {}) {
  return Property{std::move(name), std::move(description), threshold, control, std::move(eval),
                  std::move(enumerated)};
}

constexpr double kIdentityTol = 1e-8;
constexpr double kExactTol = 1e-12;

bool looks_pure(const MultipartiteState& s) {
  return s.matrix().squaredNorm() >= 1.0 - 1e-10;
}

Trial make_trial(int index, StateSpec spec, std::uint64_t aux_seed) {
  MultipartiteState state = build(spec);
  const bool pure = looks_pure(state);
  return Trial{index, std::move(spec), aux_seed, std::move(state), pure, std::nullopt};
}

Partition singles(const Trial& t) { return Partition::singletons(t.state.num_parties()); }

int parties(const Trial& t) { return t.state.num_parties(); }

// Calls f(x, y, z) for every assignment of parties to X, Y, Z or nobody.
template <class F>
void for_each_assignment(int n, F&& f) {
  int total = 1;
  for (int i = 0; i < n; ++i) total *= 4;
  for (int code = 0; code < total; ++code) {
    std::uint32_t m[3] = {0, 0, 0};
    int c = code;
    for (int i = 0; i < n; ++i, c /= 4) {
      if (c % 4 < 3) m[c % 4] |= 1u << i;
    }
    f(SubsystemSet::from_mask(m[0]), SubsystemSet::from_mask(m[1]), SubsystemSet::from_mask(m[2]));
  }
}

// Smallest value of f over every assignment where f applies.
std::optional<double> min_over_assignments(
    int n, const std::function<std::optional<double>(SubsystemSet, SubsystemSet, SubsystemSet)>& f) {
  std::optional<double> worst;
  for_each_assignment(n, [&](SubsystemSet x, SubsystemSet y, SubsystemSet z) {
    if (auto v = f(x, y, z)) worst = worst ? std::min(*worst, *v) : *v;
  });
  return worst;
}

std::vector<double> profile(EntropyCache& cache, const Partition& parts) {
  return mqmi_profile(cache, parts);
}

double alternating_sum(const std::vector<double>& m) {
  double c = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) c += (k % 2 == 0 ? 1.0 : -1.0) * m[k];
  return c;
}

std::vector<int> random_permutation(int n, Rng& rng) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
  return perm;
}

// The local operation used by channel properties of a trial.
KrausChannel trial_channel(const Trial& t, const SuiteConfig& config) {
  Rng rng(mix_seed(t.aux_seed, 1));
  const int party = rng.uniform_int(0, parties(t) - 1);
  return random_local_channel(t.state.dims()[party], config.kraus_rank, rng.next(), party);
}

struct Announcement {
  int party;
  ComplexMatrix basis;
};

Announcement trial_announcement(const Trial& t) {
  Rng rng(mix_seed(t.aux_seed, 2));
  const int party = rng.uniform_int(0, parties(t) - 1);
  return {party, haar_unitary(t.state.dims()[party], rng)};
}

// M_k averaged over the branches of a public measurement whose outcome an
// eavesdropper also keeps, i.e. M_k conditioned on her copy of the record.
double conditioned_after(const Trial& t, int k, double tol) {
  const auto a = trial_announcement(t);
  const auto parts = singles(t);
  double v = 0.0;
  for (const auto& br : measurement_branches(t.state, a.party, a.basis, tol)) {
    v += br.probability * mqmi_k(br.state, parts, k);
  }
  return v;
}

double margin_of_checks(const std::vector<IdentityCheck>& checks) {
  double worst = 0.0;
  for (const auto& c : checks) worst = std::max(worst, std::abs(c.residual()));
  return -worst;
}

double validity_defect(const MultipartiteState& s) {
  const double trace = std::abs(s.matrix().trace().real() - 1.0);
  return std::max(trace, hermiticity_defect(s.matrix()));
}

// ---- Proven properties ------------------------------------------------------

std::vector<Property> suite_properties(const SuiteConfig& config) {
  const double tol = config.tol;
  std::vector<Property> p;

  p.push_back(make_property("subadditivity", "S(X) + S(Y) - S(XY) >= 0 for disjoint X, Y", tol,
               false, [](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                 return min_over_assignments(parties(t), [&](SubsystemSet x, SubsystemSet y, SubsystemSet z) -> std::optional<double> {
                   if (x.empty() || y.empty() || !z.empty()) return std::nullopt;
                   return c.entropy(x) + c.entropy(y) - c.entropy(x | y);
                 });
               }));
  p.push_back(make_property("araki_lieb", "S(XY) >= |S(X) - S(Y)| for disjoint X, Y", tol, false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                 return min_over_assignments(parties(t), [&](SubsystemSet x, SubsystemSet y, SubsystemSet z) -> std::optional<double> {
                   if (x.empty() || y.empty() || !z.empty()) return std::nullopt;
                   return c.entropy(x | y) - std::abs(c.entropy(x) - c.entropy(y));
                 });
               }));
  p.push_back(make_property("strong_subadditivity", "S(XY) + S(YZ) >= S(Y) + S(XYZ)", tol, false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                 return min_over_assignments(parties(t), [&](SubsystemSet x, SubsystemSet y, SubsystemSet z) -> std::optional<double> {
                   if (x.empty() || z.empty()) return std::nullopt;
                   return c.entropy(x | y) + c.entropy(y | z) - c.entropy(y) - c.entropy(x | y | z);
                 });
               }));
  p.push_back(make_property("weak_monotonicity", "S(XZ) + S(YZ) >= S(X) + S(Y)", tol, false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                 return min_over_assignments(parties(t), [&](SubsystemSet x, SubsystemSet y, SubsystemSet z) -> std::optional<double> {
                   if (x.empty() || y.empty() || z.empty()) return std::nullopt;
                   return c.entropy(x | z) + c.entropy(y | z) - c.entropy(x) - c.entropy(y);
                 });
               }));
  p.push_back(make_property("mk_semipositive", "M_k >= 0 for every k", tol, false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                 const auto m = profile(c, singles(t));
                 return *std::min_element(m.begin(), m.end());
               }));
  p.push_back(make_property("mn_vanishes", "M_n over n blocks is identically zero", 0.0, false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                 return -std::abs(mqmi_k(c, singles(t), parties(t)));
               }));
  p.push_back(make_property("discard_monotone", "M_k does not increase when a party is discarded", tol, false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                 const auto parts = singles(t);
                 const int n = parties(t);
                 double worst = std::numeric_limits<double>::infinity();
                 for (int j = 0; j < n; ++j) {
                   const auto fewer = parts.without(j);
                   for (int k = 1; k < n; ++k) worst = std::min(worst, mqmi_k(c, parts, k) - mqmi_k(c, fewer, k));
                 }
                 return worst;
               }));
  p.push_back(make_property("group_monotone", "M_k does not increase when two parties are grouped", tol, false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                 const auto parts = singles(t);
                 const int n = parties(t);
                 double worst = std::numeric_limits<double>::infinity();
                 for (int i = 0; i < n; ++i) {
                   for (int j = i + 1; j < n; ++j) {
                     const auto fused = parts.merged(i, j);
                     for (int k = 1; k < n; ++k) worst = std::min(worst, mqmi_k(c, parts, k) - mqmi_k(c, fused, k));
                   }
                 }
                 return worst;
               }));
  p.push_back(make_property("gcmi_two_block_nonnegative", "I(A:B|Y) >= 0 for every disjoint A, B, Y", tol, false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                 return min_over_assignments(parties(t), [&](SubsystemSet a, SubsystemSet b, SubsystemSet y) -> std::optional<double> {
                   if (a.empty() || b.empty()) return std::nullopt;
                   return gcmi_form(Partition({a, b}), y).evaluate(c);
                 });
               }));
  p.push_back(make_property("dual_total_bound", "S_n <= T_n + 2 S(rho)", tol, false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                 const auto parts = singles(t);
                 const int n = parties(t);
                 return mqmi_k(c, parts, 1) + 2.0 * c.entropy(t.state.all_parties()) - mqmi_k(c, parts, n - 1);
               }));
  p.push_back(make_property("pure_duality", "M_p = M_q for p + q = n on pure states", tol, false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                 if (!t.pure) return std::nullopt;
                 const auto m = profile(c, singles(t));
                 const int n = parties(t);
                 double worst = 0.0;
                 for (int q = 1; q < n; ++q) worst = std::max(worst, std::abs(m[q - 1] - m[n - q - 1]));
                 return -worst;
               }));
  p.push_back(make_property("pure_total_equals_dual", "T_n = S_n on pure states", tol, false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                 if (!t.pure) return std::nullopt;
                 const auto parts = singles(t);
                 return -std::abs(mqmi_k(c, parts, 1) - mqmi_k(c, parts, parties(t) - 1));
               }));
  p.push_back(make_property("odd_pure_common_vanishes", "C = 0 on pure states with odd n", tol, false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                 if (!t.pure || parties(t) % 2 == 0) return std::nullopt;
                 return -std::abs(alternating_sum(profile(c, singles(t))));
               }));
  p.push_back(make_property("pure_common_bound", "C <= M_k for k < n on pure states", tol, false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                 if (!t.pure) return std::nullopt;
                 const auto m = profile(c, singles(t));
                 const double cc = alternating_sum(m);
                 double worst = std::numeric_limits<double>::infinity();
                 for (int k = 1; k < parties(t); ++k) worst = std::min(worst, m[k - 1] - cc);
                 return worst;
               }));
  p.push_back(make_property("total_correlation_forms", "entropic, relative, chain and region forms of T_n agree",
               kIdentityTol, false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig& cfg) -> std::optional<double> {
                 const auto parts = singles(t);
                 const double v[] = {
                     total_correlation(c, parts, TotalCorrelationForm::entropic),
                     total_correlation_relative(t.state, parts, cfg.tol),
                     total_correlation(c, parts, TotalCorrelationForm::chain),
                     total_correlation(c, parts, TotalCorrelationForm::regions),
                 };
                 return -(*std::max_element(std::begin(v), std::end(v)) - *std::min_element(std::begin(v), std::end(v)));
               }));
  p.push_back(make_property("dual_total_correlation_forms", "entropic, chain, region and complement forms of S_n agree",
               kIdentityTol, false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                 const auto parts = singles(t);
                 const double v[] = {
                     dual_total_correlation(c, parts, DualTotalCorrelationForm::entropic),
                     dual_total_correlation(c, parts, DualTotalCorrelationForm::chain),
                     dual_total_correlation(c, parts, DualTotalCorrelationForm::regions),
                     dual_total_correlation(c, parts, DualTotalCorrelationForm::complement),
                 };
                 return -(*std::max_element(std::begin(v), std::end(v)) - *std::min_element(std::begin(v), std::end(v)));
               }));
  p.push_back(make_property("common_information_gcmi", "alternating sum of M_k equals I(X_1:...:X_n)", 1e-9, false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                 const auto parts = singles(t);
                 return -std::abs(alternating_sum(profile(c, parts)) - gcmi_form(parts).evaluate(c));
               }));
  p.push_back(make_property("partition_identity", "M_p + M_q equals the sum of bipartite mutual informations",
               kIdentityTol, false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                 std::vector<IdentityCheck> checks;
                 for (int q = 1; q < parties(t); ++q) checks.push_back(partition_identity_residual(c, singles(t), q));
                 return margin_of_checks(checks);
               }));
  p.push_back(make_property("recurrences", "recurrences and neighbour relations between M_k, T and S", kIdentityTol,
               false, [](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                 if (parties(t) < 3) return std::nullopt;
                 return margin_of_checks(recurrence_residuals(c, singles(t)));
               }));
  p.push_back(make_property("tripartite_regions", "T_3 and S_3 region decompositions", kIdentityTol, false,
               [](const Trial& t, EntropyCache&, const SuiteConfig&) -> std::optional<double> {
                 const int n = parties(t);
                 if (n < 3) return std::nullopt;
                 const Partition parts({SubsystemSet::single(0), SubsystemSet::single(1), SubsystemSet::range(2, n)});
                 return margin_of_checks(tripartite_regions(t.state, parts).checks);
               }));
  p.push_back(make_property("secret_sharing_leakage", "I(AB:E) = I(A:E|B) + I(B:E|A) + I(A:B:E) and M_2 link",
               kIdentityTol, false,
               [](const Trial& t, EntropyCache&, const SuiteConfig&) -> std::optional<double> {
                 const int n = parties(t);
                 if (n < 3) return std::nullopt;
                 return margin_of_checks(secret_sharing_leakage(t.state, SubsystemSet::single(0), SubsystemSet::single(1),
                                                               SubsystemSet::range(2, n)).checks);
               }));
  p.push_back(make_property("block_permutation_symmetry", "M_k unchanged when the parties are permuted", kExactTol,
               false, [](const Trial& t, EntropyCache& c, const SuiteConfig& cfg) -> std::optional<double> {
                 Rng rng(mix_seed(t.aux_seed, 3));
                 const int n = parties(t);
                 const auto perm = random_permutation(n, rng);
                 const auto parts = singles(t);
                 const auto before = profile(c, parts);
                 const auto moved = permute_subsystems(t.state, perm);
                 EntropyCache mc(moved, Execution::serial, cfg.tol);
                 const auto after = profile(mc, parts);
                 const auto reordered = profile(c, parts.reordered(perm));
                 double worst = 0.0;
                 for (int k = 0; k < n; ++k) {
                   worst = std::max({worst, std::abs(before[k] - after[k]), std::abs(before[k] - reordered[k])});
                 }
                 return -worst;
               }));
  p.push_back(make_property("local_unitary_invariance", "M_k unchanged by independent local unitaries", 1e-9, false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig& cfg) -> std::optional<double> {
                 Rng rng(mix_seed(t.aux_seed, 4));
                 MultipartiteState s = t.state;
                 for (int i = 0; i < parties(t); ++i) {
                   s = apply_local(unitary_channel(haar_unitary(s.dims()[i], rng), i), s, cfg.tol);
                 }
                 EntropyCache sc(s, Execution::serial, cfg.tol);
                 const auto a = profile(c, singles(t));
                 const auto b = profile(sc, singles(t));
                 double worst = 0.0;
                 for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
                 return -worst;
               }));
  p.push_back(make_property("additivity", "M_k of a partywise tensor combination is the sum", kIdentityTol, false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig& cfg) -> std::optional<double> {
                 const int dim = t.state.dimension();
                 if (static_cast<long>(dim) * dim > kMaxTotalDimension) return std::nullopt;
                 const int n = parties(t);
                 const auto other = random_mixed(t.state.dims(), dim, mix_seed(t.aux_seed, 5));
                 std::vector<int> perm;
                 for (int i = 0; i < n; ++i) {
                   perm.push_back(i);
                   perm.push_back(n + i);
                 }
                 const auto joint = permute_subsystems(tensor(t.state, other), perm);
                 std::vector<SubsystemSet> blocks;
                 for (int i = 0; i < n; ++i) blocks.push_back(SubsystemSet::range(2 * i, 2 * i + 2));
                 EntropyCache jc(joint, Execution::serial, cfg.tol);
                 EntropyCache oc(other, Execution::serial, cfg.tol);
                 const auto a = profile(c, singles(t));
                 const auto b = profile(oc, singles(t));
                 const auto ab = profile(jc, Partition(blocks));
                 double worst = 0.0;
                 for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(ab[k] - a[k] - b[k]));
                 return -worst;
               }));
  p.push_back(make_property("entropy_unitary_invariance", "S(rho) unchanged by a global unitary and by party permutation",
               1e-9, false, [](const Trial& t, EntropyCache& c, const SuiteConfig& cfg) -> std::optional<double> {
                 Rng rng(mix_seed(t.aux_seed, 6));
                 const ComplexMatrix u = haar_unitary(t.state.dimension(), rng);
                 const ComplexMatrix rotated = u * t.state.matrix() * u.adjoint();
                 const double s = c.entropy(t.state.all_parties());
                 const double s_rot = kernels::matrix_entropy(rotated, cfg.tol);
                 const auto perm = random_permutation(parties(t), rng);
                 const double s_perm = von_neumann(permute_subsystems(t.state, perm), cfg.tol);
                 return -std::max(std::abs(s - s_rot), std::abs(s - s_perm));
               }));
  p.push_back(make_property("relative_entropy_nonnegative", "D(rho || sigma) >= 0", tol, false,
               [](const Trial& t, EntropyCache&, const SuiteConfig& cfg) -> std::optional<double> {
                 const auto sigma = random_mixed(t.state.dims(), t.state.dimension(), mix_seed(t.aux_seed, 7));
                 const auto d = relative_entropy(t.state, sigma, cfg.tol);
                 if (d.is_infinite()) return std::nullopt;
                 return d.bits();
               }));
  p.push_back(make_property("relative_entropy_monotone", "D(rho || sigma) >= D of the states with the last party traced out",
               tol, false, [](const Trial& t, EntropyCache&, const SuiteConfig& cfg) -> std::optional<double> {
                 const auto sigma = random_mixed(t.state.dims(), t.state.dimension(), mix_seed(t.aux_seed, 7));
                 const auto keep = SubsystemSet::range(0, parties(t) - 1);
                 const auto full = relative_entropy(t.state, sigma, cfg.tol);
                 const auto part = relative_entropy(partial_trace(t.state, keep), partial_trace(sigma, keep), cfg.tol);
                 if (full.is_infinite() || part.is_infinite()) return std::nullopt;
                 return full.bits() - part.bits();
               }));
  p.push_back(make_property("channel_output_valid", "a local channel keeps trace and hermiticity", 1e-9, false,
               [](const Trial& t, EntropyCache&, const SuiteConfig& cfg) -> std::optional<double> {
                 return -validity_defect(apply_local(trial_channel(t, cfg), t.state, cfg.tol));
               }));
  p.push_back(make_property("channel_total_nonincreasing", "T_n does not increase under a local channel", tol, false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig& cfg) -> std::optional<double> {
                 const auto out = apply_local(trial_channel(t, cfg), t.state, cfg.tol);
                 return mqmi_k(c, singles(t), 1) - mqmi_k(out, singles(t), 1);
               }));
  p.push_back(make_property("channel_dual_total_nonincreasing", "S_n does not increase under a local channel", tol,
               false, [](const Trial& t, EntropyCache& c, const SuiteConfig& cfg) -> std::optional<double> {
                 const int n = parties(t);
                 const auto out = apply_local(trial_channel(t, cfg), t.state, cfg.tol);
                 return mqmi_k(c, singles(t), n - 1) - mqmi_k(out, singles(t), n - 1);
               }));
  p.push_back(make_property("broadcast_total_nonincreasing",
               "T_n does not increase under a public measurement, conditioned on the eavesdropper's record", tol,
               false, [](const Trial& t, EntropyCache& c, const SuiteConfig& cfg) -> std::optional<double> {
                 return mqmi_k(c, singles(t), 1) - conditioned_after(t, 1, cfg.tol);
               }));
  p.push_back(make_property("broadcast_dual_total_nonincreasing",
               "S_n does not increase under a public measurement, conditioned on the eavesdropper's record", tol,
               false, [](const Trial& t, EntropyCache& c, const SuiteConfig& cfg) -> std::optional<double> {
                 const int n = parties(t);
                 return mqmi_k(c, singles(t), n - 1) - conditioned_after(t, n - 1, cfg.tol);
               }));
  return p;
}

// ---- Conjectures --------------------------------------------------------------

std::vector<Property> scan_properties(const SuiteConfig& config) {
  const double tol = config.tol;
  const int n = config.n;
  std::vector<Property> p;

  p.push_back(make_property("ordering_common_below_ends", "C <= min(M_1, M_{n-1}) on mixed states", tol, false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                 if (t.pure) return std::nullopt;
                 const auto m = profile(c, singles(t));
                 const int nn = parties(t);
                 return std::min(m[0], m[nn - 2]) - alternating_sum(m);
               }));
  for (int j = 1; j < n / 2; ++j) {
    p.push_back(make_property("ordering_chain_" + std::to_string(j),
                 "max(M_" + std::to_string(j) + ", M_{n-" + std::to_string(j) + "}) <= min(M_" +
                     std::to_string(j + 1) + ", M_{n-" + std::to_string(j + 1) + "}) on mixed states",
                 tol, false, [j](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                   if (t.pure) return std::nullopt;
                   const auto m = profile(c, singles(t));
                   const int nn = parties(t);
                   auto at = [&](int k) { return m[k - 1]; };
                   return std::min(at(j + 1), at(nn - j - 1)) - std::max(at(j), at(nn - j));
                 }));
  }
  for (int k2 = 2; k2 <= n / 2; ++k2) {
    for (int k1 = 1; k1 < k2; ++k1) {
      p.push_back(make_property("ratio_" + std::to_string(k2) + "_" + std::to_string(k1),
                   "c M_" + std::to_string(k1) + " >= M_" + std::to_string(k2) +
                       " with c = k2 C(n,k2) / (k1 C(n,k1))",
                   tol, false, [k1, k2](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                     const int nn = parties(t);
                     const double coef = k2 * binomial(nn, k2) / (k1 * binomial(nn, k1));
                     const auto parts = singles(t);
                     return coef * mqmi_k(c, parts, k1) - mqmi_k(c, parts, k2);
                   }));
    }
  }
  for (int k = 1; k < n; ++k) {
    const bool control = k == 1 || k == n - 1;
    p.push_back(make_property("channel_monotone_k" + std::to_string(k),
                 "M_" + std::to_string(k) + " does not increase under a random local channel", tol, control,
                 [k](const Trial& t, EntropyCache& c, const SuiteConfig& cfg) -> std::optional<double> {
                   const auto out = apply_local(trial_channel(t, cfg), t.state, cfg.tol);
                   return mqmi_k(c, singles(t), k) - mqmi_k(out, singles(t), k);
                 }));
  }
  for (int k = 1; k < n; ++k) {
    const bool control = k == 1 || k == n - 1;
    p.push_back(make_property("broadcast_monotone_k" + std::to_string(k),
                 "M_" + std::to_string(k) +
                     " does not increase under a public measurement, conditioned on the eavesdropper's record",
                 tol, control, [k](const Trial& t, EntropyCache& c, const SuiteConfig& cfg) -> std::optional<double> {
                   return mqmi_k(c, singles(t), k) - conditioned_after(t, k, cfg.tol);
                 }));
  }
  for (int k = 1; k < n; ++k) {
    p.push_back(make_property("broadcast_registers_k" + std::to_string(k),
                 "M_" + std::to_string(k) +
                     " does not increase when every party keeps a copy of the public outcome (no conditioning)",
                 tol, false, [k](const Trial& t, EntropyCache& c, const SuiteConfig& cfg) -> std::optional<double> {
                   if (!t.register_profile) {
                     const auto a = trial_announcement(t);
                     const long grown = static_cast<long>(t.state.dimension()) *
                                        static_cast<long>(std::pow(t.state.dims()[a.party], parties(t)));
                     if (grown > kMaxTotalDimension) return std::nullopt;
                     const auto out = measure_and_broadcast(t.state, a.party, a.basis, cfg.tol);
                     t.register_profile = mqmi_profile(out.state, out.owner_grouping);
                   }
                   return mqmi_k(c, singles(t), k) - (*t.register_profile)[k - 1];
                 }));
  }
  StateSpec cluster;
  cluster.kind = StateKind::cluster4;
  StateSpec hs;
  hs.kind = StateKind::hs4;
  p.push_back(make_property("common_information_nonnegative", "C >= 0 (known to fail; negative values are recorded)", tol,
               false,
               [](const Trial& t, EntropyCache& c, const SuiteConfig&) -> std::optional<double> {
                 return alternating_sum(profile(c, singles(t)));
               },
               {cluster, hs}));
  return p;
}

std::vector<std::string> names_of(const std::vector<Property>& props) {
  std::vector<std::string> out;
  for (const auto& p : props) out.push_back(p.name);
  return out;
}

std::vector<Property> select(std::vector<Property> all, const std::vector<std::string>& wanted) {
  if (wanted.empty()) return all;
  std::vector<Property> out;
  for (const auto& w : wanted) {
    auto it = std::find_if(all.begin(), all.end(), [&](const Property& p) { return p.name == w; });
    if (it == all.end()) throw ParseError("unknown property '" + w + "'");
    out.push_back(*it);
  }
  return out;
}

ViolationReport run(const std::string& mode, const std::vector<Property>& props,
                    const SuiteConfig& config) {
  config.check();
  const int samples = config.samples;
  const int np = static_cast<int>(props.size());
  std::vector<std::vector<std::optional<double>>> margins(samples, std::vector<std::optional<double>>(np));
  std::vector<StateSpec> specs(samples);
  std::vector<std::uint64_t> aux(samples);
  std::vector<std::optional<std::vector<double>>> profiles(samples);
  std::vector<std::optional<EndGap>> gaps(samples);
  std::vector<std::exception_ptr> errors(samples);
  const bool want_profiles = mode == "conjectures";

#pragma omp parallel for schedule(dynamic) if (config.exec == Execution::parallel)
  for (int t = 0; t < samples; ++t) {
    try {
      auto [spec, aux_seed] = trial_spec(config, t);
      const Trial trial = make_trial(t, spec, aux_seed);
      EntropyCache cache(trial.state, Execution::serial, config.tol);
      cache.prefetch_unions(singles(trial));
      for (int i = 0; i < np; ++i) margins[t][i] = props[i].eval(trial, cache, config);
      if (want_profiles) {
        auto m = profile(cache, singles(trial));
        if (trial.pure) {
          profiles[t] = std::move(m);
        } else {
          gaps[t] = EndGap{t, m.front(), m[m.size() - 2]};
        }
      }
      specs[t] = std::move(spec);
      aux[t] = aux_seed;
    } catch (...) {
      errors[t] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ViolationReport report;
  report.mode = mode;
  report.config = config;
  for (int i = 0; i < np; ++i) {
    const Property& prop = props[i];
    PropertyResult r;
    r.name = prop.name;
    r.description = prop.description;
    r.control = prop.control;
    r.threshold = prop.threshold;
    auto record = [&](int trial, const StateSpec& spec, std::uint64_t aux_seed, double margin) {
      ++r.trials;
      margin += 0.0;  // folds -0 into +0
      Witness w{trial, spec, aux_seed, margin};
      if (!r.worst_residual || margin < *r.worst_residual) {
        r.worst_residual = margin;
        r.worst = w;
      }
      if (margin < -prop.threshold) {
        ++r.failures;
        r.witnesses.push_back(std::move(w));
      }
    };
    for (int t = 0; t < samples; ++t) {
      if (margins[t][i]) record(t, specs[t], aux[t], *margins[t][i]);
    }
    for (const auto& spec : prop.enumerated) {
      const Trial trial = make_trial(-1, spec, 0);
      EntropyCache cache(trial.state, Execution::serial, config.tol);
      if (auto m = prop.eval(trial, cache, config)) record(-1, spec, 0, *m);
    }
    report.results.push_back(std::move(r));
  }
  for (auto& pr : profiles) {
    if (pr) report.pure_profiles.push_back(std::move(*pr));
  }
  for (const auto& g : gaps) {
    if (g) report.mixed_end_gaps.push_back(*g);
  }
  return report;
}

Json witness_json(const Witness& w) {
  return Json{{"trial", w.trial}, {"state", spec_to_json(w.state)}, {"aux_seed", w.aux_seed}, {"residual", w.residual}};
}

std::string_view mix_name(SampleMix m) {
  switch (m) {
    case SampleMix::standard: return "standard";
    case SampleMix::pure_only: return "pure";
    case SampleMix::mixed_only: return "mixed";
  }
  return "standard";
}

}  // namespace

void SuiteConfig::check() const {
  if (samples < 1) throw DimensionError("sample count must be >= 1");
  if (!(tol > 0.0)) throw DimensionError("tolerance must be > 0");
  if (n < 2) throw DimensionError("need at least 2 parties");
  if (d < 2) throw DimensionError("local dimension must be >= 2");
  if (kraus_rank < 1) throw DimensionError("kraus_rank must be >= 1");
  long total = 1;
  for (int i = 0; i < n; ++i) {
    total *= d;
    if (total > kMaxTotalDimension) {
      throw DimensionError("d^n exceeds the total dimension cap of " + std::to_string(kMaxTotalDimension));
    }
  }
}

std::pair<StateSpec, std::uint64_t> trial_spec(const SuiteConfig& config, int t) {
  Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(t)));
  bool pure = config.mix == SampleMix::pure_only;
  if (config.mix == SampleMix::standard) pure = rng.uniform() < 0.5;
  StateSpec spec;
  spec.dims = config.dims();
  if (pure) {
    spec.kind = StateKind::random_pure;
  } else {
    spec.kind = StateKind::random_mixed;
    spec.rank = rng.uniform() < 0.5 ? 2 : product_of(spec.dims);
  }
  spec.seed = rng.next();
  const std::uint64_t aux_seed = rng.next();
  return {spec, aux_seed};
}

int ViolationReport::total_failures() const {
  int total = 0;
  for (const auto& r : results) total += r.failures;
  return total;
}

const PropertyResult* ViolationReport::find(const std::string& name) const {
  for (const auto& r : results) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

Json ViolationReport::to_json() const {
  Json cfg{{"n", config.n},
           {"d", config.d},
           {"samples", config.samples},
           {"seed", config.seed},
           {"tol", config.tol},
           {"kraus_rank", config.kraus_rank},
           {"mix", mix_name(config.mix)},
           {"properties", config.properties}};
  Json rs = Json::array();
  for (const auto& r : results) {
    Json ws = Json::array();
    for (const auto& w : r.witnesses) ws.push_back(witness_json(w));
    Json j{{"name", r.name},
           {"description", r.description},
           {"control", r.control},
           {"threshold", r.threshold},
           {"trials", r.trials},
           {"failures", r.failures},
           {"satisfaction_rate", r.trials == 0 ? 1.0 : 1.0 - static_cast<double>(r.failures) / r.trials},
           {"worst_residual", r.worst_residual ? Json(*r.worst_residual) : Json(nullptr)},
           {"worst", r.worst ? witness_json(*r.worst) : Json(nullptr)},
           {"witnesses", ws}};
    rs.push_back(std::move(j));
  }
  Json out{{"mode", mode}, {"config", cfg}, {"results", rs}, {"total_failures", total_failures()}};
  if (mode == "conjectures") {
    out["pure_profiles"] = pure_profiles;
    Json gaps = Json::array();
    for (const auto& g : mixed_end_gaps) {
      gaps.push_back({{"trial", g.trial}, {"M_1", g.m1}, {"M_n-1", g.mn1}, {"gap", g.gap()}});
    }
    out["mixed_end_gaps"] = gaps;
  }
  return out;
}

std::string ViolationReport::to_text() const {
  std::ostringstream os;
  os << mode << ": n=" << config.n << " d=" << config.d << " samples=" << config.samples
     << " seed=" << config.seed << "\n";
  std::size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.name.size());
  for (const auto& r : results) {
    os << "  " << std::left << std::setw(static_cast<int>(width)) << r.name << std::right
       << "  trials " << std::setw(4) << r.trials << "  failures " << std::setw(4) << r.failures << "  worst ";
    if (r.worst_residual) {
      os << std::scientific << std::setprecision(3) << std::setw(10) << *r.worst_residual << std::defaultfloat;
    } else {
      os << std::setw(10) << "-";
    }
    if (r.control) os << "  [control]";
    os << "\n";
  }
  const int f = total_failures();
  if (!mixed_end_gaps.empty()) {
    double widest = 0.0;
    for (const auto& g : mixed_end_gaps) widest = std::max(widest, std::abs(g.gap()));
    os << "  mixed states: max |M_1 - M_{n-1}| " << std::scientific << std::setprecision(3) << widest
       << std::defaultfloat << " over " << mixed_end_gaps.size() << " trials\n";
  }
  if (mode == "conjectures") {
    os << f << (f == 1 ? " finding" : " findings") << "\n";
  } else {
    os << f << (f == 1 ? " failure" : " failures") << "\n";
  }
  return os.str();
}

std::vector<std::string> property_names() { return names_of(suite_properties(SuiteConfig{})); }

std::vector<std::string> conjecture_names(int n) {
  SuiteConfig c;
  c.n = n;
  return names_of(scan_properties(c));
}

ViolationReport run_property_suite(const SuiteConfig& config) {
  return run("properties", select(suite_properties(config), config.properties), config);
}

ViolationReport scan_conjectures(const SuiteConfig& config) {
  return run("conjectures", select(scan_properties(config), config.properties), config);
}

double reevaluate_witness(const std::string& property, const Witness& witness, const SuiteConfig& config) {
  auto props = suite_properties(config);
  auto more = scan_properties(config);
  props.insert(props.end(), more.begin(), more.end());
  for (const auto& p : props) {
    if (p.name != property) continue;
    const Trial trial = make_trial(witness.trial, witness.state, witness.aux_seed);
    EntropyCache cache(trial.state, Execution::serial, config.tol);
    const auto m = p.eval(trial, cache, config);
    if (!m) throw DimensionError("property '" + property + "' does not apply to this witness");
    return *m;
  }
  throw ParseError("unknown property '" + property + "'");
}

}  // namespace mqmi
