// Acceptance criteria, one PASS/FAIL line each.
//
//   mqmi_acceptance                 every criterion
//   mqmi_acceptance --criterion 4   one criterion
//
// Exit status is 0 only when every selected criterion passes.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mqmi/channels.hpp"
#include "mqmi/entropy.hpp"
#include "mqmi/measures.hpp"
#include "mqmi/rng.hpp"
#include "mqmi/states.hpp"
#include "mqmi/verify.hpp"

using namespace mqmi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  Json report;  // deterministic part, compared by criterion 9
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

void note(Outcome& o, const std::string& s) {
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += s;
}

SuiteConfig config(int n, int samples, std::uint64_t seed, SampleMix mix, std::vector<std::string> props,
                   double tol = 1e-9) {
  SuiteConfig c;
  c.n = n;
  c.samples = samples;
  c.seed = seed;
  c.mix = mix;
  c.tol = tol;
  c.properties = std::move(props);
  return c;
}

// Every selected property ran, had no failures and stayed within `bound`.
void require_clean(Outcome& o, const ViolationReport& r, double bound, const std::string& label = "") {
  int failures = 0;
  double worst = 0.0;
  for (const auto& p : r.results) {
    if (p.trials == 0) {
      o.pass = false;
      note(o, "n=" + std::to_string(r.config.n) + " " + p.name + " ran no trials");
    }
    failures += p.failures;
    if (p.worst_residual) {
      worst = std::min(worst, *p.worst_residual);
      if (*p.worst_residual < -bound) {
        o.pass = false;
        note(o, "n=" + std::to_string(r.config.n) + " " + p.name + " worst " + fmt(*p.worst_residual));
      }
    }
  }
  if (failures) o.pass = false;
  note(o, label + "n=" + std::to_string(r.config.n) + ": " + std::to_string(failures) + " failures, worst " + fmt(worst));
  o.report.push_back(r.to_json());
}

// 1. Table I.
Outcome criterion_table() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  struct Printed {
    const char* name;
    MultipartiteState state;
    std::vector<double> m;
    double c;
  };
  const std::vector<Printed> rows{
      {"D_3^1", dicke_state(3, 1), {2.75489, 2.75489, 0}, 0},
      {"psi_as", antisymmetric_qutrits(), {4.75489, 4.75489, 0}, 0},
      {"D_4^1", dicke_state(4, 1), {3.24511, 6, 3.24511, 0}, 0.490225},
      {"D_4^2", dicke_state(4, 2), {4, 7.50978, 4, 0}, 0.490225},
      {"C_4", cluster4_state(), {4, 10, 4, 0}, -2},
      {"HS_4", hs4_state(), {4, 10.75489, 4, 0}, -2.75489},
      {"D_5^1", dicke_state(5, 1), {3.60964, 9.70951, 9.70951, 3.60964, 0}, 0},
      {"D_5^2", dicke_state(5, 2), {4.85475, 12.95462, 12.95462, 4.85475, 0}, 0},
  };
  double worst_printed = 0.0;
  for (const auto& row : rows) {
    const int n = row.state.num_parties();
    const auto parts = Partition::singletons(n);
    const auto m = mqmi_profile(row.state, parts);
    for (int k = 0; k < n; ++k) worst_printed = std::max(worst_printed, std::abs(m[k] - row.m[k]));
    const double c = common_information(row.state, parts);
    worst_printed = std::max(worst_printed, std::abs(c - row.c));
    if (std::abs(c - row.c) > 1e-4) note(o, std::string(row.name) + " C off");
  }
  // Printed multiples of h(p) for M_1 .. M_n and C.
  const std::vector<std::vector<double>> ghz{{2, 0, 2}, {3, 3, 0, 0}, {4, 6, 4, 0, 2}, {5, 10, 10, 5, 0, 0}};
  double worst_formula = 0.0;
  for (double p : {0.5, 0.3}) {
    const double h = binary_entropy(p);
    for (int n = 2; n <= 5; ++n) {
      const auto s = ggz_state(n, p);
      const auto parts = Partition::singletons(n);
      const auto m = mqmi_profile(s, parts);
      const auto& want = ghz[n - 2];
      for (int k = 0; k < n; ++k) worst_formula = std::max(worst_formula, std::abs(m[k] - want[k] * h));
      worst_formula = std::max(worst_formula, std::abs(common_information(s, parts) - want[n] * h));
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.pass = worst_printed <= 1e-4 && worst_formula <= 1e-9 && seconds < 10.0;
  note(o, "max |printed - computed| " + fmt(worst_printed) + " (<= 1e-4)");
  note(o, "max |gGHZ - n h(p) form| " + fmt(worst_formula) + " (<= 1e-9)");
  note(o, "runtime " + fmt(seconds) + " s (< 10)");
  return o;
}

// 2. Four T forms and four S forms agree.
Outcome criterion_forms() {
  Outcome o;
  for (int n : {3, 4}) {
    const auto r = run_property_suite(
        config(n, 100, 2002, SampleMix::mixed_only, {"total_correlation_forms", "dual_total_correlation_forms"}));
    require_clean(o, r, 1e-8);
  }
  return o;
}

// 3. Identities.
Outcome criterion_identities() {
  Outcome o;
  const std::vector<std::string> props{"partition_identity", "tripartite_regions", "secret_sharing_leakage",
                                       "recurrences"};
  for (auto [n, samples] : {std::pair{3, 100}, {4, 100}, {5, 20}}) {
    require_clean(o, run_property_suite(config(n, samples, 3003, SampleMix::standard, props)), 1e-8);
  }
  return o;
}

// 4. Proven inequalities.
Outcome criterion_inequalities() {
  Outcome o;
  const std::vector<std::string> props{"mk_semipositive",      "discard_monotone",           "group_monotone",
                                       "strong_subadditivity", "subadditivity",              "gcmi_two_block_nonnegative",
                                       "dual_total_bound"};
  for (int n : {3, 4, 5}) {
    require_clean(o, run_property_suite(config(n, 200, 4004, SampleMix::mixed_only, props)), 1e-9);
  }
  return o;
}

// 5. Pure-state structure.
Outcome criterion_pure() {
  Outcome o;
  for (int n : {3, 4, 5}) {
    std::vector<std::string> props{"pure_duality", "pure_common_bound"};
    if (n % 2 == 1) props.push_back("odd_pure_common_vanishes");
    require_clean(o, run_property_suite(config(n, 100, 5005, SampleMix::pure_only, props)), 1e-9);
  }
  return o;
}

// 6. Symmetry and invariance.
Outcome criterion_symmetry() {
  Outcome o;
  for (int n : {3, 4}) {
    const auto r = run_property_suite(config(
        n, 50, 6006, SampleMix::standard, {"block_permutation_symmetry", "local_unitary_invariance", "additivity"}));
    // Per-property bounds: exact (rounding only), 1e-9, 1e-8.
    const double bounds[] = {1e-12, 1e-9, 1e-8};
    for (int i = 0; i < 3; ++i) {
      const auto& p = r.results[i];
      if (p.trials != 50 || p.failures || (p.worst_residual && *p.worst_residual < -bounds[i])) {
        o.pass = false;
        note(o, "n=" + std::to_string(n) + " " + p.name + " trials " + std::to_string(p.trials) + " failures " +
                    std::to_string(p.failures));
      }
    }
    require_clean(o, r, 1e-8);
  }
  return o;
}

// 7. T and S under local channels and under measure-and-broadcast with the
// registers grouped with their owners.
Outcome criterion_operations() {
  Outcome o;
  const auto r = run_property_suite(config(3, 100, 7007, SampleMix::standard,
                                           {"channel_total_nonincreasing", "channel_dual_total_nonincreasing"}));
  require_clean(o, r, 1e-9, "local channels ");

  const int events = 50, n = 3;
  int t_up = 0, s_up = 0;
  double worst_t = 0.0, worst_s = 0.0;
  Json log = Json::array();
  for (int e = 0; e < events; ++e) {
    Rng rng(mix_seed(7707, static_cast<std::uint64_t>(e)));
    const auto state = rng.uniform() < 0.5 ? random_pure(std::vector<int>(n, 2), rng.next())
                                           : random_mixed(std::vector<int>(n, 2), 2 + rng.uniform_int(0, 1) * 6,
                                                          rng.next());
    const int party = rng.uniform_int(0, n - 1);
    const auto basis = haar_unitary(2, rng);
    const auto out = measure_and_broadcast(state, party, basis);
    const auto parts = Partition::singletons(n);
    const double dt = mqmi_k(state, parts, 1) - mqmi_k(out.state, out.owner_grouping, 1);
    const double ds = mqmi_k(state, parts, n - 1) - mqmi_k(out.state, out.owner_grouping, n - 1);
    if (dt < -1e-9) ++t_up;
    if (ds < -1e-9) ++s_up;
    worst_t = std::min(worst_t, dt);
    worst_s = std::min(worst_s, ds);
    log.push_back({{"event", e}, {"party", party + 1}, {"t_margin", dt}, {"s_margin", ds}});
  }
  if (t_up || s_up) o.pass = false;
  note(o, "broadcast: T increased in " + std::to_string(t_up) + "/" + std::to_string(events) + " (worst " +
              fmt(worst_t) + "), S increased in " + std::to_string(s_up) + "/" + std::to_string(events) +
              " (worst " + fmt(worst_s) + ")");
  o.report.push_back(log);
  return o;
}

// 8. Conjecture scans.
Outcome criterion_scans() {
  Outcome o;
  for (int n : {4, 5}) {
    std::vector<std::string> props;
    for (const auto& name : conjecture_names(n)) {
      if (name.rfind("broadcast_registers_", 0) != 0) props.push_back(name);
    }
    const auto c = config(n, 200, 8008, SampleMix::standard, props);
    const auto r = scan_conjectures(c);
    int findings = 0, control_failures = 0, witnesses = 0, unreproduced = 0;
    for (const auto& p : r.results) {
      findings += p.failures;
      if (p.control) control_failures += p.failures;
      if (p.trials < 1) {
        o.pass = false;
        note(o, p.name + " ran no trials");
      }
      for (const auto& w : p.witnesses) {
        ++witnesses;
        if (std::abs(reevaluate_witness(p.name, w, c) - w.residual) > 1e-10) ++unreproduced;
      }
    }
    if (control_failures || unreproduced) o.pass = false;
    bool cluster = false;
    if (const auto* neg = r.find("common_information_nonnegative")) {
      for (const auto& w : neg->witnesses) {
        cluster = cluster || (w.state.kind == StateKind::cluster4 && std::abs(w.residual + 2.0) < 1e-9);
      }
    }
    if (!cluster) o.pass = false;
    note(o, "n=" + std::to_string(n) + ": " + std::to_string(findings) + " findings, control violations " +
                std::to_string(control_failures) + ", " + std::to_string(witnesses - unreproduced) + "/" +
                std::to_string(witnesses) + " witnesses reproduce, C_4 = -2 witness " + (cluster ? "present" : "missing"));
    o.report.push_back(r.to_json());
  }
  return o;
}

const std::vector<std::function<Outcome()>>& criteria() {
  static const std::vector<std::function<Outcome()>> all{
      criterion_table, criterion_forms,    criterion_identities, criterion_inequalities,
      criterion_pure,  criterion_symmetry, criterion_operations, criterion_scans,
  };
  return all;
}

// 9. Re-run 2-8 with a different thread count and compare JSON bytes.
Outcome criterion_determinism() {
  Outcome o;
  int same = 0;
  const int before = omp_get_max_threads();
  for (int c = 2; c <= 8; ++c) {
    const std::string first = criteria()[c - 1]().report.dump();
    omp_set_num_threads(before == 1 ? 3 : 1);
    const std::string second = criteria()[c - 1]().report.dump();
    omp_set_num_threads(before);
    if (first == second) {
      ++same;
    } else {
      o.pass = false;
      note(o, "criterion " + std::to_string(c) + " differs");
    }
  }
  note(o, std::to_string(same) + "/7 reports byte-identical across reruns");
  return o;
}

Outcome evaluate(int c) {
  if (c == 9) return criterion_determinism();
  return criteria()[c - 1]();
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: mqmi_acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  bool all = true;
  for (int c : selected) {
    if (c < 1 || c > 9) {
      std::cerr << "criterion must be 1..9\n";
      return 2;
    }
    Outcome o;
    try {
      o = evaluate(c);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    all = all && o.pass;
    std::cout << "criterion " << c << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
