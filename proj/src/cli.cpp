#include "mqmi/cli.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include "mqmi/channels.hpp"
#include "mqmi/entropy.hpp"
#include "mqmi/measures.hpp"
#include "mqmi/states.hpp"
#include "mqmi/verify.hpp"

namespace mqmi::cli {

namespace {

enum class Format { text, csv, json };

struct Globals {
  double tol = kDefaultTol;
  std::uint64_t seed = 1;
  std::string format = "text";

  Format fmt() const {
    if (format == "json") return Format::json;
    if (format == "csv") return Format::csv;
    return Format::text;
  }
};

std::string full_number(double x, double zero_below) {
  if (std::abs(x) < zero_below || x == 0.0) x = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::vector<std::string> split(const std::string& text, const std::string& seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (seps.find(c) != std::string::npos) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '{' && c != '}') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<int> parse_parties(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ",")) {
    if (item.empty()) throw ParseError("empty party index in '" + text + "'");
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw ParseError("bad party index '" + item + "'");
    }
    if (used != item.size()) throw ParseError("bad party index '" + item + "'");
    out.push_back(v);
  }
  return out;
}

/// "1;2,3" or "1:2,3" -> {{1}, {2, 3}}; empty text -> singletons.
Partition parse_blocks(const std::string& text, int n) {
  if (text.empty()) return Partition::singletons(n);
  std::vector<std::vector<int>> blocks;
  for (const auto& b : split(text, ";:")) blocks.push_back(parse_parties(b));
  return Partition::from_one_based(blocks, n);
}

SubsystemSet parse_cond(const std::string& text, int n) {
  if (text.empty()) return {};
  return SubsystemSet::from_one_based(parse_parties(text), n);
}

MultipartiteState load_state(const std::string& text, double tol) {
  MultipartiteState s = build(parse_state_spec(text));
  const auto report = s.validate(tol);
  if (!report.valid) throw NumericalError("state '" + text + "' is not a density matrix: " + report.describe());
  return s;
}

struct MeasureArgs {
  std::string measure = "M";
  int k = 1;
  std::string lambda;
  std::string cond;
  std::string blocks;
};

MeasureId measure_id(const MeasureArgs& a, int n_parties) {
  MeasureId id;
  const std::string& m = a.measure;
  if (m == "M" || m == "Mk") {
    id.kind = MeasureId::Kind::mk;
    id.k = a.k;
  } else if (m == "T") {
    id.kind = MeasureId::Kind::total;
  } else if (m == "S") {
    id.kind = MeasureId::Kind::dual_total;
  } else if (m == "C") {
    id.kind = MeasureId::Kind::common;
  } else if (m == "combined" || m == "Mlambda") {
    id.kind = MeasureId::Kind::combined;
    if (a.lambda.empty()) throw ParseError("--measure combined needs --lambda");
    for (const auto& w : split(a.lambda, ",")) {
      try {
        id.lambda.weights.push_back(std::stod(w));
      } catch (const std::exception&) {
        throw ParseError("bad weight '" + w + "'");
      }
    }
  } else if (m == "gcmi") {
    id.kind = MeasureId::Kind::gcmi;
    id.cond = parse_cond(a.cond, n_parties);
  } else {
    throw ParseError("unknown measure '" + m + "' (expected M, T, S, C, combined or gcmi)");
  }
  if (id.kind != MeasureId::Kind::gcmi && !a.cond.empty()) throw ParseError("--cond applies to gcmi only");
  return id;
}

void add_measure_options(CLI::App* cmd, MeasureArgs& a) {
  cmd->add_option("--measure", a.measure, "M, T, S, C, combined or gcmi");
  cmd->add_option("--k", a.k, "k for M_k");
  cmd->add_option("--lambda", a.lambda, "weights for combined, comma separated");
  cmd->add_option("--cond", a.cond, "conditioning parties for gcmi, e.g. 3 or 3,4");
  cmd->add_option("--blocks", a.blocks, "blocks as 1-based party lists, e.g. 1;2,3 (default: one per party)");
}

// ---- compute -----------------------------------------------------------------

struct ComputeArgs {
  std::string state;
  MeasureArgs m;
  bool emit_state = false;
};

int cmd_compute(const ComputeArgs& a, const Globals& g, std::ostream& out) {
  const auto state = load_state(a.state, g.tol);
  const auto parts = parse_blocks(a.m.blocks, state.num_parties());
  const auto report = measure_report(state, parts, measure_id(a.m, state.num_parties()));
  switch (g.fmt()) {
    case Format::json: {
      Json terms = Json::array();
      for (const auto& t : report.terms) {
        terms.push_back({{"set", t.set.to_string()}, {"coefficient", t.coefficient}, {"entropy", t.entropy}});
      }
      Json j{{"measure", report.name},
             {"value", report.value},
             {"partition", report.partition.to_string()},
             {"cond", report.cond.to_string()},
             {"terms", terms}};
      if (a.emit_state) j["state"] = state_to_json(state);
      out << j.dump(2) << "\n";
      break;
    }
    case Format::csv:
      out << "measure,partition,value\n"
          << report.name << "," << report.partition.to_string() << "," << format_number(report.value, g.tol) << "\n";
      break;
    case Format::text:
      out << report.name << " = " << full_number(report.value, g.tol) << "\n";
      out << "partition " << report.partition.to_string();
      if (!report.cond.empty()) out << " | " << report.cond.to_string();
      out << "\n";
      for (const auto& t : report.terms) {
        out << "  " << (t.coefficient >= 0 ? "+" : "-") << full_number(std::abs(t.coefficient), 0.0) << " S"
            << t.set.to_string() << "  (" << full_number(t.entropy, g.tol) << ")\n";
      }
      break;
  }
  return kOk;
}

// ---- table -------------------------------------------------------------------

struct TableArgs {
  bool builtin = false;
  double p = 0.5;
  double phi = 0.0;
  std::vector<std::string> states;
};

struct TableRow {
  std::string label;
  std::vector<double> m;  // M_1 .. M_n
  double c = 0.0;
};

constexpr int kTableColumns = 4;

TableRow table_row(const std::string& label, const MultipartiteState& state) {
  const auto parts = Partition::singletons(state.num_parties());
  TableRow row{label, mqmi_profile(state, parts), 0.0};
  for (std::size_t k = 0; k < row.m.size(); ++k) row.c += (k % 2 == 0 ? 1.0 : -1.0) * row.m[k];
  return row;
}

std::string format_p(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

std::vector<TableRow> builtin_rows(double p, double phi) {
  const std::string ps = " (p=" + format_p(p) + ")";
  return {
      table_row("gGHZ_2" + ps, ggz_state(2, p, phi)),
      table_row("gGHZ_3" + ps, ggz_state(3, p, phi)),
      table_row("D_3^1", dicke_state(3, 1)),
      table_row("psi_as", antisymmetric_qutrits()),
      table_row("gGHZ_4" + ps, ggz_state(4, p, phi)),
      table_row("D_4^1", dicke_state(4, 1)),
      table_row("D_4^2", dicke_state(4, 2)),
      table_row("C_4", cluster4_state()),
      table_row("HS_4", hs4_state()),
      table_row("gGHZ_5" + ps, ggz_state(5, p, phi)),
      table_row("D_5^1", dicke_state(5, 1)),
      table_row("D_5^2", dicke_state(5, 2)),
  };
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

int cmd_table(const TableArgs& a, const Globals& g, std::ostream& out) {
  if (!a.builtin && a.states.empty()) throw ParseError("table needs --builtin-table1 or at least one --state");
  if (!(a.p >= 0.0 && a.p <= 1.0)) throw DimensionError("--p must be in [0, 1]");
  std::vector<TableRow> rows;
  if (a.builtin) rows = builtin_rows(a.p, a.phi);
  for (const auto& s : a.states) rows.push_back(table_row(s, load_state(s, g.tol)));

  const std::string na = "\xC3\x97";  // multiplication sign
  auto cell = [&](const TableRow& r, int k) {
    return k <= static_cast<int>(r.m.size()) ? format_number(r.m[k - 1], g.tol) : na;
  };
  switch (g.fmt()) {
    case Format::json: {
      Json arr = Json::array();
      for (const auto& r : rows) {
        Json m = Json::array();
        for (int k = 1; k <= kTableColumns; ++k) {
          m.push_back(k <= static_cast<int>(r.m.size()) ? Json(r.m[k - 1]) : Json(nullptr));
        }
        arr.push_back({{"state", r.label}, {"n", r.m.size()}, {"M", m}, {"C", r.c}});
      }
      out << arr.dump(2) << "\n";
      break;
    }
    case Format::csv:
      out << "state,M_1,M_2,M_3,M_4,C\n";
      for (const auto& r : rows) {
        out << csv_field(r.label);
        for (int k = 1; k <= kTableColumns; ++k) out << "," << cell(r, k);
        out << "," << format_number(r.c, g.tol) << "\n";
      }
      break;
    case Format::text:
      out << "| state | M_1 | M_2 | M_3 | M_4 | C |\n|---|---|---|---|---|---|\n";
      for (const auto& r : rows) {
        out << "| " << r.label;
        for (int k = 1; k <= kTableColumns; ++k) out << " | " << cell(r, k);
        out << " | " << format_number(r.c, g.tol) << " |\n";
      }
      break;
  }
  return kOk;
}

// ---- regions -----------------------------------------------------------------

struct RegionArgs {
  std::string state;
  std::string blocks;
};

int cmd_regions(const RegionArgs& a, const Globals& g, std::ostream& out) {
  const auto state = load_state(a.state, g.tol);
  const auto parts = parse_blocks(a.blocks, state.num_parties());
  if (parts.size() != 3) throw DimensionError("regions needs exactly three blocks");
  const auto r = tripartite_regions(state, parts);
  const std::pair<const char*, double> values[] = {
      {"a", r.a}, {"b", r.b}, {"c", r.c}, {"ab", r.ab}, {"ac", r.ac},
      {"bc", r.bc}, {"abc", r.abc}, {"T_3", r.t3}, {"S_3", r.s3},
  };
  switch (g.fmt()) {
    case Format::json: {
      Json j{{"partition", parts.to_string()}};
      for (const auto& [k, v] : values) j[k] = v;
      Json checks = Json::array();
      for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"residual", c.residual()}});
      j["checks"] = checks;
      out << j.dump(2) << "\n";
      break;
    }
    case Format::csv: {
      std::string head, row;
      for (const auto& [k, v] : values) {
        head += (head.empty() ? "" : ",") + std::string(k);
        row += (row.empty() ? "" : ",") + format_number(v, g.tol);
      }
      out << head << "\n" << row << "\n";
      break;
    }
    case Format::text:
      for (const auto& [k, v] : values) out << k << " = " << full_number(v, g.tol) << "\n";
      break;
  }
  return kOk;
}

// ---- verify / scan -----------------------------------------------------------

struct SuiteArgs {
  int n = 3;
  int d = 2;
  int samples = 100;
  std::vector<std::string> properties;
  int kraus_rank = 2;
  std::string mix = "standard";
  int threads = 0;
  bool list = false;
};

SuiteConfig suite_config(const SuiteArgs& a, const Globals& g) {
  SuiteConfig c;
  c.n = a.n;
  c.d = a.d;
  c.samples = a.samples;
  c.seed = g.seed;
  c.tol = g.tol;
  c.properties = a.properties;
  c.kraus_rank = a.kraus_rank;
  c.mix = a.mix == "pure" ? SampleMix::pure_only : a.mix == "mixed" ? SampleMix::mixed_only : SampleMix::standard;
  return c;
}

void print_report(const ViolationReport& r, const Globals& g, std::ostream& out) {
  switch (g.fmt()) {
    case Format::json:
      out << r.to_json().dump(2) << "\n";
      break;
    case Format::csv:
      out << "property,control,trials,failures,worst_residual,threshold\n";
      for (const auto& p : r.results) {
        out << p.name << "," << (p.control ? "yes" : "no") << "," << p.trials << "," << p.failures << ","
            << (p.worst_residual ? format_number(*p.worst_residual, 0.0) : std::string()) << ","
            << format_number(p.threshold, 0.0) << "\n";
      }
      break;
    case Format::text:
      out << r.to_text();
      break;
  }
}

int cmd_suite(const SuiteArgs& a, const Globals& g, bool scan, std::ostream& out) {
  if (a.list) {
    for (const auto& name : scan ? conjecture_names(a.n) : property_names()) out << name << "\n";
    return kOk;
  }
  if (a.threads > 0) omp_set_num_threads(a.threads);
  const auto config = suite_config(a, g);
  const auto report = scan ? scan_conjectures(config) : run_property_suite(config);
  print_report(report, g, out);
  if (scan) return kOk;
  return report.total_failures() == 0 ? kOk : kPropertyFailures;
}

// ---- deviate -----------------------------------------------------------------

struct DeviateArgs {
  std::string state;
  std::string channel;
  MeasureArgs m;
};

int cmd_deviate(const DeviateArgs& a, const Globals& g, std::ostream& out) {
  const auto state = load_state(a.state, g.tol);
  const auto parts = parse_blocks(a.m.blocks, state.num_parties());
  const auto id = measure_id(a.m, state.num_parties());
  const auto channel = parse_channel_spec(a.channel, state.dims());
  const double before = evaluate_measure(state, parts, id);
  const double after = evaluate_measure(apply_local(channel, state, g.tol), parts, id);
  const double dev = deviation(state, channel, id, parts);
  const std::string name = id.name(parts.size());
  switch (g.fmt()) {
    case Format::json:
      out << Json{{"measure", name}, {"before", before}, {"after", after}, {"deviation", dev}}.dump(2) << "\n";
      break;
    case Format::csv:
      out << "measure,before,after,deviation\n"
          << name << "," << format_number(before, g.tol) << "," << format_number(after, g.tol) << ","
          << format_number(dev, g.tol) << "\n";
      break;
    case Format::text:
      out << "|d" << name << "| = " << full_number(dev, g.tol) << "\n";
      break;
  }
  return kOk;
}

double default_tolerance() {
  const char* env = std::getenv("MQMI_DEFAULT_TOL");
  if (env == nullptr || *env == '\0') return kDefaultTol;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v > 0.0)) {
    throw ParseError(std::string("MQMI_DEFAULT_TOL must be a positive number, got '") + env + "'");
  }
  return v;
}

}  // namespace

std::string format_number(double x, double zero_below) {
  if (std::abs(x) < zero_below || x == 0.0) x = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  std::string s = buf;
  if (s == "-0") s = "0";
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Globals g;
  try {
    g.tol = default_tolerance();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParseFailure;
  }

  CLI::App app{"Multiparty entropic correlation measures", "mqmi"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--tol", g.tol, "numerical tolerance (default 1e-9 or $MQMI_DEFAULT_TOL)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "base seed for verify and scan");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));

  ComputeArgs compute;
  auto* c_compute = app.add_subcommand("compute", "evaluate one measure on one state");
  c_compute->add_option("--state", compute.state, "state spec, e.g. ggz:n=3,p=0.5 or dense@file.json")->required();
  add_measure_options(c_compute, compute.m);
  c_compute->add_flag("--emit-state", compute.emit_state, "include the dense state in JSON output");

  TableArgs table;
  auto* c_table = app.add_subcommand("table", "M_1..M_4 and C for a list of states");
  c_table->add_flag("--builtin-table1", table.builtin, "every named state of the reference table");
  c_table->add_option("--p", table.p, "gGHZ weight p");
  c_table->add_option("--phi", table.phi, "gGHZ phase");
  c_table->add_option("--state", table.states, "additional state specs");

  RegionArgs regions;
  auto* c_regions = app.add_subcommand("regions", "tripartite information regions");
  c_regions->add_option("--state", regions.state, "state spec")->required();
  c_regions->add_option("--blocks", regions.blocks, "three blocks, e.g. 1;2;3,4");

  SuiteArgs verify, scan;
  auto add_suite = [](CLI::App* cmd, SuiteArgs& s) {
    cmd->add_option("--n", s.n, "parties")->check(CLI::Range(2, 8));
    cmd->add_option("--d", s.d, "local dimension")->check(CLI::Range(2, 16));
    cmd->add_option("--samples", s.samples, "random states")->check(CLI::PositiveNumber);
    cmd->add_option("--property", s.properties, "restrict to named properties");
    cmd->add_option("--kraus-rank", s.kraus_rank, "Kraus rank of random channels")->check(CLI::PositiveNumber);
    cmd->add_option("--mix", s.mix, "state sampling")->check(CLI::IsMember({"standard", "pure", "mixed"}));
    cmd->add_option("--threads", s.threads, "worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);
    cmd->add_flag("--list", s.list, "print property names and exit");
  };
  auto* c_verify = app.add_subcommand("verify", "run the proven-property suite");
  add_suite(c_verify, verify);
  auto* c_scan = app.add_subcommand("scan", "scan open conjectures; always exits 0");
  add_suite(c_scan, scan);

  DeviateArgs dev;
  auto* c_deviate = app.add_subcommand("deviate", "|Q(channel(rho)) - Q(rho)|");
  c_deviate->add_option("--state", dev.state, "state spec")->required();
  c_deviate->add_option("--channel", dev.channel, "channel spec, e.g. depolarize:party=1,p=1")->required();
  add_measure_options(c_deviate, dev.m);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParseFailure;
  }

  try {
    if (c_compute->parsed()) return cmd_compute(compute, g, out);
    if (c_table->parsed()) return cmd_table(table, g, out);
    if (c_regions->parsed()) return cmd_regions(regions, g, out);
    if (c_verify->parsed()) return cmd_suite(verify, g, false, out);
    if (c_scan->parsed()) return cmd_suite(scan, g, true, out);
    if (c_deviate->parsed()) return cmd_deviate(dev, g, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParseFailure;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kDimensionFailure;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kParseFailure;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
  err << "error: no command\n";
  return kParseFailure;
}

}  // namespace mqmi::cli
