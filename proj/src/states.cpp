#include "mqmi/states.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <bit>
#include <sstream>

#include "mqmi/rng.hpp"

namespace mqmi {
namespace {

constexpr std::array<std::pair<StateKind, std::string_view>, 10> kKindNames{{
    {StateKind::ggz, "ggz"},
    {StateKind::dicke, "dicke"},
    {StateKind::antisym3, "antisym3"},
    {StateKind::cluster4, "cluster4"},
    {StateKind::hs4, "hs4"},
    {StateKind::product, "product"},
    {StateKind::pure_vector, "pure_vector"},
    {StateKind::dense, "dense"},
    {StateKind::random_pure, "random_pure"},
    {StateKind::random_mixed, "random_mixed"},
}};

constexpr int kMaxQubitParties = 8;

void require(bool ok, const std::string& what) {
  if (!ok) throw DimensionError(what);
}

int basis_index(std::span<const int> levels, std::span<const int> dims) {
  int idx = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) idx = idx * dims[i] + levels[i];
  return idx;
}

ComplexVector qubit_ket(std::initializer_list<int> bits) {
  const std::vector<int> levels(bits);
  const std::vector<int> dims(levels.size(), 2);
  ComplexVector v = ComplexVector::Zero(product_of(dims));
  v(basis_index(levels, dims)) = 1.0;
  return v;
}

MultipartiteState pure(const ComplexVector& v, std::vector<int> dims) {
  return MultipartiteState::from_pure(v, std::move(dims));
}

}  // namespace

std::string_view kind_name(StateKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

StateKind kind_from_name(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw ParseError("unknown state kind '" + std::string(name) + "'");
}

MultipartiteState ggz_state(int n, double p, double phi) {
  require(n >= 2 && n <= kMaxQubitParties, "ggz: n must be in 2..8");
  require(p >= 0.0 && p <= 1.0, "ggz: p must be in [0, 1]");
  const int dim = 1 << n;
  ComplexVector v = ComplexVector::Zero(dim);
  v(0) = std::sqrt(p);
  v(dim - 1) = std::polar(std::sqrt(1.0 - p), phi);
  return pure(v, std::vector<int>(n, 2));
}

MultipartiteState dicke_state(int n, int r) {
  require(n >= 2 && n <= kMaxQubitParties, "dicke: n must be in 2..8");
  require(r >= 0 && r <= n, "dicke: r must be in 0..n");
  const int dim = 1 << n;
  ComplexVector v = ComplexVector::Zero(dim);
  int count = 0;
  for (int idx = 0; idx < dim; ++idx) {
    if (std::popcount(static_cast<unsigned>(idx)) == r) {
      v(idx) = 1.0;
      ++count;
    }
  }
  v /= std::sqrt(static_cast<double>(count));
  return pure(v, std::vector<int>(n, 2));
}

MultipartiteState antisymmetric_qutrits() {
  // Labels 1, 2, 3 map to levels 0, 1, 2.
  const std::vector<int> dims{3, 3, 3};
  ComplexVector v = ComplexVector::Zero(27);
  const std::array<std::pair<std::array<int, 3>, double>, 6> terms{{
      {{1, 2, 3}, 1.0},
      {{1, 3, 2}, -1.0},
      {{2, 3, 1}, 1.0},
      {{2, 1, 3}, -1.0},
      {{3, 1, 2}, 1.0},
      {{3, 2, 1}, -1.0},
  }};
  for (const auto& [labels, sign] : terms) {
    const std::array<int, 3> levels{labels[0] - 1, labels[1] - 1, labels[2] - 1};
    v(basis_index(levels, dims)) = sign;
  }
  v /= std::sqrt(6.0);
  return pure(v, dims);
}

MultipartiteState cluster4_state() {
  ComplexVector v = 0.5 * (qubit_ket({0, 0, 0, 0}) + qubit_ket({0, 0, 1, 1}) +
                           qubit_ket({1, 1, 0, 0}) - qubit_ket({1, 1, 1, 1}));
  return pure(v, {2, 2, 2, 2});
}

MultipartiteState hs4_state() {
  const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  ComplexVector v = qubit_ket({0, 0, 1, 1}) + qubit_ket({1, 1, 0, 0}) +
                    omega * (qubit_ket({1, 0, 1, 0}) + qubit_ket({0, 1, 0, 1})) +
                    omega * omega * (qubit_ket({1, 0, 0, 1}) + qubit_ket({0, 1, 1, 0}));
  v /= std::sqrt(6.0);
  return pure(v, {2, 2, 2, 2});
}

MultipartiteState product_state(std::vector<int> dims, std::vector<int> levels) {
  check_dims(dims);
  if (levels.empty()) levels.assign(dims.size(), 0);
  require(levels.size() == dims.size(), "product: levels and dims differ in length");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    require(levels[i] >= 0 && levels[i] < dims[i], "product: level out of range");
  }
  const int dim = product_of(dims);
  require(dim <= kMaxTotalDimension, "product: total dimension above 256");
  ComplexVector v = ComplexVector::Zero(dim);
  v(basis_index(levels, dims)) = 1.0;
  return pure(v, std::move(dims));
}

MultipartiteState random_pure(const std::vector<int>& dims, std::uint64_t seed) {
  check_dims(dims);
  const int dim = product_of(dims);
  require(dim <= kMaxTotalDimension, "random_pure: total dimension above 256");
  Rng rng(seed);
  ComplexVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.complex_normal();
  v.normalize();
  return pure(v, dims);
}

MultipartiteState random_mixed(const std::vector<int>& dims, int rank, std::uint64_t seed) {
  check_dims(dims);
  const int dim = product_of(dims);
  require(dim <= kMaxTotalDimension, "random_mixed: total dimension above 256");
  require(rank >= 1 && rank <= dim, "random_mixed: rank must be in 1..prod(dims)");
  Rng rng(seed);
  // Pure state on system (x) ancilla, ancilla least significant; tracing the
  // ancilla gives A A^dagger with A the dim x rank coefficient matrix.
  ComplexMatrix a(dim, rank);
  for (int s = 0; s < dim; ++s) {
    for (int k = 0; k < rank; ++k) a(s, k) = rng.complex_normal();
  }
  a /= a.norm();
  ComplexMatrix rho = a * a.adjoint();
  return MultipartiteState(std::move(rho), dims);
}

MultipartiteState build(const StateSpec& spec) {
  switch (spec.kind) {
    case StateKind::ggz:
      return ggz_state(spec.n, spec.p, spec.phi);
    case StateKind::dicke:
      return dicke_state(spec.n, spec.r);
    case StateKind::antisym3:
      return antisymmetric_qutrits();
    case StateKind::cluster4:
      return cluster4_state();
    case StateKind::hs4:
      return hs4_state();
    case StateKind::product:
      return product_state(spec.dims, spec.levels);
    case StateKind::pure_vector: {
      check_dims(spec.dims);
      require(spec.amplitudes.size() == product_of(spec.dims),
              "pure_vector: amplitude count does not match dims");
      const double norm = spec.amplitudes.norm();
      require(norm > 0.0, "pure_vector: zero vector");
      return MultipartiteState::from_pure(spec.amplitudes / norm, spec.dims);
    }
    case StateKind::dense:
      return MultipartiteState(spec.matrix, spec.dims);
    case StateKind::random_pure:
      return random_pure(spec.dims, spec.seed);
    case StateKind::random_mixed:
      return random_mixed(spec.dims, spec.rank, spec.seed);
  }
  throw DimensionError("unhandled state kind");
}

Json spec_to_json(const StateSpec& spec) {
  Json params = Json::object();
  switch (spec.kind) {
    case StateKind::ggz:
      params = {{"n", spec.n}, {"p", spec.p}, {"phi", spec.phi}};
      break;
    case StateKind::dicke:
      params = {{"n", spec.n}, {"r", spec.r}};
      break;
    case StateKind::antisym3:
    case StateKind::cluster4:
    case StateKind::hs4:
      break;
    case StateKind::product:
      params = {{"dims", spec.dims}, {"levels", spec.levels}};
      break;
    case StateKind::pure_vector:
      params = {{"dims", spec.dims}, {"amplitudes", vector_to_json(spec.amplitudes)}};
      break;
    case StateKind::dense:
      params = {{"dims", spec.dims}, {"matrix", matrix_to_json(spec.matrix)}};
      break;
    case StateKind::random_pure:
      params = {{"dims", spec.dims}, {"seed", spec.seed}};
      break;
    case StateKind::random_mixed:
      params = {{"dims", spec.dims}, {"rank", spec.rank}, {"seed", spec.seed}};
      break;
  }
  return Json{{"kind", std::string(kind_name(spec.kind))}, {"params", params}};
}

StateSpec spec_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("state spec must be a JSON object");
  StateSpec s;
  Json params;
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) throw ParseError("\"kind\" must be a string");
    s.kind = kind_from_name(j["kind"].get<std::string>());
    params = j.value("params", Json::object());
  } else if (j.contains("matrix")) {
    s.kind = StateKind::dense;
    params = j;
  } else {
    throw ParseError("state spec needs \"kind\"");
  }
  if (!params.is_object()) throw ParseError("\"params\" must be an object");
  try {
    if (params.contains("n")) s.n = params["n"].get<int>();
    if (params.contains("r")) s.r = params["r"].get<int>();
    if (params.contains("p")) s.p = params["p"].get<double>();
    if (params.contains("phi")) s.phi = params["phi"].get<double>();
    if (params.contains("dims")) s.dims = params["dims"].get<std::vector<int>>();
    if (params.contains("levels")) s.levels = params["levels"].get<std::vector<int>>();
    if (params.contains("rank")) s.rank = params["rank"].get<int>();
    if (params.contains("seed")) s.seed = params["seed"].get<std::uint64_t>();
    if (params.contains("amplitudes")) s.amplitudes = vector_from_json(params["amplitudes"]);
    if (params.contains("matrix")) s.matrix = matrix_from_json(params["matrix"]);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad state params: ") + e.what());
  }
  if (s.kind == StateKind::product && s.dims.empty() && s.n > 0) s.dims.assign(s.n, 2);
  if (s.kind == StateKind::dense && s.matrix.size() == 0) throw ParseError("dense spec needs \"matrix\"");
  if (s.kind == StateKind::pure_vector && s.amplitudes.size() == 0) {
    throw ParseError("pure_vector spec needs \"amplitudes\"");
  }
  return s;
}

namespace {

double parse_number(std::string_view text, std::string_view key) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError("bad numeric value for '" + std::string(key) + "': " + std::string(text));
  }
  return v;
}

int parse_int(std::string_view text, std::string_view key) {
  const double v = parse_number(text, key);
  if (v != std::floor(v)) throw ParseError("'" + std::string(key) + "' must be an integer");
  return static_cast<int>(v);
}

std::vector<int> parse_int_list(std::string_view text, std::string_view key) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find('x', start);
    const auto piece = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    out.push_back(parse_int(piece, key));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

StateSpec parse_state_spec(std::string_view text) {
  if (text.starts_with("dense@")) {
    const std::string path(text.substr(6));
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open state file '" + path + "'");
    Json j;
    try {
      j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("invalid JSON in '" + path + "': " + e.what());
    }
    return spec_from_json(j);
  }
  const auto colon = text.find(':');
  StateSpec s;
  s.kind = kind_from_name(text.substr(0, colon));
  if (colon == std::string_view::npos) {
    if (s.kind == StateKind::product) s.dims = {2};
    return s;
  }
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value, got '" + std::string(item) + "'");
    const auto key = item.substr(0, eq);
    const auto val = item.substr(eq + 1);
    if (key == "n") {
      s.n = parse_int(val, key);
    } else if (key == "r") {
      s.r = parse_int(val, key);
    } else if (key == "p") {
      s.p = parse_number(val, key);
    } else if (key == "phi") {
      s.phi = parse_number(val, key);
    } else if (key == "dims") {
      s.dims = parse_int_list(val, key);
    } else if (key == "levels") {
      s.levels = parse_int_list(val, key);
    } else if (key == "rank") {
      s.rank = parse_int(val, key);
    } else if (key == "seed") {
      std::uint64_t seed = 0;
      auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), seed);
      if (ec != std::errc() || ptr != val.data() + val.size()) throw ParseError("bad seed '" + std::string(val) + "'");
      s.seed = seed;
    } else {
      throw ParseError("unknown state parameter '" + std::string(key) + "'");
    }
  }
  if (s.dims.empty() && s.n > 0 &&
      (s.kind == StateKind::product || s.kind == StateKind::random_pure ||
       s.kind == StateKind::random_mixed)) {
    s.dims.assign(s.n, 2);
  }
  if (s.kind == StateKind::random_mixed && s.rank == 0 && !s.dims.empty()) {
    s.rank = product_of(s.dims);
  }
  if (s.kind == StateKind::dense || s.kind == StateKind::pure_vector) {
    throw ParseError("dense states are read with dense@file.json");
  }
  return s;
}

}  // namespace mqmi
