#include "mqmi/channels.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>

#include "mqmi/rng.hpp"

namespace mqmi {

double KrausChannel::trace_preservation_defect() const {
  const int d = dimension();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& k : operators) sum += k.adjoint() * k;
  return (sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

void KrausChannel::check(double tol) const {
  if (operators.empty()) throw DimensionError("channel needs at least one Kraus operator");
  const int d = dimension();
  for (const auto& k : operators) {
    if (k.rows() != d || k.cols() != d) throw DimensionError("Kraus operators must all be d x d");
  }
  const double defect = trace_preservation_defect();
  if (defect > tol) {
    throw NumericalError("channel is not trace preserving (defect " + std::to_string(defect) + ")");
  }
}

KrausChannel identity_channel(int d, int target) {
  return KrausChannel{{ComplexMatrix::Identity(d, d)}, target};
}

KrausChannel depolarizing_channel(int d, double p, int target) {
  if (!(p >= 0.0 && p <= 1.0)) throw DimensionError("depolarizing p must be in [0, 1]");
  if (d < 2) throw DimensionError("channel dimension must be >= 2");
  ComplexMatrix shift = ComplexMatrix::Zero(d, d);
  ComplexMatrix clock = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    shift((i + 1) % d, i) = 1.0;
    clock(i, i) = std::polar(1.0, 2.0 * std::numbers::pi * i / d);
  }
  const double d2 = static_cast<double>(d) * d;
  KrausChannel ch;
  ch.target = target;
  ComplexMatrix xa = ComplexMatrix::Identity(d, d);
  for (int a = 0; a < d; ++a) {
    ComplexMatrix zb = ComplexMatrix::Identity(d, d);
    for (int b = 0; b < d; ++b) {
      const double w = (a == 0 && b == 0) ? 1.0 - p + p / d2 : p / d2;
      if (w > 0.0) ch.operators.push_back(std::sqrt(w) * xa * zb);
      zb = zb * clock;
    }
    xa = xa * shift;
  }
  return ch;
}

KrausChannel unitary_channel(const ComplexMatrix& u, int target) { return KrausChannel{{u}, target}; }

KrausChannel random_local_channel(int d, int kraus_rank, std::uint64_t seed, int target) {
  if (kraus_rank < 1) throw DimensionError("kraus_rank must be >= 1");
  if (d < 2) throw DimensionError("channel dimension must be >= 2");
  Rng rng(seed);
  const ComplexMatrix u = haar_unitary(d * kraus_rank, rng);
  KrausChannel ch;
  ch.target = target;
  // The first d columns form an isometry V; its row blocks are the operators.
  for (int i = 0; i < kraus_rank; ++i) ch.operators.push_back(u.block(i * d, 0, d, d));
  return ch;
}

MultipartiteState apply_local(const KrausChannel& channel, const MultipartiteState& state,
                              double tol) {
  channel.check(tol);
  if (channel.target < 0 || channel.target >= state.num_parties()) {
    throw DimensionError("channel target outside the state");
  }
  if (channel.dimension() != state.dims()[channel.target]) {
    throw DimensionError("channel dimension does not match the target party");
  }
  const int dim = state.dimension();
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (const auto& k : channel.operators) {
    const ComplexMatrix full = embed_local(k, state.dims(), channel.target);
    out.noalias() += full * state.matrix() * full.adjoint();
  }
  return MultipartiteState(std::move(out), state.dims(), state.labels());
}

namespace {

void check_basis(const ComplexMatrix& basis, int d, double tol) {
  if (basis.rows() != d || basis.cols() != d) {
    throw DimensionError("measurement basis must have d orthonormal columns of length d");
  }
  const double defect = (basis.adjoint() * basis - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (defect > tol) throw NumericalError("measurement basis is not orthonormal");
}

}  // namespace

std::vector<MeasurementBranch> measurement_branches(const MultipartiteState& state, int party,
                                                    const ComplexMatrix& basis, double tol) {
  if (party < 0 || party >= state.num_parties()) throw DimensionError("measured party outside the state");
  const int d = state.dims()[party];
  check_basis(basis, d, tol);
  std::vector<MeasurementBranch> out;
  for (int o = 0; o < d; ++o) {
    const ComplexMatrix projector = basis.col(o) * basis.col(o).adjoint();
    const ComplexMatrix full = embed_local(projector, state.dims(), party);
    ComplexMatrix post = full * state.matrix() * full.adjoint();
    const double prob = post.trace().real();
    if (prob <= 0.0) continue;
    out.push_back({prob, MultipartiteState(post / prob, state.dims(), state.labels())});
  }
  return out;
}

BroadcastResult measure_and_broadcast(const MultipartiteState& state, int party,
                                      const ComplexMatrix& basis, double tol) {
  const int n = state.num_parties();
  const int r = state.dims().at(party);
  std::vector<int> dims = state.dims();
  for (int i = 0; i < n; ++i) dims.push_back(r);
  const int total = product_of(dims);
  if (total > kMaxTotalDimension) {
    throw DimensionError("broadcast state would have dimension " + std::to_string(total) +
                         " (above 256)");
  }
  const int reg_dim = total / state.dimension();
  ComplexMatrix out = ComplexMatrix::Zero(total, total);
  const int d = r;
  check_basis(basis, d, tol);
  for (int o = 0; o < d; ++o) {
    const ComplexMatrix projector = basis.col(o) * basis.col(o).adjoint();
    const ComplexMatrix full = embed_local(projector, state.dims(), party);
    const ComplexMatrix post = full * state.matrix() * full.adjoint();
    // Register index of |o o ... o>.
    int reg = 0;
    for (int i = 0; i < n; ++i) reg = reg * r + o;
    for (int c = 0; c < state.dimension(); ++c) {
      for (int rr = 0; rr < state.dimension(); ++rr) {
        out(rr * reg_dim + reg, c * reg_dim + reg) = post(rr, c);
      }
    }
  }
  std::vector<SubsystemSet> blocks;
  for (int i = 0; i < n; ++i) blocks.push_back(SubsystemSet::single(i) | SubsystemSet::single(n + i));
  return BroadcastResult{MultipartiteState(std::move(out), std::move(dims)), Partition(std::move(blocks))};
}

double deviation(const MultipartiteState& state, const KrausChannel& channel, const MeasureId& id,
                 const Partition& parts) {
  const double before = evaluate_measure(state, parts, id);
  const double after = evaluate_measure(apply_local(channel, state), parts, id);
  return std::abs(after - before);
}

Json channel_to_json(const KrausChannel& channel) {
  Json kraus = Json::array();
  for (const auto& k : channel.operators) kraus.push_back(matrix_to_json(k));
  return Json{{"target", channel.target + 1}, {"kraus", kraus}};
}

KrausChannel channel_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("target") || !j.contains("kraus") || !j["kraus"].is_array()) {
    throw ParseError("channel JSON needs \"target\" and \"kraus\"");
  }
  if (!j["target"].is_number_integer()) throw ParseError("\"target\" must be an integer");
  KrausChannel ch;
  ch.target = j["target"].get<int>() - 1;
  for (const auto& m : j["kraus"]) ch.operators.push_back(matrix_from_json(m));
  return ch;
}

namespace {

double channel_number(std::string_view text, std::string_view key) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("bad value for channel parameter '" + std::string(key) + "'");
  }
  return v;
}

}  // namespace

KrausChannel parse_channel_spec(std::string_view text, const std::vector<int>& party_dims) {
  if (text.starts_with("kraus@")) {
    const std::string path(text.substr(6));
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open channel file '" + path + "'");
    try {
      return channel_from_json(Json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("invalid channel JSON: " + std::string(e.what()));
    }
  }
  const auto colon = text.find(':');
  const std::string kind(text.substr(0, colon));
  int party = 1, rank = 2;
  double p = 1.0;
  std::uint64_t seed = 0;
  std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value in channel spec");
    const auto key = item.substr(0, eq);
    const auto val = item.substr(eq + 1);
    if (key == "party") {
      party = static_cast<int>(channel_number(val, key));
    } else if (key == "p") {
      p = channel_number(val, key);
    } else if (key == "rank") {
      rank = static_cast<int>(channel_number(val, key));
    } else if (key == "seed") {
      seed = static_cast<std::uint64_t>(channel_number(val, key));
    } else {
      throw ParseError("unknown channel parameter '" + std::string(key) + "'");
    }
  }
  if (party < 1 || party > static_cast<int>(party_dims.size())) {
    throw DimensionError("channel party outside 1.." + std::to_string(party_dims.size()));
  }
  const int d = party_dims[party - 1];
  if (kind == "identity") return identity_channel(d, party - 1);
  if (kind == "depolarize") return depolarizing_channel(d, p, party - 1);
  if (kind == "random") return random_local_channel(d, rank, seed, party - 1);
  throw ParseError("unknown channel kind '" + kind + "'");
}

}  // namespace mqmi
