#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mqmi/json_io.hpp"
#include "mqmi/qmatrix.hpp"

namespace mqmi {

enum class StateKind {
  ggz,           // sqrt(p)|0...0> + e^{i phi} sqrt(1-p)|1...1>
  dicke,         // uniform superposition of weight-r kets
  antisym3,      // three-qutrit totally antisymmetric state
  cluster4,      // (|0000> + |0011> + |1100> - |1111>)/2
  hs4,           // four-qubit state with omega = e^{2 pi i / 3} phases
  product,       // computational product ket |l_1 ... l_n>
  pure_vector,   // explicit amplitudes
  dense,         // explicit density matrix
  random_pure,   // Haar pure state
  random_mixed,  // induced-measure mixed state
};

std::string_view kind_name(StateKind kind);
StateKind kind_from_name(std::string_view name);

/// Recipe for a state. Only the fields relevant to `kind` are read.
struct StateSpec {
  StateKind kind = StateKind::product;
  int n = 0;
  int r = 0;
  double p = 0.5;
  double phi = 0.0;
  std::vector<int> dims;
  std::vector<int> levels;
  int rank = 0;
  std::uint64_t seed = 0;
  ComplexVector amplitudes;
  ComplexMatrix matrix;
};

/// Throws DimensionError for out-of-range parameters.
MultipartiteState build(const StateSpec& spec);

MultipartiteState ggz_state(int n, double p, double phi = 0.0);
MultipartiteState dicke_state(int n, int r);
MultipartiteState antisymmetric_qutrits();
MultipartiteState cluster4_state();
MultipartiteState hs4_state();
MultipartiteState product_state(std::vector<int> dims, std::vector<int> levels = {});

MultipartiteState random_pure(const std::vector<int>& dims, std::uint64_t seed);
MultipartiteState random_mixed(const std::vector<int>& dims, int rank, std::uint64_t seed);

// StateSpec JSON schema: {"kind": string, "params": object}. A bare
// {"dims": [...], "matrix": [...]} object is read as a dense spec.
Json spec_to_json(const StateSpec& spec);
StateSpec spec_from_json(const Json& j);

/// Inline form `kind:key=val,key=val`, e.g. `ggz:n=3,p=0.5` or
/// `random_mixed:dims=2x2x2,rank=2,seed=7`. List values use `x` as separator.
/// `dense@path.json` reads a JSON spec from a file. Throws ParseError.
StateSpec parse_state_spec(std::string_view text);

}  // namespace mqmi
