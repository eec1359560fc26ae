#pragma once

#include <cstdint>
#include <random>

#include "mqmi/qmatrix.hpp"

namespace mqmi {

/// Seeded generator used for every random state, unitary and channel.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniform doubles take the top 53 bits of one draw; normals use the
/// Box-Muller transform on two uniforms. The standard library distributions
/// are avoided because their algorithms differ between implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // in [0, 1)
  double normal();
  Complex complex_normal();  // real and imaginary parts i.i.d. N(0, 1)
  std::uint64_t next() { return engine_(); }
  int uniform_int(int lo, int hi);  // inclusive bounds

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finalizer; derives independent per-trial seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

ComplexMatrix ginibre(int rows, int cols, Rng& rng);

/// Haar-random unitary: QR of a Ginibre matrix with the phases of R's diagonal
/// absorbed into Q.
ComplexMatrix haar_unitary(int d, Rng& rng);

}  // namespace mqmi
