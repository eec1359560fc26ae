#include <doctest.h>

#include <omp.h>

#include "mqmi/kernels.hpp"
#include "mqmi/states.hpp"
#include "oracle.hpp"

using namespace mqmi;

TEST_SUITE("kernels") {
  TEST_CASE("parallel, serial and reference partial traces agree") {
    const auto s = random_mixed({2, 3, 2, 3}, 7, 31);
    for (std::uint32_t m = 1; m < 16; ++m) {
      const auto keep = SubsystemSet::from_mask(m);
      const auto par = kernels::partial_trace(s.matrix(), s.dims(), keep, Execution::parallel);
      const auto ser = kernels::partial_trace(s.matrix(), s.dims(), keep, Execution::serial);
      const auto ref = kernels::partial_trace_reference(s.matrix(), s.dims(), keep);
      CHECK((par - ser).cwiseAbs().maxCoeff() == 0.0);
      CHECK((par - ref).cwiseAbs().maxCoeff() < 1e-14);
    }
  }

  TEST_CASE("subset entropies do not depend on the execution mode or thread count") {
    const auto s = random_mixed({2, 2, 2, 2, 2}, 32, 5);
    std::vector<SubsystemSet> sets;
    for (std::uint32_t m = 0; m < 32; ++m) sets.push_back(SubsystemSet::from_mask(m));
    const auto ser = kernels::subset_entropies(s, sets, Execution::serial);
    const int before = omp_get_max_threads();
    omp_set_num_threads(3);
    const auto par = kernels::subset_entropies(s, sets, Execution::parallel);
    omp_set_num_threads(before);
    CHECK(ser == par);
    CHECK(ser[0] == 0.0);
    const auto ref = oracle::subset_entropies(s);
    for (std::uint32_t m = 0; m < 32; ++m) CHECK(ser[m] == doctest::Approx(ref[m]).epsilon(1e-10));
  }

  TEST_CASE("entropy from eigenvalues") {
    const double half[] = {0.5, 0.5};
    CHECK(kernels::entropy_from_eigenvalues(half) == doctest::Approx(1.0));
    const double pure[] = {1.0, 0.0, 0.0};
    CHECK(kernels::entropy_from_eigenvalues(pure) == 0.0);
    const double tiny_negative[] = {1.0, -1e-12};
    CHECK(kernels::entropy_from_eigenvalues(tiny_negative) == 0.0);
    const double negative[] = {1.1, -0.1};
    CHECK_THROWS_AS(kernels::entropy_from_eigenvalues(negative), NumericalError);
  }

  TEST_CASE("matrix entropy agrees with the Jacobi oracle") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const auto s = random_mixed({3, 3}, 1 + static_cast<int>(seed) * 2, seed);
      CHECK(kernels::matrix_entropy(s.matrix()) == doctest::Approx(oracle::entropy(s.matrix())).epsilon(1e-10));
    }
    CHECK(kernels::matrix_entropy(ComplexMatrix::Identity(8, 8) / 8.0) == doctest::Approx(3.0));
  }
}
