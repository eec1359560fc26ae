#include <doctest.h>

#include <cmath>

#include "mqmi/entropy.hpp"
#include "mqmi/rng.hpp"
#include "mqmi/states.hpp"
#include "oracle.hpp"

using namespace mqmi;

namespace {

MultipartiteState diagonal_state(std::vector<double> p, std::vector<int> dims) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<int>(p.size()), static_cast<int>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) m(i, i) = p[i];
  return MultipartiteState(m, std::move(dims));
}

MultipartiteState rotate(const MultipartiteState& s, const ComplexMatrix& u) {
  return MultipartiteState(u * s.matrix() * u.adjoint(), s.dims());
}

}  // namespace

TEST_SUITE("entropy") {
  TEST_CASE("binary entropy") {
    CHECK(binary_entropy(1.0 / 3.0) == doctest::Approx(0.9182958340544896).epsilon(1e-15));
    CHECK(binary_entropy(0.5) == 1.0);
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.3) == doctest::Approx(oracle::binary_entropy(0.3)).epsilon(1e-15));
    CHECK_THROWS_AS(binary_entropy(-0.1), std::domain_error);
    CHECK_THROWS_AS(binary_entropy(1.1), std::domain_error);
  }

  TEST_CASE("von Neumann entropy") {
    CHECK(von_neumann(ggz_state(3, 0.5)) == doctest::Approx(0.0));
    CHECK(von_neumann(MultipartiteState(ComplexMatrix::Identity(6, 6) / 6.0, {2, 3})) ==
          doctest::Approx(std::log2(6.0)));
    CHECK(von_neumann(diagonal_state({0.5, 0.25, 0.25, 0.0}, {2, 2})) == doctest::Approx(1.5));
    ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
    CHECK_THROWS_AS(von_neumann(MultipartiteState(bad, {2})), NumericalError);
    const auto r = random_mixed({2, 3}, 4, 2);
    CHECK(von_neumann(r) == doctest::Approx(oracle::entropy(r.matrix())).epsilon(1e-10));
  }

  TEST_CASE("von Neumann entropy is unitarily and permutation invariant") {
    Rng rng(17);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto s = random_mixed({2, 3, 2}, 3, seed);
      const double base = von_neumann(s);
      CHECK(std::abs(von_neumann(rotate(s, haar_unitary(12, rng))) - base) < 1e-9);
      const int perm[] = {1, 2, 0};
      CHECK(std::abs(von_neumann(permute_subsystems(s, perm)) - base) < 1e-9);
    }
  }

  TEST_CASE("relative entropy of commuting states") {
    const auto tau = diagonal_state({0.5, 0.25, 0.125, 0.125}, {2, 2});
    const auto sigma = diagonal_state({0.25, 0.25, 0.25, 0.25}, {2, 2});
    // sum p log2(p / q)
    const double expect = 0.5 * std::log2(2.0) + 0.25 * 0.0 + 2 * 0.125 * std::log2(0.5);
    CHECK(relative_entropy(tau, sigma).bits() == doctest::Approx(expect).epsilon(1e-14));
    // Unchanged when both are rotated by the same unitary.
    Rng rng(8);
    const ComplexMatrix u = haar_unitary(4, rng);
    CHECK(relative_entropy(rotate(tau, u), rotate(sigma, u)).bits() == doctest::Approx(expect).epsilon(1e-10));
  }

  TEST_CASE("relative entropy to the maximally mixed state") {
    const auto r = random_mixed({2, 2}, 2, 6);
    const auto mixed = MultipartiteState(ComplexMatrix::Identity(4, 4) / 4.0, {2, 2});
    CHECK(relative_entropy(r, mixed).bits() == doctest::Approx(2.0 - von_neumann(r)).epsilon(1e-10));
  }

  TEST_CASE("support condition gives the infinity sentinel") {
    const auto zero = product_state({2}, {0});
    const auto one = product_state({2}, {1});
    const auto d = relative_entropy(zero, one);
    CHECK(d.is_infinite());
    CHECK_THROWS_AS(d.bits(), NumericalError);
    CHECK_FALSE(relative_entropy(one, one).is_infinite());
    CHECK(std::abs(relative_entropy(one, one).bits()) < 1e-12);
    // Support inside a rank-deficient sigma is fine.
    const auto sigma = diagonal_state({0.5, 0.5, 0.0, 0.0}, {2, 2});
    const auto tau = diagonal_state({0.9, 0.1, 0.0, 0.0}, {2, 2});
    CHECK_FALSE(relative_entropy(tau, sigma).is_infinite());
  }

  TEST_CASE("Klein inequality, with equality only for equal states") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto tau = random_mixed({2, 2}, 4, seed);
      const auto sigma = random_mixed({2, 2}, 4, seed + 1000);
      const double d = relative_entropy(tau, sigma).bits();
      CHECK(d >= -1e-9);
      const double max_entry = (tau.matrix() - sigma.matrix()).cwiseAbs().maxCoeff();
      if (max_entry > 1e-7) CHECK(d > 1e-12);
      CHECK(std::abs(relative_entropy(tau, tau).bits()) < 1e-9);
    }
  }

  TEST_CASE("relative entropy is monotone under partial trace") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto tau = random_mixed({2, 3}, 6, seed);
      const auto sigma = random_mixed({2, 3}, 6, seed + 77);
      const auto keep = SubsystemSet::single(seed % 2);
      const double full = relative_entropy(tau, sigma).bits();
      const double part = relative_entropy(partial_trace(tau, keep), partial_trace(sigma, keep)).bits();
      CHECK(full >= part - 1e-9);
    }
  }

  TEST_CASE("basic inequality report") {
    const auto s = random_mixed({2, 2, 2, 2}, 3, 44);
    const auto x = SubsystemSet::single(0), y = SubsystemSet::range(1, 3), z = SubsystemSet::single(3);
    auto S = [&](SubsystemSet set) { return von_neumann(partial_trace(s, set)); };
    const auto r = basic_inequality_report(s, x, y, z);
    REQUIRE(r.size() == 5);
    CHECK(r[0].name == "araki_lieb_xy");
    CHECK(r[0].residual == doctest::Approx(S(x | y) - S(x) + S(y)));
    CHECK(r[1].residual == doctest::Approx(S(x | y) - S(y) + S(x)));
    CHECK(r[2].name == "subadditivity");
    CHECK(r[2].residual == doctest::Approx(S(x) + S(y) - S(x | y)));
    CHECK(r[3].name == "weak_monotonicity");
    CHECK(r[3].residual == doctest::Approx(S(x | z) + S(y | z) - S(x) - S(y)));
    CHECK(r[4].name == "strong_subadditivity");
    CHECK(r[4].residual == doctest::Approx(S(x | y) + S(y | z) - S(y) - S(x | y | z)));
    for (const auto& item : r) CHECK(item.residual >= -1e-9);
    CHECK(basic_inequality_report(s, x, y, {}).size() == 3);
    CHECK_THROWS_AS(basic_inequality_report(s, x, x, z), DimensionError);
  }

  TEST_CASE("total correlation as relative entropy to the product of marginals") {
    const auto s = random_mixed({2, 2, 2}, 4, 3);
    MultipartiteState prod = partial_trace(s, SubsystemSet::single(0));
    for (int i = 1; i < 3; ++i) prod = tensor(prod, partial_trace(s, SubsystemSet::single(i)));
    double entropic = -von_neumann(s);
    for (int i = 0; i < 3; ++i) entropic += von_neumann(partial_trace(s, SubsystemSet::single(i)));
    CHECK(relative_entropy(s, prod).bits() == doctest::Approx(entropic).epsilon(1e-8));
  }
}
