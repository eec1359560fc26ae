#include <doctest.h>

#include <cmath>

#include "mqmi/entropy.hpp"
#include "mqmi/measures.hpp"
#include "mqmi/states.hpp"
#include "oracle.hpp"

using namespace mqmi;

namespace {

struct Row {
  const char* name;
  MultipartiteState state;
  std::vector<double> m;  // oracle values, M_1 .. M_n
  double c;
};

// Frozen from an independent numpy evaluation (eigvalsh on reshaped marginals).
std::vector<Row> table_rows() {
  return {
      {"D_3^1", dicke_state(3, 1), {2.754887502163468, 2.754887502163468, 0.0}, 0.0},
      {"psi_as", antisymmetric_qutrits(), {4.754887502163468, 4.754887502163468, 0.0}, 0.0},
      {"D_4^1", dicke_state(4, 1), {3.245112497836531, 6.0, 3.245112497836532, 0.0}, 0.490224995673063},
      {"D_4^2", dicke_state(4, 2), {4.0, 7.509775004326935, 4.0, 0.0}, 0.490224995673065},
      {"C_4", cluster4_state(), {4.0, 10.0, 4.0, 0.0}, -2.0},
      {"HS_4", hs4_state(), {4.0, 10.754887502163468, 4.0, 0.0}, -2.754887502163469},
      {"D_5^1", dicke_state(5, 1),
       {3.609640474436812, 9.709505944546686, 9.709505944546688, 3.609640474436811, 0.0}, 0.0},
      {"D_5^2", dicke_state(5, 2),
       {4.854752972273343, 12.954618442383216, 12.954618442383216, 4.854752972273343, 0.0}, 0.0},
  };
}

Partition singles(int n) { return Partition::singletons(n); }

}  // namespace

TEST_SUITE("measures") {
  TEST_CASE("partitions") {
    const auto p = Partition::from_one_based({{1}, {2, 3}}, 3);
    CHECK(p.size() == 2);
    CHECK(p.to_string() == "{1}:{2,3}");
    CHECK(p.covers(3));
    CHECK(p.union_of(0b10) == SubsystemSet::range(1, 3));
    CHECK(p.without(0).to_string() == "{2,3}");
    const auto q = Partition::singletons(4).merged(3, 1);
    CHECK(q.to_string() == "{1}:{2,4}:{3}");
    const int order[] = {2, 0, 1};
    CHECK(q.reordered(order).to_string() == "{3}:{1}:{2,4}");
    const int relabel[] = {3, 2, 1, 0};
    CHECK(q.relabeled(relabel).to_string() == "{4}:{1,3}:{2}");
    CHECK_THROWS_AS(Partition({SubsystemSet::single(0), SubsystemSet::range(0, 2)}), DimensionError);
    CHECK_THROWS_AS(Partition({SubsystemSet{}}), DimensionError);
    CHECK_THROWS_AS(Partition::from_one_based({{1}, {4}}, 3), DimensionError);
    CHECK_THROWS_AS(q.merged(1, 1), DimensionError);
  }

  TEST_CASE("M_k form coefficients") {
    const auto f = mqmi_form(singles(3), 2);
    const std::map<SubsystemSet, double> expect{
        {SubsystemSet::from_mask(0b011), 1.0},
        {SubsystemSet::from_mask(0b101), 1.0},
        {SubsystemSet::from_mask(0b110), 1.0},
        {SubsystemSet::from_mask(0b111), -2.0},
    };
    CHECK(f.terms() == expect);
    CHECK(mqmi_form(singles(4), 4).terms().empty());
    CHECK_THROWS_AS(mqmi_form(singles(3), 0), DimensionError);
    CHECK_THROWS_AS(mqmi_form(singles(3), 4), DimensionError);
    CHECK(binomial(5, 2) == 10.0);
    CHECK(binomial(4, 0) == 1.0);
  }

  TEST_CASE("Table I rows against frozen oracle values") {
    for (const auto& row : table_rows()) {
      INFO(row.name);
      const int n = row.state.num_parties();
      const auto m = mqmi_profile(row.state, singles(n));
      REQUIRE(m.size() == row.m.size());
      for (int k = 0; k < n; ++k) CHECK(std::abs(m[k] - row.m[k]) < 1e-9);
      CHECK(std::abs(common_information(row.state, singles(n)) - row.c) < 1e-9);
    }
  }

  TEST_CASE("gGHZ rows follow the closed forms") {
    for (double p : {0.5, 0.3}) {
      const double h = binary_entropy(p);
      const std::vector<std::vector<double>> coeff{{2, 0}, {3, 3, 0}, {4, 6, 4, 0}, {5, 10, 10, 5, 0}};
      const double c_coeff[] = {2, 0, 2, 0};
      for (int n = 2; n <= 5; ++n) {
        const auto s = ggz_state(n, p, 0.4);
        const auto m = mqmi_profile(s, singles(n));
        for (int k = 0; k < n; ++k) CHECK(std::abs(m[k] - coeff[n - 2][k] * h) < 1e-9);
        CHECK(std::abs(common_information(s, singles(n)) - c_coeff[n - 2] * h) < 1e-9);
      }
    }
  }

  TEST_CASE("M_k agrees with the brute-force oracle on random states") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const auto s = random_mixed({2, 2, 3, 2}, 5, seed);
      const auto lib = mqmi_profile(s, singles(4));
      const auto ref = oracle::mk_profile(s);
      for (int k = 0; k < 4; ++k) CHECK(std::abs(lib[k] - ref[k]) < 1e-9);
    }
  }

  TEST_CASE("GCMI values") {
    const auto ghz = ggz_state(3, 0.5);
    const auto one = SubsystemSet::single(0), two = SubsystemSet::single(1), three = SubsystemSet::single(2);
    CHECK(gcmi(ghz, Partition({one, two}), three) == doctest::Approx(1.0));
    CHECK(gcmi(ghz, Partition({one, two})) == doctest::Approx(1.0));
    CHECK(gcmi(ghz, Partition({one, two, three})) == doctest::Approx(0.0).epsilon(1e-12));
    // One block: conditional entropy S(A|B).
    CHECK(gcmi(ghz, Partition({one}), two) == doctest::Approx(0.0).epsilon(1e-12));
    const auto w = dicke_state(3, 1);
    // S(AB) = S(C) = S(B) = h(1/3), so S(A|B) = 0 while S(A|BC) = -h(1/3).
    CHECK(std::abs(gcmi(w, Partition({one}), two)) < 1e-12);
    CHECK(gcmi(w, Partition({one}), two | three) == doctest::Approx(-binary_entropy(1.0 / 3.0)));
    CHECK_THROWS_AS(gcmi(ghz, Partition({one, two}), two), DimensionError);
    CHECK_THROWS_AS(gcmi(ghz, Partition({one, SubsystemSet::single(3)})), DimensionError);

    const auto f = mutual_information_form(one, two, three);
    const auto g = gcmi_form(Partition({one, two}), three);
    CHECK(f.terms() == g.terms());
  }

  TEST_CASE("conditional M_k equals M_k of conditional entropies") {
    const auto s = random_mixed({2, 2, 2, 2}, 6, 12);
    EntropyCache cache(s);
    const auto y = SubsystemSet::single(3);
    const Partition parts = Partition::singletons(3);
    for (int k = 1; k <= 3; ++k) {
      double expect = 0.0;
      auto cond = [&](SubsystemSet set) { return cache.entropy(set | y) - cache.entropy(y); };
      for (std::uint32_t m = 1; m < 8; ++m) {
        if (std::popcount(m) == k) expect += cond(SubsystemSet::from_mask(m));
      }
      expect -= binomial(2, k - 1) * cond(SubsystemSet::all(3));
      CHECK(mqmi_k(cache, parts, k, y) == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  TEST_CASE("T and S forms agree, including the relative-entropy route") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      const int n = 3 + static_cast<int>(seed % 2);
      const auto s = random_mixed(std::vector<int>(n, 2), 3, seed);
      const auto parts = singles(n);
      const double t = total_correlation(s, parts);
      CHECK(std::abs(total_correlation(s, parts, TotalCorrelationForm::relative) - t) < 1e-8);
      CHECK(std::abs(total_correlation(s, parts, TotalCorrelationForm::chain) - t) < 1e-8);
      CHECK(std::abs(total_correlation(s, parts, TotalCorrelationForm::regions) - t) < 1e-8);
      CHECK(std::abs(t - mqmi_k(s, parts, 1)) < 1e-12);
      const double d = dual_total_correlation(s, parts);
      CHECK(std::abs(dual_total_correlation(s, parts, DualTotalCorrelationForm::chain) - d) < 1e-8);
      CHECK(std::abs(dual_total_correlation(s, parts, DualTotalCorrelationForm::regions) - d) < 1e-8);
      CHECK(std::abs(dual_total_correlation(s, parts, DualTotalCorrelationForm::complement) - d) < 1e-8);
      CHECK(std::abs(d - mqmi_k(s, parts, n - 1)) < 1e-12);
    }
    CHECK_THROWS_AS(total_correlation_form(singles(3), TotalCorrelationForm::relative), std::invalid_argument);
  }

  TEST_CASE("T on grouped blocks") {
    // Relative-entropy route with blocks that are not contiguous.
    const auto s = random_mixed({2, 3, 2, 2}, 4, 99);
    const auto parts = Partition::from_one_based({{1, 3}, {2}, {4}}, 4);
    CHECK(std::abs(total_correlation_relative(s, parts) - total_correlation(s, parts)) < 1e-8);
  }

  TEST_CASE("combined and common information") {
    const auto s = random_mixed({2, 2, 2}, 2, 4);
    const auto parts = singles(3);
    const auto m = mqmi_profile(s, parts);
    CHECK(combined(s, parts, WeightVector{{0.2, 0.3, 0.5}}) ==
          doctest::Approx(0.2 * m[0] + 0.3 * m[1] + 0.5 * m[2]).epsilon(1e-12));
    CHECK(common_information(s, parts) == doctest::Approx(m[0] - m[1] + m[2]).epsilon(1e-12));
    CHECK(common_information(s, parts) == doctest::Approx(gcmi(s, parts)).epsilon(1e-9));
    CHECK_THROWS_AS((WeightVector{{0.5, 0.5}}.check(3)), DimensionError);
    CHECK_THROWS_AS((WeightVector{{0.5, 0.6, -0.1}}.check(3)), DimensionError);
    CHECK_THROWS_AS((WeightVector{{0.5, 0.5, 0.1}}.check(3)), DimensionError);
    CHECK_NOTHROW((WeightVector{{1.0, 0.0, 0.0}}.check(3)));
  }

  TEST_CASE("measure reports carry their terms") {
    const auto s = random_mixed({2, 2, 2}, 3, 5);
    for (auto kind : {MeasureId::Kind::mk, MeasureId::Kind::total, MeasureId::Kind::dual_total,
                      MeasureId::Kind::common, MeasureId::Kind::gcmi}) {
      MeasureId id;
      id.kind = kind;
      id.k = 2;
      const auto r = measure_report(s, singles(3), id);
      CHECK(r.recomputed_value() == doctest::Approx(r.value).epsilon(1e-14));
      CHECK_FALSE(r.name.empty());
    }
    MeasureId id;
    CHECK(id.name(3) == "M_1^(3)");
    id.kind = MeasureId::Kind::common;
    CHECK(id.name(4) == "C^(4)");
    id.kind = MeasureId::Kind::combined;
    id.lambda = WeightVector{{1.0, 0.0, 0.0}};
    CHECK(evaluate_measure(s, singles(3), id) == doctest::Approx(mqmi_k(s, singles(3), 1)));
  }

  TEST_CASE("tripartite regions of GHZ") {
    const auto r = tripartite_regions(ggz_state(3, 0.5), singles(3));
    CHECK(r.a == doctest::Approx(-1.0));
    CHECK(r.b == doctest::Approx(-1.0));
    CHECK(r.c == doctest::Approx(-1.0));
    CHECK(r.ab == doctest::Approx(1.0));
    CHECK(r.ac == doctest::Approx(1.0));
    CHECK(r.bc == doctest::Approx(1.0));
    CHECK(std::abs(r.abc) < 1e-12);
    CHECK(r.t3 == doctest::Approx(3.0));
    CHECK(r.s3 == doctest::Approx(3.0));
    CHECK(r.checks.size() == 7);
    for (const auto& c : r.checks) CHECK(std::abs(c.residual()) < 1e-12);
    CHECK_THROWS_AS(tripartite_regions(ggz_state(4, 0.5), singles(4)), DimensionError);
  }

  TEST_CASE("identities hold on random states") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      for (int n : {3, 4}) {
        const auto s = random_mixed(std::vector<int>(n, 2), 2 + static_cast<int>(seed), seed);
        const auto parts = singles(n);
        for (int p = 1; p < n; ++p) CHECK(std::abs(partition_identity_residual(s, parts, p).residual()) < 1e-10);
        for (const auto& c : recurrence_residuals(s, parts)) {
          INFO(c.name);
          CHECK(std::abs(c.residual()) < 1e-10);
        }
        const Partition three({SubsystemSet::single(0), SubsystemSet::single(1), SubsystemSet::range(2, n)});
        for (const auto& c : tripartite_regions(s, three).checks) {
          INFO(c.name);
          CHECK(std::abs(c.residual()) < 1e-10);
        }
        const auto leak = secret_sharing_leakage(s, SubsystemSet::single(0), SubsystemSet::single(1),
                                                 SubsystemSet::range(2, n));
        for (const auto& c : leak.checks) CHECK(std::abs(c.residual()) < 1e-9);
      }
    }
    CHECK_THROWS_AS(recurrence_residuals(ggz_state(2, 0.5), singles(2)), DimensionError);
    CHECK_THROWS_AS(partition_identity_residual(ggz_state(3, 0.5), singles(3), 3), DimensionError);
  }

  TEST_CASE("secret sharing leakage of GHZ") {
    const auto r = secret_sharing_leakage(ggz_state(3, 0.5), SubsystemSet::single(0), SubsystemSet::single(1),
                                          SubsystemSet::single(2));
    CHECK(r.i_ab_e == doctest::Approx(2.0));
    CHECK(r.i_ae_given_b == doctest::Approx(1.0));
    CHECK(r.i_be_given_a == doctest::Approx(1.0));
    CHECK(std::abs(r.i_abe) < 1e-12);
    CHECK(r.i_ab_given_e == doctest::Approx(1.0));
  }

  TEST_CASE("entropy cache") {
    const auto s = random_mixed({2, 2, 2}, 3, 1);
    EntropyCache parallel(s, Execution::parallel);
    EntropyCache serial(s, Execution::serial);
    parallel.prefetch_unions(singles(3));
    CHECK(parallel.size() == 7);
    for (std::uint32_t m = 0; m < 8; ++m) {
      CHECK(parallel.entropy(SubsystemSet::from_mask(m)) == serial.entropy(SubsystemSet::from_mask(m)));
    }
  }
}
