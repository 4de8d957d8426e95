#include <doctest.h>

#include <cmath>
#include <random>

#include "lqdim/lqdim.hpp"
#include "oracles.hpp"

using namespace lqdim;
using gen::MeasureSpec;

namespace {

MeasureSpec thirds() { return MeasureSpec{gen::middle_thirds_spec()}; }

// two clusters at touching distance with lopsided masses
DyadicMeasure two_cluster(double mass_ratio) {
  std::vector<std::pair<GridIndex, double>> atoms;
  atoms.emplace_back(0, 1.0);
  for (GridIndex k = 40; k < 44; ++k) atoms.emplace_back(k, mass_ratio / 4.0);
  return DyadicMeasure::from_atoms(10, std::move(atoms));
}

}  // namespace

TEST_SUITE("regularity") {
  TEST_CASE("lebesgue is (3,1)-uniformly perfect") {
    CHECK(reg::check_uniformly_perfect(DyadicMeasure::uniform(12), 3.0, 1.0).pass);
  }

  TEST_CASE("dirac support is rejected as degenerate") {
    CHECK_THROWS_AS(reg::check_uniformly_perfect(DyadicMeasure::dirac(10), 3.0, 1.0),
                    DegenerateSupportError);
    CHECK_THROWS_AS(
        reg::fit_uniform_perfectness(DyadicMeasure::dirac(10),
                                     reg::default_up_N_grid(),
                                     reg::default_up_gamma_grid()),
        DegenerateSupportError);
  }

  TEST_CASE("isolated atom fails with the witness at that atom") {
    // a lone atom next to a uniform block: the block is fine internally, so
    // the first violation the sweep finds sits at the isolated atom
    std::vector<std::pair<GridIndex, double>> atoms{{0, 0.05}};
    for (GridIndex k = 512; k < 1024; ++k) atoms.emplace_back(k, 0.95 / 512);
    auto mu = DyadicMeasure::from_atoms(10, std::move(atoms));
    auto res = reg::check_uniformly_perfect(mu, 2.0, 0.5);
    CHECK_FALSE(res.pass);
    REQUIRE(res.witness.has_value());
    CHECK(res.witness->center == 0);
  }

  TEST_CASE("fit picks the smallest N, then the largest gamma") {
    auto mu = gen::generate(thirds(), 14);
    auto fit = reg::fit_uniform_perfectness(mu, reg::default_up_N_grid(),
                                            reg::default_up_gamma_grid());
    REQUIRE(fit.has_value());
    CHECK(fit->second > 0.0);
    // nothing smaller in the grid passes with any gamma
    for (double N : reg::default_up_N_grid()) {
      if (N >= fit->first) break;
      for (double g : reg::default_up_gamma_grid())
        CHECK_FALSE(reg::check_uniformly_perfect(mu, N, g).pass);
    }
    // lebesgue passes at the smallest grid N with gamma = 1
    auto lfit = reg::fit_uniform_perfectness(DyadicMeasure::uniform(10),
                                             reg::default_up_N_grid(),
                                             reg::default_up_gamma_grid());
    REQUIRE(lfit.has_value());
    CHECK(lfit->first == 3.0);
    CHECK(lfit->second == 1.0);
  }

  TEST_CASE("two far atoms admit no positive gamma") {
    auto mu = DyadicMeasure::from_atoms(10, {{0, 0.5}, {1024, 0.5}});
    auto fit = reg::fit_uniform_perfectness(mu, reg::default_up_N_grid(),
                                            reg::default_up_gamma_grid());
    CHECK_FALSE(fit.has_value());
  }

  TEST_CASE("discretization transfer: (N,gamma) to (2N+1,gamma)") {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> ratio(0.12, 0.42);
    int checked = 0;
    for (int rep = 0; rep < 50; ++rep) {
      auto fine = gen::generate(MeasureSpec{gen::central_cantor_spec(ratio(rng))}, 14);
      auto up = reg::fit_uniform_perfectness(fine, reg::default_up_N_grid(),
                                             reg::default_up_gamma_grid());
      REQUIRE(up.has_value());
      auto coarse = discretize(fine, 9);
      CHECK(reg::check_uniformly_perfect(coarse, 2 * up->first + 1, up->second).pass);
      ++checked;
    }
    CHECK(checked == 50);
  }

  TEST_CASE("support-to-everywhere transfer: (N,gamma) to (2N+1,gamma)") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ratio(0.15, 0.4);
    for (int rep = 0; rep < 10; ++rep) {
      auto mu = gen::generate(MeasureSpec{gen::central_cantor_spec(ratio(rng))}, 10);
      auto up = reg::fit_uniform_perfectness(mu, reg::default_up_N_grid(),
                                             reg::default_up_gamma_grid());
      REQUIRE(up.has_value());
      CHECK(reg::check_uniformly_perfect(mu, 2 * up->first + 1, up->second,
                                         reg::CenterMode::kAllCells)
                .pass);
    }
  }

  TEST_CASE("set uniform perfectness: annulus reading") {
    auto set = gen::generate_set(thirds(), 14);
    auto K = reg::fit_uniform_perfectness_set(set, std::vector<double>{2, 4, 8, 16});
    REQUIRE(K.has_value());
    CHECK(*K <= 8.0);
    auto sparse = DyadicSet::from_indices(10, {0, 1000});
    CHECK_FALSE(reg::check_uniformly_perfect_set(sparse, 4.0).pass);
  }

  TEST_CASE("ahlfors check: lebesgue passes with alpha 1 and small C") {
    CHECK(reg::check_ahlfors(DyadicMeasure::uniform(14), 2.1, 1.0));
    CHECK_FALSE(reg::check_ahlfors(DyadicMeasure::uniform(14), 1.05, 0.5));
    auto fit = reg::fit_ahlfors(DyadicMeasure::uniform(14));
    CHECK(fit.C <= 2.0);
    CHECK(fit.alpha > 0.85);
  }

  TEST_CASE("ahlfors fit: quarter cantor within 0.03 at level 22") {
    auto mu = gen::generate_ahlfors_example(0.5, 22);
    auto fit = reg::fit_ahlfors(mu);
    CHECK(std::abs(fit.alpha - 0.5) < 0.03);
    CHECK(reg::check_ahlfors(mu, gen::ahlfors_example_constant(0.5), 0.5));
    // the fitted envelope matches the exact triadic ball-mass oracle's order
    CHECK(fit.C >= 1.0);
  }

  TEST_CASE("ahlfors check fails across alphas for the sparse-digit measure") {
    // long forced-zero stalls make the ball-mass exponent oscillate, so no
    // single power law fits
    auto mu = gen::generate_digit_blocks(std::vector<long long>{2, 8}, 20);
    auto fit = reg::fit_ahlfors(mu);
    CHECK(fit.residual_log2 > 1.0);
    for (double alpha : {0.2, 0.4, 0.6, 0.8})
      CHECK_FALSE(reg::check_ahlfors(mu, 1.5, alpha));
  }

  TEST_CASE("lemma constants reproduce the reference values") {
    CHECK(reg::ahlfors_to_up_constants(1.0, 0.5, 1.0) == doctest::Approx(9.0));
    CHECK(reg::ahlfors_to_up_constants(1.0, 1.0 - 1e-12, 1.0) == doctest::Approx(5.0));
    CHECK(reg::ahlfors_porosity_k(1.0, 0.5) == 6);
    CHECK(reg::ahlfors_porosity_k(2.0, 0.5) == 10);
    CHECK_THROWS_AS(reg::ahlfors_to_up_constants(0.5, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(reg::ahlfors_porosity_k(1.0, 1.0), std::invalid_argument);
  }

  TEST_CASE("doubling-to-uniform-perfectness constants") {
    auto c = reg::doubling_up_constants(2.0, 2.0);
    CHECK(c.N == doctest::Approx(5.0));
    CHECK(c.M == 3);
    CHECK(c.gamma == doctest::Approx(std::log2(9.0 / 8.0)));
    CHECK(reg::doubling_up_constants(1.0, 3.0).gamma == doctest::Approx(1.0));
    CHECK_THROWS_AS(reg::doubling_up_constants(0.5, 2.0), std::invalid_argument);
  }

  TEST_CASE("doubling: lebesgue at C = 2, thirds at C = 4, clusters fail") {
    CHECK(reg::check_doubling(DyadicMeasure::uniform(10), 2.0).pass);
    auto mu3 = gen::generate(thirds(), 14);
    CHECK(reg::check_doubling(mu3, 4.0).pass);
    CHECK_FALSE(reg::check_doubling(two_cluster(100.0), 2.0).pass);
    // the doubling ratio against the exact triadic oracle at a few atoms
    BallMassIndex balls(mu3);
    for (std::size_t i = 0; i < mu3.size(); i += 97) {
      const double x = mu3.position(i);
      for (int e = 4; e <= 8; ++e) {
        const double r = std::ldexp(1.0, -e);
        const double lhs = oracles::cantor_ball_mass(x, 2.0 * r);
        const double rhs = oracles::cantor_ball_mass(x, r);
        if (rhs > 0.0) CHECK(lhs <= 4.0 * rhs * (1.0 + 1e-9));
      }
    }
  }

  TEST_CASE("doubling plus uniformly perfect support transfers end to end") {
    auto mu = gen::generate_ahlfors_example(0.5, 16);
    auto C = reg::fit_doubling(mu, std::vector<double>{2, 3, 4, 6, 8});
    REQUIRE(C.has_value());
    auto K = reg::fit_uniform_perfectness_set(support_set(mu),
                                              std::vector<double>{2, 4, 8, 16});
    REQUIRE(K.has_value());
    auto up = reg::doubling_up_constants(*C, *K);
    CHECK(reg::check_uniformly_perfect(mu, up.N, up.gamma).pass);
  }

  TEST_CASE("porosity: full set fails every k, singleton passes k = 1") {
    auto full = DyadicSet::full(8);
    for (int k = 1; k < 8; ++k) CHECK_FALSE(reg::check_dyadic_porosity(full, k).pass);
    CHECK(reg::check_dyadic_porosity(DyadicSet::singleton(8), 1).pass);
    CHECK_THROWS_AS(reg::check_dyadic_porosity(full, 8), std::invalid_argument);
    CHECK_THROWS_AS(reg::check_dyadic_porosity(full, 0), std::invalid_argument);
  }

  TEST_CASE("porosity of the middle-thirds set starts at k = 3") {
    // every quarter of [0,1) meets the set (1/3 lies in [1/4,1/2) and 2/3 in
    // [1/2,3/4)), so k = 2 fails at the root; an eighth fits inside the
    // central gap, so k = 3 passes
    auto set = gen::generate_set(thirds(), 18);
    auto k2 = reg::check_dyadic_porosity(set, 2);
    CHECK_FALSE(k2.pass);
    CHECK(k2.witness_level == 0);
    CHECK(reg::check_dyadic_porosity(set, 3).pass);
    CHECK(reg::fit_porosity_k(set, 17) == 3);
  }

  TEST_CASE("ahlfors examples pass the formula constants end to end") {
    for (double alpha : {0.4, 0.5}) {
      const double C = gen::ahlfors_example_constant(alpha);
      auto mu = gen::generate_ahlfors_example(alpha, 16);
      for (double gamma : {0.5, 1.0}) {
        const double N = reg::ahlfors_to_up_constants(C, alpha, gamma);
        CHECK(reg::check_uniformly_perfect(mu, N, gamma).pass);
      }
      const int k = reg::ahlfors_porosity_k(C, alpha);
      if (k < 16) CHECK(reg::check_dyadic_porosity(support_set(mu), k).pass);
    }
  }

  TEST_CASE("gap-chain bound holds for fitted uniformly perfect measures") {
    auto mu = gen::generate_ahlfors_example(0.5, 16);
    for (double N : {4.0, 8.0}) {
      auto fit = reg::fit_uniform_perfectness(mu, std::vector<double>{N},
                                              reg::default_up_gamma_grid());
      REQUIRE(fit.has_value());
      const int logN = static_cast<int>(std::log2(fit->first));
      CHECK(reg::check_gap_chain(mu, logN, fit->second, 8).pass);
    }
  }

  TEST_CASE("lower dimension: interval, cantor, degenerate cases") {
    CHECK(reg::estimate_lower_dimension(DyadicSet::full(12)).t ==
          doctest::Approx(1.0));
    CHECK(reg::estimate_lower_dimension(DyadicSet::singleton(12)).t == 0.0);
    auto iso = DyadicSet::from_indices(12, {0, 2000, 2001, 2002, 2003});
    CHECK(reg::estimate_lower_dimension(iso).t == 0.0);
    auto est = reg::estimate_lower_dimension(gen::generate_set(thirds(), 20));
    CHECK(std::abs(est.t - std::log(2.0) / std::log(3.0)) < 0.05);
    CHECK(est.c_t > 0.0);
  }

  TEST_CASE("regularity report on lebesgue") {
    auto report = reg::build_regularity_report(DyadicMeasure::uniform(12));
    REQUIRE(report.ahlfors.has_value());
    CHECK(report.ahlfors->alpha > 0.85);
    REQUIRE(report.uniform_perfect.has_value());
    CHECK(report.doubling_constant.has_value());
    CHECK_FALSE(report.porosity_k.has_value());
    CHECK(report.lower_dim.t == doctest::Approx(1.0));
    CHECK(report.diameter == doctest::Approx(1.0).epsilon(1e-3));
    nlohmann::json j;
    reg::to_json(j, report);
    CHECK(j.contains("uniform_perfect"));
    CHECK(j["porosity_k"].is_null());
  }
}
