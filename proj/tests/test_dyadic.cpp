#include <doctest.h>

#include <cmath>

#include "lqdim/lqdim.hpp"
#include "oracles.hpp"

using namespace lqdim;

TEST_SUITE("dyadic") {
  TEST_CASE("construction sorts, merges and renormalizes") {
    auto mu = DyadicMeasure::from_atoms(4, {{3, 0.25}, {1, 0.5}, {3, 0.25}, {0, 1.0}});
    CHECK(mu.size() == 3);
    CHECK(mu.indices()[0] == 0);
    CHECK(mu.indices()[1] == 1);
    CHECK(mu.indices()[2] == 3);
    CHECK(mu.masses()[0] == doctest::Approx(0.5));
    CHECK(mu.masses()[2] == doctest::Approx(0.25));
    CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    mu.validate();
  }

  TEST_CASE("construction rejects bad input") {
    CHECK_THROWS_AS(DyadicMeasure::from_atoms(4, {}), std::invalid_argument);
    CHECK_THROWS_AS(DyadicMeasure::from_atoms(4, {{0, -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(DyadicMeasure::from_atoms(-1, {{0, 1.0}}), std::invalid_argument);
  }

  TEST_CASE("discretize: Dirac stays Dirac") {
    auto mu = DyadicMeasure::dirac(20);
    auto coarse = discretize(mu, 5);
    CHECK(coarse.level() == 5);
    CHECK(coarse.size() == 1);
    CHECK(coarse.indices()[0] == 0);
    CHECK(coarse.masses()[0] == 1.0);
  }

  TEST_CASE("discretize: uniform collapses by symmetry") {
    auto mu = DyadicMeasure::uniform(10);
    auto coarse = discretize(mu, 5);
    CHECK(coarse.size() == 32);
    for (double w : coarse.masses()) CHECK(w == doctest::Approx(1.0 / 32).epsilon(1e-12));
  }

  TEST_CASE("discretize: middle-thirds masses match the triadic oracle") {
    auto fine = gen::generate(gen::MeasureSpec{gen::middle_thirds_spec()}, 20);
    auto coarse = discretize(fine, 10);
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      const double lo = grid_position(coarse.indices()[i], 10);
      const double expected = oracles::cantor_measure_interval(lo, lo + std::ldexp(1.0, -10));
      CHECK(coarse.masses()[i] == doctest::Approx(expected).epsilon(1e-9));
    }
  }

  TEST_CASE("discretize errors") {
    auto mu = DyadicMeasure::uniform(6);
    CHECK_THROWS_AS(discretize(mu, -1), std::invalid_argument);
    CHECK_THROWS_AS(discretize(mu, 7), std::invalid_argument);
  }

  TEST_CASE("discretize is a projection") {
    oracles::Fuzzer fuzz(11);
    for (int rep = 0; rep < 50; ++rep) {
      auto mu = fuzz.measure(12, 200);
      auto once = discretize(mu, 4);
      auto twice = discretize(discretize(mu, 8), 4);
      REQUIRE(once.size() == twice.size());
      for (std::size_t i = 0; i < once.size(); ++i) {
        CHECK(once.indices()[i] == twice.indices()[i]);
        CHECK(once.masses()[i] == doctest::Approx(twice.masses()[i]).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("discretize handles negative indices with floor semantics") {
    auto mu = DyadicMeasure::from_atoms(4, {{-3, 0.5}, {2, 0.5}});
    auto coarse = discretize(mu, 2);
    CHECK(coarse.indices()[0] == -1);  // -3/4 lands in [-1/4,0) at level 2
    CHECK(coarse.indices()[1] == 0);
  }

  TEST_CASE("set coarsen and support") {
    auto a = DyadicSet::from_indices(6, {0, 1, 2, 3, 63});
    auto c = coarsen(a, 3);
    CHECK(c.size() == 2);
    CHECK(c.indices()[0] == 0);
    CHECK(c.indices()[1] == 7);
    auto mu = uniform_on(a);
    CHECK(support_set(mu).size() == a.size());
  }

  TEST_CASE("measure JSON round trip") {
    auto mu = DyadicMeasure::from_atoms(8, {{5, 0.25}, {7, 0.75}});
    nlohmann::json j;
    to_json(j, mu);
    CHECK(j["level"] == 8);
    DyadicMeasure back;
    from_json(j, back);
    CHECK(back.level() == 8);
    REQUIRE(back.size() == 2);
    CHECK(back.indices()[0] == 5);
    CHECK(back.masses()[1] == doctest::Approx(0.75));
  }
}
