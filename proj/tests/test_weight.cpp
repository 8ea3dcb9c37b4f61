#include <doctest.h>

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "eqbk/weight.hpp"

using namespace eqbk;

TEST_SUITE_BEGIN("weight");

TEST_CASE("base potential closed values") {
  const Weight w1(1);
  CHECK(eval_potential(w1, 0.0, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(eval_potential(w1, 0.0, 1) == doctest::Approx(0.5).epsilon(1e-14));

  // direct evaluation oracle for the degree-2 value at v = 2
  const Weight w2(2);
  const double oracle = 2.0 * std::log(1.0 + std::exp(2.0));
  CHECK(eval_potential(w2, 2.0, 0) == doctest::Approx(oracle).epsilon(1e-14));

  CHECK_THROWS_AS(eval_potential(w1, 0.0, 3), Error);
}

TEST_CASE("derivatives match central finite differences") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> vs(-8.0, 8.0);
  const double step = 1e-5;
  const Weight weights[] = {Weight(1), Weight(2), Weight(1, Bump{-1.5, 0.0, 2.0}),
                            Weight(3, Bump{0.8, -1.0, 1.3})};
  for (const Weight& w : weights) {
    for (int trial = 0; trial < 100; ++trial) {
      const double v = vs(rng);
      const double fd1 =
          (eval_potential(w, v + step, 0) - eval_potential(w, v - step, 0)) / (2 * step);
      const double fd2 =
          (eval_potential(w, v + step, 1) - eval_potential(w, v - step, 1)) / (2 * step);
      CHECK(std::abs(fd1 - eval_potential(w, v, 1)) < 1e-7);
      CHECK(std::abs(fd2 - eval_potential(w, v, 2)) < 1e-7);
    }
  }
}

TEST_CASE("bump vanishes identically outside its support") {
  const Bump b{-1.5, 0.5, 2.0};
  for (double v : {0.5 - 2.0, 0.5 + 2.0, -4.0, 3.1, 8.0, -25.0}) {
    double chi, d1, d2;
    b.eval(v, chi, d1, d2);
    CHECK(chi == 0.0);
    CHECK(d1 == 0.0);
    CHECK(d2 == 0.0);
  }
  // interior is nonzero
  double chi, d1, d2;
  b.eval(0.5, chi, d1, d2);
  CHECK(chi == doctest::Approx(-1.5).epsilon(1e-14));
}

TEST_CASE("fs_density values and symmetry") {
  CHECK(fs_density(0.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(fs_density(20.0) == fs_density(-20.0));
  CHECK(fs_density(20.0) == doctest::Approx(2.061e-9).epsilon(1e-3));

  // quadrature oracle: total reference mass is one
  const VGrid g(-40.0, 40.0, 8193);
  const double mass = simpson(GridFn::sample(g, fs_density));
  CHECK(std::abs(mass - 1.0) < 1e-12);

  // identical to the order-2 evaluation of the plain degree-1 weight
  const Weight w1(1);
  for (double v : {-9.5, -3.0, 0.0, 0.7, 4.2, 11.0})
    CHECK(fs_density(v) == eval_potential(w1, v, 2));
}

TEST_CASE("positive_set thresholds") {
  const VGrid g(-12.0, 12.0, 512);
  const Weight base(1);
  const Mask all = positive_set(base, g, 1e-9);
  for (auto m : all) CHECK(m == 1);

  // a deep dent makes the curvature negative near its shoulders
  const Weight dented(1, Bump{-1.5, 0.0, 2.0});
  const Mask some = positive_set(dented, g, 1e-9);
  bool any_false = false;
  for (auto m : some) any_false = any_false || (m == 0);
  CHECK(any_false);

  // threshold above sup u'' = 1/4
  const Mask none = positive_set(base, g, 0.3);
  for (auto m : none) CHECK(m == 0);

  CHECK_THROWS_AS(positive_set(base, g, 0.0), Error);
}

TEST_CASE("curvature_mass equals the degree") {
  const VGrid g(-30.0, 30.0, 64);
  CHECK(curvature_mass(Weight(1), g) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(curvature_mass(Weight(2), g) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(curvature_mass(Weight(1, Bump{0.7, 1.0, 3.0}), g) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(curvature_mass(Weight(1), VGrid(-4.0, 4.0, 64)), GridTooNarrowError);
}

TEST_CASE("json round trip") {
  const Weight w(2, Bump{-1.5, 0.25, 2.0});
  const Weight back = Weight::from_json(w.to_json());
  CHECK(back.degree_m() == 2);
  REQUIRE(back.bump().has_value());
  CHECK(back.bump()->amplitude == -1.5);
  CHECK(back.bump()->center == 0.25);
  CHECK(back.bump()->halfwidth == 2.0);

  const Weight plain = Weight::from_json(nlohmann::json{{"degree_m", 1}, {"bump", nullptr}});
  CHECK(plain.degree_m() == 1);
  CHECK(!plain.bump().has_value());

  CHECK_THROWS_AS(Weight::from_json(nlohmann::json{{"bump", nullptr}}), Error);
  CHECK_THROWS_AS(Weight::from_json(nlohmann::json{{"degree_m", 0}}), Error);
}

TEST_SUITE_END();
