#include <doctest.h>

#include <cmath>
#include <random>

#include "eqbk/envelope.hpp"
#include "eqbk/weight.hpp"

using namespace eqbk;

namespace {

GridFn sample_weight(const Weight& w, const VGrid& g) {
  return GridFn::sample(g, [&w](double v) { return w.potential(v); });
}

// Tangent-line oracle for the degree-2 weight with slope window [0,1]:
// the envelope follows the potential on v <= 0 and the unit-slope tangent
// through (0, 2 ln 2) beyond.
double ball_envelope_oracle(double v) {
  if (v <= 0.0) return 2.0 * log1pexp(v);
  return 2.0 * std::log(2.0) + v;
}

double mirror_envelope_oracle(double v) {
  if (v >= 0.0) return 2.0 * log1pexp(v);
  return 2.0 * std::log(2.0) + v;
}

// Random smooth obstacle with correct end slopes for the [0,1] window:
// degree-1 base plus a few mollifier bumps.
GridFn random_obstacle(std::mt19937& rng, const VGrid& g) {
  std::uniform_real_distribution<double> amp(-1.2, 1.2), cen(-3.0, 3.0), hw(0.6, 2.5);
  Bump b1{amp(rng), cen(rng), hw(rng)};
  Bump b2{amp(rng), cen(rng), hw(rng)};
  return GridFn::sample(g, [&](double v) {
    double c1, c2, d;
    double y1, y2;
    b1.eval(v, y1, c1, d);
    b2.eval(v, y2, c2, d);
    return log1pexp(v) + y1 + y2;
  });
}

}  // namespace

TEST_SUITE_BEGIN("envelope");

TEST_CASE("legendre transform of a quadratic is self-dual") {
  const VGrid g(-8.0, 8.0, 2001);
  const GridFn f = GridFn::sample(g, [](double v) { return 0.5 * v * v; });
  const VGrid sg(-8.0, 8.0, 801);
  const GridFn fs = legendre_transform(f, sg);
  const double h = g.step();
  for (int i = 0; i < sg.n_points(); ++i) {
    const double s = sg.node(i);
    CHECK(std::abs(fs.values[i] - 0.5 * s * s) <= 2.0 * h * std::max(std::abs(s), 1.0));
  }
}

TEST_CASE("legendre transform of an affine function") {
  const VGrid g(-5.0, 5.0, 501);
  const GridFn f = GridFn::sample(g, [](double v) { return v; });
  const VGrid sg(0.0, 2.0, 21);  // contains s = 1 exactly
  const GridFn fs = legendre_transform(f, sg);
  CHECK(fs.values[10] == doctest::Approx(0.0).epsilon(1e-14));
  for (int i = 0; i < sg.n_points(); ++i) {
    const double s = sg.node(i);
    const double expect = (s >= 1.0) ? (s - 1.0) * 5.0 : (1.0 - s) * 5.0;
    CHECK(fs.values[i] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("legendre transform of the base potential hits the entropy dual") {
  // stationary-point oracle: (ln(1+e^v))*(s) = s ln s + (1-s) ln(1-s)
  const VGrid g(-12.0, 12.0, 4096);
  const GridFn f = GridFn::sample(g, [](double v) { return log1pexp(v); });
  const VGrid sg(0.1, 0.9, 401);
  const GridFn fs = legendre_transform(f, sg);
  const int i3 = 100;  // s = 0.3
  REQUIRE(sg.node(i3) == doctest::Approx(0.3).epsilon(1e-14));
  const double oracle = 0.3 * std::log(0.3) + 0.7 * std::log(0.7);
  CHECK(std::abs(fs.values[i3] - oracle) < 1e-3);
}

TEST_CASE("convex obstacle with admissible slopes is its own envelope") {
  const VGrid g(-12.0, 12.0, 4096);
  const GridFn u = sample_weight(Weight(1), g);
  const EnvelopeResult res = constrained_envelope(u, {0.0, 1.0});
  for (int i = 0; i < g.n_points(); ++i) {
    CHECK(std::abs(res.u_e.values[i] - u.values[i]) < 1e-12);
    CHECK(res.contact[i] == 1);
  }
}

TEST_CASE("ball example matches the tangent-line oracle") {
  const VGrid g(-12.0, 12.0, 4096);
  const GridFn u = sample_weight(Weight(2), g);
  const EnvelopeResult res = constrained_envelope(u, {0.0, 1.0});
  const double h = g.step();
  for (int i = 0; i < g.n_points(); ++i) {
    // discrete tangency sits within one cell of v = 0, so allow O(h^2)
    CHECK(std::abs(res.u_e.values[i] - ball_envelope_oracle(g.node(i))) < h * h);
  }
  // with a node exactly at v = 0, the tangent value is reproduced exactly
  const VGrid g_odd(-12.0, 12.0, 4097);
  const GridFn u_odd = sample_weight(Weight(2), g_odd);
  const EnvelopeResult res_odd = constrained_envelope(u_odd, {0.0, 1.0});
  CHECK(std::abs(res_odd.u_e.values[2048] - 2.0 * std::log(2.0)) < 1e-13);

  // slope function lands in the window and is nondecreasing
  for (int i = 0; i < g.n_points(); ++i) {
    CHECK(res.slope.values[i] >= -1e-9);
    CHECK(res.slope.values[i] <= 1.0 + 1e-9);
    if (i > 0) CHECK(res.slope.values[i] >= res.slope.values[i - 1] - 1e-12);
  }
}

TEST_CASE("mirror example follows by reflection") {
  const VGrid g(-12.0, 12.0, 4096);
  const GridFn u = sample_weight(Weight(2), g);
  const EnvelopeResult res = constrained_envelope(u, {1.0, 2.0});
  const double h = g.step();
  for (int i = 0; i < g.n_points(); ++i)
    CHECK(std::abs(res.u_e.values[i] - mirror_envelope_oracle(g.node(i))) < h * h);
}

TEST_CASE("contact boundary localizes the unit radius") {
  const VGrid g(-12.0, 12.0, 4096);
  const GridFn u = sample_weight(Weight(2), g);
  const EnvelopeResult res = constrained_envelope(u, {0.0, 1.0});
  const double h = g.step();
  int last_contact = -1;
  for (int i = 0; i < g.n_points(); ++i)
    if (res.contact[i]) last_contact = i;
  REQUIRE(last_contact >= 0);
  // contact ends within one cell of v = 0, i.e. radius e^{v/2} = 1 +- h/2
  CHECK(std::abs(g.node(last_contact)) <= h);
  const double r = std::exp(0.5 * g.node(last_contact));
  CHECK(std::abs(r - 1.0) <= 0.6 * h);
  // mirror window: contact on the other side
  const EnvelopeResult mir = constrained_envelope(u, {1.0, 2.0});
  int first_contact = -1;
  for (int i = g.n_points() - 1; i >= 0; --i)
    if (mir.contact[i]) first_contact = i;
  CHECK(std::abs(g.node(first_contact)) <= h);
}

TEST_CASE("contact_set basics and errors") {
  const VGrid g(-2.0, 2.0, 101);
  const GridFn u = GridFn::sample(g, [](double v) { return v * v; });
  const Mask all = contact_set(u, u, 1e-12);
  for (auto m : all) CHECK(m == 1);
  CHECK_THROWS_AS(contact_set(u, GridFn::sample(VGrid(-2.0, 2.0, 100),
                                                [](double v) { return v * v; }),
                              1e-12),
                  GridMismatchError);
  CHECK_THROWS_AS(contact_set(u, u, 0.0), Error);
}

TEST_CASE("equilibrium measure of the plain degree-1 weight") {
  const VGrid g(-12.0, 12.0, 4096);
  const GridFn u = sample_weight(Weight(1), g);
  const EnvelopeResult res = constrained_envelope(u, {0.0, 1.0});
  const EquilibriumMeasure em = equilibrium_measure(res);
  const double h = g.step();
  double max_dev = 0.0;
  for (int i = 1; i + 1 < g.n_points(); ++i)
    max_dev = std::max(max_dev, std::abs(em.density.values[i] - fs_density(g.node(i))));
  CHECK(max_dev < 10.0 * h * h);  // O(h^2): envelope equals the obstacle
  CHECK(em.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("equilibrium measure of the ball example") {
  const VGrid g(-12.0, 12.0, 4096);
  const GridFn u = sample_weight(Weight(2), g);
  const EquilibriumMeasure em = equilibrium_measure(constrained_envelope(u, {0.0, 1.0}));
  const double h = g.step();
  for (int i = 1; i + 1 < g.n_points(); ++i) {
    const double v = g.node(i);
    if (std::abs(v) < 3 * h) continue;  // skip the kink cells
    const double target = v < 0 ? 2.0 * fs_density(v) : 0.0;
    CHECK(std::abs(em.density.values[i] - target) < 10.0 * h);
  }
  CHECK(em.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
  // slope is continuous at the free boundary, so no interior atom shows up
  // in the end atoms beyond the tiny tail defects
  CHECK(em.atom_left < 1e-4);
  CHECK(em.atom_right < 1e-4);
}

TEST_CASE("narrow slope window carries mass equal to its width") {
  const VGrid g(-12.0, 12.0, 4096);
  const GridFn u = sample_weight(Weight(1), g);
  const EquilibriumMeasure em = equilibrium_measure(constrained_envelope(u, {0.4, 0.6}));
  CHECK(em.total_mass() == doctest::Approx(0.2).epsilon(1e-9));
  // all mass is interior here: atoms vanish
  CHECK(em.atom_left == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(em.atom_right == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("equilibrium measure rejects non-convex input") {
  const VGrid g(-1.0, 1.0, 101);
  const GridFn u = GridFn::sample(g, [](double v) { return v; });
  EnvelopeResult res = constrained_envelope(u, {0.0, 2.0});
  res.u_e.values[50] += 1e-3;  // poke a concave dent into the envelope
  CHECK_THROWS_AS(equilibrium_measure(res), ConvexityViolationError);
}

TEST_CASE("envelope idempotence") {
  const VGrid g(-12.0, 12.0, 4096);
  for (const Weight& w : {Weight(2), Weight(1, Bump{-1.5, 0.0, 2.0})}) {
    const SlopeWindow win{0.0, 1.0};
    const EnvelopeResult first = constrained_envelope(sample_weight(w, g), win);
    const EnvelopeResult second = constrained_envelope(first.u_e, win);
    double dev = 0.0;
    for (int i = 0; i < g.n_points(); ++i)
      dev = std::max(dev, std::abs(second.u_e.values[i] - first.u_e.values[i]));
    CHECK(dev < 1e-12);
  }
}

TEST_CASE("monotonicity and window nesting on random obstacles") {
  std::mt19937 rng(7123);
  const VGrid g(-12.0, 12.0, 2048);
  std::uniform_real_distribution<double> lift(0.0, 0.8);
  for (int trial = 0; trial < 20; ++trial) {
    GridFn u1 = random_obstacle(rng, g);
    GridFn u2 = u1;
    // nodewise-larger obstacle: add a nonnegative mollifier
    Bump add{lift(rng), 0.5, 2.0};
    for (int i = 0; i < g.n_points(); ++i) {
      double c, d1, d2;
      add.eval(g.node(i), c, d1, d2);
      u2.values[i] += c;
    }
    const EnvelopeResult r1 = constrained_envelope(u1, {0.0, 1.0});
    const EnvelopeResult r2 = constrained_envelope(u2, {0.0, 1.0});
    for (int i = 0; i < g.n_points(); ++i)
      CHECK(r1.u_e.values[i] <= r2.u_e.values[i] + 1e-12);

    // shrinking the window never increases the envelope
    const EnvelopeResult narrow = constrained_envelope(u1, {0.2, 0.8});
    for (int i = 0; i < g.n_points(); ++i)
      CHECK(narrow.u_e.values[i] <= r1.u_e.values[i] + 1e-12);
  }
}

TEST_CASE("oracle agreement") {
  std::mt19937 rng(99);
  const VGrid g(-12.0, 12.0, 4096);
  const SlopeWindow win{0.0, 1.0};
  std::vector<GridFn> cases;
  cases.push_back(sample_weight(Weight(1), g));
  cases.push_back(sample_weight(Weight(2), g));
  cases.push_back(sample_weight(Weight(1, Bump{-1.5, 0.0, 2.0}), g));
  for (int t = 0; t < 20; ++t) cases.push_back(random_obstacle(rng, g));
  const double bound = 4.0 * g.step() * (win.hi - win.lo);
  for (const GridFn& u : cases) {
    const GridFn a = constrained_envelope(u, win).u_e;
    const GridFn b = envelope_oracle(u, win);
    double dev = 0.0;
    for (int i = 0; i < g.n_points(); ++i)
      dev = std::max(dev, std::abs(a.values[i] - b.values[i]));
    CHECK(dev <= bound);
    CHECK(dev <= 1e-9);  // both routes are exact for grid data
  }
  // degree-2 windows against the tangent oracles
  const GridFn u2 = sample_weight(Weight(2), g);
  const GridFn o52 = envelope_oracle(u2, {0.0, 1.0});
  for (int i = 0; i < g.n_points(); i += 37)
    CHECK(std::abs(o52.values[i] - ball_envelope_oracle(g.node(i))) < g.step() * g.step());
}

TEST_CASE("high-resolution cross-algorithm run") {
  const VGrid g(-12.0, 12.0, 16384);
  std::mt19937 rng(4242);
  const GridFn u = random_obstacle(rng, g);
  const GridFn a = constrained_envelope(u, {0.0, 1.0}).u_e;
  const GridFn b = envelope_oracle(u, {0.0, 1.0});
  double dev = 0.0;
  for (int i = 0; i < g.n_points(); ++i)
    dev = std::max(dev, std::abs(a.values[i] - b.values[i]));
  CHECK(dev <= 1e-6);
}

TEST_CASE("c11 probe rows stay bounded under refinement") {
  const Weight w(2);
  std::vector<VGrid> grids;
  for (int n : {4096, 8192, 16384}) grids.emplace_back(-12.0, 12.0, n);
  const auto rows = c11_probe([&w](double v) { return w.potential(v); }, {0.0, 1.0}, grids);
  REQUIRE(rows.size() == 3);
  // sup u'' = 1/2 on the contact side; the probe must stay near it
  for (const auto& r : rows) {
    CHECK(r.max_d2 <= 0.6 + 0.1);
    CHECK(r.max_d2 >= 0.3);
    CHECK(r.slope_jump <= 2.0 * r.h);
  }
  const double lo = std::min({rows[0].max_d2, rows[1].max_d2, rows[2].max_d2});
  const double hi = std::max({rows[0].max_d2, rows[1].max_d2, rows[2].max_d2});
  CHECK(hi <= 1.5 * lo);
}

TEST_CASE("invalid windows are rejected") {
  const VGrid g(-2.0, 2.0, 64);
  const GridFn u = GridFn::sample(g, [](double v) { return v * v; });
  CHECK_THROWS_AS(constrained_envelope(u, {1.0, 1.0}), InvalidWindowError);
  CHECK_THROWS_AS(constrained_envelope(u, {2.0, 1.0}), InvalidWindowError);
  CHECK_THROWS_AS(envelope_oracle(u, {0.5, 0.5}), InvalidWindowError);
}

TEST_SUITE_END();
