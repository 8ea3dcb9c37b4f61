#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "eqbk/verify.hpp"

using namespace eqbk;

TEST_SUITE_BEGIN("verify");

TEST_CASE("plain-weight anchors have closed forms") {
  // full-pipeline regression anchor: B_k = k+1 makes every row explicit
  VerifyContext ctx = VerifyContext::make(Weight(1), {0.0, 1.0});

  const GridFn ref = GridFn::sample(ctx.grid, fs_density);
  const double ref_mass = trapezoid(ref);

  const ConvergenceReport l1 = l1_report(ctx, {25, 50, 100, 200});
  REQUIRE(l1.rows.size() == 4);
  for (const auto& row : l1.rows) {
    // oracle: |(k+1)/k - 1| g'' integrates to (grid reference mass)/k
    const double oracle = ref_mass / row.k;
    CHECK(std::abs(row.error - oracle) < 1e-8 * oracle);
  }
  CHECK(l1.rows[1].error / l1.rows[3].error == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(l1.pass);

  const ConvergenceReport morse = morse_report(ctx, {25, 50, 100});
  for (const auto& row : morse.rows) {
    const double ck = row.aux[0];
    CHECK(std::abs(ck - (row.k + 1.0) / row.k) < 1e-9);
  }
  CHECK(morse.pass);

  const ConvergenceReport exp_rep = expansion_probe(ctx, 0.0, {25, 50, 100});
  for (const auto& row : exp_rep.rows) {
    // a_k - u'' = u''/k exactly, so the k-scaled residual is u''(0) = 1/4
    CHECK(std::abs(row.aux[0] - 0.25) < 1e-8);
    CHECK(std::abs(row.error - 0.25 / row.k) < 1e-8 / row.k);
  }
  CHECK(exp_rep.pass);
}

TEST_CASE("uniform error at k = 2 hits the two-term closed form") {
  // ln K_2(0) = ln(3 + 6 + 3) = ln 12 and u_e(0) = ln 2, so the sup error is
  // |(1/2) ln 12 - ln 2| = (1/2) ln 3; B_2 = 3 makes it constant in v.
  VerifyContext ctx = VerifyContext::make(Weight(1), {0.0, 1.0});
  const ConvergenceReport rep = uniform_report(ctx, {2});
  REQUIRE(rep.rows.size() == 1);
  CHECK(std::abs(rep.rows[0].error - 0.5 * std::log(3.0)) < 1e-9);
}

TEST_CASE("uniform rate band on the plain weight") {
  VerifyContext ctx = VerifyContext::make(Weight(1), {0.0, 1.0});
  const ConvergenceReport rep = uniform_report(ctx, {50, 100, 200});
  for (const auto& row : rep.rows) {
    const double oracle = std::log(row.k + 1.0) / row.k;  // (1/k) ln(k+1)
    CHECK(std::abs(row.error - oracle) < 1e-9);
  }
  CHECK(rep.pass);
}

TEST_CASE("decay report on the ball example") {
  VerifyContext ctx = VerifyContext::make(Weight(2), {0.0, 1.0});
  const ConvergenceReport rep = decay_report(ctx, {2.0}, {50, 100, 200});
  CHECK(rep.pass);
  for (size_t i = 1; i < rep.rows.size(); ++i)
    CHECK(rep.rows[i].error < rep.rows[i - 1].error);
  // probes inside the contact set are rejected
  CHECK_THROWS_AS(decay_report(ctx, {-3.0}, {50}), ProbeError);
  // the plain weight has no admissible probes at all
  VerifyContext flat = VerifyContext::make(Weight(1), {0.0, 1.0});
  CHECK_THROWS_AS(decay_report(flat, {0.0}, {50}), ProbeError);
}

TEST_CASE("morse constant decreases on the dented weight") {
  VerifyContext ctx = VerifyContext::make(Weight(1, Bump{-1.5, 0.0, 2.0}), {0.0, 1.0});
  const ConvergenceReport rep = morse_report(ctx, {25, 50, 100});
  CHECK(rep.pass);
  CHECK(rep.rows.back().aux[0] < rep.rows.front().aux[0]);
}

TEST_CASE("offdiag pairing against constant test functions") {
  VerifyContext ctx = VerifyContext::make(Weight(1), {0.0, 1.0});
  const int k = 50;
  const GridFn one(ctx.grid, std::vector<double>(ctx.grid.n_points(), 1.0));
  const ConvergenceReport rep = offdiag_report(ctx, k, one, one);
  // reproducing property plus the dimension identity: S_k ~ (k+1)/k up to
  // reference-mass tails
  CHECK(std::abs(rep.rows[0].aux[0] - (k + 1.0) / k) < 1e-3);
}

TEST_CASE("offdiag pairing with smooth profiles") {
  VerifyContext ctx = VerifyContext::make(Weight(1), {0.0, 1.0});
  const GridFn f = test_profile(ctx.grid, 0.0, 3.0);
  const ConvergenceReport rep = offdiag_report(ctx, 300, f, f);
  CHECK(rep.pass);
  CHECK(rep.rows[0].error <= 0.05);
}

TEST_CASE("offdiag pairing vanishes off the contact set") {
  VerifyContext ctx = VerifyContext::make(Weight(2), {0.0, 1.0});
  const GridFn f = test_profile(ctx.grid, 4.0, 1.5);
  const ConvergenceReport rep = offdiag_report(ctx, 300, f, f);
  CHECK(rep.pass);
  CHECK(rep.rows[0].aux[0] <= 0.02);  // S_k itself
}

TEST_CASE("expansion probe rejects bad points") {
  VerifyContext ctx = VerifyContext::make(Weight(2), {0.0, 1.0});
  CHECK_THROWS_AS(expansion_probe(ctx, 3.0, {25, 50}), ProbeError);  // off contact
}

TEST_CASE("equilibrium measure report on all presets") {
  {
    VerifyContext ctx = VerifyContext::make(Weight(1), {0.0, 1.0});
    const ConvergenceReport rep = eqmeasure_report(ctx);
    CHECK(rep.pass);
    // envelope equals the obstacle: deviation is O(h^2), far below 10h
    CHECK(rep.rows[0].error < rep.rows[0].aux[0]);
  }
  {
    VerifyContext a = VerifyContext::make(Weight(2), {0.0, 1.0});
    VerifyContext b = VerifyContext::make(Weight(2), {1.0, 2.0});
    const ConvergenceReport ra = eqmeasure_report(a);
    const ConvergenceReport rb = eqmeasure_report(b);
    CHECK(ra.pass);
    CHECK(rb.pass);
    // mirror windows give identical deviations by reflection symmetry
    CHECK(std::abs(ra.rows[0].error - rb.rows[0].error) < 1e-9);
  }
}

TEST_CASE("divisor example reports") {
  const ConvergenceReport ball = divisor_example_report(DivisorExample::BallAtOrigin);
  CHECK(ball.pass);
  CHECK(std::abs(ball.rows[0].aux[0] - 1.0) <= 1e-3);   // r
  CHECK(std::abs(ball.rows[0].aux[1] - 1.0) <= 1e-4);   // contact-side mass
  CHECK(std::abs(ball.rows[0].aux[2] - 1.0) <= 1e-4);   // volume integral
  CHECK(ball.rows[0].aux[3] > -1e-3);                   // boundary at v ~ 0+

  const ConvergenceReport comp = divisor_example_report(DivisorExample::ComplementOfBall);
  CHECK(comp.pass);
  CHECK(std::abs(comp.rows[0].aux[0] - 1.0) <= 1e-3);
  CHECK(std::abs(comp.rows[0].aux[1] - 1.0) <= 1e-4);
  CHECK(std::abs(comp.rows[0].aux[2] - 1.0) <= 1e-4);
  // the two examples mirror each other across v = 0
  CHECK(std::abs(ball.rows[0].aux[3] + comp.rows[0].aux[3]) < 1e-12);
}

TEST_CASE("lelong report slopes and restricted convergence") {
  const ConvergenceReport rep = lelong_report({25, 50, 100});
  CHECK(rep.pass);
  for (const auto& row : rep.rows) CHECK(std::abs(row.aux[0] - 1.0) <= 1e-6);
}

TEST_CASE("regularity report across refinements") {
  const ConvergenceReport rep = regularity_report(Weight(2), {0.0, 1.0},
                                                  {4096, 8192, 16384});
  CHECK(rep.pass);
  for (const auto& row : rep.rows) {
    CHECK(row.error <= 0.6);            // ~ sup u'' = 1/2
    CHECK(row.aux[1] <= 2.0 * row.aux[0]);  // slope jump <= 2h
  }
}

TEST_CASE("reports are deterministic") {
  VerifyContext a = VerifyContext::make(Weight(1, Bump{-1.5, 0.0, 2.0}), {0.0, 1.0});
  VerifyContext b = VerifyContext::make(Weight(1, Bump{-1.5, 0.0, 2.0}), {0.0, 1.0});
  const std::string csv_a = l1_report(a, {25, 50}).csv();
  const std::string csv_b = l1_report(b, {25, 50}).csv();
  CHECK(csv_a == csv_b);
  CHECK(uniform_report(a, {50, 100}).csv() == uniform_report(b, {50, 100}).csv());
}

TEST_CASE("report json carries the versioned schema") {
  VerifyContext ctx = VerifyContext::make(Weight(1), {0.0, 1.0});
  const nlohmann::json j = morse_report(ctx, {25, 50}).to_json();
  CHECK(j["schema"] == 1);
  CHECK(j["theorem_id"] == "MORSE");
  CHECK(j["verdict"] == "pass");
  CHECK(j["rows"].size() == 2);
  CHECK(j["rows"][0]["k"] == 25);
  CHECK(j["rows"][0]["aux"].contains("C_k"));
  CHECK(j.contains("criterion"));
}

TEST_CASE("report errors are nonnegative and finite") {
  VerifyContext ctx = VerifyContext::make(Weight(1, Bump{-1.5, 0.0, 2.0}), {0.0, 1.0});
  std::vector<ConvergenceReport> reps;
  reps.push_back(l1_report(ctx, {25, 50}));
  reps.push_back(uniform_report(ctx, {50, 100}));
  reps.push_back(morse_report(ctx, {25, 50}));
  reps.push_back(eqmeasure_report(ctx));
  for (const auto& rep : reps) {
    for (const auto& row : rep.rows) {
      CHECK(row.error >= 0.0);
      CHECK(std::isfinite(row.error));
    }
  }
}

TEST_SUITE_END();
