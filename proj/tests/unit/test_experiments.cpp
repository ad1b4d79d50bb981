#include <doctest.h>

#include <cmath>
#include <vector>

#include <thermo_billiards/errors.hpp>
#include <thermo_billiards/experiments.hpp>
#include <thermo_billiards/report.hpp>
#include <thermo_billiards/statistics.hpp>

#include "fixtures.hpp"

using namespace tb;

namespace {

TailConfig small_tails() {
  TailConfig c;
  c.n_collisions = 200000;
  c.n_flow = 50000;
  c.burn_in = 1000;
  c.n_quadrature = 20000;
  return c;
}

SubexpConfig small_subexp() {
  SubexpConfig c;
  c.n_particles = 5000;
  c.lambda_steps = 200000;
  c.control_steps = 200000;
  c.burn_in = 1000;
  return c;
}

void check_rescoring(const ExperimentReport &r) {
  CAPTURE(r.name);
  CHECK(score(r) == r.verdict);
  const ExperimentReport back = report_from_json(report_to_json(r));
  CHECK(back.metrics.size() == r.metrics.size());
  CHECK(score(back) == r.verdict);
  CHECK(back.verdict == r.verdict);
  CHECK(back.config_digest == r.config_digest);
}

}  // namespace

TEST_CASE("geometric grid") {
  const auto g = geometric_grid(2.0, 32.0, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 2.0);
  CHECK(g.back() == 32.0);
  CHECK(g[2] == doctest::Approx(8.0));
}

TEST_CASE("preflight rejects bad tables before simulating") {
  CHECK_NOTHROW(preflight(reference_table(), 2000, 1));
  CHECK_THROWS_AS(preflight(tb::test::single_disk(10.0), 2000, 1), NoCollisionWithinCap);
  BilliardTable bad;
  bad.disks = {{{0.5, 0.5}, 0.6, 1.0}};
  CHECK_THROWS_AS(preflight(bad, 2000, 1), InvalidState);
  CHECK_THROWS_AS(run_drift_check(tb::test::single_disk(10.0), DriftConfig{}, 1), NoCollisionWithinCap);
}

TEST_CASE("validate experiment") {
  ValidateConfig c;
  c.n_rays = 20000;
  const ExperimentReport r = run_validate(reference_table(), c, 1);
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.value("geometry_violations") == 0.0);
  CHECK(r.value("horizon_violations") == 0.0);
  check_rescoring(r);
}

TEST_CASE("equilibration from equilibrium starts below threshold") {
  EquilibrationConfig c;
  c.beta0 = 1.0;
  c.n_particles = 100000;
  c.checkpoints = {0, 2};
  c.bins = 50;
  const ExperimentReport r = run_equilibration(reference_table(), c, 3);
  CHECK(r.value("tv_step_0") < 0.02);
  check_rescoring(r);

  BilliardTable mixed = reference_table();
  mixed.disks[0].beta = 2.0;
  CHECK_THROWS_AS(run_equilibration(mixed, c, 3), UnsupportedRegime);
}

TEST_CASE("tail experiment is reproducible and self-consistent") {
  const ExperimentReport a = run_tail_scaling(reference_table(), small_tails(), 5);
  const ExperimentReport b = run_tail_scaling(reference_table(), small_tails(), 5);
  REQUIRE(a.metrics.size() == b.metrics.size());
  for (std::size_t i = 0; i < a.metrics.size(); ++i) {
    CHECK(a.metrics[i].key == b.metrics[i].key);
    CHECK(a.metrics[i].value == b.metrics[i].value);
  }
  CHECK(report_to_json(a) == report_to_json(b));
  CHECK(a.config_digest != run_tail_scaling(reference_table(), small_tails(), 6).config_digest);
  check_rescoring(a);
}

TEST_CASE("tail pipeline recovers an exact inverse-square tail") {
  // Residual times with P(R > tau) = tau^-2 for tau >= 1.
  RngStream rng(12, 0);
  std::vector<double> residuals(2000000);
  for (double &r : residuals) r = 1.0 / std::sqrt(rng.uniform());
  const auto taus = geometric_grid(2.0, 20.0, 9);
  const TailCurve c = tail_curve_from_residuals(residuals, taus);
  const LinearFit fit = loglog_fit(taus, c.fractions);
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(0.025));
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double exact = 1.0 / (taus[i] * taus[i]);
    CHECK(c.ci_low[i] <= exact * 1.01);
    CHECK(c.ci_high[i] >= exact * 0.99);
  }
}

TEST_CASE("subexp experiment") {
  SubexpConfig shared = small_subexp();
  shared.control_stream = shared.lambda_stream;
  CHECK_THROWS_AS(run_subexp_lowerbound(reference_table(), shared, 1), InvalidState);

  const ExperimentReport r = run_subexp_lowerbound(reference_table(), small_subexp(), 1);
  check_rescoring(r);
  // Shortly after the start most of lambda is still in its first long flight.
  CHECK(r.value("tv_lower_bound_0") > 0.3);
}

TEST_CASE("drift experiment") {
  DriftConfig c;
  c.v_grid = {0.01, 4.0};
  c.n = 100000;
  PotentialParams p = PotentialParams::defaults_for(reference_table());
  p.epsilon = 0.3;
  c.params = p;
  const ExperimentReport r = run_drift_check(reference_table(), c, 2);
  CHECK(r.value("ratio_0") < 1.0);
  CHECK(r.value("ratio_1") < 1.0);
  CHECK(r.verdict == Verdict::Pass);
  check_rescoring(r);

  c.params->epsilon = 1.5;
  CHECK_THROWS_AS(run_drift_check(reference_table(), c, 2), DomainError);
}

TEST_CASE("drift scoring skips flat points") {
  ExperimentReport r;
  r.name = "drift";
  r.add("v_perp_0", 1.0);
  r.add("ratio_0", 1.0, 1.0, 1.0, 10);
  r.add("v_perp_1", 4.0);
  r.add("ratio_1", 0.5, 0.4, 0.6, 10);
  r.add("n_v", 2.0);
  CHECK(score(r) == Verdict::Pass);
  r.metrics[3].ci_high = 1.01;
  CHECK(score(r) == Verdict::Fail);
}

TEST_CASE("grazing experiment") {
  GrazingConfig c;
  c.n = 200000;
  c.v_bars = geometric_grid(0.002, 0.008, 3);
  const ExperimentReport r = run_grazing_scaling(reference_table(), c, 4);
  check_rescoring(r);
  for (std::size_t k = 1; k < 3; ++k)
    CHECK(r.value("fraction_" + std::to_string(k)) >= r.value("fraction_" + std::to_string(k - 1)));
  c.v_bars = {0.001, 0.002, 0.02};
  CHECK_THROWS_AS(run_grazing_scaling(reference_table(), c, 4), DomainError);
}

TEST_CASE("score is driven by metrics only") {
  ExperimentReport r;
  r.name = "grazing";
  r.add("count_0", 0.0);
  r.add("count_1", 5.0);
  r.add("count_2", 9.0);
  r.add("n_v_bar", 3.0);
  CHECK(score(r) == Verdict::Inconclusive);
  r.metrics[0].value = 1.0;
  r.add("slope", 3.0);
  CHECK(score(r) == Verdict::Pass);
  r.metrics.back().value = 2.0;
  CHECK(score(r) == Verdict::Fail);

  ExperimentReport unknown;
  unknown.name = "other";
  CHECK_THROWS_AS(score(unknown), InvalidState);
}
