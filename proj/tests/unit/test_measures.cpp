#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <thermo_billiards/dynamics.hpp>
#include <thermo_billiards/errors.hpp>
#include <thermo_billiards/measures.hpp>

using namespace tb;

namespace {

template <class F>
double integrate(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-13);
}

template <class F>
double integrate_half_line(F f) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate(f, 0.0, std::numeric_limits<double>::infinity());
}

const double kGrid[] = {0.1, 1.0, 10.0};

}  // namespace

TEST_CASE("angle density") {
  CHECK(angle_density(0.0, 1.0, 1.0) == doctest::Approx(0.56419).epsilon(1e-5));
  CHECK(angle_density(0.3, 1.0, 1.0) == doctest::Approx(angle_density(-0.3, 1.0, 1.0)));
  CHECK_THROWS_AS(angle_density(kHalfPi, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(angle_density(-2.0, 1.0, 1.0), DomainError);

  for (double v : kGrid)
    for (double beta : kGrid) {
      auto rho = [&](double phi) { return angle_density(phi, v, beta); };
      CAPTURE(v);
      CAPTURE(beta);
      CHECK(std::abs(integrate(rho, -kHalfPi, kHalfPi) - 1.0) < 1e-6);
      CHECK(angle_cdf(0.4, v, beta) == doctest::Approx(integrate(rho, -kHalfPi, 0.4)).epsilon(1e-8));
    }
}

TEST_CASE("angle density concentrates for fast particles") {
  const double delta = 0.1;
  double previous = 1.0;
  for (double v : {1.0, 3.0, 10.0, 30.0, 100.0}) {
    auto rho = [&](double phi) { return angle_density(phi, v, 1.0); };
    const double outside = 2.0 * integrate(rho, delta, kHalfPi);
    CHECK(outside < previous);
    previous = outside;
  }
  CHECK(previous < 1e-6);
}

TEST_CASE("angle sampler goodness of fit") {
  // Equiprobable bins from the inverse of the closed-form CDF; chi-squared with 99 dof.
  const std::size_t bins = 100;
  const std::size_t n = 1000000;
  const boost::math::chi_squared chi2(static_cast<double>(bins - 1));
  std::uint64_t stream = 0;
  for (double v : kGrid)
    for (double beta : kGrid) {
      std::vector<double> edges(bins + 1);
      edges.front() = -kHalfPi;
      edges.back() = kHalfPi;
      for (std::size_t k = 1; k < bins; ++k)
        edges[k] = std::atan(boost::math::erf_inv(2.0 * k / bins - 1.0) / (std::sqrt(beta) * v));
      std::vector<double> counts(bins, 0.0);
      RngStream rng(2024, stream++);
      for (std::size_t i = 0; i < n; ++i) {
        const double phi = sample_outgoing_angle(v, beta, rng);
        const auto it = std::upper_bound(edges.begin() + 1, edges.end() - 1, phi);
        counts[static_cast<std::size_t>(it - edges.begin()) - 1] += 1.0;
      }
      const double expected = static_cast<double>(n) / bins;
      double stat = 0.0;
      for (double c : counts) stat += (c - expected) * (c - expected) / expected;
      CAPTURE(v);
      CAPTURE(beta);
      CHECK(boost::math::cdf(boost::math::complement(chi2, stat)) > 0.01);
    }
}

TEST_CASE("potential V") {
  PotentialParams p;
  p.epsilon = 0.5;
  p.gamma = 1.0;
  p.v_min = 0.1;
  p.v_max = 2.0;
  p.A = 10.0;
  CHECK(potential_V(0.05, p) == doctest::Approx(20.0));
  CHECK(potential_V(3.0, p) == doctest::Approx(90.017).epsilon(1e-5));
  CHECK(potential_V(1.05, p) == 10.0);
  CHECK_THROWS_AS(potential_V(0.0, p), DomainError);

  double last = std::numeric_limits<double>::infinity();
  for (double v = 0.001; v <= p.v_min; v += 0.001) {
    CHECK(potential_V(v, p) <= last);
    last = potential_V(v, p);
  }
  // The exponential branch starts below A, so monotonicity holds only past v_max.
  last = 0.0;
  for (double v = p.v_max + 1e-9; v < 8.0; v += 0.01) {
    CHECK(potential_V(v, p) >= last);
    last = potential_V(v, p);
  }

  const PotentialParams d = PotentialParams::defaults_for(reference_table());
  CHECK(d.epsilon == doctest::Approx(0.5));
  CHECK(d.gamma == 1.0);
  CHECK(d.v_min == 0.1);
  CHECK(d.v_max == 2.0);
  PotentialParams bad = d;
  bad.epsilon = 1.0;
  CHECK_THROWS_AS(bad.validate_for(reference_table()), DomainError);
  bad = d;
  bad.gamma = 2.5;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("equilibrium laws") {
  for (double beta : {0.5, 1.0, 3.0}) {
    CAPTURE(beta);
    auto fc = [&](double v) { return equilibrium_collision_density(v, beta); };
    auto fs = [&](double s) { return equilibrium_speed_density(s, beta); };
    CHECK(integrate_half_line(fc) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(integrate_half_line(fs) == doctest::Approx(1.0).epsilon(1e-9));
    const double mean = integrate_half_line([&](double s) { return s * fs(s); });
    CHECK(mean == doctest::Approx(std::sqrt(kPi / (4.0 * beta))).epsilon(1e-9));
    CHECK(equilibrium_collision_cdf(0.7, beta) == doctest::Approx(integrate(fc, 0.0, 0.7)).epsilon(1e-12));
    CHECK(equilibrium_speed_cdf(1.3, beta) == doctest::Approx(integrate(fs, 0.0, 1.3)).epsilon(1e-12));
    for (double x : {0.01, 0.5, 1.0, 2.5}) {
      CHECK(fc(x) == fs(x));
      CHECK(fc(x) >= 0.0);
      // E = s^2/2: f_E(E) = f_s(sqrt(2E)) / sqrt(2E).
      const double s = std::sqrt(2.0 * x);
      CHECK(equilibrium_energy_density(x, beta) == doctest::Approx(fs(s) / s).epsilon(1e-12));
    }
  }
  CHECK(equilibrium_collision_density(1e-12, 1.0) < 1e-11);
}

TEST_CASE("tail prediction for a constant flight length") {
  const double sigma0 = 0.7;
  const double boundary = 2.0;
  const double beta = 1.3;

  // Normalization of c s^2 exp(-beta s^2) cos(phi) over (r, phi, s) and the
  // flight time sigma0/s, computed by quadrature.
  const double z = boundary * 2.0 * sigma0 * integrate_half_line([&](double s) { return s * std::exp(-beta * s * s); });
  const double c = 1.0 / z;
  const double expected = c * sigma0 * sigma0 * sigma0 / 6.0 * boundary * 2.0;

  RngStream rng(3, 0);
  const TailPrediction k =
      tail_prediction_from([&](double, double) { return sigma0; }, boundary, beta, 1000, rng);
  CHECK(k.coefficient == doctest::Approx(expected).epsilon(1e-12));
  CHECK(k.coefficient_se == doctest::Approx(0.0));

  // Doubling flight lengths: the cubic moment grows by 8, the normalization halves.
  RngStream rng2(3, 0);
  const TailPrediction k2 =
      tail_prediction_from([&](double, double) { return 2.0 * sigma0; }, boundary, beta, 1000, rng2);
  CHECK(k2.mean_sigma3 == doctest::Approx(8.0 * k.mean_sigma3).epsilon(1e-12));
  CHECK(k2.coefficient == doctest::Approx(4.0 * k.coefficient).epsilon(1e-12));

  // Exact tail by quadrature over the speed: nu(B_tau) = int (sigma0/s - tau)_+ s^2 e^{-beta s^2} / int sigma0 s e^{-beta s^2}.
  for (double tau : {0.3, 1.0, 5.0, 40.0}) {
    const double s_max = sigma0 / tau;
    const double num = integrate([&](double s) { return (sigma0 / s - tau) * s * s * std::exp(-beta * s * s); }, 0.0, s_max);
    const double den = sigma0 * integrate_half_line([&](double s) { return s * std::exp(-beta * s * s); });
    CHECK(equilibrium_tail_exact_constant_sigma(sigma0, beta, tau) == doctest::Approx(num / den).epsilon(1e-9));
  }
  const double tau = 200.0;
  CHECK(tau * tau * equilibrium_tail_exact_constant_sigma(sigma0, beta, tau) ==
        doctest::Approx(k.coefficient).epsilon(1e-4));
}

TEST_CASE("tail prediction on tables") {
  RngStream rng(1, 0);
  const TailPrediction k = tail_prediction(reference_table(), 1.0, 200000, rng);
  CHECK(k.coefficient > 0.0);
  CHECK(k.coefficient_se < 0.01 * k.coefficient);
  CHECK(k.tau_validity > 0.0);

  BilliardTable mixed = reference_table();
  mixed.disks[1].beta = 2.0;
  CHECK_THROWS_AS(tail_prediction(mixed, 1.0, 100, rng), UnsupportedRegime);
}
