#include "thermo_billiards/measures.hpp"

#include <algorithm>
#include <cmath>

#include "thermo_billiards/errors.hpp"

namespace tb {

PotentialParams PotentialParams::defaults_for(const BilliardTable &table) {
  PotentialParams p;
  p.gamma = 1.0;
  p.epsilon = 0.5 * table.beta_min();
  p.v_min = 0.1;
  p.v_max = 2.0;
  p.A = std::max(std::exp(p.epsilon * p.v_max * p.v_max), std::pow(p.v_min, -p.gamma));
  return p;
}

void PotentialParams::validate() const {
  if (!(epsilon > 0.0)) throw DomainError("potential: epsilon must be > 0");
  if (!(gamma > 0.0 && gamma < 2.0)) throw DomainError("potential: gamma must lie in (0,2)");
  if (!(v_min > 0.0)) throw DomainError("potential: v_min must be > 0");
  if (!(v_max > v_min)) throw DomainError("potential: v_max must exceed v_min");
  if (!(A > 0.0)) throw DomainError("potential: A must be > 0");
}

void PotentialParams::validate_for(const BilliardTable &table) const {
  validate();
  if (!(epsilon < table.beta_min())) throw DomainError("potential: epsilon must be < beta_min");
}

double angle_density(double phi, double v_perp, double beta) {
  if (!(std::abs(phi) < kHalfPi)) throw DomainError("angle_density: |phi| must be < pi/2");
  if (!(v_perp > 0.0) || !(beta > 0.0)) throw DomainError("angle_density: v_perp and beta must be > 0");
  const double c = std::cos(phi);
  const double w = std::tan(phi);
  return std::sqrt(beta / kPi) * v_perp / (c * c) * std::exp(-beta * v_perp * v_perp * w * w);
}

double angle_cdf(double phi, double v_perp, double beta) {
  if (phi <= -kHalfPi) return 0.0;
  if (phi >= kHalfPi) return 1.0;
  return 0.5 * std::erfc(-std::sqrt(beta) * v_perp * std::tan(phi));
}

double potential_V(double v_perp, const PotentialParams &params) {
  if (!(v_perp > 0.0)) throw DomainError("potential_V: v_perp must be > 0");
  if (v_perp > params.v_max) return std::exp(params.epsilon * v_perp * v_perp);
  if (v_perp < params.v_min) return std::pow(v_perp, -params.gamma);
  return params.A;
}

double equilibrium_collision_density(double v_perp, double beta) {
  if (!(beta > 0.0)) throw DomainError("beta must be > 0");
  if (v_perp <= 0.0) return 0.0;
  return 2.0 * beta * v_perp * std::exp(-beta * v_perp * v_perp);
}

double equilibrium_collision_cdf(double v_perp, double beta) {
  if (!(beta > 0.0)) throw DomainError("beta must be > 0");
  if (v_perp <= 0.0) return 0.0;
  return -std::expm1(-beta * v_perp * v_perp);
}

double equilibrium_speed_density(double s, double beta) { return equilibrium_collision_density(s, beta); }

double equilibrium_speed_cdf(double s, double beta) { return equilibrium_collision_cdf(s, beta); }

double equilibrium_energy_density(double energy, double beta) {
  if (!(beta > 0.0)) throw DomainError("beta must be > 0");
  if (energy < 0.0) return 0.0;
  return 2.0 * beta * std::exp(-2.0 * beta * energy);
}

TailPrediction tail_prediction_from(const std::function<double(double, double)> &sigma,
                                    double boundary_length, double beta, std::size_t n_quadrature,
                                    RngStream &rng) {
  if (!(beta > 0.0)) throw DomainError("tail_prediction: beta must be > 0");
  if (n_quadrature < 2) throw DomainError("tail_prediction: need at least two quadrature nodes");

  // Weighted moments m_k = E[sigma^k cos(phi)] under uniform (r, phi).
  double m1 = 0.0, m3 = 0.0, m5 = 0.0;
  double s11 = 0.0, s33 = 0.0, s13 = 0.0;
  for (std::size_t i = 0; i < n_quadrature; ++i) {
    const double r = rng.uniform() * boundary_length;
    const double phi = (rng.uniform() - 0.5) * kPi;
    const double w = std::cos(phi);
    const double s = sigma(r, phi);
    const double a = s * w;
    const double b = s * s * s * w;
    m1 += a;
    m3 += b;
    m5 += b * s * s;
    s11 += a * a;
    s33 += b * b;
    s13 += a * b;
  }
  const double n = static_cast<double>(n_quadrature);
  m1 /= n;
  m3 /= n;
  m5 /= n;

  // With c normalizing the flow measure, K = c/6 * int sigma^3 cos = (beta/3) m3/m1.
  TailPrediction out;
  out.n_quadrature = n_quadrature;
  out.mean_sigma = m1;
  out.mean_sigma3 = m3;
  out.mean_sigma5 = m5;
  const double ratio = m3 / m1;
  out.coefficient = beta / 3.0 * ratio;

  // Delta-method standard error of the ratio estimator.
  const double var_a = s11 / n - m1 * m1;
  const double var_b = s33 / n - m3 * m3;
  const double cov_ab = s13 / n - m1 * m3;
  const double var_ratio = std::max(0.0, (var_b - 2.0 * ratio * cov_ab + ratio * ratio * var_a)) / (n * m1 * m1);
  out.coefficient_se = beta / 3.0 * std::sqrt(var_ratio);

  // Expansion: sigma^3/(6 tau^2) - beta sigma^5/(20 tau^4) + ...; relative size 3 beta m5/(10 m3 tau^2).
  out.tau_validity = std::sqrt(3.0 * beta * m5 / m3);
  return out;
}

TailPrediction tail_prediction(const BilliardTable &table, double beta, std::size_t n_quadrature,
                               RngStream &rng) {
  if (!table.is_equilibrium()) throw UnsupportedRegime("tail_prediction: disks at different temperatures");
  if (std::abs(table.disks.front().beta - beta) > 1e-12 * beta)
    throw UnsupportedRegime("tail_prediction: beta differs from the table's thermostats");
  auto sigma = [&](double r, double phi) {
    const BoundaryPoint point = boundary_point_at(table, r);
    const BoundaryFrame frame = boundary_point_frame(table, point);
    return next_collision(table, frame.position, outgoing_direction(frame, phi), point).flight_length;
  };
  return tail_prediction_from(sigma, table.boundary_length(), beta, n_quadrature, rng);
}

double equilibrium_tail_exact_constant_sigma(double sigma, double beta, double tau) {
  if (tau <= 0.0) return 1.0;
  const double x = std::sqrt(beta) * sigma / tau;
  return 1.0 - std::sqrt(kPi) * tau * std::erf(x) / (2.0 * std::sqrt(beta) * sigma);
}

}  // namespace tb
