#pragma once

#include <cstddef>
#include <functional>

#include "thermo_billiards/geometry.hpp"
#include "thermo_billiards/rng.hpp"

namespace tb {

/// Parameters of the piecewise Lyapunov potential V(v_perp).
struct PotentialParams {
  double epsilon = 0.5;
  double gamma = 1.0;
  double v_min = 0.1;
  double v_max = 2.0;
  double A = 10.0;

  /// gamma = 1, epsilon = beta_min / 2, v_min = 0.1, v_max = 2,
  /// A = max(exp(epsilon v_max^2), v_min^-gamma).
  static PotentialParams defaults_for(const BilliardTable &table);
  /// Throws DomainError if the parameters are inconsistent (optionally with a table).
  void validate() const;
  void validate_for(const BilliardTable &table) const;
};

/// Leading-order tail nu(B_tau) ~ coefficient / tau^2 in equilibrium.
struct TailPrediction {
  double coefficient = 0.0;
  double coefficient_se = 0.0;
  /// Smallest tau where the next-order correction is below 10% of the leading term.
  double tau_validity = 0.0;
  /// Moments of the cos-weighted flight length used to build the prediction.
  double mean_sigma = 0.0;
  double mean_sigma3 = 0.0;
  double mean_sigma5 = 0.0;
  std::size_t n_quadrature = 0;
};

/// Density of the outgoing angle: sqrt(beta/pi) v / cos^2(phi) exp(-beta v^2 tan^2 phi).
double angle_density(double phi, double v_perp, double beta);
/// Closed-form CDF of the outgoing angle, (1 + erf(sqrt(beta) v tan phi)) / 2.
double angle_cdf(double phi, double v_perp, double beta);

double potential_V(double v_perp, const PotentialParams &params);

/// 2 beta v exp(-beta v^2): v_perp marginal of the equilibrium collision measure.
double equilibrium_collision_density(double v_perp, double beta);
/// 1 - exp(-beta v^2).
double equilibrium_collision_cdf(double v_perp, double beta);
/// 2 beta s exp(-beta s^2): speed marginal of the equilibrium flow measure.
double equilibrium_speed_density(double s, double beta);
double equilibrium_speed_cdf(double s, double beta);
/// Kinetic energy E = s^2/2 under the flow measure: 2 beta exp(-2 beta E).
double equilibrium_energy_density(double energy, double beta);

/// Monte Carlo estimate of the tail coefficient for a flight-length function
/// sigma(r, phi) on a boundary of the given length. The function is sampled
/// at r uniform on [0, boundary_length) and phi uniform on (-pi/2, pi/2).
TailPrediction tail_prediction_from(const std::function<double(double, double)> &sigma,
                                    double boundary_length, double beta, std::size_t n_quadrature,
                                    RngStream &rng);

/// Same, with sigma traced on the table. All disks must share beta.
TailPrediction tail_prediction(const BilliardTable &table, double beta, std::size_t n_quadrature,
                               RngStream &rng);

/// Exact equilibrium nu(B_tau) for a constant flight length sigma (no expansion).
double equilibrium_tail_exact_constant_sigma(double sigma, double beta, double tau);

}  // namespace tb
