#pragma once
/**
 * @file experiments.hpp
 * @brief End-to-end studies with machine-readable reports and verdicts.
 *
 * Each run_* builds its ensembles from (table, config, seed), records metrics
 * and scores them. Verdicts are recomputed from the metrics alone by score().
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thermo_billiards/geometry.hpp"
#include "thermo_billiards/measures.hpp"

namespace tb {

enum class Verdict { Pass, Fail, Inconclusive };
const char *to_string(Verdict verdict);

struct Metric {
  std::string key;
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t n = 0;
};

struct ExperimentReport {
  std::string name;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::vector<Metric> metrics;
  Verdict verdict = Verdict::Inconclusive;
  double wall_time = 0.0;

  const Metric *find(const std::string &key) const;
  /// Value of a metric; InvalidState if absent.
  double value(const std::string &key) const;
  void add(std::string key, double value, std::uint64_t n = 0);
  void add(std::string key, double value, double ci_low, double ci_high, std::uint64_t n = 0);
};

struct ValidateConfig {
  std::uint64_t n_rays = 1000000;
};

struct EquilibrationConfig {
  double beta0 = 4.0;
  std::uint64_t n_particles = 200000;
  std::vector<std::uint64_t> checkpoints{0, 1, 3, 10, 30, 100};
  std::uint64_t bins = 200;
};

struct TailConfig {
  std::uint64_t n_collisions = 20000000;
  std::uint64_t n_flow = 2000000;
  std::uint64_t burn_in = 10000;
  /// Lower end of the grid; 0 picks the validity point of the tail expansion.
  double tau_min = 0.0;
  double decades = 1.0;
  std::uint64_t n_tau = 9;
  std::uint64_t n_quadrature = 1000000;
  std::uint64_t batches = 20;
};

struct SubexpConfig {
  double tau0 = 4.0;
  std::vector<double> taus{2.0, 2.8284271247461903, 4.0, 5.6568542494923806, 8.0, 11.313708498984761, 16.0,
                           22.627416997969522, 32.0};
  std::uint64_t n_particles = 100000;
  std::uint64_t lambda_steps = 20000000;
  std::uint64_t control_steps = 10000000;
  std::uint64_t burn_in = 10000;
  std::uint64_t lambda_stream = 0;
  std::uint64_t control_stream = 1;
  std::uint64_t batches = 20;
  std::uint64_t bins = 200;
};

struct DriftConfig {
  std::vector<double> v_grid{0.01, 0.02, 0.05, 2.0, 3.0, 4.0, 5.0};
  std::uint64_t n = 1000000;
  /// Defaults derived from the table when absent.
  std::optional<PotentialParams> params;
};

struct GrazingConfig {
  std::vector<double> v_bars{0.001, 0.0014142135623730952, 0.002, 0.0028284271247461905, 0.004,
                             0.0056568542494923811, 0.008};
  std::uint64_t n = 10000000;
  double v_min = 0.1;
  double v_max = 2.0;
};

struct SimulateConfig {
  std::uint64_t n_trajectories = 1;
  std::uint64_t n_steps = 1000;
  double v_perp = 1.0;
};

/// Number of horizon-probe rays every experiment fires before simulating.
inline constexpr std::uint64_t kPreflightRays = 20000;

/// validate_table then probe_horizon; InvalidState on geometry violations,
/// NoCollisionWithinCap if any probe ray escapes the cap.
void preflight(const BilliardTable &table, std::uint64_t n_rays, std::uint64_t seed);

ExperimentReport run_validate(const BilliardTable &table, const ValidateConfig &config, std::uint64_t seed);
ExperimentReport run_equilibration(const BilliardTable &table, const EquilibrationConfig &config,
                                   std::uint64_t seed);
ExperimentReport run_tail_scaling(const BilliardTable &table, const TailConfig &config, std::uint64_t seed);
ExperimentReport run_subexp_lowerbound(const BilliardTable &table, const SubexpConfig &config,
                                       std::uint64_t seed);
ExperimentReport run_drift_check(const BilliardTable &table, const DriftConfig &config, std::uint64_t seed);
ExperimentReport run_grazing_scaling(const BilliardTable &table, const GrazingConfig &config,
                                     std::uint64_t seed);

/// Verdict from a report's metrics, keyed on report.name.
Verdict score(const ExperimentReport &report);
Verdict score_validate(const ExperimentReport &report);
Verdict score_equilibration(const ExperimentReport &report);
Verdict score_tail_scaling(const ExperimentReport &report);
Verdict score_subexp_lowerbound(const ExperimentReport &report);
Verdict score_drift_check(const ExperimentReport &report);
Verdict score_grazing_scaling(const ExperimentReport &report);

/// Geometric grid of n points from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);

}  // namespace tb
