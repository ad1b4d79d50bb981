#pragma once
/**
 * @file report.hpp
 * @brief Deterministic JSON/CSV serialization of experiment reports and traces.
 *
 * Files carry no timing information, so a fixed (config, seed) reproduces
 * them byte for byte.
 */

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "thermo_billiards/dynamics.hpp"
#include "thermo_billiards/experiments.hpp"

namespace tb {

/// Shortest decimal that round-trips to the same double ("nan"/"inf" for non-finite).
std::string format_double(double x);

std::string report_to_json(const ExperimentReport &report);
ExperimentReport report_from_json(const std::string &text);

/// Header: experiment,key,value,ci_low,ci_high,n,seed
inline constexpr const char *kMetricCsvHeader = "experiment,key,value,ci_low,ci_high,n,seed";
void write_metrics_csv(std::ostream &out, const ExperimentReport &report, bool header = true);

struct Trajectory {
  std::uint64_t id = 0;
  std::vector<StepRecord> steps;
};

/// Header: trajectory_id,step,disk_id,theta,v_perp,phi,phi_incoming,flight_length,flight_time
inline constexpr const char *kTraceCsvHeader =
    "trajectory_id,step,disk_id,theta,v_perp,phi,phi_incoming,flight_length,flight_time";
void write_trace_csv(std::ostream &out, const std::vector<Trajectory> &trajectories);

/// Chain trajectories from uniform boundary points with the given v_perp, one stream each.
std::vector<Trajectory> simulate_trajectories(const BilliardTable &table, const SimulateConfig &config,
                                              std::uint64_t seed);

}  // namespace tb
