#pragma once
/**
 * @file statistics.hpp
 * @brief Estimators over simulated ensembles: binned measures and TV distance,
 *        stationary ensembles, tail curves, slope fits, drift ratios and
 *        roof-function diagnostics.
 */

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "thermo_billiards/dynamics.hpp"
#include "thermo_billiards/measures.hpp"

namespace tb {

/// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

struct Histogram {
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;
  std::uint64_t underflow = 0;
  std::uint64_t overflow = 0;

  std::size_t bins() const { return counts.size(); }
  std::uint64_t total() const;
  /// Normalized masses of [underflow, bins..., overflow]; all zero if empty.
  std::vector<double> cell_masses() const;
};

Histogram histogram(std::span<const double> samples, double lo, double hi, std::size_t bins);
/// ½ Σ |p_i − q_i| over the bins plus the under/overflow cells.
double tv_distance(const Histogram &h1, const Histogram &h2);
/// Same, against the exact cell masses of a distribution given by its CDF.
double tv_to_cdf(const Histogram &h, const std::function<double(double)> &cdf);
/// Linearized standard error of tv_to_cdf from sampling noise in h.
double tv_to_cdf_se(const Histogram &h, const std::function<double(double)> &cdf);

/// Empirical q-quantile (nearest rank); DomainError if empty.
double quantile(std::span<const double> samples, double q);

Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z = kZ95);

/**
 * Held-out lower bound on the TV distance between the laws behind two samples.
 *
 * The witness set {bins where a outweighs b} is chosen on one half of each
 * sample and evaluated on the other half, so P_a(W) − P_b(W) is an unbiased
 * estimate of a quantity that never exceeds the true (binned) TV.
 */
struct TvLowerBound {
  double estimate = 0.0;
  double se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};
TvLowerBound tv_witness_lower_bound(std::span<const double> a, std::span<const double> b, double lo,
                                    double hi, std::size_t bins);

// ---------------------------------------------------------------------------
// Stationary ensembles

/// One time-weighted draw: the segment it fell on and where along it.
struct FlowRecord {
  SuspensionState suspension;
  double flight_length = 0.0;
  std::uint64_t step = 0;  ///< post-burn-in chain step that owns the segment
};

struct StationaryEnsemble {
  std::vector<CollisionState> collision_samples;
  /// Flight time of the segment leaving each collision sample.
  std::vector<double> collision_flight_times;
  std::vector<FlowState> flow_samples;
  std::vector<FlowRecord> flow_records;
  std::uint64_t burn_in = 0;
  std::uint64_t seed = 0;
  std::uint64_t n_steps = 0;
  double total_time = 0.0;  ///< summed post-burn-in flight time
};

struct StationaryOptions {
  /// Keep collision samples (disable for long runs that only need flow samples).
  bool keep_collisions = true;
  /// Expected surplus of time-weighted candidates over n_flow.
  double candidate_margin = 0.25;
  /// Steps of the pilot run that sets the thinning rate (at least n_collisions/100).
  std::uint64_t pilot_steps = 20000;
  /// Keep only flow states whose residual flight time exceeds this (conditioning on B_tau).
  double min_residual = 0.0;
  /// Selects the chain's RNG streams; ensembles with different indices are independent.
  std::uint64_t stream_index = 0;
  /// Starting state of the chain.
  CollisionState start{{0, 0.0}, 1.0};
};

/**
 * Runs the chain for burn_in + n_collisions steps and draws n_flow flow states
 * whose segment is picked with probability proportional to its flight time
 * and whose elapsed time is uniform within it.
 *
 * The time axis of the suspension flow is thinned by a Poisson process, and an
 * exact uniform subset of n_flow points is kept; this yields n_flow i.i.d.
 * uniform times on [0, total_time) without storing the chain.
 */
StationaryEnsemble stationary_sample(const BilliardTable &table, std::uint64_t n_collisions,
                                     std::uint64_t n_flow, std::uint64_t burn_in, std::uint64_t seed,
                                     const StationaryOptions &options = {});

/// Batch index in [0, batches) of every flow record, by owning chain step.
std::vector<std::uint32_t> batch_ids(const StationaryEnsemble &ensemble, std::size_t batches);

/// Ratio estimate sum(values)/count with a batch-means standard error.
struct BatchMean {
  double mean = 0.0;
  double se = 0.0;
  std::size_t batches = 0;
};
BatchMean batch_mean(std::span<const double> values, std::span<const std::uint32_t> groups, std::size_t n_groups);

/// Segment draws with probability proportional to duration (same thinning scheme,
/// on an in-memory list). Returns (segment index, elapsed) pairs in time order.
struct TimePoint {
  std::size_t segment = 0;
  double elapsed = 0.0;
};
std::vector<TimePoint> time_weighted_points(std::span<const double> durations, std::size_t n,
                                            std::uint64_t seed);

/// Poisson thinning of a stream of segments; exposed for reuse by experiments.
class TimeAxisSampler {
 public:
  TimeAxisSampler(double rate, RngStream &rng);
  /// Emits elapsed offsets of the arrivals inside the next segment.
  template <class Fn>
  void consume(double duration, Fn &&emit) {
    while (next_ < duration) {
      emit(next_);
      next_ += exponential();
    }
    next_ -= duration;
  }

 private:
  double exponential();
  double rate_;
  RngStream &rng_;
  double next_;
};

/// Selection sampling: sorted uniform subset of k indices out of n.
std::vector<std::size_t> uniform_subset(std::size_t n, std::size_t k, RngStream &rng);

// ---------------------------------------------------------------------------
// Tails and fits

struct TailCurve {
  std::vector<double> taus;
  std::vector<double> fractions;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  std::vector<std::uint64_t> counts;
  std::uint64_t n = 0;
};

/// Residual flight time of every flow sample.
std::vector<double> residual_times(const StationaryEnsemble &ensemble, const BilliardTable &table);
TailCurve tail_curve(const StationaryEnsemble &ensemble, const BilliardTable &table,
                     std::span<const double> taus);
/// Same, from residual times already computed.
TailCurve tail_curve_from_residuals(std::span<const double> residuals, std::span<const double> taus);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_se = 0.0;
};

/// Ordinary least squares y = intercept + slope x (at least 3 points).
LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);
/// OLS on (log x, log y); DomainError on non-positive values.
LinearFit loglog_fit(std::span<const double> xs, std::span<const double> ys);

enum class DecayVerdict { PowerBetter, ExpBetter, Inconclusive };
const char *to_string(DecayVerdict verdict);

struct ModelComparison {
  double power_r2 = 0.0;
  double exp_r2 = 0.0;
  double power_slope = 0.0;
  double exp_rate = 0.0;
  DecayVerdict verdict = DecayVerdict::Inconclusive;
};

inline constexpr double kModelMargin = 0.05;

/// Power law (log y vs log tau) against exponential (log y vs tau).
ModelComparison model_compare_exp_vs_power(std::span<const double> taus, std::span<const double> ys);

// ---------------------------------------------------------------------------
// Drift, roof function, grazing

struct DriftEstimate {
  double v_perp = 0.0;
  double ratio = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t n = 0;
};

/// Samples per RNG stream in the launch ensembles below.
inline constexpr std::uint64_t kLaunchBlock = 4096;

/// E[V(v')]/V(v) after one chain step from a uniform boundary point with the
/// given v_perp. `stream_offset` separates independent calls sharing a seed.
DriftEstimate drift_ratio(const BilliardTable &table, double v_perp, const PotentialParams &params,
                          std::uint64_t n, std::uint64_t seed, std::uint64_t stream_offset = 0);

struct RoofIntegrability {
  double mean_flight_time = 0.0;
  double mean_inv_vperp = 0.0;
  /// max of the split-half stabilities below
  double stability = 0.0;
  double stability_flight_time = 0.0;
  double stability_inv_vperp = 0.0;
  std::uint64_t n = 0;
};

RoofIntegrability roof_integrability(const StationaryEnsemble &ensemble);

struct GrazingEstimate {
  double v_bar = 0.0;
  double fraction = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t count = 0;
  std::uint64_t n = 0;
};

/// Fraction of chain steps from (uniform point, v_perp ~ U[v_min, v_max])
/// that land with v_perp' <= v_bar, for every threshold on one shared sample.
std::vector<GrazingEstimate> grazing_fractions(const BilliardTable &table, std::span<const double> v_bars,
                                               std::uint64_t n, std::uint64_t seed, double v_min = 0.1,
                                               double v_max = 2.0);
GrazingEstimate grazing_fraction(const BilliardTable &table, double v_bar, std::uint64_t n,
                                 std::uint64_t seed, double v_min = 0.1, double v_max = 2.0);

}  // namespace tb
