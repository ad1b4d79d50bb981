#include "thermo_billiards/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "thermo_billiards/errors.hpp"
#include "thermo_billiards/parallel.hpp"

namespace tb {

// ---------------------------------------------------------------------------
// Histograms and TV

std::uint64_t Histogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), underflow + overflow);
}

std::vector<double> Histogram::cell_masses() const {
  std::vector<double> p(counts.size() + 2, 0.0);
  const std::uint64_t n = total();
  if (n == 0) return p;
  const double inv = 1.0 / static_cast<double>(n);
  p.front() = static_cast<double>(underflow) * inv;
  for (std::size_t i = 0; i < counts.size(); ++i) p[i + 1] = static_cast<double>(counts[i]) * inv;
  p.back() = static_cast<double>(overflow) * inv;
  return p;
}

Histogram histogram(std::span<const double> samples, double lo, double hi, std::size_t bins) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("histogram: need lo < hi");
  if (bins < 1) throw DomainError("histogram: need at least one bin");
  Histogram h;
  h.edges.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i < bins; ++i) h.edges[i] = lo + static_cast<double>(i) * width;
  h.edges[bins] = hi;
  h.counts.assign(bins, 0);
  for (const double x : samples) {
    if (x < lo) {
      ++h.underflow;
    } else if (x >= hi || std::isnan(x)) {
      ++h.overflow;
    } else {
      auto i = static_cast<std::size_t>((x - lo) / width);
      if (i >= bins) i = bins - 1;
      // Floating-point rounding can put x one bin off near an edge.
      while (i > 0 && x < h.edges[i]) --i;
      while (i + 1 < bins && x >= h.edges[i + 1]) ++i;
      ++h.counts[i];
    }
  }
  return h;
}

double tv_distance(const Histogram &h1, const Histogram &h2) {
  if (h1.edges != h2.edges) throw InvalidState("tv_distance: histograms have different edges");
  const auto p = h1.cell_masses();
  const auto q = h2.cell_masses();
  const bool empty1 = h1.total() == 0, empty2 = h2.total() == 0;
  if (empty1 || empty2) return empty1 == empty2 ? 0.0 : 1.0;
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return std::min(1.0, 0.5 * s);
}

namespace {

std::vector<double> exact_cells(const Histogram &h, const std::function<double(double)> &cdf) {
  std::vector<double> q(h.counts.size() + 2);
  std::vector<double> f(h.edges.size());
  for (std::size_t i = 0; i < h.edges.size(); ++i) f[i] = cdf(h.edges[i]);
  q.front() = f.front();
  for (std::size_t i = 0; i < h.counts.size(); ++i) q[i + 1] = f[i + 1] - f[i];
  q.back() = 1.0 - f.back();
  return q;
}

}  // namespace

double tv_to_cdf(const Histogram &h, const std::function<double(double)> &cdf) {
  if (h.total() == 0) throw DomainError("tv_to_cdf: empty histogram");
  const auto p = h.cell_masses();
  const auto q = exact_cells(h, cdf);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

double tv_to_cdf_se(const Histogram &h, const std::function<double(double)> &cdf) {
  if (h.total() == 0) throw DomainError("tv_to_cdf_se: empty histogram");
  const auto p = h.cell_masses();
  const auto q = exact_cells(h, cdf);
  // Gradient of ½Σ|p−q| is ½ sign(p−q); multinomial covariance of p.
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double s = p[i] > q[i] ? 0.5 : (p[i] < q[i] ? -0.5 : 0.0);
    m1 += s * p[i];
    m2 += s * s * p[i];
  }
  return std::sqrt(std::max(0.0, m2 - m1 * m1) / static_cast<double>(h.total()));
}

double quantile(std::span<const double> samples, double q) {
  if (samples.empty()) throw DomainError("quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile: q must lie in [0,1]");
  std::vector<double> v(samples.begin(), samples.end());
  // Nearest rank: the ceil(q n)-th smallest value.
  const double rank = std::ceil(q * static_cast<double>(v.size()));
  const auto k = static_cast<std::size_t>(std::clamp(rank - 1.0, 0.0, static_cast<double>(v.size() - 1)));
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
  return v[k];
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  if (successes > n) throw DomainError("wilson_interval: successes exceed trials");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  Interval ci{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  // Keep the point estimate inside the interval despite rounding.
  ci.low = std::min(ci.low, p);
  ci.high = std::max(ci.high, p);
  return ci;
}

TvLowerBound tv_witness_lower_bound(std::span<const double> a, std::span<const double> b, double lo,
                                    double hi, std::size_t bins) {
  if (a.size() < 4 || b.size() < 4) throw DomainError("tv_witness_lower_bound: need at least 4 samples each");
  auto split = [](std::span<const double> x, int parity) {
    std::vector<double> out;
    out.reserve(x.size() / 2 + 1);
    for (std::size_t i = static_cast<std::size_t>(parity); i < x.size(); i += 2) out.push_back(x[i]);
    return out;
  };
  const Histogram a_fit = histogram(split(a, 0), lo, hi, bins);
  const Histogram b_fit = histogram(split(b, 0), lo, hi, bins);
  const Histogram a_eval = histogram(split(a, 1), lo, hi, bins);
  const Histogram b_eval = histogram(split(b, 1), lo, hi, bins);
  const auto pf = a_fit.cell_masses(), qf = b_fit.cell_masses();
  const auto pe = a_eval.cell_masses(), qe = b_eval.cell_masses();
  double pa = 0.0, pb = 0.0;
  for (std::size_t i = 0; i < pf.size(); ++i) {
    if (pf[i] > qf[i]) {
      pa += pe[i];
      pb += qe[i];
    }
  }
  TvLowerBound out;
  out.estimate = pa - pb;
  const double na = static_cast<double>(a_eval.total()), nb = static_cast<double>(b_eval.total());
  out.se = std::sqrt(pa * (1.0 - pa) / na + pb * (1.0 - pb) / nb);
  out.ci_low = out.estimate - kZ95 * out.se;
  out.ci_high = out.estimate + kZ95 * out.se;
  return out;
}

// ---------------------------------------------------------------------------
// Time-weighted sampling

TimeAxisSampler::TimeAxisSampler(double rate, RngStream &rng) : rate_(rate), rng_(rng) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("TimeAxisSampler: rate must be positive");
  next_ = exponential();
}

double TimeAxisSampler::exponential() { return -std::log(rng_.uniform()) / rate_; }

std::vector<std::size_t> uniform_subset(std::size_t n, std::size_t k, RngStream &rng) {
  if (k > n) throw DomainError("uniform_subset: k exceeds n");
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < n && out.size() < k; ++i) {
    const double remaining = static_cast<double>(n - i);
    if (remaining * rng.uniform() < static_cast<double>(k - out.size())) out.push_back(i);
  }
  return out;
}

std::vector<TimePoint> time_weighted_points(std::span<const double> durations, std::size_t n,
                                            std::uint64_t seed) {
  if (n == 0) return {};
  double total = 0.0;
  for (const double d : durations) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("time_weighted_points: durations must be finite, >= 0");
    total += d;
  }
  if (!(total > 0.0)) throw DomainError("time_weighted_points: total duration must be positive");
  double margin = 0.25;
  for (std::uint64_t attempt = 0;; ++attempt, margin *= 2.0) {
    RngStream rng(seed, stream_id(StreamDomain::Selection, attempt));
    TimeAxisSampler sampler(static_cast<double>(n) * (1.0 + margin) / total, rng);
    std::vector<TimePoint> candidates;
    for (std::size_t i = 0; i < durations.size(); ++i)
      sampler.consume(durations[i], [&](double e) { candidates.push_back({i, e}); });
    if (candidates.size() < n) continue;
    RngStream pick(seed, stream_id(StreamDomain::Subsample, attempt));
    std::vector<TimePoint> out;
    out.reserve(n);
    for (const std::size_t k : uniform_subset(candidates.size(), n, pick)) out.push_back(candidates[k]);
    return out;
  }
}

namespace {

/// Flight time of the segment leaving `base` at angle phi, via the roof formula.
double segment_time(const CollisionState &base, double phi, double flight_length) {
  return flight_length * std::cos(phi) / base.v_perp;
}

}  // namespace

StationaryEnsemble stationary_sample(const BilliardTable &table, std::uint64_t n_collisions,
                                     std::uint64_t n_flow, std::uint64_t burn_in, std::uint64_t seed,
                                     const StationaryOptions &options) {
  if (const auto report = validate_table(table); !report.ok())
    throw InvalidState("stationary_sample: invalid table: " + report.describe());
  if (n_flow > 0 && n_collisions == 0) throw DomainError("stationary_sample: flow samples need chain steps");
  if (!(options.candidate_margin > 0.0)) throw DomainError("stationary_sample: candidate_margin must be > 0");

  if (!(options.min_residual >= 0.0)) throw DomainError("stationary_sample: min_residual must be >= 0");
  const std::uint64_t base = options.stream_index;

  // Pilot run on its own stream fixes the thinning rate: the expected time per
  // step that can host a kept flow state.
  double usable_time = 0.0;
  if (n_flow > 0) {
    RngStream pilot_rng(seed, stream_id(StreamDomain::Chain, 2 * base + 1));
    CollisionState s = options.start;
    const std::uint64_t pilot = std::max({options.pilot_steps, n_collisions / 100, std::uint64_t{100}});
    for (std::uint64_t i = 0; i < pilot; ++i) {
      const StepRecord rec = chain_step(table, s, pilot_rng);
      usable_time += std::max(0.0, segment_time(s, rec.phi, rec.flight_length) - options.min_residual);
      s = rec.to;
    }
    usable_time /= static_cast<double>(pilot);
    if (!(usable_time > 0.0))
      throw InvalidState("stationary_sample: pilot run saw no segment longer than min_residual");
  }

  double margin = options.candidate_margin;
  for (std::uint64_t attempt = 0;; ++attempt, margin *= 2.0) {
    StationaryEnsemble ens;
    ens.burn_in = burn_in;
    ens.seed = seed;
    ens.n_steps = n_collisions;

    RngStream rng(seed, stream_id(StreamDomain::Chain, 2 * base));
    CollisionState state = options.start;
    for (std::uint64_t i = 0; i < burn_in; ++i) state = chain_step(table, state, rng).to;

    RngStream select_rng(seed, stream_id(StreamDomain::Selection, (base << 16) | attempt));
    const double rate = n_flow > 0 ? static_cast<double>(n_flow) * (1.0 + margin) /
                                         (static_cast<double>(n_collisions) * usable_time)
                                   : 1.0;
    TimeAxisSampler sampler(rate, select_rng);
    std::vector<FlowRecord> candidates;
    if (n_flow > 0) candidates.reserve(static_cast<std::size_t>(static_cast<double>(n_flow) * (1.0 + 1.2 * margin)));
    if (options.keep_collisions) {
      ens.collision_samples.reserve(n_collisions);
      ens.collision_flight_times.reserve(n_collisions);
    }

    for (std::uint64_t step = 0; step < n_collisions; ++step) {
      const StepRecord rec = chain_step(table, state, rng);
      const double t = segment_time(state, rec.phi, rec.flight_length);
      if (options.keep_collisions) {
        ens.collision_samples.push_back(state);
        ens.collision_flight_times.push_back(t);
      }
      // Rejection on B_tau: only the first t - min_residual of the segment qualifies.
      if (n_flow > 0 && t > options.min_residual) {
        sampler.consume(t - options.min_residual, [&](double elapsed) {
          candidates.push_back({{state, rec.phi, elapsed}, rec.flight_length, step});
        });
      }
      ens.total_time += t;
      state = rec.to;
    }

    if (candidates.size() < n_flow) continue;
    RngStream pick(seed, stream_id(StreamDomain::Subsample, (base << 16) | attempt));
    const auto chosen = uniform_subset(candidates.size(), n_flow, pick);
    ens.flow_records.reserve(n_flow);
    ens.flow_samples.reserve(n_flow);
    for (const std::size_t k : chosen) {
      const FlowRecord &r = candidates[k];
      ens.flow_records.push_back(r);
      ens.flow_samples.push_back(lift_to_flow(table, r.suspension, r.flight_length));
    }
    return ens;
  }
}

std::vector<std::uint32_t> batch_ids(const StationaryEnsemble &ensemble, std::size_t batches) {
  if (batches < 1) throw DomainError("batch_ids: need at least one batch");
  std::vector<std::uint32_t> out;
  out.reserve(ensemble.flow_records.size());
  const double scale = static_cast<double>(batches) / static_cast<double>(std::max<std::uint64_t>(ensemble.n_steps, 1));
  for (const FlowRecord &r : ensemble.flow_records)
    out.push_back(static_cast<std::uint32_t>(std::min<double>(static_cast<double>(batches - 1), std::floor(static_cast<double>(r.step) * scale))));
  return out;
}

BatchMean batch_mean(std::span<const double> values, std::span<const std::uint32_t> groups, std::size_t n_groups) {
  if (values.size() != groups.size()) throw DomainError("batch_mean: values and groups differ in length");
  if (values.empty()) throw DomainError("batch_mean: no values");
  std::vector<double> sum(n_groups, 0.0), count(n_groups, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (groups[i] >= n_groups) throw DomainError("batch_mean: group index out of range");
    sum[groups[i]] += values[i];
    count[groups[i]] += 1.0;
    total += values[i];
  }
  BatchMean out;
  const double n = static_cast<double>(values.size());
  out.mean = total / n;
  std::size_t used = 0;
  double ss = 0.0;
  const double mean_count = n / static_cast<double>(n_groups);
  for (std::size_t g = 0; g < n_groups; ++g) {
    if (count[g] > 0.0) ++used;
    const double r = (sum[g] - out.mean * count[g]) / mean_count;
    ss += r * r;
  }
  out.batches = used;
  const double b = static_cast<double>(n_groups);
  out.se = n_groups > 1 ? std::sqrt(ss / (b * (b - 1.0))) : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Tails and fits

std::vector<double> residual_times(const StationaryEnsemble &ensemble, const BilliardTable &table) {
  std::vector<double> out;
  out.reserve(ensemble.flow_samples.size());
  if (ensemble.flow_records.size() == ensemble.flow_samples.size()) {
    // The segment is known; no retrace needed.
    for (const FlowRecord &r : ensemble.flow_records) {
      const double t = segment_time(r.suspension.base, r.suspension.phi, r.flight_length);
      out.push_back(std::max(0.0, t - r.suspension.elapsed));
    }
  } else {
    for (const FlowState &z : ensemble.flow_samples) out.push_back(residual_flight_time(table, z));
  }
  return out;
}

TailCurve tail_curve_from_residuals(std::span<const double> residuals, std::span<const double> taus) {
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!(taus[i] >= 0.0) || !std::isfinite(taus[i])) throw DomainError("tail_curve: taus must be >= 0");
    if (i > 0 && !(taus[i] > taus[i - 1])) throw DomainError("tail_curve: taus must be increasing");
  }
  std::vector<double> sorted(residuals.begin(), residuals.end());
  std::sort(sorted.begin(), sorted.end());
  TailCurve c;
  c.n = sorted.size();
  for (const double tau : taus) {
    const auto above = static_cast<std::uint64_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), tau));
    const Interval ci = wilson_interval(above, c.n);
    c.taus.push_back(tau);
    c.counts.push_back(above);
    c.fractions.push_back(c.n ? static_cast<double>(above) / static_cast<double>(c.n) : 0.0);
    c.ci_low.push_back(ci.low);
    c.ci_high.push_back(ci.high);
  }
  return c;
}

TailCurve tail_curve(const StationaryEnsemble &ensemble, const BilliardTable &table, std::span<const double> taus) {
  return tail_curve_from_residuals(residual_times(ensemble, table), taus);
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DomainError("linear_fit: xs and ys differ in length");
  if (xs.size() < 3) throw DomainError("linear_fit: need at least 3 points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) throw DomainError("linear_fit: non-finite value");
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("linear_fit: xs are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  const double ss_res = std::max(0.0, syy - f.slope * sxy);
  f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  f.slope_se = std::sqrt(ss_res / (n - 2.0) / sxx);
  return f;
}

namespace {

std::vector<double> logs(std::span<const double> v, const char *what) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const double x : v) {
    if (!(x > 0.0)) throw DomainError(std::string(what) + ": values must be positive");
    out.push_back(std::log(x));
  }
  return out;
}

}  // namespace

LinearFit loglog_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() < 3) throw DomainError("loglog_fit: need at least 3 points");
  return linear_fit(logs(xs, "loglog_fit"), logs(ys, "loglog_fit"));
}

const char *to_string(DecayVerdict verdict) {
  switch (verdict) {
    case DecayVerdict::PowerBetter: return "PowerBetter";
    case DecayVerdict::ExpBetter: return "ExpBetter";
    case DecayVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

ModelComparison model_compare_exp_vs_power(std::span<const double> taus, std::span<const double> ys) {
  if (taus.size() < 5) throw DomainError("model_compare_exp_vs_power: need at least 5 points");
  const auto ly = logs(ys, "model_compare_exp_vs_power");
  const LinearFit power = linear_fit(logs(taus, "model_compare_exp_vs_power"), ly);
  const LinearFit expo = linear_fit(taus, ly);
  ModelComparison m;
  m.power_r2 = power.r2;
  m.exp_r2 = expo.r2;
  m.power_slope = power.slope;
  m.exp_rate = -expo.slope;
  if (m.power_r2 > m.exp_r2 + kModelMargin) m.verdict = DecayVerdict::PowerBetter;
  else if (m.exp_r2 > m.power_r2 + kModelMargin) m.verdict = DecayVerdict::ExpBetter;
  else m.verdict = DecayVerdict::Inconclusive;
  return m;
}

// ---------------------------------------------------------------------------
// Drift, roof function, grazing

DriftEstimate drift_ratio(const BilliardTable &table, double v_perp, const PotentialParams &params,
                          std::uint64_t n, std::uint64_t seed, std::uint64_t stream_offset) {
  if (!(v_perp > 0.0) || !std::isfinite(v_perp)) throw DomainError("drift_ratio: v_perp must be > 0");
  if (n < 1) throw DomainError("drift_ratio: n must be >= 1");
  params.validate();
  const double v0 = potential_V(v_perp, params);

  // Deviations from V(v_perp) keep the ratio exactly 1 when V is flat over the sample.
  const std::uint64_t blocks = (n + kLaunchBlock - 1) / kLaunchBlock;
  std::vector<double> sum(blocks), sum2(blocks);
  parallel_for(blocks, 0, [&](std::size_t b) {
    RngStream rng(seed, stream_id(StreamDomain::Launch, stream_offset + b));
    const std::uint64_t count = std::min<std::uint64_t>(kLaunchBlock, n - b * kLaunchBlock);
    double s = 0.0, s2 = 0.0;
    for (std::uint64_t i = 0; i < count; ++i) {
      const CollisionState start{sample_boundary_point(table, rng), v_perp};
      const double d = potential_V(chain_step(table, start, rng).to.v_perp, params) - v0;
      s += d;
      s2 += d * d;
    }
    sum[b] = s;
    sum2[b] = s2;
  });
  double s = 0.0, s2 = 0.0;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    s += sum[b];
    s2 += sum2[b];
  }
  const double nn = static_cast<double>(n);
  const double mean = s / nn;
  const double var = n > 1 ? std::max(0.0, (s2 - nn * mean * mean) / (nn - 1.0)) : 0.0;
  const double half = kZ95 * std::sqrt(var / nn);

  DriftEstimate out;
  out.v_perp = v_perp;
  out.n = n;
  out.ratio = 1.0 + mean / v0;
  out.ci_low = 1.0 + (mean - half) / v0;
  out.ci_high = 1.0 + (mean + half) / v0;
  return out;
}

RoofIntegrability roof_integrability(const StationaryEnsemble &ensemble) {
  const auto &states = ensemble.collision_samples;
  const auto &times = ensemble.collision_flight_times;
  if (states.empty()) throw DomainError("roof_integrability: ensemble has no collision samples");
  if (times.size() != states.size()) throw InvalidState("roof_integrability: flight times missing");
  const std::size_t n = states.size();
  const std::size_t half = n / 2;
  auto mean_of = [&](auto &&f, std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    return hi > lo ? s / static_cast<double>(hi - lo) : 0.0;
  };
  auto flight = [&](std::size_t i) { return times[i]; };
  auto inv_v = [&](std::size_t i) { return 1.0 / states[i].v_perp; };

  RoofIntegrability r;
  r.n = n;
  r.mean_flight_time = mean_of(flight, 0, n);
  r.mean_inv_vperp = mean_of(inv_v, 0, n);
  if (n >= 2) {
    r.stability_flight_time =
        std::abs(mean_of(flight, 0, half) - mean_of(flight, half, n)) / r.mean_flight_time;
    r.stability_inv_vperp = std::abs(mean_of(inv_v, 0, half) - mean_of(inv_v, half, n)) / r.mean_inv_vperp;
  }
  r.stability = std::max(r.stability_flight_time, r.stability_inv_vperp);
  return r;
}

std::vector<GrazingEstimate> grazing_fractions(const BilliardTable &table, std::span<const double> v_bars,
                                               std::uint64_t n, std::uint64_t seed, double v_min,
                                               double v_max) {
  if (n < 1) throw DomainError("grazing_fraction: n must be >= 1");
  if (!(v_min > 0.0 && v_max > v_min)) throw DomainError("grazing_fraction: need 0 < v_min < v_max");
  for (const double v : v_bars)
    if (!(v > 0.0)) throw DomainError("grazing_fraction: v_bar must be > 0");

  const std::size_t m = v_bars.size();
  const std::uint64_t blocks = (n + kLaunchBlock - 1) / kLaunchBlock;
  std::vector<std::uint64_t> counts(blocks * m, 0);
  parallel_for(blocks, 0, [&](std::size_t b) {
    RngStream rng(seed, stream_id(StreamDomain::Probe, b));
    const std::uint64_t count = std::min<std::uint64_t>(kLaunchBlock, n - b * kLaunchBlock);
    for (std::uint64_t i = 0; i < count; ++i) {
      const BoundaryPoint p = sample_boundary_point(table, rng);
      const double v = v_min + (v_max - v_min) * rng.uniform();
      const double v_out = chain_step(table, {p, v}, rng).to.v_perp;
      for (std::size_t k = 0; k < m; ++k)
        if (v_out <= v_bars[k]) ++counts[b * m + k];
    }
  });

  std::vector<GrazingEstimate> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    std::uint64_t c = 0;
    for (std::uint64_t b = 0; b < blocks; ++b) c += counts[b * m + k];
    const Interval ci = wilson_interval(c, n);
    out[k] = {v_bars[k], static_cast<double>(c) / static_cast<double>(n), ci.low, ci.high, c, n};
  }
  return out;
}

GrazingEstimate grazing_fraction(const BilliardTable &table, double v_bar, std::uint64_t n, std::uint64_t seed,
                                 double v_min, double v_max) {
  const double v[] = {v_bar};
  return grazing_fractions(table, v, n, seed, v_min, v_max).front();
}

}  // namespace tb
