#include "thermo_billiards/report.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

#include "thermo_billiards/errors.hpp"
#include "thermo_billiards/parallel.hpp"

namespace tb {

using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

json number(double x) {
  // JSON has no NaN/inf; keep them as strings so the file stays valid and round-trips.
  if (!std::isfinite(x)) return format_double(x);
  return x;
}

double from_number(const json &j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "nan") return NAN;
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
  }
  throw InvalidState("report: expected a number");
}

Verdict verdict_from(const std::string &s) {
  if (s == "Pass") return Verdict::Pass;
  if (s == "Fail") return Verdict::Fail;
  if (s == "Inconclusive") return Verdict::Inconclusive;
  throw InvalidState("report: unknown verdict '" + s + "'");
}

}  // namespace

std::string report_to_json(const ExperimentReport &r) {
  json metrics = json::array();
  for (const Metric &m : r.metrics)
    metrics.push_back({{"key", m.key},
                       {"value", number(m.value)},
                       {"ci_low", number(m.ci_low)},
                       {"ci_high", number(m.ci_high)},
                       {"n", m.n}});
  const json j = {{"name", r.name},
                  {"config_digest", r.config_digest},
                  {"seed", r.seed},
                  {"metrics", metrics},
                  {"verdict", to_string(r.verdict)}};
  return j.dump(2) + "\n";
}

ExperimentReport report_from_json(const std::string &text) {
  try {
    const json j = json::parse(text);
    ExperimentReport r;
    r.name = j.at("name").get<std::string>();
    r.config_digest = j.at("config_digest").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const json &m : j.at("metrics"))
      r.metrics.push_back({m.at("key").get<std::string>(), from_number(m.at("value")), from_number(m.at("ci_low")),
                           from_number(m.at("ci_high")), m.at("n").get<std::uint64_t>()});
    r.verdict = verdict_from(j.at("verdict").get<std::string>());
    return r;
  } catch (const json::exception &e) {
    throw InvalidState(std::string("report: ") + e.what());
  }
}

void write_metrics_csv(std::ostream &out, const ExperimentReport &r, bool header) {
  if (header) out << kMetricCsvHeader << '\n';
  for (const Metric &m : r.metrics) {
    out << r.name << ',' << m.key << ',' << format_double(m.value) << ',' << format_double(m.ci_low) << ','
        << format_double(m.ci_high) << ',' << m.n << ',' << r.seed << '\n';
  }
}

void write_trace_csv(std::ostream &out, const std::vector<Trajectory> &trajectories) {
  out << kTraceCsvHeader << '\n';
  for (const Trajectory &t : trajectories) {
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
      const StepRecord &s = t.steps[i];
      out << t.id << ',' << i << ',' << s.from.point.disk_id << ',' << format_double(s.from.point.theta) << ','
          << format_double(s.from.v_perp) << ',' << format_double(s.phi) << ',' << format_double(s.phi_incoming)
          << ',' << format_double(s.flight_length) << ',' << format_double(s.flight_time) << '\n';
    }
  }
}

std::vector<Trajectory> simulate_trajectories(const BilliardTable &table, const SimulateConfig &config,
                                              std::uint64_t seed) {
  if (!(config.v_perp > 0.0)) throw DomainError("simulate: v_perp must be > 0");
  std::vector<Trajectory> out(config.n_trajectories);
  parallel_for(out.size(), 0, [&](std::size_t i) {
    RngStream rng(seed, stream_id(StreamDomain::Chain, i));
    CollisionState s{sample_boundary_point(table, rng), config.v_perp};
    out[i].id = i;
    out[i].steps.reserve(config.n_steps);
    for (std::uint64_t k = 0; k < config.n_steps; ++k) {
      out[i].steps.push_back(chain_step(table, s, rng));
      s = out[i].steps.back().to;
    }
  });
  return out;
}

}  // namespace tb
