#include "thermo_billiards/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tb {

using nlohmann::json;

ConfigError::ConfigError(const std::string &message, std::size_t line, std::size_t column)
    : Error(line > 0 ? message + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"
                     : message),
      line_(line),
      column_(column) {}

const char *to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    case OutputFormat::Both: return "both";
  }
  return "?";
}

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  if (text == "both") return OutputFormat::Both;
  throw ConfigError("format must be one of csv, json, both (got '" + std::string(text) + "')");
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json to_json(const BilliardTable &t) {
  json disks = json::array();
  for (const Disk &d : t.disks)
    disks.push_back({{"center", {d.center.x, d.center.y}}, {"radius", d.radius}, {"beta", d.beta}});
  return {{"disks", disks}, {"sigma_cap", t.sigma_cap}};
}

json to_json(const ValidateConfig &c) { return {{"n_rays", c.n_rays}}; }

json to_json(const SimulateConfig &c) {
  return {{"n_trajectories", c.n_trajectories}, {"n_steps", c.n_steps}, {"v_perp", c.v_perp}};
}

json to_json(const EquilibrationConfig &c) {
  return {{"beta0", c.beta0}, {"n_particles", c.n_particles}, {"checkpoints", c.checkpoints}, {"bins", c.bins}};
}

json to_json(const TailConfig &c) {
  return {{"n_collisions", c.n_collisions}, {"n_flow", c.n_flow}, {"burn_in", c.burn_in},
          {"tau_min", c.tau_min},           {"decades", c.decades}, {"n_tau", c.n_tau},
          {"n_quadrature", c.n_quadrature}, {"batches", c.batches}};
}

json to_json(const SubexpConfig &c) {
  return {{"tau0", c.tau0},
          {"taus", c.taus},
          {"n_particles", c.n_particles},
          {"lambda_steps", c.lambda_steps},
          {"control_steps", c.control_steps},
          {"burn_in", c.burn_in},
          {"lambda_stream", c.lambda_stream},
          {"control_stream", c.control_stream},
          {"batches", c.batches},
          {"bins", c.bins}};
}

json to_json(const PotentialParams &p) {
  return {{"epsilon", p.epsilon}, {"gamma", p.gamma}, {"v_min", p.v_min}, {"v_max", p.v_max}, {"A", p.A}};
}

json to_json(const DriftConfig &c) {
  json j = {{"v_grid", c.v_grid}, {"n", c.n}};
  if (c.params) j["potential"] = to_json(*c.params);
  return j;
}

json to_json(const GrazingConfig &c) {
  return {{"v_bars", c.v_bars}, {"n", c.n}, {"v_min", c.v_min}, {"v_max", c.v_max}};
}

template <class C>
std::string digest_of(const BilliardTable &table, const C &c, std::uint64_t seed) {
  const json j = {{"table", to_json(table)}, {"params", to_json(c)}, {"seed", seed}};
  return fnv1a_hex(j.dump());
}

}  // namespace

std::string config_digest(const BilliardTable &t, const ValidateConfig &c, std::uint64_t s) { return digest_of(t, c, s); }
std::string config_digest(const BilliardTable &t, const SimulateConfig &c, std::uint64_t s) { return digest_of(t, c, s); }
std::string config_digest(const BilliardTable &t, const EquilibrationConfig &c, std::uint64_t s) { return digest_of(t, c, s); }
std::string config_digest(const BilliardTable &t, const TailConfig &c, std::uint64_t s) { return digest_of(t, c, s); }
std::string config_digest(const BilliardTable &t, const SubexpConfig &c, std::uint64_t s) { return digest_of(t, c, s); }
std::string config_digest(const BilliardTable &t, const DriftConfig &c, std::uint64_t s) { return digest_of(t, c, s); }
std::string config_digest(const BilliardTable &t, const GrazingConfig &c, std::uint64_t s) { return digest_of(t, c, s); }

std::string serialize_config(const RunConfig &c) {
  const json j = {{"table", to_json(c.table)},     {"seed", c.seed},
                  {"output", c.output},             {"format", to_string(c.format)},
                  {"validate", to_json(c.validate)}, {"simulate", to_json(c.simulate)},
                  {"equilibrate", to_json(c.equilibrate)}, {"tails", to_json(c.tails)},
                  {"subexp", to_json(c.subexp)},   {"drift", to_json(c.drift)},
                  {"grazing", to_json(c.grazing)}};
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Reader {
 public:
  Reader(const json &obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(where() + " must be an object");
  }

  void allow(std::initializer_list<const char *> keys) const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char *k) { return it.key() == k; }))
        throw ConfigError("unknown key '" + child(it.key()) + "'");
    }
  }

  bool has(const char *key) const { return obj_.contains(key); }
  const json &at(const char *key) const { return obj_.at(key); }
  std::string child(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

  void read(const char *key, double &out) const {
    if (!has(key)) return;
    const json &v = at(key);
    if (!v.is_number()) throw ConfigError("'" + child(key) + "' must be a number");
    out = v.get<double>();
  }

  void read(const char *key, std::uint64_t &out) const {
    if (!has(key)) return;
    const json &v = at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
      throw ConfigError("'" + child(key) + "' must be a non-negative integer");
    out = v.get<std::uint64_t>();
  }

  void read(const char *key, std::string &out) const {
    if (!has(key)) return;
    const json &v = at(key);
    if (!v.is_string()) throw ConfigError("'" + child(key) + "' must be a string");
    out = v.get<std::string>();
  }

  template <class T>
  void read(const char *key, std::vector<T> &out) const {
    if (!has(key)) return;
    const json &v = at(key);
    if (!v.is_array()) throw ConfigError("'" + child(key) + "' must be an array");
    std::vector<T> tmp;
    for (const json &e : v) {
      if constexpr (std::is_same_v<T, double>) {
        if (!e.is_number()) throw ConfigError("'" + child(key) + "' must contain numbers");
      } else {
        if (!e.is_number_unsigned()) throw ConfigError("'" + child(key) + "' must contain non-negative integers");
      }
      tmp.push_back(e.get<T>());
    }
    out = std::move(tmp);
  }

 private:
  std::string where() const { return path_.empty() ? "document" : "'" + path_ + "'"; }
  const json &obj_;
  std::string path_;
};

BilliardTable parse_table(const json &j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "reference") return reference_table();
    throw ConfigError("'table' must be \"reference\" or an object");
  }
  Reader r(j, "table");
  r.allow({"disks", "sigma_cap"});
  BilliardTable t;
  t.disks.clear();
  r.read("sigma_cap", t.sigma_cap);
  if (!r.has("disks") || !r.at("disks").is_array()) throw ConfigError("'table.disks' must be an array");
  std::size_t i = 0;
  for (const json &dj : r.at("disks")) {
    Reader d(dj, "table.disks[" + std::to_string(i++) + "]");
    d.allow({"center", "radius", "beta"});
    Disk disk;
    std::vector<double> center;
    d.read("center", center);
    if (center.size() != 2) throw ConfigError("'" + d.child("center") + "' must have two coordinates");
    disk.center = {center[0], center[1]};
    if (!d.has("radius")) throw ConfigError("'" + d.child("radius") + "' is required");
    d.read("radius", disk.radius);
    d.read("beta", disk.beta);
    t.disks.push_back(disk);
  }
  return t;
}

void parse_sections(const Reader &root, RunConfig &c) {
  if (root.has("validate")) {
    Reader r(root.at("validate"), "validate");
    r.allow({"n_rays"});
    r.read("n_rays", c.validate.n_rays);
  }
  if (root.has("simulate")) {
    Reader r(root.at("simulate"), "simulate");
    r.allow({"n_trajectories", "n_steps", "v_perp"});
    r.read("n_trajectories", c.simulate.n_trajectories);
    r.read("n_steps", c.simulate.n_steps);
    r.read("v_perp", c.simulate.v_perp);
  }
  if (root.has("equilibrate")) {
    Reader r(root.at("equilibrate"), "equilibrate");
    r.allow({"beta0", "n_particles", "checkpoints", "bins"});
    r.read("beta0", c.equilibrate.beta0);
    r.read("n_particles", c.equilibrate.n_particles);
    r.read("checkpoints", c.equilibrate.checkpoints);
    r.read("bins", c.equilibrate.bins);
  }
  if (root.has("tails")) {
    Reader r(root.at("tails"), "tails");
    r.allow({"n_collisions", "n_flow", "burn_in", "tau_min", "decades", "n_tau", "n_quadrature", "batches"});
    r.read("n_collisions", c.tails.n_collisions);
    r.read("n_flow", c.tails.n_flow);
    r.read("burn_in", c.tails.burn_in);
    r.read("tau_min", c.tails.tau_min);
    r.read("decades", c.tails.decades);
    r.read("n_tau", c.tails.n_tau);
    r.read("n_quadrature", c.tails.n_quadrature);
    r.read("batches", c.tails.batches);
  }
  if (root.has("subexp")) {
    Reader r(root.at("subexp"), "subexp");
    r.allow({"tau0", "taus", "n_particles", "lambda_steps", "control_steps", "burn_in", "lambda_stream",
             "control_stream", "batches", "bins"});
    r.read("tau0", c.subexp.tau0);
    r.read("taus", c.subexp.taus);
    r.read("n_particles", c.subexp.n_particles);
    r.read("lambda_steps", c.subexp.lambda_steps);
    r.read("control_steps", c.subexp.control_steps);
    r.read("burn_in", c.subexp.burn_in);
    r.read("lambda_stream", c.subexp.lambda_stream);
    r.read("control_stream", c.subexp.control_stream);
    r.read("batches", c.subexp.batches);
    r.read("bins", c.subexp.bins);
  }
  if (root.has("drift")) {
    Reader r(root.at("drift"), "drift");
    r.allow({"v_grid", "n", "potential"});
    r.read("v_grid", c.drift.v_grid);
    r.read("n", c.drift.n);
    if (r.has("potential")) {
      Reader p(r.at("potential"), "drift.potential");
      p.allow({"epsilon", "gamma", "v_min", "v_max", "A"});
      PotentialParams params = PotentialParams::defaults_for(c.table);
      p.read("epsilon", params.epsilon);
      p.read("gamma", params.gamma);
      p.read("v_min", params.v_min);
      p.read("v_max", params.v_max);
      p.read("A", params.A);
      c.drift.params = params;
    }
  }
  if (root.has("grazing")) {
    Reader r(root.at("grazing"), "grazing");
    r.allow({"v_bars", "n", "v_min", "v_max"});
    r.read("v_bars", c.grazing.v_bars);
    r.read("n", c.grazing.n);
    r.read("v_min", c.grazing.v_min);
    r.read("v_max", c.grazing.v_max);
  }
}

void require(bool ok, const std::string &message) {
  if (!ok) throw ConfigError(message);
}

void require_positive(bool ok, const char *what) { require(ok, std::string(what) + " must be positive"); }

}  // namespace

void check_config(const RunConfig &c) {
  if (const ValidationReport report = validate_table(c.table); !report.ok())
    throw ConfigError("table is invalid: " + report.describe());
  require_positive(c.validate.n_rays > 0, "validate.n_rays");
  require_positive(c.simulate.n_trajectories > 0, "simulate.n_trajectories");
  require_positive(c.simulate.n_steps > 0, "simulate.n_steps");
  require_positive(c.simulate.v_perp > 0.0, "simulate.v_perp");
  require_positive(c.equilibrate.beta0 > 0.0, "equilibrate.beta0");
  require_positive(c.equilibrate.n_particles > 0, "equilibrate.n_particles");
  require_positive(c.equilibrate.bins > 0, "equilibrate.bins");
  require(!c.equilibrate.checkpoints.empty(), "equilibrate.checkpoints must not be empty");
  require_positive(c.tails.n_collisions > 0, "tails.n_collisions");
  require_positive(c.tails.n_flow > 0, "tails.n_flow");
  require_positive(c.tails.decades > 0.0, "tails.decades");
  require(c.tails.n_tau >= 3, "tails.n_tau must be at least 3");
  require(c.tails.n_quadrature >= 2, "tails.n_quadrature must be at least 2");
  require(c.tails.batches >= 2, "tails.batches must be at least 2");
  require(c.tails.tau_min >= 0.0, "tails.tau_min must be >= 0 (0 selects it automatically)");
  require_positive(c.subexp.tau0 > 0.0, "subexp.tau0");
  require(c.subexp.taus.size() >= 5, "subexp.taus needs at least 5 points");
  require_positive(c.subexp.n_particles > 0, "subexp.n_particles");
  require_positive(c.subexp.lambda_steps > 0, "subexp.lambda_steps");
  require_positive(c.subexp.control_steps > 0, "subexp.control_steps");
  require(c.subexp.batches >= 2, "subexp.batches must be at least 2");
  require_positive(c.subexp.bins > 0, "subexp.bins");
  if (c.subexp.lambda_stream == c.subexp.control_stream)
    throw ConfigError("subexp.lambda_stream and subexp.control_stream must differ");
  require(!c.drift.v_grid.empty(), "drift.v_grid must not be empty");
  require_positive(c.drift.n > 0, "drift.n");
  for (const double v : c.drift.v_grid) require_positive(v > 0.0, "drift.v_grid entries");
  const PotentialParams params = c.drift.params.value_or(PotentialParams::defaults_for(c.table));
  try {
    params.validate_for(c.table);
  } catch (const DomainError &e) {
    throw ConfigError(std::string("drift.") + e.what());
  }
  require(c.grazing.v_bars.size() >= 3, "grazing.v_bars needs at least 3 thresholds");
  require_positive(c.grazing.n > 0, "grazing.n");
  for (const double v : c.grazing.v_bars) require_positive(v > 0.0, "grazing.v_bars entries");
  require(c.grazing.v_min > 0.0 && c.grazing.v_max > c.grazing.v_min, "grazing needs 0 < v_min < v_max");
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    // Byte offset to 1-based line/column of the offending character.
    const std::size_t offset = e.byte > 0 ? std::min<std::size_t>(e.byte - 1, text.size()) : 0;
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string msg = e.what();
    if (const auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ConfigError("config: " + msg, line, column);
  }

  RunConfig c;
  Reader root(doc, "");
  root.allow({"table", "seed", "output", "format", "validate", "simulate", "equilibrate", "tails", "subexp", "drift",
              "grazing"});
  if (root.has("table")) c.table = parse_table(root.at("table"));
  root.read("seed", c.seed);
  root.read("output", c.output);
  if (root.has("format")) {
    std::string f;
    root.read("format", f);
    c.format = parse_output_format(f);
  }
  parse_sections(root, c);
  check_config(c);
  return c;
}

RunConfig load_config(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace tb
