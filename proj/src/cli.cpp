#include "thermo_billiards/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <cmath>

#include <CLI11.hpp>

#include "thermo_billiards/config.hpp"
#include "thermo_billiards/parallel.hpp"
#include "thermo_billiards/report.hpp"

namespace tb {

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
  unsigned threads = 0;
  bool quiet = false;
};

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Pass: return kExitOk;
    case Verdict::Fail: return kExitFail;
    case Verdict::Inconclusive: return kExitInconclusive;
  }
  return kExitNumerical;
}

void write_file(const std::filesystem::path &path, const std::string &text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidState("cannot write '" + path.string() + "'");
  f << text;
}

class Session {
 public:
  Session(RunConfig config, bool quiet, std::ostream &out, std::ostream &err)
      : config_(std::move(config)), quiet_(quiet), out_(out), err_(err) {}

  void log(const std::string &msg) {
    if (!quiet_) err_ << msg << '\n';
  }

  void emit(const ExperimentReport &r) {
    const std::filesystem::path dir(config_.output);
    std::filesystem::create_directories(dir);
    if (config_.format != OutputFormat::Csv) write_file(dir / (r.name + ".json"), report_to_json(r));
    if (config_.format != OutputFormat::Json) {
      std::ostringstream csv;
      write_metrics_csv(csv, r);
      write_file(dir / (r.name + ".csv"), csv.str());
    }
    out_ << r.name << ' ' << to_string(r.verdict) << ' ' << r.config_digest << '\n';
    log(r.name + ": " + to_string(r.verdict) + " in " + format_double(std::round(r.wall_time * 100) / 100) + " s");
  }

  int validate() {
    const ExperimentReport r = run_validate(config_.table, config_.validate, config_.seed);
    emit(r);
    if (const Metric *h = r.find("horizon_violations"); h != nullptr && h->value > 0) return kExitHorizon;
    return exit_code(r.verdict);
  }

  int simulate() {
    preflight(config_.table, kPreflightRays, config_.seed);
    const auto trajectories = simulate_trajectories(config_.table, config_.simulate, config_.seed);
    const std::filesystem::path dir(config_.output);
    std::filesystem::create_directories(dir);
    std::ostringstream csv;
    write_trace_csv(csv, trajectories);
    write_file(dir / "trace.csv", csv.str());
    out_ << "simulate " << trajectories.size() << " trajectories " << config_.simulate.n_steps << " steps\n";
    return kExitOk;
  }

  int experiment(const std::string &name) {
    const auto &c = config_;
    ExperimentReport r;
    log("running " + name);
    if (name == "equilibrate") r = run_equilibration(c.table, c.equilibrate, c.seed);
    else if (name == "tails") r = run_tail_scaling(c.table, c.tails, c.seed);
    else if (name == "subexp") r = run_subexp_lowerbound(c.table, c.subexp, c.seed);
    else if (name == "drift") r = run_drift_check(c.table, c.drift, c.seed);
    else if (name == "grazing") r = run_grazing_scaling(c.table, c.grazing, c.seed);
    else throw InvalidState("unknown experiment " + name);
    emit(r);
    return exit_code(r.verdict);
  }

  int all() {
    if (const int v = validate(); v != kExitOk) return v;
    bool fail = false, inconclusive = false;
    for (const char *name : {"equilibrate", "tails", "subexp", "drift", "grazing"}) {
      const int code = experiment(name);
      fail = fail || code == kExitFail;
      inconclusive = inconclusive || code == kExitInconclusive;
    }
    return fail ? kExitFail : (inconclusive ? kExitInconclusive : kExitOk);
  }

 private:
  RunConfig config_;
  bool quiet_;
  std::ostream &out_;
  std::ostream &err_;
};

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Random billiards with Gaussian thermostats on the 2-torus"};
  app.require_subcommand(1, 1);
  Options opt;
  app.add_option("--config", opt.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", opt.seed, "Override the configured seed");
  app.add_option("--out", opt.out_dir, "Output directory");
  app.add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"csv", "json", "both"}));
  app.add_option("--threads", opt.threads, "Worker threads (default: THERMO_BILLIARDS_THREADS or all cores)");
  app.add_flag("--quiet", opt.quiet, "No progress output on stderr");

  const std::vector<std::pair<const char *, const char *>> commands = {
      {"validate", "Geometry checks and horizon probe"},
      {"simulate", "Export chain trajectories as CSV"},
      {"equilibrate", "Relaxation of the collision law from a cold start"},
      {"tails", "Tail of the slow-particle set against the predicted coefficient"},
      {"subexp", "Lower bound on the distance to equilibrium"},
      {"drift", "Lyapunov drift ratios"},
      {"grazing", "Production of slow particles by grazing collisions"},
      {"all", "Every experiment"},
  };
  for (const auto &[name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  RunConfig config;
  try {
    if (!opt.config_path.empty()) {
      config = load_config(opt.config_path);
    } else {
      check_config(config);
    }
    if (opt.seed) config.seed = *opt.seed;
    if (opt.out_dir) config.output = *opt.out_dir;
    if (opt.format) config.format = parse_output_format(*opt.format);
  } catch (const Error &e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (opt.threads > 0) set_default_threads(opt.threads);

  Session session(std::move(config), opt.quiet, out, err);
  try {
    if (command == "validate") return session.validate();
    if (command == "simulate") return session.simulate();
    if (command == "all") return session.all();
    return session.experiment(command);
  } catch (const NoCollisionWithinCap &e) {
    err << "horizon violation: " << e.what() << '\n';
    return kExitHorizon;
  } catch (const ConfigError &e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidState &e) {
    err << "invalid state: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception &e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace tb
