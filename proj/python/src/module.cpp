#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include <thermo_billiards/cli.hpp>
#include <thermo_billiards/config.hpp>
#include <thermo_billiards/errors.hpp>
#include <thermo_billiards/experiments.hpp>
#include <thermo_billiards/report.hpp>
#include <thermo_billiards/statistics.hpp>

namespace py = pybind11;
using namespace tb;

namespace {

using Pair = std::pair<double, double>;

Vec2 vec(const Pair &p) { return {p.first, p.second}; }
Pair pair(Vec2 v) { return {v.x, v.y}; }

py::array_t<double> to_array(const std::vector<double> &v) {
  // No base handle, so pybind11 copies the data.
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast> &a) {
  return {a.data(), a.data() + a.size()};
}

py::dict metrics_dict(const ExperimentReport &r) {
  py::dict d;
  for (const Metric &m : r.metrics) d[py::str(m.key)] = m.value;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Random billiards with Gaussian thermostats on the 2-torus.";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidState>(m, "InvalidState", base.ptr());
  py::register_exception<NoCollisionWithinCap>(m, "NoCollisionWithinCap", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<UnsupportedRegime>(m, "UnsupportedRegime", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream_id") = 0)
      .def("uniform", &RngStream::uniform)
      .def_property_readonly("seed", &RngStream::seed)
      .def_property_readonly("stream_id", &RngStream::stream_id);

  // geometry
  py::class_<Disk>(m, "Disk")
      .def(py::init([](Pair center, double radius, double beta) { return Disk{vec(center), radius, beta}; }),
           py::arg("center"), py::arg("radius"), py::arg("beta") = 1.0)
      .def_property("center", [](const Disk &d) { return pair(d.center); },
                    [](Disk &d, Pair c) { d.center = vec(c); })
      .def_readwrite("radius", &Disk::radius)
      .def_readwrite("beta", &Disk::beta)
      .def("__repr__", [](const Disk &d) {
        std::ostringstream s;
        s << "Disk(center=(" << d.center.x << ", " << d.center.y << "), radius=" << d.radius << ", beta=" << d.beta << ")";
        return s.str();
      });

  py::class_<BilliardTable>(m, "BilliardTable")
      .def(py::init([](std::vector<Disk> disks, double sigma_cap) { return BilliardTable{std::move(disks), sigma_cap}; }),
           py::arg("disks"), py::arg("sigma_cap") = 2.0)
      .def_readwrite("disks", &BilliardTable::disks)
      .def_readwrite("sigma_cap", &BilliardTable::sigma_cap)
      .def_property_readonly("boundary_length", &BilliardTable::boundary_length)
      .def_property_readonly("free_area", &BilliardTable::free_area)
      .def_property_readonly("beta_min", &BilliardTable::beta_min)
      .def_property_readonly("beta_max", &BilliardTable::beta_max);

  py::class_<BoundaryPoint>(m, "BoundaryPoint")
      .def(py::init([](std::size_t disk_id, double theta) { return BoundaryPoint{disk_id, theta}; }),
           py::arg("disk_id"), py::arg("theta"))
      .def_readwrite("disk_id", &BoundaryPoint::disk_id)
      .def_readwrite("theta", &BoundaryPoint::theta);

  py::class_<CollisionHit>(m, "CollisionHit")
      .def_readonly("point", &CollisionHit::point)
      .def_readonly("flight_length", &CollisionHit::flight_length)
      .def_readonly("incoming_angle", &CollisionHit::incoming_angle)
      .def_readonly("grazing", &CollisionHit::grazing);

  py::class_<HorizonEstimate>(m, "HorizonEstimate")
      .def_readonly("sigma_max_hat", &HorizonEstimate::sigma_max_hat)
      .def_readonly("sigma_min_hat", &HorizonEstimate::sigma_min_hat)
      .def_readonly("violations", &HorizonEstimate::violations)
      .def_readonly("n_rays", &HorizonEstimate::n_rays);

  m.def("reference_table", &reference_table);
  m.def("wrap", [](Pair p) { return pair(wrap(vec(p))); });
  m.def("validate_table", [](const BilliardTable &t) {
    py::list out;
    for (const Violation &v : validate_table(t).violations)
      out.append(py::make_tuple(to_string(v.kind), v.i, v.j, v.message));
    return out;
  }, "List of (kind, i, j, message); empty for a valid table.");
  m.def("next_collision",
        [](const BilliardTable &t, Pair position, Pair direction, std::optional<BoundaryPoint> skip) {
          return next_collision(t, vec(position), vec(direction), skip);
        },
        py::arg("table"), py::arg("position"), py::arg("direction"), py::arg("skip_source") = py::none());
  m.def("boundary_point_frame", [](const BilliardTable &t, BoundaryPoint p) {
    const BoundaryFrame f = boundary_point_frame(t, p);
    return py::make_tuple(pair(f.position), pair(f.normal), pair(f.tangent));
  });
  m.def("arclength", &arclength);
  m.def("probe_horizon", &probe_horizon, py::arg("table"), py::arg("n_rays"), py::arg("rng"));

  // dynamics
  py::class_<CollisionState>(m, "CollisionState")
      .def(py::init([](BoundaryPoint p, double v) { return CollisionState{p, v}; }), py::arg("point"),
           py::arg("v_perp"))
      .def_readwrite("point", &CollisionState::point)
      .def_readwrite("v_perp", &CollisionState::v_perp);

  py::class_<StepRecord>(m, "StepRecord")
      .def_readonly("from_state", &StepRecord::from)
      .def_readonly("phi", &StepRecord::phi)
      .def_readonly("to", &StepRecord::to)
      .def_readonly("phi_incoming", &StepRecord::phi_incoming)
      .def_readonly("flight_length", &StepRecord::flight_length)
      .def_readonly("flight_time", &StepRecord::flight_time)
      .def_readonly("speed", &StepRecord::speed)
      .def_readonly("grazing", &StepRecord::grazing);

  m.def("sample_tangential", &sample_tangential, py::arg("beta"), py::arg("rng"));
  m.def("sample_outgoing_angle", &sample_outgoing_angle, py::arg("v_perp"), py::arg("beta"), py::arg("rng"));
  m.def("chain_step", &chain_step, py::arg("table"), py::arg("state"), py::arg("rng"));
  m.def("chain_step_with_angle", &chain_step_with_angle, py::arg("table"), py::arg("state"), py::arg("phi"));
  m.def("residual_flight_time", [](const BilliardTable &t, Pair position, Pair velocity) {
    return residual_flight_time(t, {vec(position), vec(velocity)});
  });
  m.def("flow", [](const BilliardTable &t, Pair position, Pair velocity, double duration, RngStream &rng) {
    const FlowResult r = flow(t, {vec(position), vec(velocity)}, duration, rng);
    return py::make_tuple(pair(r.state.position), pair(r.state.velocity), r.log);
  }, py::arg("table"), py::arg("position"), py::arg("velocity"), py::arg("duration"), py::arg("rng"));

  // measures
  py::class_<PotentialParams>(m, "PotentialParams")
      .def(py::init<>())
      .def_static("defaults_for", &PotentialParams::defaults_for)
      .def_readwrite("epsilon", &PotentialParams::epsilon)
      .def_readwrite("gamma", &PotentialParams::gamma)
      .def_readwrite("v_min", &PotentialParams::v_min)
      .def_readwrite("v_max", &PotentialParams::v_max)
      .def_readwrite("A", &PotentialParams::A);

  py::class_<TailPrediction>(m, "TailPrediction")
      .def_readonly("coefficient", &TailPrediction::coefficient)
      .def_readonly("coefficient_se", &TailPrediction::coefficient_se)
      .def_readonly("tau_validity", &TailPrediction::tau_validity);

  m.def("angle_density", py::vectorize(angle_density), py::arg("phi"), py::arg("v_perp"), py::arg("beta"));
  m.def("angle_cdf", py::vectorize(angle_cdf), py::arg("phi"), py::arg("v_perp"), py::arg("beta"));
  m.def("potential_V", &potential_V, py::arg("v_perp"), py::arg("params"));
  m.def("equilibrium_collision_density", py::vectorize(equilibrium_collision_density));
  m.def("equilibrium_speed_density", py::vectorize(equilibrium_speed_density));
  m.def("equilibrium_energy_density", py::vectorize(equilibrium_energy_density));
  m.def("tail_prediction", &tail_prediction, py::arg("table"), py::arg("beta"), py::arg("n_quadrature"),
        py::arg("rng"));

  // statistics
  py::class_<StationaryEnsemble>(m, "StationaryEnsemble")
      .def_property_readonly("collision_v_perp", [](const StationaryEnsemble &e) {
        std::vector<double> v;
        for (const CollisionState &s : e.collision_samples) v.push_back(s.v_perp);
        return to_array(v);
      })
      .def_property_readonly("collision_flight_times", [](const StationaryEnsemble &e) { return to_array(e.collision_flight_times); })
      .def_property_readonly("flow_speeds", [](const StationaryEnsemble &e) {
        std::vector<double> v;
        for (const FlowState &z : e.flow_samples) v.push_back(norm(z.velocity));
        return to_array(v);
      })
      .def("residual_times", [](const StationaryEnsemble &e, const BilliardTable &t) { return to_array(residual_times(e, t)); })
      .def_readonly("n_steps", &StationaryEnsemble::n_steps)
      .def_readonly("total_time", &StationaryEnsemble::total_time);

  m.def("stationary_sample",
        [](const BilliardTable &t, std::uint64_t n_collisions, std::uint64_t n_flow, std::uint64_t burn_in,
           std::uint64_t seed) {
          py::gil_scoped_release release;
          return stationary_sample(t, n_collisions, n_flow, burn_in, seed);
        },
        py::arg("table"), py::arg("n_collisions"), py::arg("n_flow"), py::arg("burn_in") = 10000,
        py::arg("seed") = 1);

  m.def("tv_distance", [](py::array_t<double> a, py::array_t<double> b, double lo, double hi, std::size_t bins) {
    const auto x = to_vector(a), y = to_vector(b);
    return tv_distance(histogram(x, lo, hi, bins), histogram(y, lo, hi, bins));
  }, py::arg("a"), py::arg("b"), py::arg("lo"), py::arg("hi"), py::arg("bins") = 200,
  "TV distance between two samples binned on the same edges.");

  m.def("tail_curve", [](py::array_t<double> residuals, py::array_t<double> taus) {
    const auto r = to_vector(residuals), t = to_vector(taus);
    const TailCurve c = tail_curve_from_residuals(r, t);
    return py::make_tuple(to_array(c.fractions), to_array(c.ci_low), to_array(c.ci_high));
  }, py::arg("residuals"), py::arg("taus"));

  m.def("loglog_fit", [](py::array_t<double> xs, py::array_t<double> ys) {
    const LinearFit f = loglog_fit(to_vector(xs), to_vector(ys));
    return py::make_tuple(f.slope, f.intercept, f.r2);
  });

  m.def("model_compare_exp_vs_power", [](py::array_t<double> taus, py::array_t<double> ys) {
    const ModelComparison c = model_compare_exp_vs_power(to_vector(taus), to_vector(ys));
    return py::make_tuple(c.power_r2, c.exp_r2, std::string(to_string(c.verdict)));
  });

  m.def("drift_ratio", [](const BilliardTable &t, double v_perp, const PotentialParams &p, std::uint64_t n, std::uint64_t seed) {
    py::gil_scoped_release release;
    const DriftEstimate d = drift_ratio(t, v_perp, p, n, seed);
    return std::make_tuple(d.ratio, d.ci_low, d.ci_high);
  }, py::arg("table"), py::arg("v_perp"), py::arg("params"), py::arg("n"), py::arg("seed") = 1);

  m.def("grazing_fraction", [](const BilliardTable &t, double v_bar, std::uint64_t n, std::uint64_t seed) {
    py::gil_scoped_release release;
    const GrazingEstimate g = grazing_fraction(t, v_bar, n, seed);
    return std::make_tuple(g.fraction, g.ci_low, g.ci_high);
  }, py::arg("table"), py::arg("v_bar"), py::arg("n"), py::arg("seed") = 1);

  // experiments
  py::class_<ExperimentReport>(m, "ExperimentReport")
      .def_readonly("name", &ExperimentReport::name)
      .def_readonly("config_digest", &ExperimentReport::config_digest)
      .def_readonly("seed", &ExperimentReport::seed)
      .def_readonly("wall_time", &ExperimentReport::wall_time)
      .def_property_readonly("verdict", [](const ExperimentReport &r) { return std::string(to_string(r.verdict)); })
      .def_property_readonly("metrics", &metrics_dict)
      .def("value", &ExperimentReport::value)
      .def("rescore", [](const ExperimentReport &r) { return std::string(to_string(score(r))); })
      .def("to_json", &report_to_json);

  m.def("report_from_json", &report_from_json);

  py::class_<RunConfig>(m, "RunConfig")
      .def_readwrite("table", &RunConfig::table)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("output", &RunConfig::output)
      .def("to_json", &serialize_config);
  m.def("parse_config", &parse_config, py::arg("text"));

  m.def("run_experiment", [](const std::string &name, const RunConfig &c) {
    py::gil_scoped_release release;
    if (name == "validate") return run_validate(c.table, c.validate, c.seed);
    if (name == "equilibrate") return run_equilibration(c.table, c.equilibrate, c.seed);
    if (name == "tails") return run_tail_scaling(c.table, c.tails, c.seed);
    if (name == "subexp") return run_subexp_lowerbound(c.table, c.subexp, c.seed);
    if (name == "drift") return run_drift_check(c.table, c.drift, c.seed);
    if (name == "grazing") return run_grazing_scaling(c.table, c.grazing, c.seed);
    throw InvalidState("unknown experiment '" + name + "'");
  }, py::arg("name"), py::arg("config"));

  m.def("run_cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "thermo_billiards");
    std::vector<const char *> argv;
    for (const std::string &a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Run the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
