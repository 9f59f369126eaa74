#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "infogain/bootstrap.hpp"
#include "infogain/cli.hpp"
#include "infogain/errors.hpp"
#include "infogain/fingerprint.hpp"
#include "infogain/io.hpp"
#include "infogain/rational.hpp"
#include "infogain/report.hpp"
#include "infogain/shapley.hpp"
#include "infogain/synth.hpp"

namespace py = pybind11;
using namespace infogain;

namespace {

// A schema plus the dataset it describes. Results are returned as the same
// JSON documents the command-line tool writes.
class Study {
 public:
  Study(const std::string& schema_text, const std::string& csv_text)
      : config_(parse_schema_text(schema_text)),
        data_(load(csv_text)),
        schema_hash_(fingerprint_bytes(schema_text)),
        dataset_hash_(fingerprint_bytes(csv_text)) {}

  static Study from_files(const std::string& schema_path, const std::string& data_path) {
    return Study(read_file(schema_path), read_file(data_path));
  }

  std::size_t rows() const { return data_.num_rows(); }
  std::vector<std::string> signals() const { return data_.schema().names_of(data_.schema().all_signals()); }
  std::vector<std::string> decisions() const {
    std::vector<std::string> out;
    for (const auto& d : data_.schema().decisions()) out.push_back(d.name);
    return out;
  }

  double rational_payoff(const std::string& vars, std::optional<double> alpha) const {
    const JointDistribution joint = estimate_joint(data_, alpha_or(alpha));
    return infogain::rational_payoff(joint, config_.problem, data_.schema().parse_varset(vars));
  }

  std::string gain(const std::string& v1, const std::string& ground, std::optional<double> alpha, bool cross_fit,
                   std::uint64_t seed) const {
    const auto& schema = data_.schema();
    const VarSet a = schema.parse_varset(v1), g = schema.parse_varset(ground);
    const double al = alpha_or(alpha);
    GainReport report;
    if (cross_fit) {
      report.gain = CrossFitPayoff(data_, config_.problem, al, seed).gain(a, g);
    } else {
      report.gain = information_gain(estimate_joint(data_, al), config_.problem, a, g);
    }
    report.v1 = schema.names_of(a);
    report.ground = schema.names_of(g);
    report.provenance = provenance(al, cross_fit, cross_fit ? std::optional(seed) : std::nullopt);
    return to_json(report).dump();
  }

  std::string shapley(const std::string& ground, const std::string& signals, std::size_t sampled,
                      std::uint64_t seed, std::optional<double> alpha, bool cross_fit, std::size_t threads) const {
    const auto& schema = data_.schema();
    const VarSet g = schema.parse_varset(ground);
    const VarSet s = signals.empty() ? schema.all_signals() : schema.parse_varset(signals);
    const std::vector<std::size_t> positions(s.begin(), s.end());
    const double al = alpha_or(alpha);
    ShapleyOptions options;
    options.threads = threads;

    std::optional<JointDistribution> joint;
    std::unique_ptr<PayoffOracle> oracle;
    if (cross_fit) {
      oracle = std::make_unique<CrossFitPayoff>(data_, config_.problem, al, seed);
    } else {
      joint.emplace(estimate_joint(data_, al));
      oracle = std::make_unique<InSamplePayoff>(*joint, config_.problem);
    }
    ShapleyResult result;
    result.report = sampled ? shapley_sampled(*oracle, positions, g, sampled, seed, options)
                            : shapley_exact(*oracle, positions, g, options);
    const bool seeded = sampled || cross_fit;
    result.provenance = provenance(al, cross_fit, seeded ? std::optional(seed) : std::nullopt);
    return to_json(result).dump();
  }

  std::string bootstrap(std::size_t replicates, std::uint64_t seed, const std::vector<std::string>& grounds,
                        std::optional<double> alpha, std::size_t threads) const {
    BootstrapSpec spec;
    spec.replicates = replicates;
    spec.seed = seed;
    spec.alpha = alpha_or(alpha);
    spec.threads = threads;
    if (grounds.empty()) {
      spec.statistics = default_statistics(data_.schema());
    } else {
      for (const auto& g : grounds) {
        StatisticRequest r;
        r.kind = StatisticRequest::Kind::kShapley;
        r.ground = data_.schema().parse_varset(g);
        spec.statistics.push_back(r);
      }
    }
    BootstrapReport report;
    report.result = bootstrap_run(data_, config_.problem, spec);
    report.provenance = provenance(spec.alpha, false, seed);
    return to_json(report).dump();
  }

 private:
  Dataset load(const std::string& csv_text) const {
    std::istringstream in(csv_text);
    return parse_dataset(in, config_);
  }

  double alpha_or(std::optional<double> alpha) const { return alpha.value_or(config_.options.smoothing); }

  Provenance provenance(double alpha, bool cross_fit, std::optional<std::uint64_t> seed) const {
    Provenance p;
    p.schema_hash = schema_hash_;
    p.dataset_hash = dataset_hash_;
    p.alpha = alpha;
    p.mode = cross_fit ? "cross_fit" : "in_sample";
    p.seed = seed;
    p.decision_bins = config_.options.decision_bins;
    p.rows = data_.num_rows();
    return p;
  }

  SchemaConfig config_;
  Dataset data_;
  std::string schema_hash_;
  std::string dataset_hash_;
};

std::string render_report(const std::vector<std::string>& documents, std::optional<std::pair<double, double>> axis) {
  std::vector<BootstrapResult> results;
  for (const auto& d : documents) results.push_back(bootstrap_report_from_json(Json::parse(d)).result);
  return render_svg(build_plot_spec(results, axis));
}

py::tuple synth(const std::string& preset_name, std::size_t rows, std::uint64_t seed) {
  if (preset_name != "xor" && preset_name != "deepfake") {
    throw SchemaError("unknown-preset", "preset", "preset must be xor or deepfake");
  }
  const Preset preset = preset_name == "xor" ? xor_preset() : deepfake_preset();
  const Dataset data = generate_dataset(preset.population, preset.problem, preset.agents, rows, seed);
  const SchemaConfig config = make_schema_config(preset.state_column, data.schema(), preset.problem);
  std::ostringstream csv;
  write_dataset(csv, data, config);
  return py::make_tuple(schema_to_json(config).dump(2) + "\n", csv.str());
}

py::tuple run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = run_cli(args, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_infogain, m) {
  m.doc() = "Value-of-information analysis of decision data";
  m.attr("__version__") = kToolVersion;

  auto base = py::register_exception<Error>(m, "InfogainError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<Study>(m, "Study")
      .def(py::init<const std::string&, const std::string&>(), py::arg("schema_text"), py::arg("csv_text"))
      .def_static("from_files", &Study::from_files, py::arg("schema_path"), py::arg("data_path"))
      .def_property_readonly("rows", &Study::rows)
      .def_property_readonly("signals", &Study::signals)
      .def_property_readonly("decisions", &Study::decisions)
      .def("rational_payoff", &Study::rational_payoff, py::arg("vars"), py::arg("alpha") = py::none())
      .def("gain", &Study::gain, py::arg("v1"), py::arg("ground") = "none", py::arg("alpha") = py::none(),
           py::arg("cross_fit") = false, py::arg("seed") = 0)
      .def("shapley", &Study::shapley, py::arg("ground") = "none", py::arg("signals") = "",
           py::arg("sampled") = 0, py::arg("seed") = 0, py::arg("alpha") = py::none(),
           py::arg("cross_fit") = false, py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>())
      .def("bootstrap", &Study::bootstrap, py::arg("replicates") = 1000, py::arg("seed") = 0,
           py::arg("grounds") = std::vector<std::string>{}, py::arg("alpha") = py::none(), py::arg("threads") = 0,
           py::call_guard<py::gil_scoped_release>());

  m.def("render_report", &render_report, py::arg("documents"), py::arg("axis") = py::none());
  m.def("synth", &synth, py::arg("preset"), py::arg("rows") = 4000, py::arg("seed") = 0);
  m.def("run_cli", &run, py::arg("args"));
}
