#include "infogain/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "infogain/bootstrap.hpp"
#include "infogain/errors.hpp"
#include "infogain/fingerprint.hpp"
#include "infogain/io.hpp"
#include "infogain/rational.hpp"
#include "infogain/report.hpp"
#include "infogain/shapley.hpp"
#include "infogain/synth.hpp"

namespace infogain {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string schema, data, out, format = "json";
  std::string v1, ground;
  std::optional<double> alpha;
  bool cross_fit = false;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::size_t sampled = 0;
  std::string signals;
  std::string spec;
  std::optional<std::size_t> replicates;
  std::optional<std::uint64_t> bootstrap_seed;
  std::vector<std::string> grounds;
  std::vector<std::string> gains;
  std::vector<std::string> results;
  std::vector<double> axis;
  std::string preset;
  std::size_t rows = 4000;
  std::string out_dir;
  std::string manifest;
};

struct Inputs {
  SchemaConfig config;
  Dataset data;
  std::string schema_hash;
  std::string dataset_hash;
  LoadStats stats;
};

Inputs load_inputs(const Options& o, std::ostream& err) {
  const std::string schema_text = read_file(o.schema);
  SchemaConfig config = parse_schema_text(schema_text);
  for (const auto& w : config.warnings) err << "warning [" << w.code << "]: " << w.message << '\n';
  LoadStats stats;
  Dataset data = load_dataset(o.data, config, &stats);
  if (stats.rows_dropped) err << "dropped " << stats.rows_dropped << " rows with missing values\n";
  return Inputs{std::move(config), std::move(data), fingerprint_bytes(schema_text),
                fingerprint_bytes(read_file(o.data)), stats};
}

ResultFormat result_format(const Options& o) { return o.format == "csv" ? ResultFormat::kCsv : ResultFormat::kJson; }

Provenance provenance_for(const Inputs& in, double alpha, std::string mode, std::optional<std::uint64_t> seed) {
  Provenance p;
  p.schema_hash = in.schema_hash;
  p.dataset_hash = in.dataset_hash;
  p.alpha = alpha;
  p.mode = std::move(mode);
  p.seed = seed;
  p.decision_bins = in.config.options.decision_bins;
  p.rows = in.data.num_rows();
  return p;
}

std::string timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const fs::path& output, const std::vector<std::string>& argv, const Json& flags,
                    const std::string& schema_hash, const std::string& dataset_hash) {
  Json m;
  m["format_version"] = kFormatVersion;
  m["kind"] = "manifest";
  m["subcommand"] = argv.front();
  m["argv"] = argv;
  m["flags"] = flags;
  m["inputs"] = {{"schema_hash", schema_hash}, {"dataset_hash", dataset_hash}};
  m["tool_version"] = kToolVersion;
  m["timestamp"] = timestamp();
  write_file(output.string() + ".manifest.json", m.dump(2) + "\n");
}

Json common_flags(const Options& o) {
  return Json{{"schema", o.schema}, {"data", o.data}, {"out", o.out.empty() ? Json(nullptr) : Json(o.out)},
              {"format", o.format}};
}

std::string gain_line(const std::string& v1, const std::string& ground, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return "gamma(" + v1 + "; " + ground + ") = " + buf + "\n";
}

// ---------------------------------------------------------------------------

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  const Inputs in = load_inputs(o, err);
  const auto problems = validate_problem(in.config.problem);
  if (has_errors(problems)) {
    for (const auto& d : problems) err << "error [" << d.code << "]: " << d.message << '\n';
    return kExitDomain;
  }
  out << "ok: " << in.data.num_rows() << " rows, " << in.data.schema().num_signals() << " signals, "
      << in.data.schema().decisions().size() << " decision columns";
  if (in.stats.rows_dropped) out << ", " << in.stats.rows_dropped << " rows dropped";
  out << '\n';
  return kExitOk;
}

int cmd_gain(const Options& o, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  const Inputs in = load_inputs(o, err);
  const auto& schema = in.data.schema();
  const VarSet v1 = schema.parse_varset(o.v1);
  const VarSet ground = schema.parse_varset(o.ground);
  const double alpha = o.alpha.value_or(in.config.options.smoothing);

  GainReport report;
  if (o.cross_fit) {
    const CrossFitPayoff oracle(in.data, in.config.problem, alpha, o.seed);
    report.gain = oracle.gain(v1, ground);
    report.provenance = provenance_for(in, alpha, "cross_fit", o.seed);
  } else {
    const JointDistribution joint = estimate_joint(in.data, alpha);
    report.gain = information_gain(joint, in.config.problem, v1, ground);
    report.provenance = provenance_for(in, alpha, "in_sample", std::nullopt);
  }
  report.v1 = schema.names_of(v1);
  report.ground = schema.names_of(ground);
  out << gain_line(varset_label(schema, v1), varset_label(schema, ground), report.gain.value);

  if (!o.out.empty()) {
    write_results(report, o.out, result_format(o));
    Json flags = common_flags(o);
    flags["v1"] = o.v1;
    flags["ground"] = o.ground;
    flags["alpha"] = alpha;
    flags["cross_fit"] = o.cross_fit;
    flags["seed"] = o.seed;
    write_manifest(o.out, argv, flags, in.schema_hash, in.dataset_hash);
  }
  return kExitOk;
}

int cmd_shapley(const Options& o, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  const Inputs in = load_inputs(o, err);
  const auto& schema = in.data.schema();
  const VarSet ground = schema.parse_varset(o.ground);
  const VarSet signal_set = o.signals.empty() ? schema.all_signals() : schema.parse_varset(o.signals);
  const std::vector<std::size_t> signals(signal_set.begin(), signal_set.end());
  const double alpha = o.alpha.value_or(in.config.options.smoothing);
  ShapleyOptions options;
  options.threads = o.threads;

  std::optional<JointDistribution> joint;
  std::unique_ptr<PayoffOracle> oracle;
  if (o.cross_fit) {
    oracle = std::make_unique<CrossFitPayoff>(in.data, in.config.problem, alpha, o.seed);
  } else {
    joint.emplace(estimate_joint(in.data, alpha));
    oracle = std::make_unique<InSamplePayoff>(*joint, in.config.problem);
  }

  ShapleyResult result;
  result.report = o.sampled ? shapley_sampled(*oracle, signals, ground, o.sampled, o.seed, options)
                            : shapley_exact(*oracle, signals, ground, options);
  const bool seeded = o.sampled || o.cross_fit;
  result.provenance = provenance_for(in, alpha, o.cross_fit ? "cross_fit" : "in_sample",
                                     seeded ? std::optional<std::uint64_t>(o.seed) : std::nullopt);
  out << summary_table(result.report);

  if (!o.out.empty()) {
    write_results(result, o.out, result_format(o));
    Json flags = common_flags(o);
    flags["ground"] = o.ground;
    flags["signals"] = o.signals.empty() ? Json(nullptr) : Json(o.signals);
    flags["sampled"] = o.sampled ? Json(o.sampled) : Json(nullptr);
    flags["seed"] = o.seed;
    flags["alpha"] = alpha;
    flags["cross_fit"] = o.cross_fit;
    flags["threads"] = o.threads;
    write_manifest(o.out, argv, flags, in.schema_hash, in.dataset_hash);
  }
  return kExitOk;
}

StatisticRequest gain_request(const SignalSchema& schema, const std::string& v1, const std::string& ground) {
  StatisticRequest r;
  r.kind = StatisticRequest::Kind::kGain;
  r.v1 = schema.parse_varset(v1);
  r.ground = schema.parse_varset(ground);
  return r;
}

StatisticRequest shapley_request(const SignalSchema& schema, const std::string& ground, std::string label = {}) {
  StatisticRequest r;
  r.kind = StatisticRequest::Kind::kShapley;
  r.ground = schema.parse_varset(ground);
  r.label = std::move(label);
  return r;
}

int cmd_bootstrap(const Options& o, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  const Inputs in = load_inputs(o, err);
  const auto& schema = in.data.schema();

  BootstrapSpec spec;
  spec.alpha = in.config.options.smoothing;
  if (!o.spec.empty()) {
    Json doc;
    try {
      doc = Json::parse(read_file(o.spec));
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError("parse-error", o.spec, e.what());
    }
    try {
      if (doc.contains("replicates")) spec.replicates = doc["replicates"].get<std::size_t>();
      if (doc.contains("seed")) spec.seed = doc["seed"].get<std::uint64_t>();
      if (doc.contains("alpha")) spec.alpha = doc["alpha"].get<double>();
      if (doc.contains("threads")) spec.threads = doc["threads"].get<std::size_t>();
      if (doc.contains("statistics")) {
        for (std::size_t i = 0; i < doc["statistics"].size(); ++i) {
          const Json& s = doc["statistics"][i];
          const std::string kind = s.value("kind", "shapley");
          if (kind == "gain") {
            spec.statistics.push_back(gain_request(schema, s.at("v1").get<std::string>(), s.at("ground").get<std::string>()));
          } else if (kind == "shapley") {
            spec.statistics.push_back(shapley_request(schema, s.at("ground").get<std::string>(), s.value("label", "")));
          } else {
            throw SchemaError("invalid-statistic", "statistics[" + std::to_string(i) + "].kind",
                              "expected \"shapley\" or \"gain\"");
          }
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError("invalid-spec", o.spec, e.what());
    }
  }
  if (o.replicates) spec.replicates = *o.replicates;
  if (o.alpha) spec.alpha = *o.alpha;
  if (o.bootstrap_seed) spec.seed = *o.bootstrap_seed;
  if (o.threads) spec.threads = o.threads;
  for (const auto& g : o.grounds) spec.statistics.push_back(shapley_request(schema, g));
  for (const auto& g : o.gains) {
    const auto colon = g.find(':');
    if (colon == std::string::npos) {
      throw SchemaError("invalid-gain", g, "expected V1:GROUND, e.g. flicker:human");
    }
    spec.statistics.push_back(gain_request(schema, g.substr(0, colon), g.substr(colon + 1)));
  }

  BootstrapReport report;
  report.result = bootstrap_run(in.data, in.config.problem, spec);
  report.provenance = provenance_for(in, spec.alpha, "in_sample", spec.seed);
  write_results(report, o.out, result_format(o));
  out << summary_table(report.result);

  Json flags = common_flags(o);
  flags["spec"] = o.spec.empty() ? Json(nullptr) : Json(o.spec);
  flags["replicates"] = spec.replicates;
  flags["seed"] = spec.seed;
  flags["alpha"] = spec.alpha;
  flags["threads"] = o.threads;
  flags["ground"] = o.grounds;
  flags["gain"] = o.gains;
  write_manifest(o.out, argv, flags, in.schema_hash, in.dataset_hash);
  return kExitOk;
}

int cmd_report(const Options& o, const std::vector<std::string>& argv, std::ostream& out) {
  std::vector<BootstrapResult> results;
  std::string hashes;
  for (const auto& path : o.results) {
    BootstrapReport r = load_bootstrap_report(path);
    hashes += r.provenance.dataset_hash;
    results.push_back(std::move(r.result));
  }
  std::optional<std::pair<double, double>> axis;
  if (!o.axis.empty()) axis = std::make_pair(o.axis[0], o.axis[1]);
  const PlotSpec spec = build_plot_spec(results, axis);
  write_file(o.out, render_svg(spec));
  std::size_t strips = 0;
  for (const auto& g : spec.groups) strips += g.strips.size();
  out << "wrote " << o.out << ": " << spec.groups.size() << " signals, " << strips << " strips, axis ["
      << spec.axis_lo << ", " << spec.axis_hi << "]\n";

  Json flags{{"results", o.results}, {"out", o.out}, {"axis", o.axis}};
  write_manifest(o.out, argv, flags, results.front().schema_fingerprint, fingerprint_bytes(hashes));
  return kExitOk;
}

int cmd_synth(const Options& o, const std::vector<std::string>& argv, std::ostream& out) {
  Preset preset = o.preset == "xor" ? xor_preset() : deepfake_preset();
  const Dataset data = generate_dataset(preset.population, preset.problem, preset.agents, o.rows, o.seed);
  const SchemaConfig config = make_schema_config(preset.state_column, data.schema(), preset.problem);

  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  if (ec) throw IoError("io-error", o.out_dir, ec.message());
  const fs::path schema_path = fs::path(o.out_dir) / "schema.json";
  const fs::path data_path = fs::path(o.out_dir) / "dataset.csv";
  const std::string schema_text = schema_to_json(config).dump(2) + "\n";
  std::ostringstream csv;
  write_dataset(csv, data, config);
  write_file(schema_path, schema_text);
  write_file(data_path, csv.str());

  out << "wrote " << data.num_rows() << " rows to " << data_path.string() << " and " << schema_path.string() << '\n';
  for (const auto& agent : preset.agents) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", agent_accuracy(preset.population, preset.problem, agent));
    out << "  agent " << agent.name << ": population accuracy " << buf << '\n';
  }
  Json flags{{"preset", o.preset}, {"rows", o.rows}, {"seed", o.seed}, {"out_dir", o.out_dir}};
  write_manifest(data_path, argv, flags, fingerprint_bytes(schema_text), fingerprint_bytes(csv.str()));
  return kExitOk;
}

int cmd_replay(const Options& o, std::ostream& out, std::ostream& err) {
  Json m;
  try {
    m = Json::parse(read_file(o.manifest));
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("parse-error", o.manifest, e.what());
  }
  if (!m.is_object() || m.value("kind", "") != "manifest" || !m.contains("argv")) {
    throw SchemaError("invalid-manifest", o.manifest, "not a run manifest");
  }
  const auto argv = m["argv"].get<std::vector<std::string>>();
  if (argv.empty() || argv.front() == "replay") throw SchemaError("invalid-manifest", "argv", "nothing to replay");
  const Json& flags = m["flags"];
  if (flags.contains("schema") && flags.contains("data")) {
    const std::string schema_hash = fingerprint_bytes(read_file(flags["schema"].get<std::string>()));
    const std::string dataset_hash = fingerprint_bytes(read_file(flags["data"].get<std::string>()));
    if (schema_hash != m["inputs"]["schema_hash"] || dataset_hash != m["inputs"]["dataset_hash"]) {
      throw DataError("input-changed", o.manifest, "schema or dataset differs from the recorded run");
    }
  }
  return run_cli(argv, out, err);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Information value of signals for decision problems", "infogain"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  auto data_options = [&](CLI::App* sub) {
    sub->add_option("--schema", o.schema, "schema JSON")->required();
    sub->add_option("--data", o.data, "dataset CSV")->required();
  };
  auto output_options = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--out", o.out, "output path");
    if (required) opt->required();
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* validate = app.add_subcommand("validate", "check a schema and dataset");
  data_options(validate);

  auto* gain = app.add_subcommand("gain", "information gain of V1 over a ground set");
  data_options(gain);
  gain->add_option("--v1", o.v1, "comma-separated variables, or none")->required();
  gain->add_option("--ground", o.ground, "comma-separated variables, or none")->required();
  gain->add_option("--alpha", o.alpha, "add-alpha smoothing");
  gain->add_flag("--cross-fit", o.cross_fit, "two-fold cross-fitted payoffs");
  gain->add_option("--seed", o.seed, "split seed for --cross-fit");
  output_options(gain, false);

  auto* shapley = app.add_subcommand("shapley", "Shapley attribution of signals over a ground set");
  data_options(shapley);
  shapley->add_option("--ground", o.ground, "comma-separated variables, or none")->required();
  shapley->add_option("--signals", o.signals, "signals to attribute (default: all)");
  shapley->add_option("--sampled", o.sampled, "permutations for Monte Carlo estimation");
  shapley->add_option("--seed", o.seed, "random seed");
  shapley->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  shapley->add_option("--alpha", o.alpha, "add-alpha smoothing");
  shapley->add_flag("--cross-fit", o.cross_fit, "two-fold cross-fitted payoffs");
  output_options(shapley, false);

  auto* bootstrap = app.add_subcommand("bootstrap", "bootstrap distributions of gains and Shapley values");
  data_options(bootstrap);
  bootstrap->add_option("--spec", o.spec, "bootstrap spec JSON");
  bootstrap->add_option("--replicates", o.replicates, "number of replicates (default 1000)");
  bootstrap->add_option("--seed", o.bootstrap_seed, "random seed (default 0)");
  bootstrap->add_option("--alpha", o.alpha, "add-alpha smoothing");
  bootstrap->add_option("--ground", o.grounds, "Shapley ground set (repeatable)");
  bootstrap->add_option("--gain", o.gains, "gain statistic V1:GROUND (repeatable)");
  bootstrap->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  output_options(bootstrap, true);

  auto* report = app.add_subcommand("report", "render bootstrap results as SVG");
  report->add_option("--results", o.results, "bootstrap result JSON files")->required()->expected(1, -1);
  report->add_option("--out", o.out, "SVG path")->required();
  report->add_option("--axis", o.axis, "axis range lo,hi")->expected(2)->delimiter(',');

  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset and schema");
  synth->add_option("--preset", o.preset, "xor or deepfake")->required()->check(CLI::IsMember({"xor", "deepfake"}));
  synth->add_option("--rows", o.rows, "rows to generate");
  synth->add_option("--seed", o.seed, "random seed");
  synth->add_option("--out-dir", o.out_dir, "output directory")->required();

  auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  replay->add_option("--manifest", o.manifest, "manifest JSON")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitDomain;
  }

  try {
    if (*validate) return cmd_validate(o, out, err);
    if (*gain) return cmd_gain(o, args, out, err);
    if (*shapley) return cmd_shapley(o, args, out, err);
    if (*bootstrap) return cmd_bootstrap(o, args, out, err);
    if (*report) return cmd_report(o, args, out);
    if (*synth) return cmd_synth(o, args, out);
    if (*replay) return cmd_replay(o, out, err);
  } catch (const IoError& e) {
    err << "error [" << e.code() << "]: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "error [" << e.code() << "]: " << e.what() << '\n';
    return kExitDomain;
  } catch (const fs::filesystem_error& e) {
    err << "error [io-error]: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitDomain;
}

}  // namespace infogain
