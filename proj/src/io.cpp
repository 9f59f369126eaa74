#include "infogain/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "infogain/errors.hpp"

namespace infogain {

namespace {

// ---------------------------------------------------------------------------
// JSON field access with paths
// ---------------------------------------------------------------------------

[[noreturn]] void fail(const std::string& code, const std::string& path, const std::string& message) {
  throw SchemaError(code, path, message);
}

const Json& require(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail("invalid-type", path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail("missing-field", path + "." + key, "required field is missing");
  return *it;
}

std::string require_string(const Json& obj, const char* key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_string()) fail("invalid-type", path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<std::string> string_list(const Json& v, const std::string& path) {
  if (!v.is_array()) fail("invalid-type", path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) fail("invalid-type", path + "[" + std::to_string(i) + "]", "expected a string");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

void require_unique(const std::vector<std::string>& values, const std::string& path) {
  std::set<std::string> seen;
  for (const auto& v : values) {
    if (!seen.insert(v).second) fail("duplicate-value", path, "duplicate '" + v + "'");
  }
}

ValueDomain parse_grid(const Json& grid, const std::string& path) {
  if (!grid.is_object()) fail("invalid-type", path, "expected an object");
  if (grid.contains("steps")) {
    const Json& steps = grid["steps"];
    if (!steps.is_number_integer() || steps.get<long long>() < 1 || steps.get<long long>() > 1000000) {
      fail("invalid-grid", path + ".steps", "steps must be an integer in [1, 1000000]");
    }
    return ValueDomain::uniform_grid(steps.get<int>());
  }
  if (grid.contains("points")) {
    const auto labels = string_list(grid["points"], path + ".points");
    std::vector<GridPoint> points;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const auto p = parse_grid_point(labels[i]);
      if (!p) {
        fail("invalid-grid", path + ".points[" + std::to_string(i) + "]",
             "'" + labels[i] + "' is not a decimal or fraction");
      }
      points.push_back(*p);
    }
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (!(points[i - 1] < points[i])) {
        fail("grid-not-strictly-increasing", path + ".points", "grid points must strictly increase");
      }
    }
    if (points.empty()) fail("empty-domain", path + ".points", "grid has no points");
    return ValueDomain::numeric(std::move(points));
  }
  fail("invalid-grid", path, "grid needs 'steps' or 'points'");
}

Json grid_to_json(const ValueDomain& d) {
  const auto n = static_cast<std::int64_t>(d.points.size()) - 1;
  bool uniform = n >= 1;
  for (std::int64_t k = 0; uniform && k <= n; ++k) {
    uniform = d.points[static_cast<std::size_t>(k)] == GridPoint{k, n};
  }
  if (uniform) return Json{{"steps", n}};
  return Json{{"points", d.labels}};
}

// floor((p - lo) * bins / (hi - lo)), clamped to bins - 1.
std::size_t bin_of(const GridPoint& p, const GridPoint& lo, const GridPoint& hi, int bins) {
  const __int128 num = (static_cast<__int128>(p.ticks) * lo.scale - static_cast<__int128>(lo.ticks) * p.scale) *
                       bins * (static_cast<__int128>(hi.scale) * lo.scale);
  const __int128 den = (static_cast<__int128>(hi.ticks) * lo.scale - static_cast<__int128>(lo.ticks) * hi.scale) *
                       (static_cast<__int128>(p.scale) * lo.scale);
  auto b = static_cast<long long>(num / den);
  return static_cast<std::size_t>(std::clamp<long long>(b, 0, bins - 1));
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct BinnedColumn {
  ValueDomain domain;
  std::vector<std::uint32_t> map;  // declared index -> bin index, empty if unbinned
};

BinnedColumn bin_domain(const ValueDomain& declared, int bins, const std::string& path) {
  BinnedColumn out;
  const GridPoint lo = declared.points.front();
  const GridPoint hi = declared.points.back();
  if (!(lo < hi)) fail("binning-degenerate", path, "cannot bin a single-point grid");
  std::vector<std::string> labels;
  const double l = lo.value(), h = hi.value();
  for (int b = 0; b < bins; ++b) {
    const double a = l + (h - l) * b / bins;
    const double z = l + (h - l) * (b + 1) / bins;
    labels.push_back("[" + short_number(a) + "," + short_number(z) + (b + 1 == bins ? "]" : ")"));
  }
  out.domain = ValueDomain::categorical(std::move(labels));
  for (const auto& p : declared.points) out.map.push_back(static_cast<std::uint32_t>(bin_of(p, lo, hi, bins)));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Schema
// ---------------------------------------------------------------------------

SchemaConfig parse_schema(const Json& doc) {
  if (!doc.is_object()) fail("invalid-type", "$", "schema must be a JSON object");

  const Json& state = require(doc, "state", "$");
  const std::string state_column = require_string(state, "column", "state");
  const auto state_labels = string_list(require(state, "labels", "state"), "state.labels");
  require_unique(state_labels, "state.labels");
  if (state_labels.size() < 2) fail("too-few-states", "state.labels", "at least 2 states required");

  std::vector<BasicSignal> signals;
  const Json& sigs = require(doc, "signals", "$");
  if (!sigs.is_array()) fail("invalid-type", "signals", "expected an array");
  for (std::size_t i = 0; i < sigs.size(); ++i) {
    const std::string path = "signals[" + std::to_string(i) + "]";
    BasicSignal s{require_string(sigs[i], "column", path),
                  string_list(require(sigs[i], "values", path), path + ".values")};
    require_unique(s.values, path + ".values");
    if (s.values.empty()) fail("empty-domain", path + ".values", "signal has no values");
    signals.push_back(std::move(s));
  }

  SchemaOptions options;
  if (doc.contains("options")) {
    const Json& o = doc["options"];
    if (!o.is_object()) fail("invalid-type", "options", "expected an object");
    if (o.contains("smoothing")) {
      if (!o["smoothing"].is_number() || !(o["smoothing"].get<double>() >= 0.0)) {
        fail("invalid-smoothing", "options.smoothing", "smoothing must be a non-negative number");
      }
      options.smoothing = o["smoothing"].get<double>();
    }
    if (o.contains("decision_bins") && !o["decision_bins"].is_null()) {
      if (!o["decision_bins"].is_number_integer() || o["decision_bins"].get<long long>() < 2 ||
          o["decision_bins"].get<long long>() > 100000) {
        fail("invalid-bins", "options.decision_bins", "decision_bins must be an integer >= 2");
      }
      options.decision_bins = o["decision_bins"].get<int>();
    }
    if (o.contains("missing")) {
      const Json& m = o["missing"];
      if (m == "error") options.missing = MissingPolicy::kError;
      else if (m == "drop_row") options.missing = MissingPolicy::kDropRow;
      else fail("invalid-missing-policy", "options.missing", "expected \"error\" or \"drop_row\"");
    }
    if (o.contains("ignore_columns")) {
      options.ignore_columns = string_list(o["ignore_columns"], "options.ignore_columns");
    }
  }

  std::vector<DecisionColumn> decisions;
  std::vector<ValueDomain> declared;
  if (doc.contains("decisions")) {
    const Json& decs = doc["decisions"];
    if (!decs.is_array()) fail("invalid-type", "decisions", "expected an array");
    for (std::size_t i = 0; i < decs.size(); ++i) {
      const std::string path = "decisions[" + std::to_string(i) + "]";
      DecisionColumn c;
      c.name = require_string(decs[i], "column", path);
      const std::string role = decs[i].contains("role") ? require_string(decs[i], "role", path) : "other";
      const auto r = parse_role(role);
      if (!r) fail("invalid-role", path + ".role", "role must be human, ai, human_ai or other");
      c.role = *r;
      const bool has_values = decs[i].contains("values");
      const bool has_grid = decs[i].contains("grid");
      if (has_values == has_grid) fail("invalid-domain", path, "give exactly one of 'values' or 'grid'");
      if (has_values) {
        auto labels = string_list(decs[i]["values"], path + ".values");
        require_unique(labels, path + ".values");
        if (labels.empty()) fail("empty-domain", path + ".values", "decision column has no values");
        c.domain = ValueDomain::categorical(std::move(labels));
      } else {
        c.domain = parse_grid(decs[i]["grid"], path + ".grid");
      }
      declared.push_back(c.domain);
      if (options.decision_bins && c.domain.is_numeric()) {
        c.domain = bin_domain(c.domain, *options.decision_bins, path + ".grid").domain;
      }
      decisions.push_back(std::move(c));
    }
  }

  // Column names must be distinct across state, signals and decisions.
  {
    std::map<std::string, std::string> seen{{state_column, "state.column"}};
    auto check = [&](const std::string& name, const std::string& path) {
      if (!seen.emplace(name, path).second) {
        fail("duplicate-column", path, "column '" + name + "' already used by " + seen[name]);
      }
    };
    for (std::size_t i = 0; i < signals.size(); ++i) check(signals[i].name, "signals[" + std::to_string(i) + "].column");
    for (std::size_t i = 0; i < decisions.size(); ++i) check(decisions[i].name, "decisions[" + std::to_string(i) + "].column");
  }

  const Json& payoff = require(doc, "payoff", "$");
  const std::string kind = require_string(payoff, "kind", "payoff");
  std::optional<DecisionProblem> problem;
  StateSpace states{state_labels};
  if (kind == "brier") {
    ValueDomain grid = payoff.contains("grid") ? parse_grid(payoff["grid"], "payoff.grid")
                                               : ValueDomain::uniform_grid(100);
    problem.emplace(states, std::move(grid), PayoffFunction::brier());
  } else if (kind == "matrix") {
    auto labels = string_list(require(payoff, "decisions", "payoff"), "payoff.decisions");
    require_unique(labels, "payoff.decisions");
    const Json& rows = require(payoff, "rows", "payoff");
    if (!rows.is_array()) fail("invalid-type", "payoff.rows", "expected an array of rows");
    std::vector<std::vector<double>> matrix;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string path = "payoff.rows[" + std::to_string(i) + "]";
      if (!rows[i].is_array()) fail("invalid-type", path, "expected an array of numbers");
      std::vector<double> row;
      for (std::size_t j = 0; j < rows[i].size(); ++j) {
        if (!rows[i][j].is_number()) fail("invalid-type", path + "[" + std::to_string(j) + "]", "expected a number");
        row.push_back(rows[i][j].get<double>());
      }
      matrix.push_back(std::move(row));
    }
    problem.emplace(states, ValueDomain::categorical(std::move(labels)),
                    PayoffFunction::from_matrix(std::move(matrix)));
  } else {
    fail("invalid-payoff-kind", "payoff.kind", "expected \"brier\" or \"matrix\"");
  }

  std::vector<Diagnostic> warnings;
  for (const auto& d : validate_problem(*problem)) {
    if (d.severity == Severity::kError) fail(d.code, "payoff", d.message);
    warnings.push_back(d);
  }
  SignalSchema schema(std::move(signals), std::move(decisions));
  for (const auto& d : schema.validate()) {
    if (d.severity == Severity::kError) fail(d.code, "", d.message);
    warnings.push_back(d);
  }
  return SchemaConfig{state_column, std::move(schema), std::move(declared), std::move(*problem),
                      std::move(options), std::move(warnings)};
}

SchemaConfig parse_schema_text(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("parse-error", "$", e.what());
  }
  return parse_schema(doc);
}

SchemaConfig load_schema(const std::filesystem::path& path) {
  return parse_schema_text(read_file(path));
}

SchemaConfig make_schema_config(std::string state_column, const SignalSchema& schema,
                                const DecisionProblem& problem, SchemaOptions options) {
  std::vector<ValueDomain> declared;
  for (const auto& d : schema.decisions()) declared.push_back(d.domain);
  Json doc = schema_to_json(SchemaConfig{state_column, schema, declared, problem, options, {}});
  return parse_schema(doc);
}

Json schema_to_json(const SchemaConfig& config) {
  Json doc;
  doc["state"] = {{"column", config.state_column}, {"labels", config.problem.states().labels}};
  Json sigs = Json::array();
  for (const auto& s : config.schema.signals()) sigs.push_back({{"column", s.name}, {"values", s.values}});
  doc["signals"] = std::move(sigs);
  Json decs = Json::array();
  for (std::size_t i = 0; i < config.schema.decisions().size(); ++i) {
    const auto& c = config.schema.decisions()[i];
    const ValueDomain& d = i < config.declared_decision_domains.size() ? config.declared_decision_domains[i] : c.domain;
    Json col{{"column", c.name}, {"role", std::string(role_name(c.role))}};
    if (d.is_numeric()) col["grid"] = grid_to_json(d);
    else col["values"] = d.labels;
    decs.push_back(std::move(col));
  }
  doc["decisions"] = std::move(decs);
  const auto& problem = config.problem;
  if (problem.is_brier()) {
    doc["payoff"] = {{"kind", "brier"}, {"grid", grid_to_json(problem.decisions())}};
  } else {
    doc["payoff"] = {{"kind", "matrix"},
                     {"decisions", problem.decisions().labels},
                     {"rows", problem.payoff_function().matrix}};
  }
  Json options{{"smoothing", config.options.smoothing},
               {"missing", config.options.missing == MissingPolicy::kError ? "error" : "drop_row"}};
  if (config.options.decision_bins) options["decision_bins"] = *config.options.decision_bins;
  if (!config.options.ignore_columns.empty()) options["ignore_columns"] = config.options.ignore_columns;
  doc["options"] = std::move(options);
  return doc;
}

// ---------------------------------------------------------------------------
// Dataset CSV
// ---------------------------------------------------------------------------

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

Dataset parse_dataset(std::istream& in, const SchemaConfig& config, LoadStats* stats) {
  const SignalSchema& schema = config.schema;
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
      if (!line.empty()) return true;
    }
    return false;
  };

  if (!next_line()) throw DataError("empty-dataset", "header", "dataset has no header row");
  const auto header = split_csv_line(line);

  std::map<std::string, std::size_t> column_index;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!column_index.emplace(header[i], i).second) {
      throw DataError("duplicate-column", "header, column '" + header[i] + "'", "column appears twice");
    }
  }
  const std::set<std::string> ignored(config.options.ignore_columns.begin(), config.options.ignore_columns.end());
  std::set<std::string> known{config.state_column};
  for (std::size_t p = 0; p < schema.num_variables(); ++p) known.insert(schema.name_at(p));
  for (const auto& h : header) {
    if (!known.count(h) && !ignored.count(h)) {
      throw DataError("unknown-column", "header, column '" + h + "'",
                      "column is not declared in the schema (list it in options.ignore_columns to skip it)");
    }
  }
  auto locate = [&](const std::string& name) {
    const auto it = column_index.find(name);
    if (it == column_index.end()) {
      throw DataError("missing-column", "header, column '" + name + "'", "schema column missing from dataset");
    }
    return it->second;
  };
  const std::size_t state_col = locate(config.state_column);
  std::vector<std::size_t> var_cols;
  for (std::size_t p = 0; p < schema.num_variables(); ++p) var_cols.push_back(locate(schema.name_at(p)));

  // Declared domains and binning maps for decision columns.
  std::vector<BinnedColumn> binned(schema.decisions().size());
  for (std::size_t d = 0; d < schema.decisions().size(); ++d) {
    const ValueDomain& declared = d < config.declared_decision_domains.size()
                                      ? config.declared_decision_domains[d]
                                      : schema.decisions()[d].domain;
    if (config.options.decision_bins && declared.is_numeric()) {
      binned[d].map = bin_domain(declared, *config.options.decision_bins, "decisions[" + std::to_string(d) + "]").map;
    }
    binned[d].domain = declared;
  }

  Dataset data(schema, config.problem.num_states());
  std::vector<std::uint32_t> values(schema.num_variables());
  std::size_t row_no = 0;
  std::size_t dropped = 0;
  while (next_line()) {
    ++row_no;
    const auto fields = split_csv_line(line);
    const std::string row_locus = "row " + std::to_string(row_no) + " (line " + std::to_string(line_no) + ")";
    if (fields.size() != header.size()) {
      throw DataError("row-width", row_locus,
                      "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
    }
    bool missing = fields[state_col].empty();
    for (auto c : var_cols) missing = missing || fields[c].empty();
    if (missing) {
      if (config.options.missing == MissingPolicy::kDropRow) {
        ++dropped;
        continue;
      }
      std::string column = fields[state_col].empty() ? config.state_column : "";
      for (std::size_t p = 0; column.empty() && p < var_cols.size(); ++p) {
        if (fields[var_cols[p]].empty()) column = schema.name_at(p);
      }
      throw DataError("missing-value", row_locus + ", column '" + column + "'", "missing value");
    }
    auto unmappable = [&](const std::string& column, const std::string& value) {
      return DataError("unmappable-value", row_locus + ", column '" + column + "'",
                       "value '" + value + "' is not in the declared domain");
    };
    const auto state = config.problem.states().find(fields[state_col]);
    if (!state) throw unmappable(config.state_column, fields[state_col]);
    for (std::size_t p = 0; p < schema.num_variables(); ++p) {
      const std::string& text = fields[var_cols[p]];
      if (!schema.is_decision(p)) {
        const auto& domain = schema.signals()[p].values;
        const auto it = std::find(domain.begin(), domain.end(), text);
        if (it == domain.end()) throw unmappable(schema.name_at(p), text);
        values[p] = static_cast<std::uint32_t>(it - domain.begin());
      } else {
        const auto& col = binned[p - schema.num_signals()];
        const auto idx = col.domain.find(text);
        if (!idx) throw unmappable(schema.name_at(p), text);
        values[p] = col.map.empty() ? static_cast<std::uint32_t>(*idx) : col.map[*idx];
      }
    }
    data.add_row(static_cast<std::uint32_t>(*state), values);
  }
  if (stats) {
    stats->rows_read = row_no;
    stats->rows_dropped = dropped;
  }
  if (data.num_rows() == 0) {
    throw DataError("empty-dataset", "", dropped ? "every row was dropped for missing values" : "dataset has no rows");
  }
  return data;
}

Dataset load_dataset(const std::filesystem::path& path, const SchemaConfig& config, LoadStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("io-error", path.string(), "cannot open dataset");
  return parse_dataset(in, config, stats);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

void write_dataset(std::ostream& out, const Dataset& data, const SchemaConfig& config) {
  const auto& schema = data.schema();
  out << csv_field(config.state_column);
  for (std::size_t p = 0; p < schema.num_variables(); ++p) out << ',' << csv_field(schema.name_at(p));
  out << '\n';
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    out << csv_field(config.problem.states().labels[data.state(r)]);
    const auto v = data.values(r);
    for (std::size_t p = 0; p < v.size(); ++p) out << ',' << csv_field(schema.labels_at(p)[v[p]]);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

namespace {

Json provenance_json(const Provenance& p) {
  Json j;
  j["alpha"] = p.alpha;
  j["mode"] = p.mode;
  j["seed"] = p.seed ? Json(*p.seed) : Json(nullptr);
  j["decision_bins"] = p.decision_bins ? Json(*p.decision_bins) : Json(nullptr);
  j["rows"] = p.rows;
  return j;
}

Json envelope(const char* kind, const Provenance& p) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = kind;
  j["inputs"] = {{"schema_hash", p.schema_hash}, {"dataset_hash", p.dataset_hash}};
  j["provenance"] = provenance_json(p);
  return j;
}

void check_envelope(const Json& doc, const char* kind) {
  if (!doc.is_object() || !doc.contains("format_version") || doc["format_version"] != kFormatVersion) {
    throw SchemaError("format-version", "format_version", "unsupported or missing format_version");
  }
  if (!doc.contains("kind") || doc["kind"] != kind) {
    throw SchemaError("wrong-kind", "kind", std::string("expected a ") + kind + " document");
  }
}

Provenance provenance_from_json(const Json& doc) {
  Provenance p;
  p.schema_hash = doc.at("inputs").at("schema_hash").get<std::string>();
  p.dataset_hash = doc.at("inputs").at("dataset_hash").get<std::string>();
  const Json& j = doc.at("provenance");
  p.alpha = j.at("alpha").get<double>();
  p.mode = j.at("mode").get<std::string>();
  if (!j.at("seed").is_null()) p.seed = j.at("seed").get<std::uint64_t>();
  if (!j.at("decision_bins").is_null()) p.decision_bins = j.at("decision_bins").get<int>();
  p.rows = j.at("rows").get<std::size_t>();
  return p;
}

Role role_from(const Json& j) {
  const auto r = parse_role(j.get<std::string>());
  return r ? *r : Role::kOther;
}

template <typename Fn>
auto with_json_errors(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("invalid-results", "", e.what());
  }
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* kCsvHeader = "statistic,ground,signal,value,mean,sd,q0.025,q0.25,q0.5,q0.75,q0.975\n";

void write_text(const std::filesystem::path& path, const std::string& text) { write_file(path, text); }

}  // namespace

Json to_json(const GainReport& r) {
  Json j = envelope("gain", r.provenance);
  j["v1"] = r.v1;
  j["ground"] = r.ground;
  j["value"] = r.gain.value;
  j["raw_value"] = r.gain.raw;
  j["payoff_union"] = r.gain.payoff_union;
  j["payoff_ground"] = r.gain.payoff_ground;
  return j;
}

Json to_json(const ShapleyResult& s) {
  const ShapleyReport& r = s.report;
  Json j = envelope("shapley", s.provenance);
  j["ground"] = r.ground_names;
  j["ground_label"] = r.ground_label;
  j["ground_role"] = std::string(role_name(r.ground_role));
  j["method"] = r.method == ShapleyMethod::kExact ? "exact" : "sampled";
  j["permutations"] = r.permutations;
  j["seed"] = r.method == ShapleyMethod::kSampled ? Json(r.seed) : Json(nullptr);
  j["total_gain"] = r.total_gain;
  Json values = Json::array();
  for (std::size_t i = 0; i < r.phi.size(); ++i) {
    Json v{{"signal", r.signal_names[i]}, {"phi", r.phi[i]}};
    if (r.method == ShapleyMethod::kSampled) v["std_error"] = r.std_error[i];
    values.push_back(std::move(v));
  }
  j["values"] = std::move(values);
  return j;
}

Json to_json(const BootstrapReport& b) {
  const BootstrapResult& r = b.result;
  Json j = envelope("bootstrap", b.provenance);
  j["replicates"] = r.replicates;
  j["seed"] = r.seed;
  j["alpha"] = r.alpha;
  j["resampling"] = "iid_rows";
  j["schema_fingerprint"] = r.schema_fingerprint;
  j["dataset_fingerprint"] = r.dataset_fingerprint;
  j["signals"] = r.signals;
  Json stats = Json::array();
  for (const auto& s : r.statistics) {
    Json q;
    for (std::size_t i = 0; i < kReportedQuantiles.size(); ++i) {
      q.push_back({{"p", kReportedQuantiles[i]}, {"value", s.quantiles[i]}});
    }
    Json e{{"name", s.name},
           {"kind", s.kind},
           {"ground", s.ground},
           {"ground_label", s.ground_label},
           {"ground_role", std::string(role_name(s.ground_role))}};
    if (s.kind == "gain") e["v1"] = s.v1;
    else e["signal"] = s.signal;
    e["estimate"] = s.estimate;
    e["mean"] = s.mean;
    e["sd"] = s.sd;
    e["quantiles"] = std::move(q);
    e["samples"] = s.samples;
    stats.push_back(std::move(e));
  }
  j["statistics"] = std::move(stats);
  return j;
}

GainReport gain_report_from_json(const Json& doc) {
  return with_json_errors([&] {
    check_envelope(doc, "gain");
    GainReport r;
    r.provenance = provenance_from_json(doc);
    r.v1 = doc.at("v1").get<std::vector<std::string>>();
    r.ground = doc.at("ground").get<std::vector<std::string>>();
    r.gain.value = doc.at("value").get<double>();
    r.gain.raw = doc.at("raw_value").get<double>();
    r.gain.payoff_union = doc.at("payoff_union").get<double>();
    r.gain.payoff_ground = doc.at("payoff_ground").get<double>();
    return r;
  });
}

ShapleyResult shapley_result_from_json(const Json& doc) {
  return with_json_errors([&] {
    check_envelope(doc, "shapley");
    ShapleyResult s;
    s.provenance = provenance_from_json(doc);
    ShapleyReport& r = s.report;
    r.ground_names = doc.at("ground").get<std::vector<std::string>>();
    r.ground_label = doc.at("ground_label").get<std::string>();
    r.ground_role = role_from(doc.at("ground_role"));
    r.method = doc.at("method") == "exact" ? ShapleyMethod::kExact : ShapleyMethod::kSampled;
    r.permutations = doc.at("permutations").get<std::size_t>();
    if (!doc.at("seed").is_null()) r.seed = doc.at("seed").get<std::uint64_t>();
    r.total_gain = doc.at("total_gain").get<double>();
    for (const auto& v : doc.at("values")) {
      r.signals.push_back(r.signals.size());
      r.signal_names.push_back(v.at("signal").get<std::string>());
      r.phi.push_back(v.at("phi").get<double>());
      if (v.contains("std_error")) r.std_error.push_back(v.at("std_error").get<double>());
    }
    return s;
  });
}

BootstrapReport bootstrap_report_from_json(const Json& doc) {
  return with_json_errors([&] {
    check_envelope(doc, "bootstrap");
    BootstrapReport b;
    b.provenance = provenance_from_json(doc);
    BootstrapResult& r = b.result;
    r.replicates = doc.at("replicates").get<std::size_t>();
    r.seed = doc.at("seed").get<std::uint64_t>();
    r.alpha = doc.at("alpha").get<double>();
    r.schema_fingerprint = doc.at("schema_fingerprint").get<std::string>();
    r.dataset_fingerprint = doc.at("dataset_fingerprint").get<std::string>();
    r.signals = doc.at("signals").get<std::vector<std::string>>();
    for (const auto& e : doc.at("statistics")) {
      StatisticSummary s;
      s.name = e.at("name").get<std::string>();
      s.kind = e.at("kind").get<std::string>();
      s.ground = e.at("ground").get<std::vector<std::string>>();
      s.ground_label = e.at("ground_label").get<std::string>();
      s.ground_role = role_from(e.at("ground_role"));
      if (e.contains("v1")) s.v1 = e.at("v1").get<std::vector<std::string>>();
      if (e.contains("signal")) s.signal = e.at("signal").get<std::string>();
      s.estimate = e.at("estimate").get<double>();
      s.mean = e.at("mean").get<double>();
      s.sd = e.at("sd").get<double>();
      const auto& q = e.at("quantiles");
      if (q.size() != kReportedQuantiles.size()) {
        throw SchemaError("invalid-results", s.name, "unexpected quantile count");
      }
      for (std::size_t i = 0; i < q.size(); ++i) s.quantiles[i] = q[i].at("value").get<double>();
      s.samples = e.at("samples").get<std::vector<double>>();
      if (s.samples.size() != r.replicates) {
        throw SchemaError("invalid-results", s.name, "sample count differs from replicates");
      }
      r.statistics.push_back(std::move(s));
    }
    return b;
  });
}

std::string to_csv(const GainReport& r) {
  std::string label_v1, label_g;
  for (const auto& v : r.v1) label_v1 += (label_v1.empty() ? "" : "+") + v;
  for (const auto& g : r.ground) label_g += (label_g.empty() ? "" : "+") + g;
  if (label_v1.empty()) label_v1 = "none";
  if (label_g.empty()) label_g = "none";
  return std::string(kCsvHeader) + csv_field("gain[" + label_v1 + "]") + "," + csv_field(label_g) + ",," +
         num(r.gain.value) + ",,,,,,,\n";
}

std::string to_csv(const ShapleyResult& s) {
  std::string out = kCsvHeader;
  const auto& r = s.report;
  for (std::size_t i = 0; i < r.phi.size(); ++i) {
    out += "shapley," + csv_field(r.ground_label) + "," + csv_field(r.signal_names[i]) + "," + num(r.phi[i]) + ",,";
    out += r.method == ShapleyMethod::kSampled ? num(r.std_error[i]) : "";
    out += ",,,,,\n";
  }
  return out;
}

std::string to_csv(const BootstrapReport& b) {
  std::string out = kCsvHeader;
  for (const auto& s : b.result.statistics) {
    const std::string stat = s.kind == "gain" ? s.name : "shapley";
    out += csv_field(stat) + "," + csv_field(s.ground_label) + "," + csv_field(s.signal) + "," + num(s.estimate) +
           "," + num(s.mean) + "," + num(s.sd);
    for (double q : s.quantiles) out += "," + num(q);
    out += "\n";
  }
  return out;
}

void write_results(const GainReport& r, const std::filesystem::path& path, ResultFormat format) {
  write_text(path, format == ResultFormat::kJson ? to_json(r).dump(2) + "\n" : to_csv(r));
}

void write_results(const ShapleyResult& r, const std::filesystem::path& path, ResultFormat format) {
  write_text(path, format == ResultFormat::kJson ? to_json(r).dump(2) + "\n" : to_csv(r));
}

void write_results(const BootstrapReport& r, const std::filesystem::path& path, ResultFormat format) {
  write_text(path, format == ResultFormat::kJson ? to_json(r).dump(2) + "\n" : to_csv(r));
}

BootstrapReport load_bootstrap_report(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("parse-error", path.string(), e.what());
  }
  return bootstrap_report_from_json(doc);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("io-error", path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("io-error", path.string(), "read failed");
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("io-error", path.string(), "cannot open file for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw IoError("io-error", path.string(), "write failed");
}

}  // namespace infogain
