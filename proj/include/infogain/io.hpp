#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "infogain/bootstrap.hpp"
#include "infogain/joint.hpp"
#include "infogain/model.hpp"
#include "infogain/rational.hpp"
#include "infogain/shapley.hpp"

namespace infogain {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

enum class MissingPolicy { kError, kDropRow };

struct SchemaOptions {
  double smoothing = 0.0;
  std::optional<int> decision_bins;  // equal-width bins for numeric decision columns
  MissingPolicy missing = MissingPolicy::kError;
  std::vector<std::string> ignore_columns;
};

// Everything needed to read a dataset and score it.
struct SchemaConfig {
  std::string state_column;
  SignalSchema schema;  // decision domains after binning
  std::vector<ValueDomain> declared_decision_domains;  // as written, before binning
  DecisionProblem problem;
  SchemaOptions options;
  std::vector<Diagnostic> warnings;
};

// Throws SchemaError carrying a field path ("signals[2].values") for
// invalid documents and code "parse-error" for malformed JSON.
SchemaConfig parse_schema(const Json& document);
SchemaConfig parse_schema_text(std::string_view text);
SchemaConfig load_schema(const std::filesystem::path& path);

Json schema_to_json(const SchemaConfig& config);

// Builds a config around an in-memory schema (synthetic data).
SchemaConfig make_schema_config(std::string state_column, const SignalSchema& schema,
                                const DecisionProblem& problem, SchemaOptions options = {});

struct LoadStats {
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;
};

// CSV with a header row. Values map onto domains by exact match only.
Dataset parse_dataset(std::istream& in, const SchemaConfig& config, LoadStats* stats = nullptr);
Dataset load_dataset(const std::filesystem::path& path, const SchemaConfig& config,
                     LoadStats* stats = nullptr);

// Label-level CSV; reading it back with the same config restores the indices.
// Binned decision columns are written with their bin labels.
void write_dataset(std::ostream& out, const Dataset& data, const SchemaConfig& config);

std::vector<std::string> split_csv_line(std::string_view line);

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

struct Provenance {
  std::string schema_hash;
  std::string dataset_hash;
  double alpha = 0.0;
  std::string mode = "in_sample";  // or "cross_fit"
  std::optional<std::uint64_t> seed;
  std::optional<int> decision_bins;
  std::size_t rows = 0;
};

struct GainReport {
  GainValue gain;
  std::vector<std::string> v1;
  std::vector<std::string> ground;
  Provenance provenance;
};

struct ShapleyResult {
  ShapleyReport report;
  Provenance provenance;
};

struct BootstrapReport {
  BootstrapResult result;
  Provenance provenance;
};

enum class ResultFormat { kJson, kCsv };

Json to_json(const GainReport& report);
Json to_json(const ShapleyResult& result);
Json to_json(const BootstrapReport& report);

GainReport gain_report_from_json(const Json& document);
ShapleyResult shapley_result_from_json(const Json& document);
BootstrapReport bootstrap_report_from_json(const Json& document);

std::string to_csv(const GainReport& report);
std::string to_csv(const ShapleyResult& result);
std::string to_csv(const BootstrapReport& report);

// JSON is written with two-space indentation and a trailing newline.
void write_results(const GainReport& report, const std::filesystem::path& path, ResultFormat format);
void write_results(const ShapleyResult& result, const std::filesystem::path& path, ResultFormat format);
void write_results(const BootstrapReport& report, const std::filesystem::path& path, ResultFormat format);

BootstrapReport load_bootstrap_report(const std::filesystem::path& path);

// Whole-file helpers; throw IoError.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace infogain
