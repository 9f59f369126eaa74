#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "infogain/joint.hpp"
#include "infogain/model.hpp"

namespace infogain {

// One quantity recomputed on every replicate.
struct StatisticRequest {
  enum class Kind { kGain, kShapley };
  Kind kind = Kind::kShapley;
  std::string label;  // defaults to the ground set's label
  VarSet v1;          // gain only
  VarSet ground;
};

struct BootstrapSpec {
  std::size_t replicates = 1000;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  std::vector<StatisticRequest> statistics;
  std::size_t threads = 0;
};

inline constexpr std::array<double, 5> kReportedQuantiles{0.025, 0.25, 0.5, 0.75, 0.975};

struct StatisticSummary {
  std::string name;  // e.g. "shapley[human]/flicker" or "gain[flicker|human]"
  std::string kind;  // "gain" or "shapley"
  std::string ground_label;
  Role ground_role = Role::kOther;
  std::vector<std::string> ground;
  std::vector<std::string> v1;  // gain only
  std::string signal;           // shapley only
  double estimate = 0.0;        // on the original data
  std::vector<double> samples;  // one per replicate, replicate order
  double mean = 0.0;
  double sd = 0.0;
  std::array<double, 5> quantiles{};  // at kReportedQuantiles
};

struct BootstrapResult {
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  std::string schema_fingerprint;
  std::string dataset_fingerprint;
  std::vector<std::string> signals;
  std::vector<StatisticSummary> statistics;
};

// Row indices of replicate `replicate`: n draws with replacement from a
// stream fixed by (seed, replicate).
std::vector<std::size_t> resample_indices(std::size_t n, std::uint64_t seed, std::size_t replicate);

// Type-7 quantile (linear interpolation between order statistics) of sorted data.
double quantile_type7(std::span<const double> sorted, double p);

// Nonparametric row bootstrap. Replicates run on a worker pool; results are
// reduced in replicate order, so output does not depend on `spec.threads`.
BootstrapResult bootstrap_run(const Dataset& data, const DecisionProblem& problem,
                              const BootstrapSpec& spec);

// Shapley over every signal with each decision column as its own ground, or
// over the empty ground when there are no decision columns.
std::vector<StatisticRequest> default_statistics(const SignalSchema& schema);

}  // namespace infogain
