#include "infogain/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "infogain/errors.hpp"
#include "infogain/fingerprint.hpp"
#include "infogain/parallel.hpp"
#include "infogain/rational.hpp"
#include "infogain/rng.hpp"
#include "infogain/shapley.hpp"

namespace infogain {

std::vector<std::size_t> resample_indices(std::size_t n, std::uint64_t seed, std::size_t replicate) {
  Rng rng(seed, replicate, rng_tag::kBootstrap);
  std::vector<std::size_t> out(n);
  for (auto& i : out) i = rng.uniform_index(n);
  return out;
}

double quantile_type7(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<StatisticRequest> default_statistics(const SignalSchema& schema) {
  std::vector<StatisticRequest> out;
  for (std::size_t d = 0; d < schema.decisions().size(); ++d) {
    StatisticRequest r;
    r.kind = StatisticRequest::Kind::kShapley;
    r.ground = VarSet{schema.num_signals() + d};
    out.push_back(std::move(r));
  }
  if (out.empty()) out.push_back({StatisticRequest::Kind::kShapley, "", {}, VarSet{}});
  return out;
}

namespace {

// Flattened statistics of one joint, in request order (a Shapley request
// contributes one value per signal).
class StatisticEvaluator {
 public:
  StatisticEvaluator(const SignalSchema& schema, const DecisionProblem& problem,
                     const std::vector<StatisticRequest>& requests)
      : problem_(problem), requests_(requests) {
    for (std::size_t s = 0; s < schema.num_signals(); ++s) signals_.push_back(s);
    for (const auto& r : requests_) {
      if (r.kind == StatisticRequest::Kind::kShapley) {
        shapley_grounds_.push_back({r.label, r.ground});
      }
    }
  }

  std::vector<double> operator()(const JointDistribution& joint) const {
    const InSamplePayoff oracle(joint, problem_);
    ShapleyOptions options;
    options.threads = 1;
    std::vector<ShapleyReport> reports;
    if (!shapley_grounds_.empty()) reports = compare_grounds(oracle, signals_, shapley_grounds_, options);
    std::vector<double> out;
    std::size_t next_report = 0;
    for (const auto& r : requests_) {
      if (r.kind == StatisticRequest::Kind::kGain) {
        out.push_back(oracle.gain(r.v1, r.ground).value);
      } else {
        const auto& phi = reports[next_report++].phi;
        out.insert(out.end(), phi.begin(), phi.end());
      }
    }
    return out;
  }

  const std::vector<std::size_t>& signals() const { return signals_; }

 private:
  const DecisionProblem& problem_;
  const std::vector<StatisticRequest>& requests_;
  std::vector<std::size_t> signals_;
  std::vector<NamedGround> shapley_grounds_;
};

}  // namespace

BootstrapResult bootstrap_run(const Dataset& data, const DecisionProblem& problem,
                              const BootstrapSpec& spec) {
  if (spec.replicates < 1) throw std::invalid_argument("bootstrap needs at least one replicate");
  if (data.num_rows() == 0) throw EstimationError("empty-dataset", "", "cannot bootstrap an empty dataset");
  const auto& schema = data.schema();
  const std::vector<StatisticRequest> requests =
      spec.statistics.empty() ? default_statistics(schema) : spec.statistics;
  for (const auto& r : requests) {
    for (auto p : r.v1 | r.ground) {
      if (p >= schema.num_variables()) {
        throw SchemaError("unknown-variable", "position " + std::to_string(p), "statistic references an unknown variable");
      }
    }
  }
  const StatisticEvaluator evaluate(schema, problem, requests);

  const std::vector<double> estimate = evaluate(estimate_joint(data, spec.alpha));
  std::vector<std::vector<double>> samples(spec.replicates);
  parallel_for(spec.replicates, spec.threads, [&](std::size_t b) {
    const auto rows = resample_indices(data.num_rows(), spec.seed, b);
    samples[b] = evaluate(estimate_joint(data.select(rows), spec.alpha));
  });

  BootstrapResult result;
  result.replicates = spec.replicates;
  result.seed = spec.seed;
  result.alpha = spec.alpha;
  result.schema_fingerprint = schema_fingerprint(schema, data.num_states());
  result.dataset_fingerprint = dataset_fingerprint(data);
  for (auto s : evaluate.signals()) result.signals.push_back(schema.name_at(s));

  auto summarize = [&](StatisticSummary summary, std::size_t column) {
    summary.estimate = estimate[column];
    summary.samples.reserve(spec.replicates);
    for (const auto& row : samples) summary.samples.push_back(row[column]);
    const double n = static_cast<double>(summary.samples.size());
    summary.mean = std::accumulate(summary.samples.begin(), summary.samples.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : summary.samples) ss += (x - summary.mean) * (x - summary.mean);
    summary.sd = summary.samples.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    std::vector<double> sorted = summary.samples;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t q = 0; q < kReportedQuantiles.size(); ++q) {
      summary.quantiles[q] = quantile_type7(sorted, kReportedQuantiles[q]);
    }
    result.statistics.push_back(std::move(summary));
  };

  std::size_t column = 0;
  for (const auto& r : requests) {
    const std::string ground_label = r.label.empty() ? varset_label(schema, r.ground) : r.label;
    if (r.kind == StatisticRequest::Kind::kGain) {
      StatisticSummary s;
      s.kind = "gain";
      s.ground_label = ground_label;
      s.ground_role = varset_role(schema, r.ground);
      s.ground = schema.names_of(r.ground);
      s.v1 = schema.names_of(r.v1);
      s.name = "gain[" + varset_label(schema, r.v1) + "|" + ground_label + "]";
      summarize(std::move(s), column++);
    } else {
      for (auto sig : evaluate.signals()) {
        StatisticSummary s;
        s.kind = "shapley";
        s.ground_label = ground_label;
        s.ground_role = varset_role(schema, r.ground);
        s.ground = schema.names_of(r.ground);
        s.signal = schema.name_at(sig);
        s.name = "shapley[" + ground_label + "]/" + s.signal;
        summarize(std::move(s), column++);
      }
    }
  }
  return result;
}

}  // namespace infogain
