#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "infogain/rational.hpp"

namespace infogain {

enum class ShapleyMethod { kExact, kSampled };

// Attribution of gamma(all signals; ground) to individual signals, where each
// coalition V is worth gamma(V; ground).
struct ShapleyReport {
  VarSet ground;
  std::vector<std::string> ground_names;
  std::string ground_label;
  Role ground_role = Role::kOther;
  std::vector<std::size_t> signals;  // schema positions, in report order
  std::vector<std::string> signal_names;
  std::vector<double> phi;
  std::vector<double> std_error;  // sampled only: sd of marginals / sqrt(P)
  ShapleyMethod method = ShapleyMethod::kExact;
  std::size_t permutations = 0;
  std::uint64_t seed = 0;
  double total_gain = 0.0;  // R(signals u ground) - R(ground), unclamped
};

struct ShapleyOptions {
  std::size_t exact_ceiling = 15;
  std::size_t threads = 0;  // 0 = hardware concurrency
};

// Write-once table of R(V) values. Filled in parallel, read afterwards.
class PayoffTable {
 public:
  void fill(const PayoffOracle& oracle, std::vector<VarSet> needed, std::size_t threads);
  double at(const VarSet& vars) const;
  std::size_t size() const { return values_.size(); }

 private:
  std::map<VarSet, double> values_;
};

ShapleyReport shapley_exact(const PayoffOracle& oracle, std::span<const std::size_t> signals,
                            const VarSet& ground, const ShapleyOptions& options = {});
ShapleyReport shapley_exact(const JointDistribution& joint, const DecisionProblem& problem,
                            std::span<const std::size_t> signals, const VarSet& ground,
                            const ShapleyOptions& options = {});

// Monte Carlo over `permutations` uniformly random signal orderings drawn from
// a stream determined by `seed`.
ShapleyReport shapley_sampled(const PayoffOracle& oracle, std::span<const std::size_t> signals,
                              const VarSet& ground, std::size_t permutations, std::uint64_t seed,
                              const ShapleyOptions& options = {});
ShapleyReport shapley_sampled(const JointDistribution& joint, const DecisionProblem& problem,
                              std::span<const std::size_t> signals, const VarSet& ground,
                              std::size_t permutations, std::uint64_t seed,
                              const ShapleyOptions& options = {});

// Average marginal contributions along explicit orderings; each ordering is a
// permutation of [0, signals.size()).
ShapleyReport shapley_from_orderings(const PayoffOracle& oracle, std::span<const std::size_t> signals,
                                     const VarSet& ground,
                                     std::span<const std::vector<std::size_t>> orderings,
                                     const ShapleyOptions& options = {});

struct NamedGround {
  std::string label;
  VarSet ground;
};

// One exact report per ground set; coalition payoffs are shared between
// grounds wherever the conditioning sets coincide.
std::vector<ShapleyReport> compare_grounds(const PayoffOracle& oracle,
                                           std::span<const std::size_t> signals,
                                           std::span<const NamedGround> grounds,
                                           const ShapleyOptions& options = {});
std::vector<ShapleyReport> compare_grounds(const JointDistribution& joint,
                                           const DecisionProblem& problem,
                                           std::span<const std::size_t> signals,
                                           std::span<const NamedGround> grounds,
                                           const ShapleyOptions& options = {});

}  // namespace infogain
