#include "infogain/shapley.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>

#include "infogain/errors.hpp"
#include "infogain/parallel.hpp"
#include "infogain/rng.hpp"

namespace infogain {

void PayoffTable::fill(const PayoffOracle& oracle, std::vector<VarSet> needed, std::size_t threads) {
  std::sort(needed.begin(), needed.end());
  needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
  std::erase_if(needed, [&](const VarSet& v) { return values_.count(v) > 0; });
  std::vector<double> results(needed.size());
  parallel_for(needed.size(), threads,
               [&](std::size_t i) { results[i] = oracle.rational_payoff(needed[i]); });
  for (std::size_t i = 0; i < needed.size(); ++i) values_.emplace(std::move(needed[i]), results[i]);
}

double PayoffTable::at(const VarSet& vars) const {
  const auto it = values_.find(vars);
  if (it == values_.end()) throw std::logic_error("payoff table miss");
  return it->second;
}

namespace {

void check_signals(const PayoffOracle& oracle, std::span<const std::size_t> signals) {
  const auto& schema = oracle.schema();
  std::set<std::size_t> seen;
  for (auto s : signals) {
    if (s >= schema.num_signals()) {
      throw SchemaError("not-a-signal", "position " + std::to_string(s),
                        "attribution targets must be basic signals");
    }
    if (!seen.insert(s).second) {
      throw SchemaError("duplicate-signal", schema.name_at(s), "signal listed twice");
    }
  }
}

VarSet coalition(std::span<const std::size_t> signals, std::uint64_t mask, const VarSet& ground) {
  std::vector<std::size_t> pos(ground.begin(), ground.end());
  for (std::size_t i = 0; i < signals.size(); ++i) {
    if (mask >> i & 1u) pos.push_back(signals[i]);
  }
  return VarSet(std::move(pos));
}

ShapleyReport report_skeleton(const PayoffOracle& oracle, std::span<const std::size_t> signals,
                              const VarSet& ground, std::string label) {
  ShapleyReport r;
  r.ground = ground;
  r.ground_label = label.empty() ? varset_label(oracle.schema(), ground) : std::move(label);
  r.ground_role = varset_role(oracle.schema(), ground);
  r.ground_names = oracle.schema().names_of(ground);
  r.signals.assign(signals.begin(), signals.end());
  for (auto s : signals) r.signal_names.push_back(oracle.schema().name_at(s));
  r.phi.assign(signals.size(), 0.0);
  return r;
}

std::vector<VarSet> exact_coalitions(std::span<const std::size_t> signals, const VarSet& ground) {
  const std::uint64_t count = std::uint64_t{1} << signals.size();
  std::vector<VarSet> out;
  out.reserve(count);
  for (std::uint64_t m = 0; m < count; ++m) out.push_back(coalition(signals, m, ground));
  return out;
}

ShapleyReport exact_from_table(const PayoffOracle& oracle, const PayoffTable& table,
                               std::span<const std::size_t> signals, const VarSet& ground,
                               std::string label) {
  ShapleyReport r = report_skeleton(oracle, signals, ground, std::move(label));
  const std::size_t n = signals.size();
  const std::uint64_t count = std::uint64_t{1} << n;

  std::vector<double> payoff(count);
  for (std::uint64_t m = 0; m < count; ++m) payoff[m] = table.at(coalition(signals, m, ground));

  // weight[s] = s! (n-1-s)! / n! = 1 / (n * C(n-1, s))
  std::vector<double> weight(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    double c = 1.0;
    for (std::size_t k = 1; k <= s; ++k) c = c * static_cast<double>(n - 1 - s + k) / static_cast<double>(k);
    weight[s] = 1.0 / (static_cast<double>(n) * c);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    double phi = 0.0;
    for (std::uint64_t m = 0; m < count; ++m) {
      if (m & bit) continue;
      const auto s = static_cast<std::size_t>(std::popcount(m));
      phi += weight[s] * (payoff[m | bit] - payoff[m]);
    }
    r.phi[i] = phi;
  }
  r.method = ShapleyMethod::kExact;
  r.total_gain = payoff[count - 1] - payoff[0];
  return r;
}

void check_exact_size(std::span<const std::size_t> signals, const ShapleyOptions& options) {
  if (signals.size() > options.exact_ceiling || signals.size() > 30) {
    throw LimitError("exact-ceiling", std::to_string(signals.size()) + " signals",
                     "exact attribution is limited to " + std::to_string(options.exact_ceiling) +
                         " signals; use shapley_sampled");
  }
}

}  // namespace

ShapleyReport shapley_exact(const PayoffOracle& oracle, std::span<const std::size_t> signals,
                            const VarSet& ground, const ShapleyOptions& options) {
  check_signals(oracle, signals);
  check_exact_size(signals, options);
  PayoffTable table;
  table.fill(oracle, exact_coalitions(signals, ground), options.threads);
  return exact_from_table(oracle, table, signals, ground, "");
}

ShapleyReport shapley_exact(const JointDistribution& joint, const DecisionProblem& problem,
                            std::span<const std::size_t> signals, const VarSet& ground,
                            const ShapleyOptions& options) {
  return shapley_exact(InSamplePayoff(joint, problem), signals, ground, options);
}

ShapleyReport shapley_from_orderings(const PayoffOracle& oracle, std::span<const std::size_t> signals,
                                     const VarSet& ground,
                                     std::span<const std::vector<std::size_t>> orderings,
                                     const ShapleyOptions& options) {
  check_signals(oracle, signals);
  const std::size_t n = signals.size();
  if (n > 64) throw LimitError("sampled-ceiling", "", "sampled attribution supports up to 64 signals");
  if (orderings.empty()) throw std::invalid_argument("at least one ordering is required");
  for (const auto& o : orderings) {
    std::vector<std::size_t> sorted = o;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted.size() != n || sorted[i] != i) throw std::invalid_argument("ordering is not a permutation");
    }
  }

  auto prefix_masks = [&](const std::vector<std::size_t>& order) {
    std::vector<std::uint64_t> masks(n + 1, 0);
    for (std::size_t k = 0; k < n; ++k) masks[k + 1] = masks[k] | (std::uint64_t{1} << order[k]);
    return masks;
  };

  std::vector<std::uint64_t> all_masks;
  for (const auto& o : orderings) {
    const auto m = prefix_masks(o);
    all_masks.insert(all_masks.end(), m.begin(), m.end());
  }
  std::sort(all_masks.begin(), all_masks.end());
  all_masks.erase(std::unique(all_masks.begin(), all_masks.end()), all_masks.end());

  std::vector<double> payoff(all_masks.size());
  parallel_for(all_masks.size(), options.threads, [&](std::size_t i) {
    payoff[i] = oracle.rational_payoff(coalition(signals, all_masks[i], ground));
  });
  auto lookup = [&](std::uint64_t mask) {
    const auto it = std::lower_bound(all_masks.begin(), all_masks.end(), mask);
    return payoff[static_cast<std::size_t>(it - all_masks.begin())];
  };

  ShapleyReport r = report_skeleton(oracle, signals, ground, "");
  std::vector<double> sum(n, 0.0), sum_sq(n, 0.0);
  for (const auto& o : orderings) {
    const auto masks = prefix_masks(o);
    for (std::size_t k = 0; k < n; ++k) {
      const double marginal = lookup(masks[k + 1]) - lookup(masks[k]);
      sum[o[k]] += marginal;
      sum_sq[o[k]] += marginal * marginal;
    }
  }
  const auto p = static_cast<double>(orderings.size());
  r.std_error.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    r.phi[i] = sum[i] / p;
    if (orderings.size() > 1) {
      const double var = std::max(0.0, (sum_sq[i] - p * r.phi[i] * r.phi[i]) / (p - 1.0));
      r.std_error[i] = std::sqrt(var / p);
    }
  }
  r.method = ShapleyMethod::kSampled;
  r.permutations = orderings.size();
  const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  r.total_gain = lookup(full) - lookup(0);
  return r;
}

ShapleyReport shapley_sampled(const PayoffOracle& oracle, std::span<const std::size_t> signals,
                              const VarSet& ground, std::size_t permutations, std::uint64_t seed,
                              const ShapleyOptions& options) {
  if (permutations < 1) throw std::invalid_argument("permutations must be at least 1");
  const std::size_t n = signals.size();
  Rng rng(seed, 0, rng_tag::kShapley);
  std::vector<std::vector<std::size_t>> orderings(permutations);
  for (auto& o : orderings) {
    o.resize(n);
    std::iota(o.begin(), o.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(o[i - 1], o[rng.uniform_index(i)]);
  }
  ShapleyReport r = shapley_from_orderings(oracle, signals, ground, orderings, options);
  r.seed = seed;
  return r;
}

ShapleyReport shapley_sampled(const JointDistribution& joint, const DecisionProblem& problem,
                              std::span<const std::size_t> signals, const VarSet& ground,
                              std::size_t permutations, std::uint64_t seed,
                              const ShapleyOptions& options) {
  return shapley_sampled(InSamplePayoff(joint, problem), signals, ground, permutations, seed, options);
}

std::vector<ShapleyReport> compare_grounds(const PayoffOracle& oracle,
                                           std::span<const std::size_t> signals,
                                           std::span<const NamedGround> grounds,
                                           const ShapleyOptions& options) {
  check_signals(oracle, signals);
  check_exact_size(signals, options);
  std::vector<VarSet> needed;
  for (const auto& g : grounds) {
    auto c = exact_coalitions(signals, g.ground);
    needed.insert(needed.end(), std::make_move_iterator(c.begin()), std::make_move_iterator(c.end()));
  }
  PayoffTable table;
  table.fill(oracle, std::move(needed), options.threads);
  std::vector<ShapleyReport> out;
  out.reserve(grounds.size());
  for (const auto& g : grounds) out.push_back(exact_from_table(oracle, table, signals, g.ground, g.label));
  return out;
}

std::vector<ShapleyReport> compare_grounds(const JointDistribution& joint,
                                           const DecisionProblem& problem,
                                           std::span<const std::size_t> signals,
                                           std::span<const NamedGround> grounds,
                                           const ShapleyOptions& options) {
  return compare_grounds(InSamplePayoff(joint, problem), signals, grounds, options);
}

}  // namespace infogain
