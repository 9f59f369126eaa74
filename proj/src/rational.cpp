#include "infogain/rational.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "infogain/errors.hpp"
#include "infogain/rng.hpp"

namespace infogain {

std::size_t best_response_scan(std::span<const double> weights, const DecisionProblem& problem) {
  std::size_t best = 0;
  double best_value = problem.expected_payoff(0, weights);
  for (std::size_t d = 1; d < problem.num_decisions(); ++d) {
    const double v = problem.expected_payoff(d, weights);
    if (v > best_value) {
      best_value = v;
      best = d;
    }
  }
  return best;
}

std::size_t best_response(std::span<const double> weights, const DecisionProblem& problem) {
  if (!problem.is_brier() || problem.num_states() != 2 || !problem.decisions().is_numeric()) {
    return best_response_scan(weights, problem);
  }
  const double total = weights[0] + weights[1];
  if (!(total > 0.0)) return best_response_scan(weights, problem);
  // Expected Brier payoff is a concave quadratic in d peaking at the
  // posterior mean, so the argmax over a sorted grid is one of the two grid
  // points bracketing the mean.
  const double mean = weights[1] / total;
  const auto& points = problem.decisions().points;
  const auto it = std::lower_bound(points.begin(), points.end(), mean,
                                   [](const GridPoint& p, double m) { return p.value() < m; });
  std::size_t hi = static_cast<std::size_t>(it - points.begin());
  if (hi == points.size()) return points.size() - 1;
  if (hi == 0) return 0;
  const std::size_t lo = hi - 1;
  return problem.expected_payoff(hi, weights) > problem.expected_payoff(lo, weights) ? hi : lo;
}

namespace {

double best_value(std::span<const double> masses, const DecisionProblem& problem) {
  return problem.expected_payoff(best_response(masses, problem), masses);
}

}  // namespace

double rational_payoff(const JointDistribution& joint, const DecisionProblem& problem,
                       const VarSet& vars) {
  const Grouping g = group_by(joint, vars);
  double total = 0.0;
  for (std::size_t i = 0; i < g.num_groups(); ++i) total += best_value(g.group_masses(i), problem);
  if (g.unobserved_count > 0.0) {
    total += g.unobserved_count * best_value(g.unobserved_masses, problem);
  }
  return total;
}

GainValue make_gain(double payoff_union, double payoff_ground, VarSet v1, VarSet ground) {
  GainValue g;
  g.payoff_union = payoff_union;
  g.payoff_ground = payoff_ground;
  g.raw = payoff_union - payoff_ground;
  g.value = std::abs(g.raw) <= kGainClampTolerance ? 0.0 : g.raw;
  g.v1 = std::move(v1);
  g.ground = std::move(ground);
  return g;
}

GainValue information_gain(const JointDistribution& joint, const DecisionProblem& problem,
                           const VarSet& v1, const VarSet& ground) {
  return InSamplePayoff(joint, problem).gain(v1, ground);
}

GainValue gain_of_decisions_over_signals(const JointDistribution& joint,
                                         const DecisionProblem& problem,
                                         const VariableRef& decision_column, const VarSet& signals) {
  if (decision_column.kind != VariableRef::Kind::kDecision) {
    throw SchemaError("not-a-decision-column", "", "expected a decision column reference");
  }
  const std::size_t p = joint.schema().position(decision_column);
  return information_gain(joint, problem, VarSet{p}, signals);
}

GainValue PayoffOracle::gain(const VarSet& v1, const VarSet& ground) const {
  const VarSet both = v1 | ground;
  const double r_ground = rational_payoff(ground);
  const double r_union = both == ground ? r_ground : rational_payoff(both);
  return make_gain(r_union, r_ground, v1, ground);
}

double InSamplePayoff::rational_payoff(const VarSet& vars) const {
  return infogain::rational_payoff(joint_, problem_, vars);
}

// ---------------------------------------------------------------------------
// Cross-fitting
// ---------------------------------------------------------------------------

CrossFitPayoff::CrossFitPayoff(const Dataset& data, const DecisionProblem& problem, double alpha,
                               std::uint64_t seed)
    : schema_(data.schema()), problem_(problem) {
  const std::size_t n = data.num_rows();
  if (n < 2) {
    throw EstimationError("cross-fit-too-small", "", "cross-fitting needs at least two rows");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed, 0, rng_tag::kCrossFit);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.uniform_index(i + 1)]);
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  const std::vector<std::size_t> a(order.begin(), order.begin() + half);
  const std::vector<std::size_t> b(order.begin() + half, order.end());
  const Dataset da = data.select(a);
  const Dataset db = data.select(b);
  fit_a_ = std::make_unique<JointDistribution>(estimate_joint(da, alpha));
  fit_b_ = std::make_unique<JointDistribution>(estimate_joint(db, alpha));
  score_a_ = std::make_unique<JointDistribution>(estimate_joint(da, 0.0));
  score_b_ = std::make_unique<JointDistribution>(estimate_joint(db, 0.0));
}

double CrossFitPayoff::directed(const JointDistribution& fit, const JointDistribution& score,
                                const VarSet& vars) const {
  const Grouping gf = group_by(fit, vars);
  const Grouping gs = group_by(score, vars);
  std::size_t fallback;
  if (gf.unobserved_count > 0.0) {
    fallback = best_response(gf.unobserved_masses, problem_);
  } else {
    fallback = best_response(state_marginal(fit), problem_);
  }
  double total = 0.0;
  std::size_t f = 0;
  for (std::size_t s = 0; s < gs.num_groups(); ++s) {
    const auto key = gs.key(s);
    while (f < gf.num_groups() && std::lexicographical_compare(gf.key(f).begin(), gf.key(f).end(),
                                                               key.begin(), key.end())) {
      ++f;
    }
    std::size_t d = fallback;
    if (f < gf.num_groups() && std::equal(key.begin(), key.end(), gf.key(f).begin(), gf.key(f).end())) {
      d = best_response(gf.group_masses(f), problem_);
    }
    total += problem_.expected_payoff(d, gs.group_masses(s));
  }
  return total;
}

double CrossFitPayoff::rational_payoff(const VarSet& vars) const {
  return 0.5 * (directed(*fit_a_, *score_b_, vars) + directed(*fit_b_, *score_a_, vars));
}

}  // namespace infogain
