#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>

#include "infogain/joint.hpp"
#include "infogain/model.hpp"

namespace infogain {

// Gains within this distance of zero are reported as exactly zero.
inline constexpr double kGainClampTolerance = 1e-9;

// argmax_d sum_state weights[state] * S(d, state); ties go to the lowest
// decision index. Weights may be a posterior or unnormalized joint masses.
// Brier problems take a bracketing shortcut around the posterior mean that
// evaluates the same expression as the full scan.
std::size_t best_response(std::span<const double> weights, const DecisionProblem& problem);

// Same argmax by scanning every decision.
std::size_t best_response_scan(std::span<const double> weights, const DecisionProblem& problem);

// R(V): expected payoff of a Bayesian agent that knows the joint, observes V
// and best-responds. V may contain decision columns and may be empty, in which
// case the agent plays the best fixed action under the prior.
double rational_payoff(const JointDistribution& joint, const DecisionProblem& problem,
                       const VarSet& vars);

struct GainValue {
  double value = 0.0;      // clamped to 0 when |raw| <= kGainClampTolerance
  double raw = 0.0;        // payoff_union - payoff_ground
  double payoff_union = 0.0;
  double payoff_ground = 0.0;
  VarSet v1;
  VarSet ground;
};

// R(v1 u ground) - R(ground).
GainValue information_gain(const JointDistribution& joint, const DecisionProblem& problem,
                           const VarSet& v1, const VarSet& ground);

// Value reflected in a decision column beyond a set of signals. Throws
// SchemaError unless `decision_column` names a decision column.
GainValue gain_of_decisions_over_signals(const JointDistribution& joint,
                                         const DecisionProblem& problem,
                                         const VariableRef& decision_column, const VarSet& signals);

GainValue make_gain(double payoff_union, double payoff_ground, VarSet v1, VarSet ground);

// Source of R(V) values for gain and attribution computations.
// Implementations are immutable and safe to query from several threads.
class PayoffOracle {
 public:
  virtual ~PayoffOracle() = default;
  virtual double rational_payoff(const VarSet& vars) const = 0;
  virtual const SignalSchema& schema() const = 0;

  GainValue gain(const VarSet& v1, const VarSet& ground) const;
};

// Conditions and scores on the same joint.
class InSamplePayoff final : public PayoffOracle {
 public:
  InSamplePayoff(const JointDistribution& joint, const DecisionProblem& problem)
      : joint_(joint), problem_(problem) {}

  double rational_payoff(const VarSet& vars) const override;
  const SignalSchema& schema() const override { return joint_.schema(); }

 private:
  const JointDistribution& joint_;
  const DecisionProblem& problem_;
};

// Two-fold cross-fitting. Rows are shuffled with `seed` and split in half;
// best responses learned from one half's (possibly smoothed) joint are scored
// on the other half's empirical distribution, and the two directions are
// averaged. Realizations unseen in the fitting half fall back to its best
// fixed action. Requires at least two rows.
class CrossFitPayoff final : public PayoffOracle {
 public:
  CrossFitPayoff(const Dataset& data, const DecisionProblem& problem, double alpha,
                 std::uint64_t seed);

  double rational_payoff(const VarSet& vars) const override;
  const SignalSchema& schema() const override { return schema_; }

 private:
  double directed(const JointDistribution& fit, const JointDistribution& score,
                  const VarSet& vars) const;

  SignalSchema schema_;
  const DecisionProblem& problem_;
  std::unique_ptr<JointDistribution> fit_a_, fit_b_, score_a_, score_b_;
};

}  // namespace infogain
