#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "infogain/joint.hpp"
#include "infogain/model.hpp"

namespace infogain {

enum class ReportingRule { kPosteriorMeanOnGrid, kArgmaxPayoff };

// A behavioral agent that sees only `used_signals`, reports from its
// posterior under the true joint, and with probability `noise` replaces the
// report by a uniformly random decision.
struct SyntheticAgentSpec {
  std::string name;
  Role role = Role::kOther;
  std::vector<std::size_t> used_signals;  // signal positions
  double noise = 0.0;
  ReportingRule rule = ReportingRule::kArgmaxPayoff;
};

// sigma1, sigma2 independent uniform bits and state = sigma1 xor sigma2.
JointDistribution make_xor_joint();

// Weather example: decisions {no_umbrella, umbrella}, states {no_rain, rain},
// payoffs S(0,0)=0, S(0,1)=-100, S(1,0)=-50, S(1,1)=0.
DecisionProblem umbrella_problem();

// The informed report of an agent given its posterior.
std::size_t agent_report(const SyntheticAgentSpec& agent, std::span<const double> posterior,
                         const DecisionProblem& problem);

// Population joint extended with one decision column per agent, each taking
// values in the problem's decision space. Exact: noise is expanded into
// weighted cells rather than sampled. Throws LimitError past 10^7 cells.
JointDistribution population_with_agents(const JointDistribution& population,
                                         const DecisionProblem& problem,
                                         std::span<const SyntheticAgentSpec> agents);

// N i.i.d. rows from `population` (which must have no decision columns),
// one decision column per agent. Row i uses its own stream derived from
// (seed, i), so output is independent of generation order.
Dataset generate_dataset(const JointDistribution& population, const DecisionProblem& problem,
                         std::span<const SyntheticAgentSpec> agents, std::size_t rows,
                         std::uint64_t seed);

// Decision columns appended to `population`'s schema for `agents`.
SignalSchema schema_with_agents(const SignalSchema& base, const DecisionProblem& problem,
                                std::span<const SyntheticAgentSpec> agents);

// R(V) by naive enumeration over the dense product space. Test oracle only:
// shares no code path with rational_payoff. Refuses (LimitError) when the
// dense space exceeds 10^6 cells.
double brute_force_rational(const JointDistribution& joint, const DecisionProblem& problem,
                            const VarSet& vars);

struct Preset {
  std::string name;
  std::string state_column;
  JointDistribution population;
  DecisionProblem problem;
  std::vector<SyntheticAgentSpec> agents;
};

// XOR joint with Brier payoff and no agents.
Preset xor_preset();

// Seven binary features, a binary state and three agents (human, ai,
// human_ai) on the 101-point Brier grid. The ai agent's noise is calibrated
// so that its population accuracy is 65%.
Preset deepfake_preset();

// Probability that the agent's decision falls on the correct side of 0.5
// (0.5 itself counts half), at population level. Binary Brier problems only.
double agent_accuracy(const JointDistribution& population, const DecisionProblem& problem,
                      const SyntheticAgentSpec& agent);

}  // namespace infogain
