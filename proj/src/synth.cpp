#include "infogain/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "infogain/errors.hpp"
#include "infogain/rational.hpp"
#include "infogain/rng.hpp"

namespace infogain {

namespace {

constexpr double kPopulationCellLimit = 1e7;
constexpr double kBruteForceLimit = 1e6;
constexpr std::uint64_t kAgentStreamBase = 1000;

Realization project(std::span<const std::uint32_t> values, std::span<const std::size_t> positions) {
  Realization r;
  r.reserve(positions.size());
  for (auto p : positions) r.push_back(values[p]);
  return r;
}

// Informed report of `agent` for every realization of its used signals that
// has positive mass under `population`.
std::map<Realization, std::size_t> informed_reports(const JointDistribution& population,
                                                    const DecisionProblem& problem,
                                                    const SyntheticAgentSpec& agent) {
  for (auto s : agent.used_signals) {
    if (s >= population.schema().num_signals()) {
      throw SchemaError("not-a-signal", agent.name, "agent uses a variable that is not a basic signal");
    }
  }
  if (!(agent.noise >= 0.0 && agent.noise <= 1.0)) {
    throw SchemaError("invalid-noise", agent.name, "agent noise must lie in [0, 1]");
  }
  const VarSet used(agent.used_signals);
  const Grouping g = group_by(population, used);
  std::map<Realization, std::size_t> out;
  for (std::size_t i = 0; i < g.num_groups(); ++i) {
    const auto m = g.group_masses(i);
    const double total = std::accumulate(m.begin(), m.end(), 0.0);
    std::vector<double> post(m.begin(), m.end());
    for (auto& p : post) p /= total;
    out.emplace(Realization(g.key(i).begin(), g.key(i).end()), agent_report(agent, post, problem));
  }
  return out;
}

double side_correct(const DecisionProblem& problem, std::size_t d, std::uint32_t state) {
  const GridPoint& p = problem.decisions().points[d];
  const GridPoint half{1, 2};
  if (p == half) return 0.5;
  return (state == 1) == (half < p) ? 1.0 : 0.0;
}

JointDistribution independent_binary_population(const std::vector<std::string>& names,
                                                const std::vector<std::pair<double, double>>& p_one,
                                                double prior_one) {
  std::vector<BasicSignal> signals;
  for (const auto& n : names) signals.push_back({n, {"0", "1"}});
  SignalSchema schema(std::move(signals), {});
  const std::size_t n = names.size();
  std::vector<JointDistribution::Cell> cells;
  for (std::uint32_t state = 0; state < 2; ++state) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      JointDistribution::Cell c;
      c.state = state;
      c.weight = state == 1 ? prior_one : 1.0 - prior_one;
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t v = (bits >> (n - 1 - i)) & 1u;
        const double q = state == 1 ? p_one[i].second : p_one[i].first;
        c.values.push_back(v);
        c.weight *= v ? q : 1.0 - q;
      }
      cells.push_back(std::move(c));
    }
  }
  return JointDistribution(std::move(schema), 2, std::move(cells));
}

}  // namespace

JointDistribution make_xor_joint() {
  SignalSchema schema({{"sigma1", {"0", "1"}}, {"sigma2", {"0", "1"}}}, {});
  std::vector<JointDistribution::Cell> cells;
  for (std::uint32_t a = 0; a < 2; ++a) {
    for (std::uint32_t b = 0; b < 2; ++b) cells.push_back({{a, b}, a ^ b, 0.25});
  }
  return JointDistribution(std::move(schema), 2, std::move(cells));
}

DecisionProblem umbrella_problem() {
  return DecisionProblem(StateSpace{{"no_rain", "rain"}},
                         ValueDomain::categorical({"no_umbrella", "umbrella"}),
                         PayoffFunction::from_matrix({{0.0, -100.0}, {-50.0, 0.0}}));
}

std::size_t agent_report(const SyntheticAgentSpec& agent, std::span<const double> posterior,
                         const DecisionProblem& problem) {
  if (agent.rule == ReportingRule::kArgmaxPayoff) return best_response(posterior, problem);
  if (problem.num_states() != 2 || !problem.decisions().is_numeric()) {
    throw SchemaError("rule-needs-binary-grid", agent.name,
                      "posterior_mean_on_grid needs a binary state and a numeric decision grid");
  }
  const double mean = posterior[1];
  const auto& points = problem.decisions().points;
  std::size_t best = 0;
  double best_dist = std::abs(points[0].value() - mean);
  for (std::size_t d = 1; d < points.size(); ++d) {
    const double dist = std::abs(points[d].value() - mean);
    if (dist < best_dist) {
      best_dist = dist;
      best = d;
    }
  }
  return best;
}

SignalSchema schema_with_agents(const SignalSchema& base, const DecisionProblem& problem,
                                std::span<const SyntheticAgentSpec> agents) {
  std::vector<DecisionColumn> decisions = base.decisions();
  for (const auto& a : agents) decisions.push_back({a.name, a.role, problem.decisions()});
  return SignalSchema(base.signals(), std::move(decisions));
}

JointDistribution population_with_agents(const JointDistribution& population,
                                         const DecisionProblem& problem,
                                         std::span<const SyntheticAgentSpec> agents) {
  if (population.smoothed()) {
    throw EstimationError("smoothed-population", "", "agents need an unsmoothed population joint");
  }
  const std::size_t k = problem.num_decisions();
  double cells_needed = static_cast<double>(population.num_cells());
  for (const auto& a : agents) cells_needed *= a.noise > 0.0 ? static_cast<double>(k) : 1.0;
  if (cells_needed > kPopulationCellLimit) {
    throw LimitError("population-too-large", "", "exact agent expansion exceeds 1e7 cells");
  }
  std::vector<std::map<Realization, std::size_t>> reports;
  for (const auto& a : agents) reports.push_back(informed_reports(population, problem, a));

  std::vector<JointDistribution::Cell> cells;
  for (std::size_t c = 0; c < population.num_cells(); ++c) {
    const auto values = population.cell_values(c);
    std::vector<JointDistribution::Cell> partial{
        {{values.begin(), values.end()}, population.cell_state(c), population.cell_mass(c)}};
    for (std::size_t a = 0; a < agents.size(); ++a) {
      const std::size_t informed = reports[a].at(project(values, agents[a].used_signals));
      const double eps = agents[a].noise;
      std::vector<JointDistribution::Cell> next;
      for (const auto& cell : partial) {
        for (std::size_t d = 0; d < k; ++d) {
          double p = eps / static_cast<double>(k);
          if (d == informed) p += 1.0 - eps;
          if (p == 0.0) continue;
          auto extended = cell;
          extended.values.push_back(static_cast<std::uint32_t>(d));
          extended.weight *= p;
          next.push_back(std::move(extended));
        }
      }
      partial = std::move(next);
    }
    cells.insert(cells.end(), std::make_move_iterator(partial.begin()),
                 std::make_move_iterator(partial.end()));
  }
  return JointDistribution(schema_with_agents(population.schema(), problem, agents),
                           population.num_states(), std::move(cells));
}

Dataset generate_dataset(const JointDistribution& population, const DecisionProblem& problem,
                         std::span<const SyntheticAgentSpec> agents, std::size_t rows,
                         std::uint64_t seed) {
  if (rows < 1) throw EstimationError("no-rows", "rows", "need at least one row");
  if (!population.schema().decisions().empty()) {
    throw SchemaError("population-has-decisions", "",
                      "generating population must contain only signals and the state");
  }
  if (population.smoothed()) {
    throw EstimationError("smoothed-population", "", "generating population must be unsmoothed");
  }
  std::vector<std::map<Realization, std::size_t>> reports;
  for (const auto& a : agents) reports.push_back(informed_reports(population, problem, a));

  std::vector<double> cumulative(population.num_cells());
  double acc = 0.0;
  for (std::size_t c = 0; c < population.num_cells(); ++c) {
    acc += population.cell_mass(c);
    cumulative[c] = acc;
  }

  Dataset data(schema_with_agents(population.schema(), problem, agents), population.num_states());
  const std::size_t k = problem.num_decisions();
  std::vector<std::uint32_t> row;
  for (std::size_t r = 0; r < rows; ++r) {
    Rng rng(seed, r, rng_tag::kSynthRows);
    const double u = rng.uniform01() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    const auto c = static_cast<std::size_t>(it - cumulative.begin());
    const auto values = population.cell_values(c);
    row.assign(values.begin(), values.end());
    for (std::size_t a = 0; a < agents.size(); ++a) {
      Rng agent_rng(seed, r, kAgentStreamBase + a);
      std::size_t d;
      if (agents[a].noise > 0.0 && agent_rng.uniform01() < agents[a].noise) {
        d = agent_rng.uniform_index(k);
      } else {
        d = reports[a].at(project(values, agents[a].used_signals));
      }
      row.push_back(static_cast<std::uint32_t>(d));
    }
    data.add_row(population.cell_state(c), row);
  }
  return data;
}

double brute_force_rational(const JointDistribution& joint, const DecisionProblem& problem,
                            const VarSet& vars) {
  const auto& schema = joint.schema();
  const std::size_t nv = schema.num_variables();
  const std::size_t ns = joint.num_states();
  std::vector<std::size_t> sizes(nv);
  double dense = static_cast<double>(ns);
  for (std::size_t p = 0; p < nv; ++p) {
    sizes[p] = schema.domain_size(p);
    dense *= static_cast<double>(sizes[p]);
  }
  if (dense > kBruteForceLimit) {
    throw LimitError("oracle-too-large", "", "brute-force oracle limited to 1e6 dense cells");
  }
  const auto pos = vars.positions();
  std::size_t num_v = 1;
  for (auto p : pos) num_v *= sizes[p];

  // accumulated[v * ns + state] = Pr[V = v, state]
  std::vector<double> accumulated(num_v * ns, 0.0);
  std::vector<std::uint32_t> full(nv, 0);
  const auto total_cells = static_cast<std::size_t>(dense) / ns;
  for (std::size_t idx = 0; idx < total_cells; ++idx) {
    std::size_t rem = idx;
    for (std::size_t p = nv; p-- > 0;) {
      full[p] = static_cast<std::uint32_t>(rem % sizes[p]);
      rem /= sizes[p];
    }
    std::size_t v = 0;
    for (auto p : pos) v = v * sizes[p] + full[p];
    for (std::size_t s = 0; s < ns; ++s) {
      accumulated[v * ns + s] += joint.probability(full, static_cast<std::uint32_t>(s));
    }
  }

  double r = 0.0;
  for (std::size_t v = 0; v < num_v; ++v) {
    double pv = 0.0;
    for (std::size_t s = 0; s < ns; ++s) pv += accumulated[v * ns + s];
    if (pv <= 0.0) continue;
    double best = -INFINITY;
    for (std::size_t d = 0; d < problem.num_decisions(); ++d) {
      double e = 0.0;
      for (std::size_t s = 0; s < ns; ++s) e += accumulated[v * ns + s] / pv * problem.payoff(d, s);
      best = std::max(best, e);
    }
    r += pv * best;
  }
  return r;
}

Preset xor_preset() {
  return {"xor", "state", make_xor_joint(), brier_problem(), {}};
}

double agent_accuracy(const JointDistribution& population, const DecisionProblem& problem,
                      const SyntheticAgentSpec& agent) {
  const auto reports = informed_reports(population, problem, agent);
  const std::size_t k = problem.num_decisions();
  std::vector<double> noise_correct(2, 0.0);
  for (std::uint32_t s = 0; s < 2; ++s) {
    for (std::size_t d = 0; d < k; ++d) noise_correct[s] += side_correct(problem, d, s);
    noise_correct[s] /= static_cast<double>(k);
  }
  double acc = 0.0;
  for (std::size_t c = 0; c < population.num_cells(); ++c) {
    const auto values = population.cell_values(c);
    const std::uint32_t s = population.cell_state(c);
    const std::size_t d = reports.at(project(values, agent.used_signals));
    acc += population.cell_mass(c) *
           ((1.0 - agent.noise) * side_correct(problem, d, s) + agent.noise * noise_correct[s]);
  }
  return acc;
}

Preset deepfake_preset() {
  // P(feature = 1 | genuine), P(feature = 1 | fake)
  const std::vector<std::string> names{"grainy",   "blurry",   "dark",     "flicker",
                                       "two_people", "floating", "dark_skin"};
  const std::vector<std::pair<double, double>> p_one{
      {0.30, 0.45}, {0.35, 0.50}, {0.40, 0.52}, {0.15, 0.55}, {0.30, 0.38}, {0.20, 0.35}, {0.25, 0.45}};
  JointDistribution population = independent_binary_population(names, p_one, 0.5);
  DecisionProblem problem = brier_problem(100, {"0", "1"});

  SyntheticAgentSpec human{"human", Role::kHuman, {0, 2, 4, 6}, 0.30, ReportingRule::kPosteriorMeanOnGrid};
  SyntheticAgentSpec ai{"ai", Role::kAi, {0, 1, 3, 5}, 0.0, ReportingRule::kPosteriorMeanOnGrid};
  SyntheticAgentSpec team{"human_ai", Role::kHumanAi, {0, 1, 2, 3, 4, 6}, 0.30,
                          ReportingRule::kPosteriorMeanOnGrid};

  // Accuracy is linear in noise: acc(eps) = (1 - eps) acc0 + eps * 0.5.
  constexpr double kAiAccuracy = 0.65;
  const double acc0 = agent_accuracy(population, problem, ai);
  ai.noise = acc0 > kAiAccuracy ? (acc0 - kAiAccuracy) / (acc0 - 0.5) : 0.0;

  return {"deepfake", "fake", std::move(population), std::move(problem), {human, ai, team}};
}

}  // namespace infogain
