#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "infogain/joint.hpp"
#include "infogain/model.hpp"
#include "infogain/rng.hpp"

namespace infogain::testing {

inline SignalSchema binary_schema(std::size_t signals, std::size_t decisions = 0) {
  std::vector<BasicSignal> s;
  for (std::size_t i = 0; i < signals; ++i) s.push_back({"s" + std::to_string(i), {"0", "1"}});
  std::vector<DecisionColumn> d;
  for (std::size_t i = 0; i < decisions; ++i) {
    d.push_back({"d" + std::to_string(i), Role::kOther, ValueDomain::categorical({"0", "1"})});
  }
  return SignalSchema(std::move(s), std::move(d));
}

// Random weights over every (values, state) cell of a binary schema; roughly
// a third of the cells are left empty so supports are sparse.
inline JointDistribution random_joint(Rng& rng, const SignalSchema& schema, std::size_t num_states = 2) {
  const std::size_t n = schema.num_variables();
  std::vector<JointDistribution::Cell> cells;
  for (std::size_t code = 0; code < (std::size_t{1} << n); ++code) {
    std::vector<std::uint32_t> values(n);
    for (std::size_t v = 0; v < n; ++v) values[v] = static_cast<std::uint32_t>((code >> v) & 1u);
    for (std::uint32_t w = 0; w < num_states; ++w) {
      if (rng.uniform_index(3) == 0) continue;
      cells.push_back({values, w, rng.uniform01() + 1e-3});
    }
  }
  if (cells.empty()) cells.push_back({std::vector<std::uint32_t>(n, 0), 0, 1.0});
  return JointDistribution(schema, num_states, std::move(cells));
}

inline DecisionProblem random_matrix_problem(Rng& rng, std::size_t decisions, std::size_t states = 2) {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows(decisions, std::vector<double>(states));
  for (std::size_t d = 0; d < decisions; ++d) {
    labels.push_back("a" + std::to_string(d));
    for (auto& x : rows[d]) x = rng.uniform01() * 20.0 - 10.0;
  }
  std::vector<std::string> state_labels;
  for (std::size_t w = 0; w < states; ++w) state_labels.push_back("w" + std::to_string(w));
  return DecisionProblem(StateSpace{state_labels}, ValueDomain::categorical(labels),
                         PayoffFunction::from_matrix(rows));
}

inline std::vector<VarSet> all_subsets(std::size_t n) {
  std::vector<VarSet> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> p;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1u) p.push_back(i);
    }
    out.emplace_back(std::move(p));
  }
  return out;
}

// A one-signal schema whose signal copies the state (or ignores it).
inline JointDistribution copy_joint(bool informative) {
  std::vector<JointDistribution::Cell> cells;
  for (std::uint32_t w = 0; w < 2; ++w) {
    for (std::uint32_t s = 0; s < 2; ++s) {
      if (informative && s != w) continue;
      cells.push_back({{s}, w, 1.0});
    }
  }
  return JointDistribution(binary_schema(1), 2, std::move(cells));
}

}  // namespace infogain::testing
