#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "infogain/model.hpp"

namespace infogain {

// Rows of (state, signal values, decision values), all as domain indices.
class Dataset {
 public:
  Dataset(SignalSchema schema, std::size_t num_states);

  const SignalSchema& schema() const { return schema_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t num_rows() const { return states_.size(); }
  std::size_t width() const { return schema_.num_variables(); }

  // Appends a row after range-checking every index. Throws DataError.
  void add_row(std::uint32_t state, std::span<const std::uint32_t> values);

  std::uint32_t state(std::size_t row) const { return states_[row]; }
  std::span<const std::uint32_t> values(std::size_t row) const {
    return {values_.data() + row * width(), width()};
  }

  // The rows at the given indices, in that order (duplicates allowed).
  Dataset select(std::span<const std::size_t> rows) const;

 private:
  SignalSchema schema_;
  std::size_t num_states_;
  std::vector<std::uint32_t> states_;
  std::vector<std::uint32_t> values_;
};

// A realization of a variable set: one value index per variable, in the
// set's (ascending position) order.
using Realization = std::vector<std::uint32_t>;

// Probability vector over the state space.
using Posterior = std::vector<double>;

// Sparse probability table over (schema variables x state).
//
// Mass of a cell = (weight + background) / normalizer, where `background` is
// spread over every cell of the full product space. With background = 0 only
// the stored cells carry mass; add-alpha smoothing sets background = alpha.
class JointDistribution {
 public:
  struct Cell {
    std::vector<std::uint32_t> values;
    std::uint32_t state = 0;
    double weight = 0.0;
  };

  // Cells with equal (values, state) are merged; zero weights are dropped.
  // Throws EstimationError if nothing carries mass.
  JointDistribution(SignalSchema schema, std::size_t num_states, std::vector<Cell> cells,
                    double background = 0.0);

  const SignalSchema& schema() const { return schema_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t num_variables() const { return schema_.num_variables(); }

  // Stored cells, sorted lexicographically by (values, state).
  std::size_t num_cells() const { return states_.size(); }
  std::span<const std::uint32_t> cell_values(std::size_t i) const {
    return {values_.data() + i * num_variables(), num_variables()};
  }
  std::uint32_t cell_state(std::size_t i) const { return states_[i]; }
  // Normalized stored mass of cell i, excluding the background share.
  double cell_mass(std::size_t i) const { return weights_[i] / normalizer_; }

  // Normalized mass added to every cell of the product space.
  double background_mass() const { return background_ / normalizer_; }
  bool smoothed() const { return background_ > 0.0; }

  // Probability of one full (values, state) tuple.
  double probability(std::span<const std::uint32_t> values, std::uint32_t state) const;

  // Product of domain sizes over the given positions, as a double.
  double product_size(const VarSet& vars) const;

 private:
  SignalSchema schema_;
  std::size_t num_states_;
  std::vector<std::uint32_t> values_;
  std::vector<std::uint32_t> states_;
  std::vector<double> weights_;
  double background_ = 0.0;
  double normalizer_ = 1.0;
};

// Plug-in estimate (alpha = 0: count / N) or add-alpha smoothing over the full
// product space of state and every variable, decision columns included.
JointDistribution estimate_joint(const Dataset& data, double alpha = 0.0);

// Per-state masses of every realization of `vars` with positive mass, in
// lexicographic order of value indices. With smoothing every realization of
// the product space has positive mass, so only observed realizations are
// listed explicitly and the rest are summarized in `unobserved_*`.
struct Grouping {
  std::size_t width = 0;            // |vars|
  std::size_t num_states = 0;
  std::vector<std::uint32_t> keys;  // width values per group
  std::vector<double> masses;       // num_states masses per group (joint, not conditional)
  double unobserved_count = 0.0;    // realizations with background mass only
  std::vector<double> unobserved_masses;

  std::size_t num_groups() const { return width ? keys.size() / width : masses.size() / num_states; }
  std::span<const std::uint32_t> key(std::size_t g) const { return {keys.data() + g * width, width}; }
  std::span<const double> group_masses(std::size_t g) const {
    return {masses.data() + g * num_states, num_states};
  }
};

Grouping group_by(const JointDistribution& joint, const VarSet& vars);

// Marginal over `vars`, summing out every excluded variable and the state.
// The empty set gives {(): 1}. Under smoothing this enumerates the dense
// product space of `vars` and throws LimitError beyond 10^7 realizations.
std::map<Realization, double> marginal(const JointDistribution& joint, const VarSet& vars);

// Positive-mass realizations of marginal(joint, vars) in lexicographic order.
std::vector<std::pair<Realization, double>> support(const JointDistribution& joint,
                                                    const VarSet& vars);

// Pr[state | vars = assignment]. Throws ConditioningError on a zero-mass
// assignment and SchemaError if the assignment does not fit `vars`.
Posterior posterior(const JointDistribution& joint, const VarSet& vars,
                    std::span<const std::uint32_t> assignment);

// Marginal distribution of the state.
Posterior state_marginal(const JointDistribution& joint);

}  // namespace infogain
