#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace infogain {

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

enum class Severity { kError, kWarning };

struct Diagnostic {
  std::string code;  // e.g. "brier-requires-binary-state"
  std::string message;
  Severity severity = Severity::kError;
};

bool has_errors(std::span<const Diagnostic> diagnostics);

// ---------------------------------------------------------------------------
// Exact grid values
// ---------------------------------------------------------------------------

// A rational number ticks / scale. Numeric decisions are kept exact so that
// "0.5", "0.50" and "1/2" denote the same grid point and "0.505" never
// silently snaps onto the 1% grid.
struct GridPoint {
  std::int64_t ticks = 0;
  std::int64_t scale = 1;

  double value() const { return static_cast<double>(ticks) / static_cast<double>(scale); }
  std::string label() const;

  friend bool operator==(const GridPoint& a, const GridPoint& b);
  friend bool operator<(const GridPoint& a, const GridPoint& b);
};

// Parses a plain decimal ("0.25", "1", "-0.5") or a fraction ("1/3").
// Exponents, whitespace and signs other than a leading '-' are rejected.
std::optional<GridPoint> parse_grid_point(std::string_view text);

// ---------------------------------------------------------------------------
// Spaces
// ---------------------------------------------------------------------------

struct StateSpace {
  std::vector<std::string> labels;

  std::size_t size() const { return labels.size(); }
  std::optional<std::size_t> find(std::string_view label) const;
};

enum class DomainKind { kCategorical, kNumeric };

// An ordered finite set of values. Numeric domains carry exact grid points
// alongside their canonical labels.
struct ValueDomain {
  DomainKind kind = DomainKind::kCategorical;
  std::vector<std::string> labels;
  std::vector<GridPoint> points;  // numeric only; parallel to labels

  static ValueDomain categorical(std::vector<std::string> labels);
  static ValueDomain numeric(std::vector<GridPoint> points);
  // {0, 1/steps, ..., 1}; steps = 100 gives the 101-point percentage grid.
  static ValueDomain uniform_grid(int steps);

  std::size_t size() const { return labels.size(); }
  bool is_numeric() const { return kind == DomainKind::kNumeric; }

  // Exact lookup. Numeric domains match by value, so "0.5" finds "0.50".
  std::optional<std::size_t> find(std::string_view text) const;
};

using DecisionSpace = ValueDomain;

// ---------------------------------------------------------------------------
// Payoff
// ---------------------------------------------------------------------------

enum class PayoffKind { kMatrix, kBrier };

struct PayoffFunction {
  PayoffKind kind = PayoffKind::kBrier;
  // matrix[d][state]; present iff kind == kMatrix.
  std::vector<std::vector<double>> matrix;

  static PayoffFunction brier() { return {PayoffKind::kBrier, {}}; }
  static PayoffFunction from_matrix(std::vector<std::vector<double>> rows) {
    return {PayoffKind::kMatrix, std::move(rows)};
  }
};

// The scoring context of every computation. The payoff table is materialized
// at construction; consistency is checked by validate_problem(), not here, so
// that malformed problems can still be inspected.
class DecisionProblem {
 public:
  DecisionProblem(StateSpace states, DecisionSpace decisions, PayoffFunction payoff);

  const StateSpace& states() const { return states_; }
  const DecisionSpace& decisions() const { return decisions_; }
  const PayoffFunction& payoff_function() const { return payoff_; }
  std::size_t num_states() const { return states_.size(); }
  std::size_t num_decisions() const { return decisions_.size(); }
  bool is_brier() const { return payoff_.kind == PayoffKind::kBrier; }

  // S(d, state). Throws std::out_of_range on bad indices.
  double payoff(std::size_t decision, std::size_t state) const;

  // Sum over states of weights[state] * S(d, state), accumulated in state
  // order. Weights need not be normalized.
  double expected_payoff(std::size_t decision, std::span<const double> weights) const;

 private:
  StateSpace states_;
  DecisionSpace decisions_;
  PayoffFunction payoff_;
  std::vector<double> table_;  // row-major [decision][state]
  bool table_valid_ = false;
};

std::vector<Diagnostic> validate_problem(const DecisionProblem& problem);

// Brier payoff 1 - (state - d)^2 on the uniform grid with `steps` intervals.
DecisionProblem brier_problem(int steps = 100,
                              std::vector<std::string> state_labels = {"0", "1"});

// ---------------------------------------------------------------------------
// Information structure
// ---------------------------------------------------------------------------

struct BasicSignal {
  std::string name;
  std::vector<std::string> values;
};

enum class Role { kHuman, kAi, kHumanAi, kOther };

std::string_view role_name(Role role);
std::optional<Role> parse_role(std::string_view name);

struct DecisionColumn {
  std::string name;
  Role role = Role::kOther;
  ValueDomain domain;
};

struct VariableRef {
  enum class Kind { kSignal, kDecision };
  Kind kind = Kind::kSignal;
  std::size_t index = 0;

  friend bool operator==(const VariableRef&, const VariableRef&) = default;
};

// A sorted set of variable positions in a SignalSchema (signals first, then
// decision columns).
class VarSet {
 public:
  VarSet() = default;
  VarSet(std::initializer_list<std::size_t> positions);
  explicit VarSet(std::vector<std::size_t> positions);

  std::size_t size() const { return positions_.size(); }
  bool empty() const { return positions_.empty(); }
  bool contains(std::size_t position) const;
  bool is_subset_of(const VarSet& other) const;
  std::span<const std::size_t> positions() const { return positions_; }
  auto begin() const { return positions_.begin(); }
  auto end() const { return positions_.end(); }

  VarSet operator|(const VarSet& other) const;
  VarSet with(std::size_t position) const;

  friend bool operator==(const VarSet&, const VarSet&) = default;
  friend auto operator<=>(const VarSet&, const VarSet&) = default;

 private:
  std::vector<std::size_t> positions_;
};

// Ordered signals and decision columns. Decision columns are ordinary
// conditioning variables: a rational agent can be handed the behavioral
// decisions exactly as it is handed a signal.
class SignalSchema {
 public:
  SignalSchema() = default;
  SignalSchema(std::vector<BasicSignal> signals, std::vector<DecisionColumn> decisions);

  const std::vector<BasicSignal>& signals() const { return signals_; }
  const std::vector<DecisionColumn>& decisions() const { return decisions_; }
  std::size_t num_signals() const { return signals_.size(); }
  std::size_t num_variables() const { return signals_.size() + decisions_.size(); }

  std::size_t position(const VariableRef& ref) const;
  VariableRef ref_at(std::size_t position) const;
  const std::string& name_at(std::size_t position) const;
  std::size_t domain_size(std::size_t position) const;
  const std::vector<std::string>& labels_at(std::size_t position) const;
  bool is_decision(std::size_t position) const { return position >= signals_.size(); }

  // Name lookup. Throws SchemaError("unknown-variable") listing valid names.
  VariableRef resolve(std::string_view name) const;
  std::size_t resolve_position(std::string_view name) const;

  // Comma-separated names; "none" or "" is the empty set.
  VarSet parse_varset(std::string_view names) const;
  VarSet all_signals() const;
  std::vector<std::string> names_of(const VarSet& set) const;

  // Structural diagnostics (duplicates, constant signals as warnings).
  std::vector<Diagnostic> validate() const;

 private:
  std::vector<BasicSignal> signals_;
  std::vector<DecisionColumn> decisions_;
};

// Human-readable label of a ground set: "none", "human", or "human+ai".
std::string varset_label(const SignalSchema& schema, const VarSet& set);
// Role of a ground set: the column role for a single decision column,
// otherwise kOther.
Role varset_role(const SignalSchema& schema, const VarSet& set);

}  // namespace infogain
