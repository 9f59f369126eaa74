#include "infogain/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "infogain/errors.hpp"

namespace infogain {

bool has_errors(std::span<const Diagnostic> diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::kError; });
}

// ---------------------------------------------------------------------------
// GridPoint
// ---------------------------------------------------------------------------

namespace {

// Smallest d with 10^d divisible by scale, if any d <= 18 works.
std::optional<int> decimal_digits(std::int64_t scale) {
  __int128 p = 1;
  for (int d = 0; d <= 18; ++d) {
    if (p % scale == 0) return d;
    p *= 10;
  }
  return std::nullopt;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

bool operator==(const GridPoint& a, const GridPoint& b) {
  return static_cast<__int128>(a.ticks) * b.scale == static_cast<__int128>(b.ticks) * a.scale;
}

bool operator<(const GridPoint& a, const GridPoint& b) {
  return static_cast<__int128>(a.ticks) * b.scale < static_cast<__int128>(b.ticks) * a.scale;
}

std::string GridPoint::label() const {
  const auto digits = decimal_digits(scale);
  if (!digits) return std::to_string(ticks) + "/" + std::to_string(scale);
  __int128 factor = 1;
  for (int i = 0; i < *digits; ++i) factor *= 10;
  const __int128 scaled = static_cast<__int128>(ticks) * (factor / scale);
  const bool negative = scaled < 0;
  const __int128 mag = negative ? -scaled : scaled;
  const auto whole = static_cast<std::int64_t>(mag / factor);
  auto frac = static_cast<std::int64_t>(mag % factor);
  std::string out = negative ? "-" : "";
  out += std::to_string(whole);
  if (*digits > 0) {
    std::string f = std::to_string(frac);
    out += "." + std::string(static_cast<std::size_t>(*digits) - f.size(), '0') + f;
  }
  return out;
}

std::optional<GridPoint> parse_grid_point(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  if (text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den) || num.size() > 18 || den.size() > 18) return std::nullopt;
    GridPoint p{std::stoll(std::string(num)), std::stoll(std::string(den))};
    if (p.scale == 0) return std::nullopt;
    if (negative) p.ticks = -p.ticks;
    return p;
  }
  const auto dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (dot != std::string_view::npos && frac.empty()) return std::nullopt;
  if (whole.empty() && frac.empty()) return std::nullopt;
  if (!whole.empty() && !all_digits(whole)) return std::nullopt;
  if (!frac.empty() && !all_digits(frac)) return std::nullopt;
  if (whole.size() + frac.size() > 18) return std::nullopt;
  const std::string digits = std::string(whole) + std::string(frac);
  GridPoint p{std::stoll(digits), 1};
  for (std::size_t i = 0; i < frac.size(); ++i) p.scale *= 10;
  if (negative) p.ticks = -p.ticks;
  return p;
}

// ---------------------------------------------------------------------------
// Spaces
// ---------------------------------------------------------------------------

std::optional<std::size_t> StateSpace::find(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  return std::nullopt;
}

ValueDomain ValueDomain::categorical(std::vector<std::string> labels) {
  return {DomainKind::kCategorical, std::move(labels), {}};
}

ValueDomain ValueDomain::numeric(std::vector<GridPoint> points) {
  ValueDomain d{DomainKind::kNumeric, {}, std::move(points)};
  d.labels.reserve(d.points.size());
  for (const auto& p : d.points) d.labels.push_back(p.label());
  return d;
}

ValueDomain ValueDomain::uniform_grid(int steps) {
  if (steps < 1) throw SchemaError("invalid-grid", "grid.steps", "grid needs at least one step");
  std::vector<GridPoint> points;
  points.reserve(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) points.push_back({k, steps});
  return numeric(std::move(points));
}

std::optional<std::size_t> ValueDomain::find(std::string_view text) const {
  if (kind == DomainKind::kCategorical) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == text) return i;
    }
    return std::nullopt;
  }
  const auto p = parse_grid_point(text);
  if (!p) return std::nullopt;
  const auto it = std::lower_bound(points.begin(), points.end(), *p);
  if (it != points.end() && *it == *p) return static_cast<std::size_t>(it - points.begin());
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// DecisionProblem
// ---------------------------------------------------------------------------

DecisionProblem::DecisionProblem(StateSpace states, DecisionSpace decisions, PayoffFunction payoff)
    : states_(std::move(states)), decisions_(std::move(decisions)), payoff_(std::move(payoff)) {
  const std::size_t nd = decisions_.size();
  const std::size_t ns = states_.size();
  table_.assign(nd * ns, 0.0);
  if (payoff_.kind == PayoffKind::kMatrix) {
    table_valid_ = payoff_.matrix.size() == nd;
    for (std::size_t d = 0; table_valid_ && d < nd; ++d) {
      if (payoff_.matrix[d].size() != ns) {
        table_valid_ = false;
        break;
      }
      for (std::size_t s = 0; s < ns; ++s) table_[d * ns + s] = payoff_.matrix[d][s];
    }
  } else {
    table_valid_ = decisions_.is_numeric() && decisions_.points.size() == nd;
    for (std::size_t d = 0; table_valid_ && d < nd; ++d) {
      const double dv = decisions_.points[d].value();
      for (std::size_t s = 0; s < ns; ++s) {
        const double diff = static_cast<double>(s) - dv;
        table_[d * ns + s] = 1.0 - diff * diff;
      }
    }
  }
}

double DecisionProblem::payoff(std::size_t decision, std::size_t state) const {
  if (decision >= num_decisions()) throw std::out_of_range("decision index out of range");
  if (state >= num_states()) throw std::out_of_range("state index out of range");
  if (!table_valid_) throw std::logic_error("payoff function inconsistent with decision problem");
  return table_[decision * num_states() + state];
}

double DecisionProblem::expected_payoff(std::size_t decision, std::span<const double> weights) const {
  const std::size_t ns = num_states();
  const double* row = table_.data() + decision * ns;
  double total = 0.0;
  for (std::size_t s = 0; s < ns; ++s) total += weights[s] * row[s];
  return total;
}

std::vector<Diagnostic> validate_problem(const DecisionProblem& problem) {
  std::vector<Diagnostic> out;
  const auto& states = problem.states();
  const auto& decisions = problem.decisions();
  const auto& payoff = problem.payoff_function();

  if (states.size() < 2) {
    out.push_back({"too-few-states", "state space needs at least 2 states"});
  }
  if (std::set<std::string>(states.labels.begin(), states.labels.end()).size() != states.size()) {
    out.push_back({"duplicate-state-label", "state labels must be unique"});
  }
  if (decisions.size() == 0) {
    out.push_back({"empty-decision-space", "decision space is empty"});
  }
  if (decisions.is_numeric()) {
    if (decisions.points.size() != decisions.labels.size()) {
      out.push_back({"grid-label-mismatch", "numeric decision labels and points differ in length"});
    }
    for (std::size_t i = 1; i < decisions.points.size(); ++i) {
      if (!(decisions.points[i - 1] < decisions.points[i])) {
        out.push_back({"grid-not-strictly-increasing",
                       "decision grid point " + std::to_string(i) + " (" + decisions.points[i].label() +
                           ") does not exceed its predecessor"});
        break;
      }
    }
  } else if (std::set<std::string>(decisions.labels.begin(), decisions.labels.end()).size() !=
             decisions.size()) {
    out.push_back({"duplicate-decision-label", "categorical decision labels must be unique"});
  }

  if (payoff.kind == PayoffKind::kBrier) {
    if (states.size() != 2) {
      out.push_back({"brier-requires-binary-state",
                     "brier payoff needs exactly 2 states, got " + std::to_string(states.size())});
    }
    if (!decisions.is_numeric()) {
      out.push_back({"brier-requires-numeric-decisions", "brier payoff needs a numeric decision grid"});
    } else {
      for (const auto& p : decisions.points) {
        if (p < GridPoint{0, 1} || GridPoint{1, 1} < p) {
          out.push_back({"grid-out-of-range", "brier decision " + p.label() + " outside [0, 1]"});
          break;
        }
      }
    }
  } else {
    bool mismatch = payoff.matrix.size() != decisions.size();
    bool finite = true;
    for (const auto& row : payoff.matrix) {
      if (row.size() != states.size()) mismatch = true;
      for (double v : row) finite = finite && std::isfinite(v);
    }
    if (mismatch) {
      out.push_back({"matrix-dimension-mismatch", "payoff matrix must be |decisions| x |states| = " +
                                                      std::to_string(decisions.size()) + " x " +
                                                      std::to_string(states.size())});
    }
    if (!finite) out.push_back({"matrix-non-finite", "payoff matrix has non-finite entries"});
  }
  return out;
}

DecisionProblem brier_problem(int steps, std::vector<std::string> state_labels) {
  return DecisionProblem(StateSpace{std::move(state_labels)}, ValueDomain::uniform_grid(steps),
                         PayoffFunction::brier());
}

// ---------------------------------------------------------------------------
// Roles and variable sets
// ---------------------------------------------------------------------------

std::string_view role_name(Role role) {
  switch (role) {
    case Role::kHuman: return "human";
    case Role::kAi: return "ai";
    case Role::kHumanAi: return "human_ai";
    case Role::kOther: return "other";
  }
  return "other";
}

std::optional<Role> parse_role(std::string_view name) {
  if (name == "human") return Role::kHuman;
  if (name == "ai") return Role::kAi;
  if (name == "human_ai") return Role::kHumanAi;
  if (name == "other") return Role::kOther;
  return std::nullopt;
}

VarSet::VarSet(std::initializer_list<std::size_t> positions)
    : VarSet(std::vector<std::size_t>(positions)) {}

VarSet::VarSet(std::vector<std::size_t> positions) : positions_(std::move(positions)) {
  std::sort(positions_.begin(), positions_.end());
  positions_.erase(std::unique(positions_.begin(), positions_.end()), positions_.end());
}

bool VarSet::contains(std::size_t position) const {
  return std::binary_search(positions_.begin(), positions_.end(), position);
}

bool VarSet::is_subset_of(const VarSet& other) const {
  return std::includes(other.positions_.begin(), other.positions_.end(), positions_.begin(),
                       positions_.end());
}

VarSet VarSet::operator|(const VarSet& other) const {
  VarSet out;
  std::set_union(positions_.begin(), positions_.end(), other.positions_.begin(),
                 other.positions_.end(), std::back_inserter(out.positions_));
  return out;
}

VarSet VarSet::with(std::size_t position) const {
  VarSet out = *this;
  const auto it = std::lower_bound(out.positions_.begin(), out.positions_.end(), position);
  if (it == out.positions_.end() || *it != position) out.positions_.insert(it, position);
  return out;
}

// ---------------------------------------------------------------------------
// SignalSchema
// ---------------------------------------------------------------------------

SignalSchema::SignalSchema(std::vector<BasicSignal> signals, std::vector<DecisionColumn> decisions)
    : signals_(std::move(signals)), decisions_(std::move(decisions)) {}

std::size_t SignalSchema::position(const VariableRef& ref) const {
  if (ref.kind == VariableRef::Kind::kSignal) {
    if (ref.index >= signals_.size()) throw std::out_of_range("signal index out of range");
    return ref.index;
  }
  if (ref.index >= decisions_.size()) throw std::out_of_range("decision column index out of range");
  return signals_.size() + ref.index;
}

VariableRef SignalSchema::ref_at(std::size_t position) const {
  if (position < signals_.size()) return {VariableRef::Kind::kSignal, position};
  if (position < num_variables()) return {VariableRef::Kind::kDecision, position - signals_.size()};
  throw std::out_of_range("variable position out of range");
}

const std::string& SignalSchema::name_at(std::size_t position) const {
  if (position < signals_.size()) return signals_[position].name;
  return decisions_.at(position - signals_.size()).name;
}

const std::vector<std::string>& SignalSchema::labels_at(std::size_t position) const {
  if (position < signals_.size()) return signals_[position].values;
  return decisions_.at(position - signals_.size()).domain.labels;
}

std::size_t SignalSchema::domain_size(std::size_t position) const {
  return labels_at(position).size();
}

VariableRef SignalSchema::resolve(std::string_view name) const {
  return ref_at(resolve_position(name));
}

std::size_t SignalSchema::resolve_position(std::string_view name) const {
  for (std::size_t p = 0; p < num_variables(); ++p) {
    if (name_at(p) == name) return p;
  }
  std::string valid;
  for (std::size_t p = 0; p < num_variables(); ++p) {
    valid += (p ? ", " : "") + name_at(p);
  }
  throw SchemaError("unknown-variable", std::string(name),
                    "unknown variable; valid names are: " + (valid.empty() ? "(none)" : valid));
}

VarSet SignalSchema::parse_varset(std::string_view names) const {
  std::vector<std::size_t> positions;
  if (names.empty() || names == "none") return {};
  std::size_t start = 0;
  while (start <= names.size()) {
    const auto comma = names.find(',', start);
    const auto token = names.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                           : comma - start);
    if (token.empty()) {
      throw SchemaError("unknown-variable", std::string(names), "empty variable name in list");
    }
    positions.push_back(resolve_position(token));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return VarSet(std::move(positions));
}

VarSet SignalSchema::all_signals() const {
  std::vector<std::size_t> p(signals_.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = i;
  return VarSet(std::move(p));
}

std::vector<std::string> SignalSchema::names_of(const VarSet& set) const {
  std::vector<std::string> out;
  for (auto p : set) out.push_back(name_at(p));
  return out;
}

std::vector<Diagnostic> SignalSchema::validate() const {
  std::vector<Diagnostic> out;
  std::set<std::string> names;
  for (std::size_t p = 0; p < num_variables(); ++p) {
    if (!names.insert(name_at(p)).second) {
      out.push_back({"duplicate-column", "column '" + name_at(p) + "' declared more than once"});
    }
  }
  for (std::size_t i = 0; i < signals_.size(); ++i) {
    const auto& s = signals_[i];
    if (std::set<std::string>(s.values.begin(), s.values.end()).size() != s.values.size()) {
      out.push_back({"duplicate-value", "signals[" + std::to_string(i) + "].values: duplicate"});
    }
    if (s.values.empty()) {
      out.push_back({"empty-domain", "signals[" + std::to_string(i) + "].values: empty"});
    } else if (s.values.size() == 1) {
      out.push_back({"constant-signal",
                     "signal '" + s.name + "' has a single value and carries no information",
                     Severity::kWarning});
    }
  }
  for (std::size_t i = 0; i < decisions_.size(); ++i) {
    const auto& d = decisions_[i].domain;
    if (d.size() == 0) {
      out.push_back({"empty-domain", "decisions[" + std::to_string(i) + "].values: empty"});
    }
    if (std::set<std::string>(d.labels.begin(), d.labels.end()).size() != d.size()) {
      out.push_back({"duplicate-value", "decisions[" + std::to_string(i) + "].values: duplicate"});
    }
    for (std::size_t k = 1; d.is_numeric() && k < d.points.size(); ++k) {
      if (!(d.points[k - 1] < d.points[k])) {
        out.push_back({"grid-not-strictly-increasing",
                       "decisions[" + std::to_string(i) + "].grid: not strictly increasing"});
        break;
      }
    }
  }
  return out;
}

std::string varset_label(const SignalSchema& schema, const VarSet& set) {
  if (set.empty()) return "none";
  std::string out;
  for (auto p : set) out += (out.empty() ? "" : "+") + schema.name_at(p);
  return out;
}

Role varset_role(const SignalSchema& schema, const VarSet& set) {
  if (set.size() != 1) return Role::kOther;
  const auto p = *set.begin();
  if (!schema.is_decision(p)) return Role::kOther;
  return schema.decisions()[p - schema.num_signals()].role;
}

}  // namespace infogain
