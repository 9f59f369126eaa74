#include "infogain/joint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "infogain/errors.hpp"

namespace infogain {

namespace {

constexpr double kDenseLimit = 1e7;

void check_varset(const JointDistribution& joint, const VarSet& vars) {
  for (auto p : vars) {
    if (p >= joint.num_variables()) {
      throw SchemaError("unknown-variable", "position " + std::to_string(p),
                        "variable position outside the joint's schema");
    }
  }
}

// Calls fn(realization) for every realization of `sizes` in lexicographic order.
template <typename Fn>
void for_each_dense(std::span<const std::size_t> sizes, Fn&& fn) {
  Realization r(sizes.size(), 0);
  for (auto s : sizes) {
    if (s == 0) return;
  }
  while (true) {
    fn(static_cast<const Realization&>(r));
    std::size_t i = sizes.size();
    while (i > 0) {
      --i;
      if (++r[i] < sizes[i]) break;
      r[i] = 0;
      if (i == 0) return;
    }
    if (sizes.empty()) return;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Dataset
// ---------------------------------------------------------------------------

Dataset::Dataset(SignalSchema schema, std::size_t num_states)
    : schema_(std::move(schema)), num_states_(num_states) {}

void Dataset::add_row(std::uint32_t state, std::span<const std::uint32_t> values) {
  const std::string row = "row " + std::to_string(num_rows() + 1);
  if (state >= num_states_) throw DataError("index-out-of-range", row, "state index out of range");
  if (values.size() != width()) {
    throw DataError("row-width", row,
                    "expected " + std::to_string(width()) + " values, got " + std::to_string(values.size()));
  }
  for (std::size_t p = 0; p < values.size(); ++p) {
    if (values[p] >= schema_.domain_size(p)) {
      throw DataError("index-out-of-range", row + ", column '" + schema_.name_at(p) + "'",
                      "value index out of range");
    }
  }
  states_.push_back(state);
  values_.insert(values_.end(), values.begin(), values.end());
}

Dataset Dataset::select(std::span<const std::size_t> rows) const {
  Dataset out(schema_, num_states_);
  out.states_.reserve(rows.size());
  out.values_.reserve(rows.size() * width());
  for (auto r : rows) {
    out.states_.push_back(states_.at(r));
    const auto v = values(r);
    out.values_.insert(out.values_.end(), v.begin(), v.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// JointDistribution
// ---------------------------------------------------------------------------

JointDistribution::JointDistribution(SignalSchema schema, std::size_t num_states,
                                     std::vector<Cell> cells, double background)
    : schema_(std::move(schema)), num_states_(num_states), background_(background) {
  if (!(background >= 0.0) || !std::isfinite(background)) {
    throw EstimationError("invalid-smoothing", "alpha", "smoothing must be a finite non-negative number");
  }
  const std::size_t width = schema_.num_variables();
  for (const auto& c : cells) {
    if (c.values.size() != width || c.state >= num_states_) {
      throw EstimationError("invalid-cell", "", "cell does not match the schema");
    }
    for (std::size_t p = 0; p < width; ++p) {
      if (c.values[p] >= schema_.domain_size(p)) {
        throw EstimationError("invalid-cell", schema_.name_at(p), "cell value outside the domain");
      }
    }
    if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) {
      throw EstimationError("invalid-cell", "", "cell weights must be finite and non-negative");
    }
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    if (a.values != b.values) return a.values < b.values;
    return a.state < b.state;
  });
  double total = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!states_.empty() && states_.back() == cells[i].state &&
        std::equal(cells[i].values.begin(), cells[i].values.end(),
                   values_.end() - static_cast<std::ptrdiff_t>(width))) {
      weights_.back() += cells[i].weight;
    } else {
      if (cells[i].weight == 0.0) continue;
      values_.insert(values_.end(), cells[i].values.begin(), cells[i].values.end());
      states_.push_back(cells[i].state);
      weights_.push_back(cells[i].weight);
    }
    total += cells[i].weight;
  }
  std::vector<std::size_t> all(width);
  std::iota(all.begin(), all.end(), std::size_t{0});
  const double space = product_size(VarSet(all)) * static_cast<double>(num_states_);
  normalizer_ = total + background_ * space;
  if (!(normalizer_ > 0.0)) {
    throw EstimationError("empty-joint", "", "joint distribution has no mass");
  }
}

double JointDistribution::product_size(const VarSet& vars) const {
  double n = 1.0;
  for (auto p : vars) n *= static_cast<double>(schema_.domain_size(p));
  return n;
}

double JointDistribution::probability(std::span<const std::uint32_t> values, std::uint32_t state) const {
  const std::size_t width = num_variables();
  double mass = background_mass();
  // Binary search over the sorted (values, state) cells.
  std::size_t lo = 0, hi = num_cells();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const auto v = cell_values(mid);
    const bool less = std::lexicographical_compare(v.begin(), v.end(), values.begin(), values.end()) ||
                      (std::equal(v.begin(), v.end(), values.begin(), values.end()) &&
                       states_[mid] < state);
    if (less) lo = mid + 1; else hi = mid;
  }
  if (lo < num_cells() && states_[lo] == state && values.size() == width &&
      std::equal(values.begin(), values.end(), cell_values(lo).begin())) {
    mass += cell_mass(lo);
  }
  return mass;
}

JointDistribution estimate_joint(const Dataset& data, double alpha) {
  if (data.num_rows() == 0) {
    throw EstimationError("empty-dataset", "", "cannot estimate a joint from an empty dataset");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw EstimationError("invalid-smoothing", "alpha", "smoothing must be a finite non-negative number");
  }
  std::vector<JointDistribution::Cell> cells;
  cells.reserve(data.num_rows());
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    const auto v = data.values(r);
    cells.push_back({{v.begin(), v.end()}, data.state(r), 1.0});
  }
  return JointDistribution(data.schema(), data.num_states(), std::move(cells), alpha);
}

// ---------------------------------------------------------------------------
// Grouping and marginals
// ---------------------------------------------------------------------------

Grouping group_by(const JointDistribution& joint, const VarSet& vars) {
  check_varset(joint, vars);
  const std::size_t ns = joint.num_states();
  const std::size_t k = vars.size();
  const auto pos = vars.positions();

  Grouping g;
  g.width = k;
  g.num_states = ns;

  const double kv = joint.product_size(vars);
  const double rest = joint.product_size(VarSet([&] {
    std::vector<std::size_t> others;
    for (std::size_t p = 0; p < joint.num_variables(); ++p) {
      if (!vars.contains(p)) others.push_back(p);
    }
    return others;
  }()));
  const double bg = joint.background_mass() * rest;

  // Order cells by their projection onto `vars`. Mixed-radix codes when the
  // realization space fits in 64 bits, plain lexicographic comparison otherwise.
  const std::size_t n = joint.num_cells();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  if (kv < 1.8e19) {
    std::vector<std::uint64_t> strides(k, 1);
    for (std::size_t i = k; i-- > 1;) {
      strides[i - 1] = strides[i] * joint.schema().domain_size(pos[i]);
    }
    std::vector<std::pair<std::uint64_t, std::uint32_t>> codes(n);
    for (std::size_t c = 0; c < n; ++c) {
      const auto v = joint.cell_values(c);
      std::uint64_t code = 0;
      for (std::size_t i = 0; i < k; ++i) code += strides[i] * v[pos[i]];
      codes[c] = {code, static_cast<std::uint32_t>(c)};
    }
    std::sort(codes.begin(), codes.end());
    for (std::size_t c = 0; c < n; ++c) order[c] = codes[c].second;
  } else {
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      const auto va = joint.cell_values(a);
      const auto vb = joint.cell_values(b);
      for (auto p : pos) {
        if (va[p] != vb[p]) return va[p] < vb[p];
      }
      return false;
    });
  }

  auto same_key = [&](std::uint32_t cell, std::size_t group) {
    const auto v = joint.cell_values(cell);
    for (std::size_t i = 0; i < k; ++i) {
      if (g.keys[group * k + i] != v[pos[i]]) return false;
    }
    return true;
  };

  std::size_t groups = 0;
  for (std::size_t idx = 0; idx < n; ++idx) {
    const std::uint32_t c = order[idx];
    if (groups == 0 || !same_key(c, groups - 1)) {
      const auto v = joint.cell_values(c);
      for (std::size_t i = 0; i < k; ++i) g.keys.push_back(v[pos[i]]);
      g.masses.insert(g.masses.end(), ns, bg);
      ++groups;
    }
    g.masses[(groups - 1) * ns + joint.cell_state(c)] += joint.cell_mass(c);
  }
  if (joint.smoothed()) {
    g.unobserved_count = kv - static_cast<double>(groups);
    g.unobserved_masses.assign(ns, bg);
  }
  return g;
}

std::map<Realization, double> marginal(const JointDistribution& joint, const VarSet& vars) {
  const Grouping g = group_by(joint, vars);
  std::map<Realization, double> out;
  for (std::size_t i = 0; i < g.num_groups(); ++i) {
    const auto key = g.key(i);
    const auto m = g.group_masses(i);
    out.emplace(Realization(key.begin(), key.end()), std::accumulate(m.begin(), m.end(), 0.0));
  }
  if (g.unobserved_count > 0.0) {
    if (joint.product_size(vars) > kDenseLimit) {
      throw LimitError("dense-limit", "", "smoothed marginal over more than 1e7 realizations");
    }
    const double mass = std::accumulate(g.unobserved_masses.begin(), g.unobserved_masses.end(), 0.0);
    std::vector<std::size_t> sizes;
    for (auto p : vars) sizes.push_back(joint.schema().domain_size(p));
    for_each_dense(sizes, [&](const Realization& r) { out.try_emplace(r, mass); });
  }
  return out;
}

std::vector<std::pair<Realization, double>> support(const JointDistribution& joint, const VarSet& vars) {
  std::vector<std::pair<Realization, double>> out;
  for (auto& [r, p] : marginal(joint, vars)) {
    if (p > 0.0) out.emplace_back(r, p);
  }
  return out;
}

Posterior posterior(const JointDistribution& joint, const VarSet& vars,
                    std::span<const std::uint32_t> assignment) {
  check_varset(joint, vars);
  if (assignment.size() != vars.size()) {
    throw SchemaError("assignment-size", "", "assignment does not match the conditioning set");
  }
  const auto pos = vars.positions();
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (assignment[i] >= joint.schema().domain_size(pos[i])) {
      throw SchemaError("index-out-of-range", joint.schema().name_at(pos[i]),
                        "assignment value outside the domain");
    }
  }
  std::vector<std::size_t> others;
  for (std::size_t p = 0; p < joint.num_variables(); ++p) {
    if (!vars.contains(p)) others.push_back(p);
  }
  const double bg = joint.background_mass() * joint.product_size(VarSet(others));
  Posterior post(joint.num_states(), bg);
  for (std::size_t c = 0; c < joint.num_cells(); ++c) {
    const auto v = joint.cell_values(c);
    bool match = true;
    for (std::size_t i = 0; i < pos.size() && match; ++i) match = v[pos[i]] == assignment[i];
    if (match) post[joint.cell_state(c)] += joint.cell_mass(c);
  }
  const double total = std::accumulate(post.begin(), post.end(), 0.0);
  if (!(total > 0.0)) {
    throw ConditioningError("zero-probability", "", "conditioning on a zero-probability assignment");
  }
  for (auto& p : post) p /= total;
  return post;
}

Posterior state_marginal(const JointDistribution& joint) { return posterior(joint, {}, {}); }

}  // namespace infogain
