#include <gtest/gtest.h>

#include <map>
#include <numeric>

#include "infogain/errors.hpp"
#include "infogain/joint.hpp"
#include "infogain/synth.hpp"
#include "support.hpp"

namespace infogain {
namespace {

using testing::binary_schema;

Dataset rows_dataset(const std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>>& rows,
                     std::size_t signals) {
  Dataset d(binary_schema(signals), 2);
  for (const auto& [state, values] : rows) d.add_row(state, values);
  return d;
}

TEST(Dataset, RangeChecksRows) {
  Dataset d(binary_schema(2), 2);
  const std::uint32_t ok[] = {0, 1};
  const std::uint32_t bad[] = {0, 2};
  const std::uint32_t short_row[] = {0};
  d.add_row(1, ok);
  EXPECT_THROW(d.add_row(0, bad), DataError);
  EXPECT_THROW(d.add_row(2, ok), DataError);
  EXPECT_THROW(d.add_row(0, short_row), DataError);
  EXPECT_EQ(d.num_rows(), 1u);
}

TEST(EstimateJoint, DistinctRowsAreUniform) {
  const auto d = rows_dataset({{0, {0}}, {0, {1}}, {1, {0}}, {1, {1}}}, 1);
  const auto j = estimate_joint(d);
  for (std::uint32_t w = 0; w < 2; ++w) {
    for (std::uint32_t s = 0; s < 2; ++s) {
      const std::uint32_t v[] = {s};
      EXPECT_DOUBLE_EQ(j.probability(v, w), 0.25);
    }
  }
}

TEST(EstimateJoint, IdenticalRowsGiveOneSupportPoint) {
  const auto j = estimate_joint(rows_dataset({{1, {0}}, {1, {0}}}, 1));
  ASSERT_EQ(j.num_cells(), 1u);
  const std::uint32_t v[] = {0};
  EXPECT_DOUBLE_EQ(j.probability(v, 1), 1.0);
  EXPECT_DOUBLE_EQ(j.probability(v, 0), 0.0);
}

TEST(EstimateJoint, AddOneSmoothing) {
  // Reference values from tests/oracles/derive.py.
  const auto j = estimate_joint(rows_dataset({{0, {0}}, {1, {1}}}, 1), 1.0);
  const std::uint32_t zero[] = {0}, one[] = {1};
  EXPECT_NEAR(j.probability(zero, 0), 2.0 / 6.0, 1e-15);
  EXPECT_NEAR(j.probability(one, 1), 2.0 / 6.0, 1e-15);
  EXPECT_NEAR(j.probability(one, 0), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(j.probability(zero, 1), 1.0 / 6.0, 1e-15);
}

TEST(EstimateJoint, Errors) {
  Dataset empty(binary_schema(1), 2);
  EXPECT_THROW(estimate_joint(empty), EstimationError);
  const auto d = rows_dataset({{0, {0}}}, 1);
  EXPECT_THROW(estimate_joint(d, -1.0), std::exception);
}

TEST(Marginal, EmptySetHasUnitMass) {
  const auto m = marginal(make_xor_joint(), VarSet{});
  ASSERT_EQ(m.size(), 1u);
  EXPECT_TRUE(m.begin()->first.empty());
  EXPECT_DOUBLE_EQ(m.begin()->second, 1.0);
}

TEST(Marginal, XorSingleSignal) {
  const auto m = marginal(make_xor_joint(), VarSet{0});
  ASSERT_EQ(m.size(), 2u);
  EXPECT_DOUBLE_EQ(m.at({0}), 0.5);
  EXPECT_DOUBLE_EQ(m.at({1}), 0.5);
}

TEST(Marginal, AllVariablesSumOutStateOnly) {
  Rng rng(5);
  const auto j = testing::random_joint(rng, binary_schema(3));
  const auto m = marginal(j, VarSet{0, 1, 2});
  std::map<Realization, double> expected;
  for (std::size_t c = 0; c < j.num_cells(); ++c) {
    const auto v = j.cell_values(c);
    expected[Realization(v.begin(), v.end())] += j.cell_mass(c);
  }
  ASSERT_EQ(m.size(), expected.size());
  for (const auto& [k, p] : expected) EXPECT_NEAR(m.at(k), p, 1e-15);
}

TEST(Marginal, UnknownVariableThrows) {
  EXPECT_THROW(marginal(make_xor_joint(), VarSet{7}), SchemaError);
}

TEST(Marginal, SmoothedEnumeratesDenseSpace) {
  const auto j = estimate_joint(rows_dataset({{0, {0, 0}}}, 2), 0.5);
  const auto m = marginal(j, VarSet{0, 1});
  EXPECT_EQ(m.size(), 4u);
  double total = 0.0;
  for (const auto& [k, p] : m) total += p;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Posterior, XorExamples) {
  const auto j = make_xor_joint();
  const std::uint32_t s1_zero[] = {0};
  EXPECT_EQ(posterior(j, VarSet{0}, s1_zero), (Posterior{0.5, 0.5}));
  const std::uint32_t s1_one[] = {1};
  EXPECT_EQ(posterior(j, VarSet{0}, s1_one), (Posterior{0.5, 0.5}));
  const std::uint32_t zero_one[] = {0, 1};
  EXPECT_EQ(posterior(j, VarSet{0, 1}, zero_one), (Posterior{0.0, 1.0}));
  const std::uint32_t one_one[] = {1, 1};
  EXPECT_EQ(posterior(j, VarSet{0, 1}, one_one), (Posterior{1.0, 0.0}));
  EXPECT_EQ(posterior(j, VarSet{}, {}), state_marginal(j));
  EXPECT_EQ(state_marginal(j), (Posterior{0.5, 0.5}));
}

TEST(Posterior, ZeroMassAssignmentThrows) {
  const auto j = testing::copy_joint(true);
  JointDistribution sparse(binary_schema(1), 2, {{{0}, 0, 1.0}});
  const std::uint32_t one[] = {1};
  EXPECT_THROW(posterior(sparse, VarSet{0}, one), ConditioningError);
  const std::uint32_t two_values[] = {0, 0};
  EXPECT_THROW(posterior(j, VarSet{0}, two_values), SchemaError);
}

TEST(Support, XorPairsInLexicographicOrder) {
  const auto s = support(make_xor_joint(), VarSet{0, 1});
  ASSERT_EQ(s.size(), 4u);
  const std::vector<Realization> order{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(s[i].first, order[i]);
    EXPECT_DOUBLE_EQ(s[i].second, 0.25);
  }
}

TEST(Support, TrivialCases) {
  const auto empty = support(make_xor_joint(), VarSet{});
  ASSERT_EQ(empty.size(), 1u);
  EXPECT_DOUBLE_EQ(empty[0].second, 1.0);
  JointDistribution point(binary_schema(2), 2, {{{1, 0}, 1, 3.0}});
  EXPECT_EQ(support(point, VarSet{0, 1}).size(), 1u);
}

// Properties over random joints.

TEST(JointProperties, SupportSumsToOneForEverySubset) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto j = testing::random_joint(rng, binary_schema(4));
    for (const auto& vars : testing::all_subsets(4)) {
      double total = 0.0;
      for (const auto& [k, p] : support(j, vars)) total += p;
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(JointProperties, PosteriorTimesSupportReconstructsMarginalWithState) {
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const auto j = testing::random_joint(rng, binary_schema(3));
    for (const auto& vars : testing::all_subsets(3)) {
      // Joint mass of (vars, state) by direct summation over cells.
      std::map<std::pair<Realization, std::uint32_t>, double> direct;
      for (std::size_t c = 0; c < j.num_cells(); ++c) {
        Realization key;
        for (auto p : vars) key.push_back(j.cell_values(c)[p]);
        direct[{key, j.cell_state(c)}] += j.cell_mass(c);
      }
      for (const auto& [v, p] : support(j, vars)) {
        const auto post = posterior(j, vars, v);
        for (std::uint32_t w = 0; w < 2; ++w) {
          const auto it = direct.find({v, w});
          EXPECT_NEAR(p * post[w], it == direct.end() ? 0.0 : it->second, 1e-15);
        }
      }
    }
  }
}

TEST(JointProperties, PlugInMarginalsMatchEmpiricalFrequencies) {
  Rng rng(13);
  const auto schema = binary_schema(3);
  Dataset d(schema, 2);
  std::vector<std::vector<double>> counts(3, std::vector<double>(2, 0.0));
  for (int r = 0; r < 500; ++r) {
    std::vector<std::uint32_t> v(3);
    for (std::size_t i = 0; i < 3; ++i) {
      v[i] = static_cast<std::uint32_t>(rng.uniform_index(2));
      counts[i][v[i]] += 1.0;
    }
    d.add_row(static_cast<std::uint32_t>(rng.uniform_index(2)), v);
  }
  const auto j = estimate_joint(d);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto m = marginal(j, VarSet{i});
    for (std::uint32_t x = 0; x < 2; ++x) EXPECT_NEAR(m.at({x}), counts[i][x] / 500.0, 1e-15);
  }
}

TEST(GroupBy, SmoothedMassIsComplete) {
  const auto j = estimate_joint(rows_dataset({{0, {0, 1}}, {1, {1, 1}}}, 2), 1.0);
  const auto g = group_by(j, VarSet{0});
  double total = 0.0;
  for (double m : g.masses) total += m;
  for (double m : g.unobserved_masses) total += m * g.unobserved_count;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

}  // namespace
}  // namespace infogain
