#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "infogain/errors.hpp"
#include "infogain/rng.hpp"
#include "infogain/shapley.hpp"
#include "infogain/synth.hpp"
#include "support.hpp"

namespace infogain {
namespace {

using testing::binary_schema;

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

TEST(ShapleyExact, XorSplitsEvenly) {
  const auto j = make_xor_joint();
  const std::size_t signals[] = {0, 1};
  const auto r = shapley_exact(j, brier_problem(), signals, VarSet{});
  ASSERT_EQ(r.phi.size(), 2u);
  EXPECT_NEAR(r.phi[0], 0.125, 1e-12);
  EXPECT_NEAR(r.phi[1], 0.125, 1e-12);
  EXPECT_NEAR(r.total_gain, 0.25, 1e-12);
  EXPECT_EQ(r.method, ShapleyMethod::kExact);
  EXPECT_EQ(r.signal_names, (std::vector<std::string>{"sigma1", "sigma2"}));
  EXPECT_EQ(r.ground_label, "none");
}

TEST(ShapleyExact, SingleSignalEqualsFullGain) {
  const std::size_t signals[] = {0};
  const auto r = shapley_exact(testing::copy_joint(true), brier_problem(), signals, VarSet{});
  EXPECT_NEAR(r.phi[0], 0.25, 1e-12);
}

// Signal 2 is an independent fair coin appended to a random 2-signal joint.
JointDistribution with_dummy(const JointDistribution& base) {
  std::vector<JointDistribution::Cell> cells;
  for (std::size_t c = 0; c < base.num_cells(); ++c) {
    for (std::uint32_t coin = 0; coin < 2; ++coin) {
      auto v = std::vector<std::uint32_t>(base.cell_values(c).begin(), base.cell_values(c).end());
      v.push_back(coin);
      cells.push_back({v, base.cell_state(c), base.cell_mass(c) * 0.5});
    }
  }
  return JointDistribution(binary_schema(3), base.num_states(), std::move(cells));
}

TEST(ShapleyExact, DummySignalGetsZero) {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const auto j = with_dummy(testing::random_joint(rng, binary_schema(2)));
    const std::size_t signals[] = {0, 1, 2};
    const auto r = shapley_exact(j, testing::random_matrix_problem(rng, 3), signals, VarSet{});
    EXPECT_NEAR(r.phi[2], 0.0, 1e-12);
  }
}

TEST(ShapleyExact, CeilingEnforced) {
  const auto j = make_xor_joint();
  const std::size_t signals[] = {0, 1};
  ShapleyOptions o;
  o.exact_ceiling = 1;
  EXPECT_THROW(shapley_exact(j, brier_problem(), signals, VarSet{}, o), LimitError);
}

TEST(ShapleyExact, RejectsBadSignalLists) {
  const auto j = make_xor_joint();
  const std::size_t repeated[] = {0, 0};
  EXPECT_THROW(shapley_exact(j, brier_problem(), repeated, VarSet{}), SchemaError);
  const std::size_t unknown[] = {5};
  EXPECT_THROW(shapley_exact(j, brier_problem(), unknown, VarSet{}), SchemaError);
}

TEST(ShapleyProperties, EfficiencyOnRandomJointsWithGround) {
  Rng rng(32);
  for (int trial = 0; trial < 40; ++trial) {
    const auto j = testing::random_joint(rng, binary_schema(3, 1));
    const auto p = testing::random_matrix_problem(rng, 3);
    const std::size_t signals[] = {0, 1, 2};
    for (const VarSet& ground : {VarSet{}, VarSet{3}}) {
      const auto r = shapley_exact(j, p, signals, ground);
      EXPECT_NEAR(sum(r.phi), information_gain(j, p, VarSet{0, 1, 2}, ground).raw, 1e-9);
      for (double phi : r.phi) EXPECT_GE(phi, -1e-12);
    }
  }
}

TEST(ShapleyProperties, SymmetryForExchangeableSignals) {
  Rng rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    // Random weights that depend on signals 0 and 1 only through (s0 + s1).
    std::vector<double> w(3 * 2 * 2);
    for (auto& x : w) x = rng.uniform01() + 0.01;
    std::vector<JointDistribution::Cell> cells;
    for (std::uint32_t a = 0; a < 2; ++a) {
      for (std::uint32_t b = 0; b < 2; ++b) {
        for (std::uint32_t c = 0; c < 2; ++c) {
          for (std::uint32_t s = 0; s < 2; ++s) cells.push_back({{a, b, c}, s, w[((a + b) * 2 + c) * 2 + s]});
        }
      }
    }
    const JointDistribution j(binary_schema(3), 2, std::move(cells));
    const std::size_t signals[] = {0, 1, 2};
    const auto r = shapley_exact(j, testing::random_matrix_problem(rng, 4), signals, VarSet{});
    EXPECT_NEAR(r.phi[0], r.phi[1], 1e-9);
  }
}

TEST(ShapleySampled, XorWithinTolerance) {
  const auto j = make_xor_joint();
  const std::size_t signals[] = {0, 1};
  const auto r = shapley_sampled(j, brier_problem(), signals, VarSet{}, 10000, 42);
  EXPECT_NEAR(r.phi[0], 0.125, 0.01);
  EXPECT_NEAR(r.phi[1], 0.125, 0.01);
  EXPECT_EQ(r.method, ShapleyMethod::kSampled);
  EXPECT_EQ(r.permutations, 10000u);
  EXPECT_EQ(r.seed, 42u);
  ASSERT_EQ(r.std_error.size(), 2u);
}

TEST(ShapleySampled, SameSeedIsBitIdentical) {
  Rng rng(34);
  const auto j = testing::random_joint(rng, binary_schema(4));
  const std::size_t signals[] = {0, 1, 2, 3};
  const auto p = brier_problem();
  ShapleyOptions one, many;
  one.threads = 1;
  many.threads = 4;
  const auto a = shapley_sampled(j, p, signals, VarSet{}, 500, 7, one);
  const auto b = shapley_sampled(j, p, signals, VarSet{}, 500, 7, many);
  EXPECT_EQ(a.phi, b.phi);
  EXPECT_EQ(a.std_error, b.std_error);
  const auto c = shapley_sampled(j, p, signals, VarSet{}, 500, 8, one);
  EXPECT_NE(a.phi, c.phi);
}

TEST(ShapleySampled, SingleOrderingTelescopes) {
  Rng rng(35);
  const auto j = testing::random_joint(rng, binary_schema(3));
  const auto p = brier_problem();
  const InSamplePayoff oracle(j, p);
  const std::size_t signals[] = {0, 1, 2};
  const std::vector<std::vector<std::size_t>> identity{{0, 1, 2}};
  const auto r = shapley_from_orderings(oracle, signals, VarSet{}, identity);
  const double r0 = rational_payoff(j, p, VarSet{});
  EXPECT_NEAR(r.phi[0], rational_payoff(j, p, VarSet{0}) - r0, 1e-15);
  EXPECT_NEAR(r.phi[1], rational_payoff(j, p, VarSet{0, 1}) - rational_payoff(j, p, VarSet{0}), 1e-15);
  EXPECT_NEAR(sum(r.phi), rational_payoff(j, p, VarSet{0, 1, 2}) - r0, 1e-12);
}

TEST(ShapleySampled, WithinThreeStandardErrorsOfExact) {
  Rng rng(36);
  int outside = 0, checked = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto j = testing::random_joint(rng, binary_schema(4));
    const auto p = testing::random_matrix_problem(rng, 3);
    const std::size_t signals[] = {0, 1, 2, 3};
    const auto exact = shapley_exact(j, p, signals, VarSet{});
    const auto sampled = shapley_sampled(j, p, signals, VarSet{}, 2000, 100 + trial);
    for (std::size_t i = 0; i < 4; ++i) {
      ++checked;
      const double tol = 3.0 * sampled.std_error[i] + 1e-12;
      if (std::fabs(sampled.phi[i] - exact.phi[i]) > tol) ++outside;
    }
  }
  // 3 SE covers 99.7% per value; allow one miss in forty.
  EXPECT_LE(outside, 1) << "of " << checked;
}

TEST(CompareGrounds, MatchesIndividualRuns) {
  Rng rng(37);
  const auto j = testing::random_joint(rng, binary_schema(3, 2));
  const auto p = testing::random_matrix_problem(rng, 3);
  const std::size_t signals[] = {0, 1, 2};
  const std::vector<NamedGround> grounds{{"none", VarSet{}}, {"first", VarSet{3}}, {"both", VarSet{3, 4}}};
  const auto reports = compare_grounds(j, p, signals, grounds);
  ASSERT_EQ(reports.size(), 3u);
  for (std::size_t g = 0; g < 3; ++g) {
    const auto single = shapley_exact(j, p, signals, grounds[g].ground);
    EXPECT_EQ(reports[g].phi, single.phi);
    EXPECT_EQ(reports[g].ground_label, grounds[g].label);
    EXPECT_NEAR(sum(reports[g].phi), information_gain(j, p, VarSet{0, 1, 2}, grounds[g].ground).raw, 1e-9);
  }
}

TEST(CompareGrounds, SignalRedundantGivenAiColumn) {
  // The ai agent reports from sigma1 alone, so sigma1 adds nothing once the
  // ai column is known.
  const auto problem = brier_problem();
  Rng rng(38);
  const auto base = testing::random_joint(rng, binary_schema(2));
  SyntheticAgentSpec ai{"ai", Role::kAi, {0}, 0.0, ReportingRule::kPosteriorMeanOnGrid};
  const auto j = population_with_agents(base, problem, std::span(&ai, 1));
  const std::size_t signals[] = {0, 1};
  const std::vector<NamedGround> grounds{{"ai", VarSet{2}}};
  const auto r = compare_grounds(j, problem, signals, grounds);
  EXPECT_NEAR(r[0].phi[0], 0.0, 1e-12);
  EXPECT_EQ(r[0].ground_role, Role::kAi);
}

TEST(CompareGrounds, ThreadCountDoesNotChangeBits) {
  Rng rng(39);
  const auto j = testing::random_joint(rng, binary_schema(4, 1));
  const auto p = brier_problem();
  const std::size_t signals[] = {0, 1, 2, 3};
  const std::vector<NamedGround> grounds{{"none", VarSet{}}, {"d", VarSet{4}}};
  ShapleyOptions one, many;
  one.threads = 1;
  many.threads = 8;
  const auto a = compare_grounds(j, p, signals, grounds, one);
  const auto b = compare_grounds(j, p, signals, grounds, many);
  for (std::size_t g = 0; g < 2; ++g) EXPECT_EQ(a[g].phi, b[g].phi);
}

TEST(PayoffTable, WriteOnceLookups) {
  const auto j = make_xor_joint();
  const auto p = brier_problem();
  const InSamplePayoff oracle(j, p);
  PayoffTable t;
  t.fill(oracle, {VarSet{}, VarSet{0}, VarSet{0, 1}, VarSet{0}}, 2);
  EXPECT_EQ(t.size(), 3u);
  EXPECT_NEAR(t.at(VarSet{0, 1}), 1.0, 1e-12);
  EXPECT_THROW(t.at(VarSet{1}), std::logic_error);
}

}  // namespace
}  // namespace infogain
