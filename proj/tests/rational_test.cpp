#include <gtest/gtest.h>

#include "infogain/errors.hpp"
#include "infogain/rational.hpp"
#include "infogain/synth.hpp"
#include "support.hpp"

namespace infogain {
namespace {

using testing::binary_schema;

TEST(BestResponse, BrierExamples) {
  const auto p = brier_problem();
  const double half[] = {0.5, 0.5};
  EXPECT_EQ(best_response(half, p), 50u);
  const double sure[] = {0.0, 1.0};
  EXPECT_EQ(best_response(sure, p), 100u);
  const double never[] = {1.0, 0.0};
  EXPECT_EQ(best_response(never, p), 0u);
}

TEST(BestResponse, UmbrellaTakesUmbrella) {
  const double prior[] = {0.6, 0.4};
  EXPECT_EQ(best_response(prior, umbrella_problem()), 1u);
}

TEST(BestResponse, TiesGoToLowestIndex) {
  DecisionProblem p(StateSpace{{"a", "b"}}, ValueDomain::categorical({"x", "y", "z"}),
                    PayoffFunction::from_matrix({{1, 1}, {1, 1}, {0, 2}}));
  const double w[] = {0.5, 0.5};
  EXPECT_EQ(best_response(w, p), 0u);
  // Unnormalized weights pick the same action.
  const double w2[] = {3.0, 3.0};
  EXPECT_EQ(best_response(w2, p), 0u);
}

TEST(BestResponse, BrierClosedFormMatchesScan) {
  const auto p = brier_problem();
  Rng rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const double q = rng.uniform01();
    const double w[] = {1.0 - q, q};
    EXPECT_EQ(best_response(w, p), best_response_scan(w, p)) << "q=" << q;
  }
  // Grid midpoints and endpoints.
  for (int k = 0; k <= 200; ++k) {
    const double q = k / 200.0;
    const double w[] = {1.0 - q, q};
    EXPECT_EQ(best_response(w, p), best_response_scan(w, p)) << "q=" << q;
  }
  // Coarser grids and unnormalized weights.
  for (int steps : {1, 2, 3, 7, 10}) {
    const auto coarse = brier_problem(steps);
    for (int i = 0; i < 200; ++i) {
      const double a = rng.uniform01() * 5.0, b = rng.uniform01() * 5.0;
      const double w[] = {a, b};
      EXPECT_EQ(best_response(w, coarse), best_response_scan(w, coarse));
    }
  }
}

TEST(BestResponse, BrierNearestGridPoint) {
  const auto p = brier_problem();
  const double w[] = {0.7, 0.3};
  EXPECT_EQ(best_response(w, p), 30u);
  const double w2[] = {0.123, 0.877};
  EXPECT_EQ(best_response(w2, p), 88u);
}

TEST(RationalPayoff, Examples) {
  const auto p = brier_problem();
  const auto xor_joint = make_xor_joint();
  EXPECT_NEAR(rational_payoff(xor_joint, p, VarSet{}), 0.75, 1e-12);
  EXPECT_NEAR(rational_payoff(xor_joint, p, VarSet{0, 1}), 1.0, 1e-12);
  EXPECT_NEAR(rational_payoff(xor_joint, p, VarSet{0}), 0.75, 1e-12);
  EXPECT_NEAR(rational_payoff(xor_joint, p, VarSet{1}), 0.75, 1e-12);
}

TEST(RationalPayoff, UmbrellaPrior) {
  JointDistribution j(binary_schema(0), 2, {{{}, 0, 0.6}, {{}, 1, 0.4}});
  EXPECT_NEAR(rational_payoff(j, umbrella_problem(), VarSet{}), -30.0, 1e-12);
}

TEST(InformationGain, Examples) {
  const auto p = brier_problem();
  const auto j = make_xor_joint();
  EXPECT_EQ(information_gain(j, p, VarSet{0}, VarSet{}).value, 0.0);
  EXPECT_NEAR(information_gain(j, p, VarSet{0, 1}, VarSet{}).value, 0.25, 1e-12);
  for (const auto& v : testing::all_subsets(2)) {
    EXPECT_EQ(information_gain(j, p, v, v).value, 0.0);
  }
  const auto g = information_gain(j, p, VarSet{1}, VarSet{0});
  EXPECT_NEAR(g.value, 0.25, 1e-12);
  EXPECT_NEAR(g.payoff_union, 1.0, 1e-12);
  EXPECT_NEAR(g.payoff_ground, 0.75, 1e-12);
  EXPECT_EQ(g.v1, VarSet{1});
  EXPECT_EQ(g.ground, VarSet{0});
}

TEST(InformationGain, ClampsOnlyWithinTolerance) {
  EXPECT_EQ(make_gain(1.0, 1.0 + 1e-10, {}, {}).value, 0.0);
  EXPECT_NEAR(make_gain(1.0, 1.0 + 1e-10, {}, {}).raw, -1e-10, 1e-15);
  EXPECT_EQ(make_gain(1.0 + 5e-10, 1.0, {}, {}).value, 0.0);
  EXPECT_NEAR(make_gain(1.0, 1.1, {}, {}).value, -0.1, 1e-15);
}

JointDistribution decision_joint(std::uint32_t (*decision)(std::uint32_t signal, std::uint32_t state)) {
  // One binary signal, one binary decision column; uniform over (signal, state).
  std::vector<JointDistribution::Cell> cells;
  for (std::uint32_t s = 0; s < 2; ++s) {
    for (std::uint32_t w = 0; w < 2; ++w) cells.push_back({{s, decision(s, w)}, w, 1.0 + s + 2.0 * w * s});
  }
  return JointDistribution(binary_schema(1, 1), 2, std::move(cells));
}

TEST(GainOfDecisions, Examples) {
  const auto p = brier_problem();
  const VariableRef d{VariableRef::Kind::kDecision, 0};
  // Decision is a deterministic function of the signal.
  const auto fn = decision_joint([](std::uint32_t s, std::uint32_t) { return 1u - s; });
  EXPECT_EQ(gain_of_decisions_over_signals(fn, p, d, VarSet{0}).value, 0.0);
  // Decision copies the state, uniform prior.
  const auto copy = decision_joint([](std::uint32_t, std::uint32_t w) { return w; });
  JointDistribution copy_uniform(binary_schema(0, 1), 2, {{{0}, 0, 1.0}, {{1}, 1, 1.0}});
  EXPECT_NEAR(gain_of_decisions_over_signals(copy_uniform, p, d, VarSet{}).value, 0.25, 1e-12);
  // Decision independent of the state.
  JointDistribution indep(binary_schema(0, 1), 2, {{{0}, 0, 1.0}, {{0}, 1, 1.0}, {{1}, 0, 1.0}, {{1}, 1, 1.0}});
  EXPECT_EQ(gain_of_decisions_over_signals(indep, p, d, VarSet{}).value, 0.0);
  // Equals information_gain.
  EXPECT_EQ(gain_of_decisions_over_signals(copy, p, d, VarSet{0}).value,
            information_gain(copy, p, VarSet{1}, VarSet{0}).value);
  EXPECT_THROW(gain_of_decisions_over_signals(copy, p, VariableRef{VariableRef::Kind::kSignal, 0}, VarSet{}),
               SchemaError);
}

// Properties over random joints and random payoff matrices.

TEST(RationalProperties, OracleEquivalence) {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(4);
    const auto j = testing::random_joint(rng, binary_schema(n));
    const auto p = testing::random_matrix_problem(rng, 2 + rng.uniform_index(4));
    for (const auto& v : testing::all_subsets(n)) {
      EXPECT_NEAR(rational_payoff(j, p, v), brute_force_rational(j, p, v), 1e-12);
    }
    const auto b = brier_problem();
    for (const auto& v : testing::all_subsets(n)) {
      EXPECT_NEAR(rational_payoff(j, b, v), brute_force_rational(j, b, v), 1e-12);
    }
  }
}

TEST(RationalProperties, MonotoneAndNonNegative) {
  Rng rng(78);
  for (int trial = 0; trial < 100; ++trial) {
    const auto j = testing::random_joint(rng, binary_schema(4));
    const auto p = testing::random_matrix_problem(rng, 3);
    const auto subsets = testing::all_subsets(4);
    for (const auto& a : subsets) {
      for (const auto& b : subsets) {
        if (a.is_subset_of(b)) EXPECT_LE(rational_payoff(j, p, a), rational_payoff(j, p, b) + 1e-12);
        EXPECT_GE(information_gain(j, p, a, b).raw, -1e-12);
      }
    }
  }
}

TEST(RationalProperties, BrierBounds) {
  Rng rng(79);
  const auto p = brier_problem();
  for (int trial = 0; trial < 50; ++trial) {
    const auto j = testing::random_joint(rng, binary_schema(3));
    for (const auto& a : testing::all_subsets(3)) {
      const double r = rational_payoff(j, p, a);
      EXPECT_GE(r, 0.0);
      EXPECT_LE(r, 1.0);
      for (const auto& b : testing::all_subsets(3)) {
        const double g = information_gain(j, p, a, b).value;
        EXPECT_GE(g, 0.0);
        EXPECT_LE(g, 1.0);
      }
    }
  }
}

TEST(RationalProperties, SmoothedMatchesBruteForce) {
  Rng rng(80);
  const auto schema = binary_schema(3);
  for (int trial = 0; trial < 20; ++trial) {
    Dataset d(schema, 2);
    for (int r = 0; r < 15; ++r) {
      std::vector<std::uint32_t> v(3);
      for (auto& x : v) x = static_cast<std::uint32_t>(rng.uniform_index(2));
      d.add_row(static_cast<std::uint32_t>(rng.uniform_index(2)), v);
    }
    const auto j = estimate_joint(d, 0.5);
    const auto p = testing::random_matrix_problem(rng, 3);
    for (const auto& v : testing::all_subsets(3)) {
      EXPECT_NEAR(rational_payoff(j, p, v), brute_force_rational(j, p, v), 1e-12);
    }
  }
}

Dataset copy_dataset(std::size_t rows, Rng& rng) {
  Dataset d(binary_schema(2), 2);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto w = static_cast<std::uint32_t>(rng.uniform_index(2));
    const std::uint32_t v[] = {w, static_cast<std::uint32_t>(rng.uniform_index(2))};
    d.add_row(w, v);
  }
  return d;
}

TEST(CrossFit, PerfectSignalKeepsFullValue) {
  Rng rng(3);
  const auto d = copy_dataset(400, rng);
  const auto p = brier_problem();
  const CrossFitPayoff cf(d, p, 0.0, 9);
  EXPECT_NEAR(cf.rational_payoff(VarSet{0}), 1.0, 1e-12);
  EXPECT_NEAR(cf.gain(VarSet{0}, VarSet{}).value, 1.0 - cf.rational_payoff(VarSet{}), 1e-12);
}

TEST(CrossFit, DeterministicAndNoMoreOptimisticThanInSample) {
  Rng rng(4);
  const auto d = copy_dataset(300, rng);
  const auto p = brier_problem();
  const CrossFitPayoff a(d, p, 0.0, 5), b(d, p, 0.0, 5);
  const auto joint = estimate_joint(d);
  const InSamplePayoff in(joint, p);
  EXPECT_EQ(a.rational_payoff(VarSet{1}), b.rational_payoff(VarSet{1}));
  // The noise signal carries no information; cross-fitting cannot reward it.
  EXPECT_LE(a.gain(VarSet{1}, VarSet{}).raw, in.gain(VarSet{1}, VarSet{}).raw + 1e-12);
  EXPECT_EQ(in.rational_payoff(VarSet{0, 1}), rational_payoff(joint, p, VarSet{0, 1}));
}

TEST(CrossFit, NeedsTwoRows) {
  Dataset d(binary_schema(1), 2);
  const std::uint32_t v[] = {0};
  d.add_row(0, v);
  EXPECT_THROW(CrossFitPayoff(d, brier_problem(), 0.0, 0), EstimationError);
}

}  // namespace
}  // namespace infogain
