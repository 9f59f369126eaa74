#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "infogain/bootstrap.hpp"
#include "infogain/rational.hpp"
#include "infogain/shapley.hpp"
#include "infogain/synth.hpp"
#include "support.hpp"

namespace infogain {
namespace {

using testing::binary_schema;

TEST(Quantile, Type7) {
  const double v[] = {1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(quantile_type7(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile_type7(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile_type7(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile_type7(v, 0.25), 1.75);
  const double one[] = {7};
  EXPECT_DOUBLE_EQ(quantile_type7(one, 0.975), 7.0);
  EXPECT_THROW(quantile_type7(std::span<const double>{}, 0.5), std::invalid_argument);
}

TEST(Quantile, SymmetricSampleMedianIsMidpoint) {
  const double v[] = {-3, -1, 0.5, 2, 4};
  EXPECT_DOUBLE_EQ(quantile_type7(v, 0.5), 0.5);
}

TEST(Resample, DeterministicPerReplicate) {
  EXPECT_EQ(resample_indices(50, 9, 3), resample_indices(50, 9, 3));
  EXPECT_NE(resample_indices(50, 9, 3), resample_indices(50, 9, 4));
  EXPECT_NE(resample_indices(50, 9, 3), resample_indices(50, 10, 3));
  for (auto i : resample_indices(50, 1, 0)) EXPECT_LT(i, 50u);
}

Dataset three_rows() {
  Dataset d(binary_schema(2), 2);
  const std::uint32_t a[] = {0, 1}, b[] = {1, 1}, c[] = {1, 0};
  d.add_row(0, a);
  d.add_row(1, b);
  d.add_row(1, c);
  return d;
}

TEST(Bootstrap, IdentityReplicateReproducesEstimate) {
  const auto data = three_rows();
  // Find a seed whose first replicate draws every row once, in order.
  std::uint64_t seed = 0;
  while (resample_indices(3, seed, 0) != std::vector<std::size_t>{0, 1, 2}) ++seed;
  BootstrapSpec spec;
  spec.replicates = 1;
  spec.seed = seed;
  spec.statistics = {{StatisticRequest::Kind::kGain, "", VarSet{0, 1}, VarSet{}},
                     {StatisticRequest::Kind::kShapley, "", {}, VarSet{}}};
  const auto r = bootstrap_run(data, brier_problem(), spec);
  ASSERT_EQ(r.statistics.size(), 3u);
  for (const auto& s : r.statistics) {
    ASSERT_EQ(s.samples.size(), 1u);
    EXPECT_EQ(s.samples[0], s.estimate);
    EXPECT_EQ(s.sd, 0.0);
  }
  const auto j = estimate_joint(data);
  EXPECT_EQ(r.statistics[0].estimate, information_gain(j, brier_problem(), VarSet{0, 1}, VarSet{}).value);
  EXPECT_EQ(r.statistics[0].name, "gain[s0+s1|none]");
  EXPECT_EQ(r.statistics[1].name, "shapley[none]/s0");
}

TEST(Bootstrap, DeterministicAcrossThreadCounts) {
  const auto pre = deepfake_preset();
  const auto data = generate_dataset(pre.population, pre.problem, pre.agents, 600, 3);
  BootstrapSpec spec;
  spec.replicates = 12;
  spec.seed = 5;
  spec.threads = 1;
  const auto a = bootstrap_run(data, pre.problem, spec);
  spec.threads = 4;
  const auto b = bootstrap_run(data, pre.problem, spec);
  ASSERT_EQ(a.statistics.size(), b.statistics.size());
  ASSERT_EQ(a.statistics.size(), 3u * 7u);
  for (std::size_t i = 0; i < a.statistics.size(); ++i) {
    EXPECT_EQ(a.statistics[i].samples, b.statistics[i].samples);
    EXPECT_EQ(a.statistics[i].quantiles, b.statistics[i].quantiles);
  }
  EXPECT_EQ(a.dataset_fingerprint, b.dataset_fingerprint);
}

TEST(Bootstrap, SummariesAreConsistent) {
  const auto pre = deepfake_preset();
  const auto data = generate_dataset(pre.population, pre.problem, pre.agents, 400, 8);
  BootstrapSpec spec;
  spec.replicates = 25;
  spec.seed = 2;
  const auto r = bootstrap_run(data, pre.problem, spec);
  for (const auto& s : r.statistics) {
    ASSERT_EQ(s.samples.size(), 25u);
    EXPECT_TRUE(std::is_sorted(s.quantiles.begin(), s.quantiles.end()));
    const double mean = std::accumulate(s.samples.begin(), s.samples.end(), 0.0) / 25.0;
    EXPECT_NEAR(s.mean, mean, 1e-15);
    EXPECT_GE(s.sd, 0.0);
  }
  EXPECT_EQ(r.signals.size(), 7u);
  EXPECT_EQ(r.statistics.front().ground_label, "human");
  EXPECT_EQ(r.statistics.front().ground_role, Role::kHuman);
}

TEST(Bootstrap, EachReplicateSatisfiesEfficiency) {
  // With a single Shapley request and a gain of all signals over the same
  // ground, every replicate's phi must add up to that replicate's gain.
  const auto pre = deepfake_preset();
  const auto data = generate_dataset(pre.population, pre.problem, pre.agents, 300, 4);
  const auto& schema = data.schema();
  const VarSet ground{schema.resolve_position("ai")};
  BootstrapSpec spec;
  spec.replicates = 10;
  spec.statistics = {{StatisticRequest::Kind::kShapley, "", {}, ground},
                     {StatisticRequest::Kind::kGain, "", schema.all_signals(), ground}};
  const auto r = bootstrap_run(data, pre.problem, spec);
  ASSERT_EQ(r.statistics.size(), 8u);
  for (std::size_t b = 0; b < 10; ++b) {
    double total = 0.0;
    for (std::size_t i = 0; i < 7; ++i) {
      EXPECT_GE(r.statistics[i].samples[b], -1e-12);
      total += r.statistics[i].samples[b];
    }
    EXPECT_NEAR(total, r.statistics[7].samples[b], 1e-9);
  }
}

TEST(Bootstrap, XorGainMeanNearPopulationValue) {
  const auto pre = xor_preset();
  const auto data = generate_dataset(pre.population, pre.problem, pre.agents, 10000, 17);
  BootstrapSpec spec;
  spec.replicates = 200;
  spec.seed = 23;
  spec.statistics = {{StatisticRequest::Kind::kGain, "", VarSet{0, 1}, VarSet{}}};
  const auto r = bootstrap_run(data, pre.problem, spec);
  EXPECT_NEAR(r.statistics[0].mean, 0.25, 0.02);
}

TEST(Bootstrap, DefaultStatistics) {
  const auto with = default_statistics(binary_schema(3, 2));
  ASSERT_EQ(with.size(), 2u);
  EXPECT_EQ(with[1].ground, VarSet{4});
  const auto without = default_statistics(binary_schema(3));
  ASSERT_EQ(without.size(), 1u);
  EXPECT_TRUE(without[0].ground.empty());
}

TEST(Bootstrap, RejectsBadSpecs) {
  const auto data = three_rows();
  BootstrapSpec spec;
  spec.replicates = 0;
  EXPECT_THROW(bootstrap_run(data, brier_problem(), spec), std::invalid_argument);
  spec.replicates = 1;
  spec.statistics = {{StatisticRequest::Kind::kGain, "", VarSet{9}, VarSet{}}};
  EXPECT_ANY_THROW(bootstrap_run(data, brier_problem(), spec));
}

}  // namespace
}  // namespace infogain
