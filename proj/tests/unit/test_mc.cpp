#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "hanklab/errors.hpp"
#include "hanklab/mc.hpp"
#include "hanklab/oracle.hpp"

using namespace hanklab;
using namespace hanklab::mc;

namespace {

ExperimentPlan small_plan() {
  ExperimentPlan plan;
  plan.config = BandConfig::with_bandwidth(24, 5);
  plan.p_list = {2, 3, 4};
  plan.times = {0.5, 1.0, 2.0};
  plan.replicates = 60;
  plan.master_seed = 123;
  return plan;
}

void expect_same(const McReport& a, const McReport& b) {
  ASSERT_EQ(a.moments.size(), b.moments.size());
  for (std::size_t k = 0; k < a.moments.size(); ++k) {
    EXPECT_EQ(a.moments[k].mean_trace, b.moments[k].mean_trace);
    EXPECT_EQ(a.moments[k].variance, b.moments[k].variance);
    EXPECT_EQ(a.moments[k].shape.skewness, b.moments[k].shape.skewness);
  }
  ASSERT_EQ(a.covariances.size(), b.covariances.size());
  for (std::size_t k = 0; k < a.covariances.size(); ++k) {
    EXPECT_EQ(a.covariances[k].value, b.covariances[k].value);
    EXPECT_EQ(a.covariances[k].se, b.covariances[k].se);
  }
  EXPECT_EQ(a.w_samples, b.w_samples);
}

}  // namespace

TEST(Mc, SeedDerivation) {
  EXPECT_EQ(derive_seed(7, 0), derive_seed(7, 0));
  EXPECT_NE(derive_seed(7, 0), derive_seed(7, 1));
  EXPECT_NE(derive_seed(7, 0), derive_seed(8, 0));
  // SplitMix64 reference output for state 0 after one step
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}

TEST(Mc, BitwiseIdenticalAcrossWorkerCounts) {
  auto plan = small_plan();
  plan.workers = 1;
  const auto one = run_experiment(plan);
  plan.workers = 2;
  const auto two = run_experiment(plan);
  plan.workers = 8;
  const auto eight = run_experiment(plan);
  expect_same(one, two);
  expect_same(one, eight);
  EXPECT_EQ(one.workers_used, 1u);
}

TEST(Mc, KeysAndCovarianceLayout) {
  const auto report = run_experiment(small_plan());
  ASSERT_EQ(report.keys.size(), 9u);
  EXPECT_EQ(report.keys[0], (StatKey{2, 0.5}));
  EXPECT_EQ(report.keys[3], (StatKey{3, 0.5}));
  EXPECT_EQ(report.covariances.size(), 45u);
  for (const auto& m : report.moments) EXPECT_GE(m.variance, 0.0);
  EXPECT_EQ(report.covariance(2, 1.0, 3, 2.0).value, report.covariance(3, 2.0, 2, 1.0).value);
  EXPECT_EQ(report.covariance(4, 1.0, 4, 1.0).value, report.moment(4, 1.0).variance);
  EXPECT_THROW((void)report.moment(6, 1.0), ConfigError);
  EXPECT_THROW((void)report.covariance(2, 1.0, 2, 3.0), ConfigError);
}

TEST(Mc, IdenticalSeedsGiveZeroVariance) {
  auto plan = small_plan();
  plan.replicates = 2;
  plan.identical_replicate_seeds = true;
  const auto report = run_experiment(plan);
  for (const auto& m : report.moments) EXPECT_EQ(m.variance, 0.0);
}

TEST(Mc, TimeZeroIsIdenticallyZero) {
  auto plan = small_plan();
  plan.times = {0.0, 1.0};
  const auto report = run_experiment(plan);
  for (int p : plan.p_list) {
    const auto& m = report.moment(p, 0.0);
    EXPECT_EQ(m.mean_trace, 0.0);
    EXPECT_EQ(m.variance, 0.0);
    for (double w : report.samples(p, 0.0)) EXPECT_EQ(w, 0.0);
  }
}

TEST(Mc, SampleMeanCenteredWAverageToZero) {
  const auto report = run_experiment(small_plan());
  for (const auto& m : report.moments) EXPECT_LE(std::abs(m.mean), 1e-12 * (1.0 + std::abs(m.mean_trace)));
}

TEST(Mc, TraceMethodsAgree) {
  auto plan = small_plan();
  const auto eigen = run_experiment(plan);
  plan.trace_method = TraceMethod::matmul;
  const auto matmul = run_experiment(plan);
  for (std::size_t k = 0; k < eigen.traces.size(); ++k) {
    for (std::size_t r = 0; r < eigen.traces[k].size(); ++r) {
      EXPECT_NEAR(eigen.traces[k][r], matmul.traces[k][r], 1e-8 * (1.0 + std::abs(eigen.traces[k][r])));
    }
  }
}

TEST(Mc, FormulaRouteMatchesOnTinyConfig) {
  ExperimentPlan plan;
  plan.config = BandConfig::with_bandwidth(6, 2);
  plan.p_list = {1, 2, 3};
  plan.times = {1.0, 1.5};
  plan.replicates = 5;
  plan.master_seed = 9;
  const auto eigen = run_experiment(plan);
  plan.trace_method = TraceMethod::formula;
  const auto formula = run_experiment(plan);
  for (std::size_t k = 0; k < eigen.traces.size(); ++k) {
    for (std::size_t r = 0; r < 5; ++r) {
      EXPECT_NEAR(eigen.traces[k][r], formula.traces[k][r], 1e-9 * (1.0 + std::abs(eigen.traces[k][r])));
    }
  }
}

TEST(Mc, ReplicateErrorsCarryIndexSeedAndType) {
  ExperimentPlan plan;
  plan.config = BandConfig::with_bandwidth(8, 3);
  plan.p_list = {4};
  plan.replicates = 4;
  plan.trace_method = TraceMethod::formula;
  plan.formula_budget = 10;
  try {
    run_experiment(plan);
    FAIL() << "expected BudgetError";
  } catch (const BudgetError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("replicate 0"), std::string::npos) << msg;
    EXPECT_NE(msg.find(std::to_string(plan.replicate_seed(0))), std::string::npos) << msg;
  }
}

TEST(Mc, PlanValidation) {
  auto plan = small_plan();
  plan.replicates = 1;
  EXPECT_THROW(run_experiment(plan), ConfigError);
  plan = small_plan();
  plan.times = {1.0, 0.5};
  EXPECT_THROW(run_experiment(plan), ConfigError);
  plan = small_plan();
  plan.p_list = {2, 2};
  EXPECT_THROW(run_experiment(plan), ConfigError);
  plan = small_plan();
  plan.model.kind = EntryKind::iid;
  EXPECT_THROW(run_experiment(plan), ConfigError);
  plan.times = {1.0};
  plan.model.law = IidLaw::rademacher;
  plan.centering = Centering::wick_exact;
  EXPECT_THROW(run_experiment(plan), ConfigError);
}

TEST(Mc, WickCentering) {
  auto plan = small_plan();
  EXPECT_EQ(wick_centering(plan, 3, 1.0), 0.0);
  const double exact = oracle::exact_mean_trace(plan.config, 2, 2.0).value / plan.config.bandwidth;
  EXPECT_NEAR(wick_centering(plan, 2, 2.0), exact, 1e-12 * exact);
  plan.centering = Centering::wick_exact;
  const auto report = run_experiment(plan);
  const auto& m = report.moment(3, 1.0);
  EXPECT_EQ(m.centering_value, 0.0);
  const double scale = std::sqrt(5.0) / 24.0;
  for (std::size_t r = 0; r < plan.replicates; ++r) {
    EXPECT_NEAR(report.w_samples[report.key_index(3, 1.0)][r], scale * report.traces[report.key_index(3, 1.0)][r],
                1e-12);
  }
}

TEST(Mc, PolynomialStatistic) {
  const auto report = run_experiment(small_plan());
  const std::pair<int, double> terms[] = {{2, 1.5}, {4, -0.25}};
  const auto w = polynomial_w(report, terms, 1.0);
  const auto w2 = report.samples(2, 1.0);
  const auto w4 = report.samples(4, 1.0);
  for (std::size_t r = 0; r < w.size(); ++r) EXPECT_NEAR(w[r], 1.5 * w2[r] - 0.25 * w4[r], 1e-12);
}

TEST(Mc, TildeModeShiftsTraces) {
  auto plan = small_plan();
  plan.model.include_a0 = true;
  plan.p_list = {1};
  plan.times = {1.0};
  const auto report = run_experiment(plan);
  // Tr A~ = Tr A + n a0 / sqrt(b); the a0 part has variance n^2 / b.
  const double var_w = report.moment(1, 1.0).variance;
  EXPECT_GT(var_w, 0.3);
}
