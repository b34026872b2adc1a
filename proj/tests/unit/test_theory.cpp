#include <gtest/gtest.h>

#include <cmath>
#include <thread>
#include <vector>

#include "hanklab/errors.hpp"
#include "hanklab/numeric.hpp"
#include "hanklab/stats.hpp"
#include "hanklab/theory.hpp"

using namespace hanklab;
using namespace hanklab::theory;
using hanklab::combinat::class_counts;

TEST(Theory, LimitCovExamples) {
  const auto c = limit_cov({2, 2, 1.0, 1.0});
  EXPECT_EQ(c.value, 16.0);
  ASSERT_EQ(c.terms.size(), 1u);
  EXPECT_EQ(c.terms[0].r, 2);
  EXPECT_EQ(c.terms[0].r_value, 4u);
  EXPECT_EQ(limit_cov({2, 2, 0.0, 5.0}).value, 0.0);
  EXPECT_EQ(limit_cov({2, 2, 1.0, 3.0}).value, 16.0);
}

TEST(Theory, LimitCovByHandForFourFour) {
  // 2^4 [C(4,2) t1^3 (t2-t1) R(4,2) 1! + C(4,4) t1^4 R(4,4) 0!]
  const double t1 = 0.5;
  const double t2 = 1.25;
  const double r42 = static_cast<double>(class_counts(4, 2).r_value);
  const double r44 = static_cast<double>(class_counts(4, 4).r_value);
  const double expected = 16.0 * (6.0 * std::pow(t1, 3) * (t2 - t1) * r42 + std::pow(t1, 4) * r44);
  EXPECT_NEAR(limit_cov({4, 4, t1, t2}).value, expected, 1e-12 * expected);
}

TEST(Theory, QueryValidation) {
  EXPECT_THROW(limit_cov({3, 2, 1.0, 1.0}), ConfigError);
  EXPECT_THROW(limit_cov({2, 2, 2.0, 1.0}), ConfigError);
  EXPECT_THROW(limit_cov({2, 2, -1.0, 1.0}), ConfigError);
  const auto swapped = CovarianceQuery{2, 4, 3.0, 1.0}.ordered();
  EXPECT_EQ(swapped.p, 4);
  EXPECT_EQ(swapped.q, 2);
  EXPECT_EQ(swapped.t1, 1.0);
  EXPECT_EQ(swapped.t2, 3.0);
}

TEST(Theory, ScalingLaw) {
  for (int p : {2, 4, 6}) {
    for (int q : {2, 4, 6}) {
      const double base = limit_cov({p, q, 0.7, 1.9}).value;
      for (double lambda : {0.25, 4.0}) {
        const double scaled = limit_cov({p, q, lambda * 0.7, lambda * 1.9}).value;
        EXPECT_NEAR(scaled / base, std::pow(lambda, (p + q) / 2.0), 1e-12 * std::pow(lambda, (p + q) / 2.0));
      }
    }
  }
}

TEST(Theory, EqualTimeSymmetryAndPositivity) {
  for (int p = 2; p <= 6; p += 2) {
    for (int q = 2; q <= 6; q += 2) {
      EXPECT_EQ(limit_cov({p, q, 1.3, 1.3}).value, limit_cov({q, p, 1.3, 1.3}).value);
    }
    EXPECT_GT(limit_cov({p, p, 0.8, 0.8}).value, 0.0);
  }
}

TEST(Theory, QTwoIndependentOfLaterTime) {
  for (int p : {2, 4, 6}) {
    const double a = limit_cov({p, 2, 1.0, 1.0}).value;
    for (double t2 : {1.5, 2.0, 7.0}) EXPECT_EQ(limit_cov({p, 2, 1.0, t2}).value, a);
  }
}

TEST(Theory, LiteralConventionDiffersOnlyInDelta2) {
  EXPECT_EQ(r_coefficient(2, 2, 2, RConvention::literal_q), 4u);
  const auto& c42 = class_counts(4, 2);
  const auto& c44 = class_counts(4, 4);
  EXPECT_EQ(r_coefficient(4, 2, 4, RConvention::r_index), c42.r_value);
  EXPECT_EQ(r_coefficient(4, 2, 4, RConvention::literal_q), c44.delta2 + c42.delta2_tilde + 2 * c42.delta24);
  EXPECT_EQ(parse_r_convention("literal_q"), RConvention::literal_q);
}

TEST(Theory, BandIntegral) {
  EXPECT_EQ(band_integral_b0(2, 2), 2.0);
  EXPECT_EQ(band_integral_b0(2, 0), 1.0);
  EXPECT_EQ(band_integral_b0(4, 2), 4.0);
  EXPECT_THROW(band_integral_b0(2, 1), ConfigError);
}

TEST(Theory, LsdMoments) {
  EXPECT_EQ(lsd_moment(2), 1.0);
  EXPECT_EQ(lsd_moment(4), 2.0);
  EXPECT_EQ(lsd_moment(3), 0.0);
  for (int k = 0; k <= 6; ++k) EXPECT_EQ(lsd_moment(2 * k), factorial(k));
  EXPECT_EQ(scaled_moment_R(2), 2.0);
  EXPECT_EQ(scaled_moment_R(4), 8.0);
  EXPECT_EQ(scaled_moment_R(1), 0.0);
}

TEST(Theory, LsdMomentsMatchDensityNumerically) {
  // |x| e^{-x^2} integrates to 1 over the line.
  for (int k : {2, 4, 6}) {
    double sum = 0.0;
    const double h = 1e-4;
    for (double x = h / 2; x < 12.0; x += h) sum += 2.0 * std::pow(x, k) * x * std::exp(-x * x) * h;
    EXPECT_NEAR(sum, lsd_moment(k), 1e-6 * lsd_moment(k));
  }
}

TEST(Theory, TildeCovEvenCase) {
  const auto t = tilde_cov({2, 2, 1.0, 1.0});
  EXPECT_EQ(t.value, 16.0);
  EXPECT_EQ(t.correction, 0.0);
  EXPECT_TRUE(t.derived);
  EXPECT_EQ(tilde_cov({2, 2, 0.0, 1.0}).value, 0.0);
  EXPECT_EQ(tilde_cov({4, 2, 0.5, 2.0}).value, limit_cov({4, 2, 0.5, 2.0}).value);
}

TEST(Theory, CovarianceMatrixExamples) {
  const double one[] = {1.0};
  EXPECT_EQ(limit_cov_matrix(2, one)(0, 0), 16.0);
  const double two[] = {1.0, 2.0};
  const auto m = limit_cov_matrix(2, two);
  EXPECT_EQ(m(0, 0), 16.0);
  EXPECT_EQ(m(0, 1), 16.0);
  EXPECT_EQ(m(1, 0), 16.0);
  EXPECT_EQ(m(1, 1), 64.0);
  const double half[] = {0.5, 1.0};
  EXPECT_EQ(limit_cov_matrix(2, half)(0, 0), 4.0);
  const double bad[] = {0.0, 1.0};
  EXPECT_THROW(limit_cov_matrix(2, bad), ConfigError);
}

TEST(Theory, CovarianceMatrixIsPsd) {
  const double grid[] = {0.4, 0.8, 1.2, 1.6, 2.0};
  for (int p : {2, 4, 6}) {
    const auto m = limit_cov_matrix(p, grid);
    EXPECT_EQ(m, m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(m);
    EXPECT_GE(s.eigenvalues().minCoeff(), -1e-10 * m.trace()) << p;
  }
}

TEST(Theory, SamplerIsDeterministicAndHandlesNearSingularGrids) {
  const double grid[] = {0.5, 1.0, 2.0};
  const auto a = sample_limit_process(4, grid, 17);
  const auto b = sample_limit_process(4, grid, 17);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.times, std::vector<double>(grid, grid + 3));
  EXPECT_GT(a.ridge, 0.0);

  const double close[] = {1.0, 1.0 + 1e-13};
  const auto s = sample_limit_process(2, close, 3);
  EXPECT_TRUE(std::isfinite(s.values[0]) && std::isfinite(s.values[1]));
  EXPECT_NEAR(s.values[0], s.values[1], 1e-3 * (1.0 + std::abs(s.values[0])));
  EXPECT_GT(s.cholesky_condition, 1e6);
}

TEST(Theory, SampledPathsHaveTheLimitCovariance) {
  const double grid[] = {0.5, 1.0};
  const auto draws = sample_limit_paths(2, grid, 20000, 5);
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& d : draws) {
    x.push_back(d.values[0]);
    y.push_back(d.values[1]);
  }
  EXPECT_NEAR(stats::variance(x), 4.0, 0.2);
  EXPECT_NEAR(stats::variance(y), 16.0, 0.7);
  EXPECT_NEAR(stats::covariance(x, y), 4.0, 0.3);
}

TEST(Theory, CachedCountsAreThreadSafe) {
  std::vector<std::thread> threads;
  std::vector<std::uint64_t> seen(8);
  for (int k = 0; k < 8; ++k) {
    threads.emplace_back([k, &seen] { seen[static_cast<std::size_t>(k)] = cached_class_counts(6, 4).r_value; });
  }
  for (auto& t : threads) t.join();
  for (auto v : seen) EXPECT_EQ(v, class_counts(6, 4).r_value);
}
