#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "hanklab/ensemble.hpp"
#include "hanklab/errors.hpp"
#include "hanklab/stats.hpp"

using namespace hanklab;

namespace {

SymbolPaths fixed_paths(int bandwidth, std::vector<double> symbols,
                        IndexConvention convention = IndexConvention::symmetric) {
  Eigen::MatrixXd values(1, static_cast<Eigen::Index>(symbols.size()));
  for (std::size_t k = 0; k < symbols.size(); ++k) values(0, static_cast<Eigen::Index>(k)) = symbols[k];
  return SymbolPaths({1.0}, bandwidth, convention, values);
}

}  // namespace

TEST(Ensemble, BandwidthRule) {
  EXPECT_EQ(bandwidth_from_rule(1024, 0.6), 64);
  EXPECT_EQ(bandwidth_from_rule(256, 0.6), 27);
  EXPECT_EQ(bandwidth_from_rule(64, 0.6), 12);
  EXPECT_EQ(bandwidth_from_rule(2, 0.1), 1);
  EXPECT_THROW(BandConfig::with_rule(64, 1.0), ConfigError);
  EXPECT_THROW(BandConfig::with_rule(64, 0.0), ConfigError);
  EXPECT_THROW(BandConfig::with_bandwidth(4, 5), ConfigError);
  EXPECT_THROW(BandConfig::with_bandwidth(4, 0), ConfigError);
}

TEST(Ensemble, ParseRoundTrips) {
  EXPECT_EQ(parse_law(to_string(IidLaw::rademacher)), IidLaw::rademacher);
  EXPECT_EQ(parse_entry_kind("iid"), EntryKind::iid);
  EXPECT_EQ(parse_convention(to_string(IndexConvention::independent)), IndexConvention::independent);
  EXPECT_THROW(parse_law("cauchy"), ConfigError);
}

TEST(Ensemble, ThreeByThreeExample) {
  const double x1 = 0.7;
  const double x2 = -1.3;
  const auto config = BandConfig::with_bandwidth(3, 2);
  const auto h = build_band_hankel(fixed_paths(2, {0.0, x1, x2}), 0, config);
  const double expected[3][3] = {{x2, x1, 0}, {x1, 0, x1}, {0, x1, x2}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(h(i, j), expected[i][j]) << i << j;
}

TEST(Ensemble, TrivialSizes) {
  const auto one = build_band_hankel(fixed_paths(1, {0.0, 2.5}), 0, BandConfig::with_bandwidth(1, 1));
  EXPECT_EQ(one(0, 0), 0.0);
  const auto two = build_band_hankel(fixed_paths(1, {0.0, 1.0}), 0, BandConfig::with_bandwidth(2, 1));
  EXPECT_EQ(two(0, 0), 1.0);
  EXPECT_EQ(two(0, 1), 0.0);
  EXPECT_EQ(two(1, 0), 0.0);
  EXPECT_EQ(two(1, 1), 1.0);
}

TEST(Ensemble, IndependentConventionUsesSignedSlots) {
  // slots j + b for j = -1, 0, 1
  const auto config = BandConfig::with_bandwidth(2, 1, IndexConvention::independent);
  const auto h = build_band_hankel(fixed_paths(1, {5.0, 0.0, 7.0}, IndexConvention::independent), 0, config);
  EXPECT_EQ(h(0, 0), 7.0);  // a_{1}
  EXPECT_EQ(h(1, 1), 5.0);  // a_{-1}
  EXPECT_EQ(h(0, 1), 0.0);
}

TEST(Ensemble, SampledMatricesAreSymmetricBandedHankel) {
  for (auto convention : {IndexConvention::symmetric, IndexConvention::independent}) {
    const auto config = BandConfig::with_bandwidth(13, 4, convention);
    const double grid[] = {0.5, 1.0};
    const auto paths = sample_symbol_paths(EntryModel{}, config, grid, 99);
    for (std::size_t ti = 0; ti < 2; ++ti) {
      const auto h = build_band_hankel(paths, ti, config);
      for (int i = 0; i < 13; ++i) {
        for (int j = 0; j < 13; ++j) {
          EXPECT_EQ(h(i, j), h(j, i));
          const int k = 13 + 1 - (i + 1) - (j + 1);
          if (std::abs(k) > 4) EXPECT_EQ(h(i, j), 0.0);
          if (i + 1 < 13 && j > 0) EXPECT_EQ(h(i, j), h(i + 1, j - 1));
        }
      }
    }
  }
}

TEST(Ensemble, A0ColumnZeroUnlessIncluded) {
  const auto config = BandConfig::with_bandwidth(20, 5);
  const double grid[] = {1.0};
  const auto paths = sample_symbol_paths(EntryModel{}, config, grid, 3);
  EXPECT_EQ(paths.values().cols(), 6);
  EXPECT_EQ(paths.a0(0), 0.0);
  EntryModel with_a0;
  with_a0.include_a0 = true;
  EXPECT_NE(sample_symbol_paths(with_a0, config, grid, 3).a0(0), 0.0);
}

TEST(Ensemble, SamplingIsDeterministic) {
  const auto config = BandConfig::with_bandwidth(30, 6);
  const double grid[] = {0.25, 1.0, 3.0};
  const auto a = sample_symbol_paths(EntryModel{}, config, grid, 42);
  const auto b = sample_symbol_paths(EntryModel{}, config, grid, 42);
  const auto c = sample_symbol_paths(EntryModel{}, config, grid, 43);
  EXPECT_EQ(a.values(), b.values());
  EXPECT_NE(a.values(), c.values());
}

TEST(Ensemble, RademacherSupport) {
  EntryModel model;
  model.kind = EntryKind::iid;
  model.law = IidLaw::rademacher;
  const auto config = BandConfig::with_bandwidth(100, 50);
  const double grid[] = {1.0};
  const auto paths = sample_symbol_paths(model, config, grid, 5);
  for (int j = 1; j <= 50; ++j) EXPECT_EQ(std::abs(paths.value(0, j)), 1.0);
}

TEST(Ensemble, CenteredUniformHasUnitVariance) {
  EntryModel model;
  model.kind = EntryKind::iid;
  model.law = IidLaw::centered_uniform;
  const auto config = BandConfig::with_bandwidth(20000, 10000);
  const double grid[] = {1.0};
  const auto paths = sample_symbol_paths(model, config, grid, 6);
  std::vector<double> xs;
  for (int j = 1; j <= 10000; ++j) {
    xs.push_back(paths.value(0, j));
    EXPECT_LE(std::abs(xs.back()), std::sqrt(3.0));
  }
  EXPECT_NEAR(stats::variance(xs), 1.0, 0.05);
}

TEST(Ensemble, IidModelRejectsMultiTimeGrid) {
  EntryModel model;
  model.kind = EntryKind::iid;
  const double grid[] = {1.0, 2.0};
  EXPECT_THROW(sample_symbol_paths(model, BandConfig::with_bandwidth(4, 2), grid, 1), ConfigError);
}

TEST(Ensemble, GridValidation) {
  const double bad[] = {1.0, 1.0};
  EXPECT_THROW(sample_symbol_paths(EntryModel{}, BandConfig::with_bandwidth(4, 2), bad, 1), ConfigError);
  const double negative[] = {-1.0};
  EXPECT_THROW(sample_symbol_paths(EntryModel{}, BandConfig::with_bandwidth(4, 2), negative, 1), ConfigError);
}

TEST(Ensemble, GridAtZeroGivesZeroMatrix) {
  const auto config = BandConfig::with_bandwidth(8, 3);
  const double grid[] = {0.0, 1.0};
  const auto paths = sample_symbol_paths(EntryModel{}, config, grid, 11);
  const auto h = build_band_hankel(paths, 0, config);
  EXPECT_EQ(h.values().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Ensemble, BrownianIncrementsHaveUnitVarianceAndAreUncorrelated) {
  const int b = 10000;
  const auto config = BandConfig::with_bandwidth(b, b);
  const double grid[] = {1.0, 2.0};
  const auto paths = sample_symbol_paths(EntryModel{}, config, grid, 2024);
  std::vector<double> start;
  std::vector<double> inc;
  for (int j = 1; j <= b; ++j) {
    start.push_back(paths.value(0, j));
    inc.push_back(paths.value(1, j) - paths.value(0, j));
  }
  EXPECT_NEAR(stats::variance(inc), 1.0, 0.05);
  EXPECT_NEAR(stats::variance(start), 1.0, 0.05);
  const double rho = stats::covariance(start, inc) / std::sqrt(stats::variance(start) * stats::variance(inc));
  EXPECT_LT(std::abs(rho), 3.0 / std::sqrt(static_cast<double>(b)));
}

TEST(Ensemble, ScaleAndTilde) {
  const auto config1 = BandConfig::with_bandwidth(2, 1);
  const auto h = build_band_hankel(fixed_paths(1, {0.0, 1.0}), 0, config1);
  EXPECT_EQ(scale_to_A(h, config1).values(), h.values());

  const auto config4 = BandConfig::with_bandwidth(4, 4);
  auto paths = fixed_paths(4, {0.0, 2.0, 2.0, 2.0, 2.0});
  const auto a = scale_to_A(build_band_hankel(paths, 0, config4), config4);
  EXPECT_EQ(a(0, 0), 1.0);

  const SymmetricBandMatrix zero(Eigen::MatrixXd::Zero(2, 2), BandShape::anti_diagonal, 1);
  EXPECT_EQ(scale_to_A(zero, config1).values(), zero.values());
  const auto tilde = build_tilde_A(zero, 3.0, config1);
  EXPECT_EQ(tilde(0, 0), 3.0);
  EXPECT_EQ(tilde(1, 1), 3.0);
  EXPECT_EQ(tilde(0, 1), 0.0);
  EXPECT_EQ(build_tilde_A(a, 0.0, config4).values(), a.values());
  const auto shifted = build_tilde_A(a, 1.5, config4);
  EXPECT_NEAR(shifted.values().trace(), a.values().trace() + 4 * 1.5 / 2.0, 1e-14);
}

TEST(Ensemble, CoupledIncrementVariancePerEntry) {
  const auto config = BandConfig::with_bandwidth(200, 50);
  const double grid[] = {1.0, 1.5};
  std::vector<double> diffs;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto paths = sample_symbol_paths(EntryModel{}, config, grid, seed);
    const auto a1 = scale_to_A(build_band_hankel(paths, 0, config), config);
    const auto a2 = scale_to_A(build_band_hankel(paths, 1, config), config);
    // one entry per anti-diagonal, skipping the a_0 one
    for (int k = 1; k <= 50; ++k) diffs.push_back(a2(0, 199 - k) - a1(0, 199 - k));
  }
  EXPECT_NEAR(stats::variance(diffs) / (0.5 / 50.0), 1.0, 0.1);
}

TEST(Ensemble, MatrixCsvHasOneLinePerRow) {
  const auto config = BandConfig::with_bandwidth(3, 2);
  const auto h = build_band_hankel(fixed_paths(2, {0.0, 0.5, 0.25}), 0, config);
  std::ostringstream out;
  write_matrix_csv(out, h);
  EXPECT_EQ(out.str(), "0.25,0.5,0\n0.5,0,0.5\n0,0.5,0.25\n");
}
