#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hanklab/errors.hpp"
#include "hanklab/numeric.hpp"
#include "hanklab/spectra.hpp"

using namespace hanklab;

namespace {

SymbolPaths one_time(int bandwidth, std::vector<double> symbols) {
  Eigen::MatrixXd values(1, static_cast<Eigen::Index>(symbols.size()));
  for (std::size_t k = 0; k < symbols.size(); ++k) values(0, static_cast<Eigen::Index>(k)) = symbols[k];
  return SymbolPaths({1.0}, bandwidth, IndexConvention::symmetric, values);
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

TEST(Spectra, TracePowerExamples) {
  const SymmetricBandMatrix d(Eigen::MatrixXd::Identity(2, 2) * 3.0, BandShape::diagonal, 0);
  for (auto m : {TraceMethod::eigen, TraceMethod::matmul}) {
    EXPECT_NEAR(trace_power(d, 2, m).value, 18.0, 1e-12);
  }
  const auto config = BandConfig::with_bandwidth(2, 1);
  const auto h = build_band_hankel(one_time(1, {0.0, 1.0}), 0, config);
  EXPECT_NEAR(trace_power(h, 5).value, 2.0, 1e-12);
  EXPECT_NEAR(trace_power(h, 5, TraceMethod::matmul).value, 2.0, 1e-12);
  const SymmetricBandMatrix zero(Eigen::MatrixXd::Zero(4, 4), BandShape::anti_diagonal, 2);
  for (int p = 1; p <= 6; ++p) EXPECT_EQ(trace_power(zero, p).value, 0.0);
  EXPECT_THROW(trace_power(zero, 0), ConfigError);
  EXPECT_THROW(trace_power(zero, 2, TraceMethod::formula), ConfigError);
}

TEST(Spectra, FormulaExamples) {
  const auto c2 = BandConfig::with_bandwidth(2, 1);
  EXPECT_NEAR(trace_power_formula(one_time(1, {0.0, 1.0}), 0, c2, 2), 2.0, 1e-14);
  const auto c1 = BandConfig::with_bandwidth(1, 1);
  for (int p = 1; p <= 4; ++p) EXPECT_EQ(trace_power_formula(one_time(1, {0.0, 3.0}), 0, c1, p), 0.0);
  const auto c3 = BandConfig::with_bandwidth(3, 2);
  const auto paths = one_time(2, {0.0, 1.0, 1.0});
  EXPECT_NEAR(trace_power_formula(paths, 0, c3, 2), 6.0, 1e-14);
  EXPECT_NEAR(trace_power(build_band_hankel(paths, 0, c3), 2).value, 6.0, 1e-12);
}

TEST(Spectra, FormulaBudget) {
  const auto config = BandConfig::with_bandwidth(8, 3);
  const double grid[] = {1.0};
  const auto paths = sample_symbol_paths(EntryModel{}, config, grid, 1);
  EXPECT_THROW(trace_power_formula(paths, 0, config, 5, 1000), BudgetError);
  EXPECT_NO_THROW(trace_power_formula(paths, 0, config, 3, 1000));
}

TEST(Spectra, FormulaMatchesEigenOnRandomInstances) {
  std::mt19937_64 rng(20261014);
  for (int instance = 0; instance < 200; ++instance) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const int b = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::min(3, n)));
    const int p = 1 + static_cast<int>(rng() % 5);
    const auto convention = (instance & 1) ? IndexConvention::independent : IndexConvention::symmetric;
    const auto config = BandConfig::with_bandwidth(n, b, convention);
    const double grid[] = {1.0};
    const auto paths = sample_symbol_paths(EntryModel{}, config, grid, rng());
    const double formula = trace_power_formula(paths, 0, config, p);
    const double eigen = trace_power(build_band_hankel(paths, 0, config), p).value;
    EXPECT_LE(rel_err(formula, eigen), 1e-9) << "n=" << n << " b=" << b << " p=" << p;
  }
}

TEST(Spectra, EigenMatchesMatmul) {
  for (auto convention : {IndexConvention::symmetric, IndexConvention::independent}) {
    for (int n : {5, 32, 97, 256}) {
      const auto config = BandConfig::with_rule(n, 0.6, convention);
      const double grid[] = {1.0};
      const auto paths = sample_symbol_paths(EntryModel{}, config, grid, static_cast<std::uint64_t>(n));
      const auto a = scale_to_A(build_band_hankel(paths, 0, config), config);
      const std::vector<int> ps{1, 2, 3, 4, 5, 6, 7, 8};
      const auto e = trace_powers(a, ps, TraceMethod::eigen);
      const auto m = trace_powers(a, ps, TraceMethod::matmul);
      for (std::size_t k = 0; k < ps.size(); ++k) {
        // odd traces are near zero by symmetry, so compare against the even scale
        const double scale = std::max(std::abs(e[k]), std::abs(e[(k | 1)]));
        EXPECT_LE(std::abs(e[k] - m[k]) / std::max(1.0, scale), 1e-8) << "n=" << n << " p=" << ps[k];
      }
    }
  }
}

TEST(Spectra, TildeMatrixMatmulMatchesEigen) {
  const auto config = BandConfig::with_bandwidth(40, 6);
  EntryModel model;
  model.include_a0 = true;
  const double grid[] = {1.0};
  const auto paths = sample_symbol_paths(model, config, grid, 8);
  const auto a = build_tilde_A(scale_to_A(build_band_hankel(paths, 0, config), config), paths.a0(0), config);
  for (int p = 1; p <= 6; ++p) {
    const double e = trace_power(a, p).value;
    const double m = trace_power(a, p, TraceMethod::matmul).value;
    EXPECT_LE(rel_err(e, m), 1e-9) << p;
  }
}

TEST(Spectra, ScaleCovariance) {
  const auto config = BandConfig::with_bandwidth(30, 5);
  const double grid[] = {1.0};
  const auto a = scale_to_A(build_band_hankel(sample_symbol_paths(EntryModel{}, config, grid, 4), 0, config), config);
  for (double c : {2.0, 1.0 / 3.0}) {
    const auto ca = scaled(a, c);
    for (int p = 1; p <= 6; ++p) {
      const double base = trace_power(a, p).value;
      const double s = trace_power(ca, p).value;
      const double scale = std::abs(int_pow(c, p) * base);
      if (p % 2 == 0) {
        EXPECT_LE(std::abs(s - int_pow(c, p) * base) / scale, 1e-10) << p;
      } else {
        EXPECT_NEAR(s, int_pow(c, p) * base, 1e-10 * int_pow(c, p) * trace_power(a, p + 1).value);
      }
    }
  }
}

TEST(Spectra, EigenvaluesAscending) {
  const auto config = BandConfig::with_bandwidth(20, 4);
  const double grid[] = {1.0};
  const auto h = build_band_hankel(sample_symbol_paths(EntryModel{}, config, grid, 5), 0, config);
  const auto ev = symmetric_eigenvalues(h);
  for (Eigen::Index i = 1; i < ev.size(); ++i) EXPECT_LE(ev(i - 1), ev(i));
}

TEST(Spectra, WStatExamples) {
  const auto config = BandConfig::with_bandwidth(2, 1);
  const std::vector<double> equal{5.0, 5.0, 5.0};
  for (const auto& w : w_stat(equal, 2, 1.0, config)) EXPECT_EQ(w.value, 0.0);
  const std::vector<double> pair{1.0, 3.0};
  const auto w = w_stat(pair, 2, 1.0, config);
  EXPECT_DOUBLE_EQ(w[0].value, -0.5);
  EXPECT_DOUBLE_EQ(w[1].value, 0.5);
  EXPECT_EQ(w[0].centering, Centering::sample_mean);
  const auto exact = w_stat(pair, 3, 1.0, config, 0.0);
  EXPECT_DOUBLE_EQ(exact[1].value, 1.5);
  EXPECT_EQ(exact[1].centering, Centering::wick_exact);
  EXPECT_THROW(w_stat(std::vector<double>{}, 2, 1.0, config), ConfigError);
}

TEST(Spectra, WStatBatchMeanIsZero) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(1e6, 1e3);
  std::vector<double> traces(1000);
  for (double& t : traces) t = normal(rng);
  const auto config = BandConfig::with_bandwidth(64, 12);
  const auto w = w_stat(traces, 2, 1.0, config);
  CompensatedSum sum;
  for (const auto& x : w) sum.add(x.value);
  // traces near 1e6 leave roughly 1e-16 * 1e6 * scale of cancellation noise per entry
  EXPECT_LE(std::abs(sum.value() / 1000.0), 1e-10);
}

TEST(Spectra, ParseNames) {
  EXPECT_EQ(parse_trace_method("matmul"), TraceMethod::matmul);
  EXPECT_EQ(parse_centering("wick_exact"), Centering::wick_exact);
  EXPECT_THROW(parse_trace_method("lanczos"), ConfigError);
}
