#pragma once

// Replicate-batch estimators. All sums are compensated and run in index
// order, so results are bitwise reproducible for a given batch.

#include <optional>
#include <span>
#include <vector>

namespace hanklab::stats {

/// Sample mean, refined by one correction pass so that sum(x - mean) is zero
/// to rounding.
double mean(std::span<const double> xs);

/// (R-1)-denominator covariance. Needs R >= 2.
double covariance(std::span<const double> xs, std::span<const double> ys);
double variance(std::span<const double> xs);

/// Delete-1 jackknife standard error of the (R-1)-denominator covariance,
/// using the closed-form leave-one-out update. Empty when R < 3.
std::optional<double> jackknife_covariance_se(std::span<const double> xs, std::span<const double> ys);

/// Moment-ratio skewness g1 = m3 / m2^{3/2} and excess kurtosis
/// g2 = m4 / m2^2 - 3 with central moments m_k = mean((x - xbar)^k).
/// A batch with m2 = 0 yields 0 for both.
struct ShapeMoments {
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double skewness_se = 0.0;  // sqrt(6/R)
  double kurtosis_se = 0.0;  // sqrt(24/R)
};
ShapeMoments shape_moments(std::span<const double> xs);

/// mean(x^k) for raw (uncentred) values.
double raw_moment(std::span<const double> xs, int k);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_distance(std::span<const double> a, std::span<const double> b);

/// Least-squares slope of y on x. Needs at least two distinct x.
double ols_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace hanklab::stats
