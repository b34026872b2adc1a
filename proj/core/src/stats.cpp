#include "hanklab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hanklab/errors.hpp"
#include "hanklab/numeric.hpp"

namespace hanklab::stats {
namespace {

void require_size(std::span<const double> xs, std::size_t minimum, const char* what) {
  if (xs.size() < minimum) {
    throw ConfigError(std::string(what) + " needs at least " + std::to_string(minimum) + " values, got " +
                      std::to_string(xs.size()));
  }
}

void require_paired(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ConfigError("paired batches differ in length");
}

}  // namespace

double mean(std::span<const double> xs) {
  require_size(xs, 1, "mean");
  const double r = static_cast<double>(xs.size());
  double m = compensated_sum(xs) / r;
  CompensatedSum residual;
  for (double x : xs) residual.add(x - m);
  m += residual.value() / r;
  return m;
}

double covariance(std::span<const double> xs, std::span<const double> ys) {
  require_paired(xs, ys);
  require_size(xs, 2, "covariance");
  const double mx = mean(xs);
  const double my = mean(ys);
  CompensatedSum acc;
  for (std::size_t i = 0; i < xs.size(); ++i) acc.add((xs[i] - mx) * (ys[i] - my));
  return acc.value() / static_cast<double>(xs.size() - 1);
}

double variance(std::span<const double> xs) { return std::max(0.0, covariance(xs, xs)); }

std::optional<double> jackknife_covariance_se(std::span<const double> xs, std::span<const double> ys) {
  require_paired(xs, ys);
  const std::size_t count = xs.size();
  if (count < 3) return std::nullopt;
  const double r = static_cast<double>(count);
  const double mx = mean(xs);
  const double my = mean(ys);
  CompensatedSum cross;
  for (std::size_t i = 0; i < count; ++i) cross.add((xs[i] - mx) * (ys[i] - my));
  const double s = cross.value();
  // Removing replicate i moves the centred cross product by dx dy R/(R-1).
  std::vector<double> loo(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double d = (xs[i] - mx) * (ys[i] - my);
    loo[i] = (s - d * r / (r - 1.0)) / (r - 2.0);
  }
  const double centre = mean(loo);
  CompensatedSum spread;
  for (double c : loo) spread.add((c - centre) * (c - centre));
  return std::sqrt((r - 1.0) / r * spread.value());
}

ShapeMoments shape_moments(std::span<const double> xs) {
  require_size(xs, 2, "shape moments");
  const double r = static_cast<double>(xs.size());
  const double m = mean(xs);
  CompensatedSum s2;
  CompensatedSum s3;
  CompensatedSum s4;
  for (double x : xs) {
    const double d = x - m;
    const double d2 = d * d;
    s2.add(d2);
    s3.add(d2 * d);
    s4.add(d2 * d2);
  }
  ShapeMoments out;
  out.skewness_se = std::sqrt(6.0 / r);
  out.kurtosis_se = std::sqrt(24.0 / r);
  const double m2 = s2.value() / r;
  if (m2 <= 0.0) return out;
  out.skewness = (s3.value() / r) / std::pow(m2, 1.5);
  out.excess_kurtosis = (s4.value() / r) / (m2 * m2) - 3.0;
  return out;
}

double raw_moment(std::span<const double> xs, int k) {
  require_size(xs, 1, "raw moment");
  CompensatedSum acc;
  for (double x : xs) acc.add(int_pow(x, k));
  return acc.value() / static_cast<double>(xs.size());
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  require_size(a, 1, "KS distance");
  require_size(b, 1, "KS distance");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    best = std::max(best, std::fabs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return best;
}

double ols_slope(std::span<const double> xs, std::span<const double> ys) {
  require_paired(xs, ys);
  require_size(xs, 2, "regression");
  const double mx = mean(xs);
  const double my = mean(ys);
  CompensatedSum sxy;
  CompensatedSum sxx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy.add((xs[i] - mx) * (ys[i] - my));
    sxx.add((xs[i] - mx) * (xs[i] - mx));
  }
  if (sxx.value() <= 0.0) throw ConfigError("regression needs at least two distinct abscissae");
  return sxy.value() / sxx.value();
}

}  // namespace hanklab::stats
