#include "hanklab/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>

#include "hanklab/errors.hpp"

namespace hanklab {
namespace {

void validate_grid(std::span<const double> grid) {
  if (grid.empty()) throw ConfigError("time grid must contain at least one time");
  double previous = -1.0;
  for (double t : grid) {
    if (!std::isfinite(t) || t < 0.0) throw ConfigError("time grid entries must be finite and >= 0");
    if (t <= previous) throw ConfigError("time grid must be strictly increasing");
    previous = t;
  }
}

double draw_iid(IidLaw law, std::mt19937_64& rng, std::normal_distribution<double>& normal) {
  switch (law) {
    case IidLaw::standard_gaussian:
      return normal(rng);
    case IidLaw::rademacher:
      return (rng() >> 63) != 0 ? 1.0 : -1.0;
    case IidLaw::centered_uniform: {
      // U(-sqrt 3, sqrt 3) has unit variance.
      std::uniform_real_distribution<double> uniform(-std::sqrt(3.0), std::sqrt(3.0));
      return uniform(rng);
    }
  }
  return 0.0;
}

}  // namespace

int bandwidth_from_rule(int n, double gamma) {
  if (n < 1) throw ConfigError("matrix order n must be >= 1, got " + std::to_string(n));
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ConfigError("bandwidth exponent gamma must lie in (0, 1) so that b_n = o(n), got " +
                      std::to_string(gamma));
  }
  const double raw = std::pow(static_cast<double>(n), gamma) * (1.0 + 1e-12);
  const int b = static_cast<int>(std::floor(raw));
  return std::clamp(b, 1, n);
}

BandConfig BandConfig::with_rule(int n, double gamma, IndexConvention convention) {
  BandConfig config;
  config.n = n;
  config.bandwidth = bandwidth_from_rule(n, gamma);
  config.gamma = gamma;
  config.convention = convention;
  return config;
}

BandConfig BandConfig::with_bandwidth(int n, int bandwidth, IndexConvention convention) {
  BandConfig config;
  config.n = n;
  config.bandwidth = bandwidth;
  config.convention = convention;
  config.validate();
  return config;
}

void BandConfig::validate() const {
  if (n < 1) throw ConfigError("matrix order n must be >= 1, got " + std::to_string(n));
  if (bandwidth < 1 || bandwidth > n) {
    throw ConfigError("bandwidth must satisfy 1 <= b <= n, got b=" + std::to_string(bandwidth) +
                      " n=" + std::to_string(n));
  }
  if (gamma && !(*gamma > 0.0 && *gamma < 1.0)) {
    throw ConfigError("bandwidth exponent gamma must lie in (0, 1), got " + std::to_string(*gamma));
  }
}

std::string_view to_string(IndexConvention convention) noexcept {
  return convention == IndexConvention::symmetric ? "symmetric" : "independent";
}

std::string_view to_string(EntryKind kind) noexcept { return kind == EntryKind::brownian ? "brownian" : "iid"; }

std::string_view to_string(IidLaw law) noexcept {
  switch (law) {
    case IidLaw::standard_gaussian:
      return "standard_gaussian";
    case IidLaw::rademacher:
      return "rademacher";
    case IidLaw::centered_uniform:
      return "centered_uniform";
  }
  return "unknown";
}

IndexConvention parse_convention(std::string_view text) {
  if (text == "symmetric") return IndexConvention::symmetric;
  if (text == "independent") return IndexConvention::independent;
  throw ConfigError("unknown index convention '" + std::string(text) + "' (expected symmetric|independent)");
}

EntryKind parse_entry_kind(std::string_view text) {
  if (text == "brownian") return EntryKind::brownian;
  if (text == "iid") return EntryKind::iid;
  throw ConfigError("unknown entry kind '" + std::string(text) + "' (expected brownian|iid)");
}

IidLaw parse_law(std::string_view text) {
  if (text == "standard_gaussian" || text == "gaussian") return IidLaw::standard_gaussian;
  if (text == "rademacher") return IidLaw::rademacher;
  if (text == "centered_uniform" || text == "uniform") return IidLaw::centered_uniform;
  throw ConfigError("unknown entry law '" + std::string(text) +
                    "' (expected standard_gaussian|rademacher|centered_uniform)");
}

SymbolPaths::SymbolPaths(std::vector<double> times, int bandwidth, IndexConvention convention,
                         Eigen::MatrixXd values)
    : times_(std::move(times)), bandwidth_(bandwidth), convention_(convention), values_(std::move(values)) {
  if (values_.rows() != static_cast<Eigen::Index>(times_.size()) ||
      values_.cols() != slot_count(bandwidth_, convention_)) {
    throw ConfigError("symbol path storage does not match grid and bandwidth");
  }
}

std::size_t SymbolPaths::time_index(double t) const {
  const auto it = std::find(times_.begin(), times_.end(), t);
  if (it == times_.end()) throw ConfigError("time " + std::to_string(t) + " is not on the sampled grid");
  return static_cast<std::size_t>(it - times_.begin());
}

SymbolPaths sample_symbol_paths(const EntryModel& model, const BandConfig& config, std::span<const double> grid,
                                std::uint64_t seed) {
  config.validate();
  validate_grid(grid);
  if (model.kind == EntryKind::iid && grid.size() != 1) {
    throw ConfigError("i.i.d. entry models take exactly one grid time, got " + std::to_string(grid.size()));
  }
  const int b = config.bandwidth;
  const int slots = SymbolPaths::slot_count(b, config.convention);
  const Eigen::Index times = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(times, slots);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int first_symbol = config.convention == IndexConvention::symmetric ? 0 : -b;
  for (int j = first_symbol; j <= b; ++j) {
    if (j == 0 && !model.include_a0) continue;
    const Eigen::Index column = config.convention == IndexConvention::symmetric ? j : j + b;
    if (model.kind == EntryKind::iid) {
      values(0, column) = draw_iid(model.law, rng, normal);
      continue;
    }
    double level = 0.0;
    double previous = 0.0;
    for (Eigen::Index k = 0; k < times; ++k) {
      const double t = grid[static_cast<std::size_t>(k)];
      level += std::sqrt(t - previous) * normal(rng);
      previous = t;
      values(k, column) = level;
    }
  }
  return SymbolPaths(std::vector<double>(grid.begin(), grid.end()), b, config.convention, std::move(values));
}

SymmetricBandMatrix::SymmetricBandMatrix(Eigen::MatrixXd values, BandShape shape, int half_width)
    : values_(std::move(values)), shape_(shape), half_width_(half_width) {
  if (values_.rows() != values_.cols()) throw ConfigError("symmetric band matrix must be square");
}

std::pair<int, int> SymmetricBandMatrix::column_support(int col) const noexcept {
  const int n = order();
  switch (shape_) {
    case BandShape::diagonal:
      return {std::max(0, col - half_width_), std::min(n - 1, col + half_width_)};
    case BandShape::anti_diagonal: {
      const int centre = n - 1 - col;
      return {std::max(0, centre - half_width_), std::min(n - 1, centre + half_width_)};
    }
    case BandShape::dense:
      break;
  }
  return {0, n - 1};
}

SymmetricBandMatrix build_band_hankel(const SymbolPaths& paths, std::size_t time_index, const BandConfig& config) {
  config.validate();
  if (paths.bandwidth() != config.bandwidth || paths.convention() != config.convention) {
    throw ConfigError("symbol paths were sampled for a different bandwidth or convention");
  }
  if (time_index >= paths.times().size()) throw ConfigError("time index outside the sampled grid");
  const int n = config.n;
  const int b = config.bandwidth;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int col = 0; col < n; ++col) {
    const int lo = std::max(0, n - 1 - col - b);
    const int hi = std::min(n - 1, n - 1 - col + b);
    for (int row = lo; row <= hi; ++row) {
      const int k = n - 1 - row - col;  // n+1-i-j in 1-based indices
      if (k != 0) h(row, col) = paths.value(time_index, k);
    }
  }
  return SymmetricBandMatrix(std::move(h), BandShape::anti_diagonal, b);
}

SymmetricBandMatrix scale_to_A(const SymmetricBandMatrix& hankel, const BandConfig& config) {
  config.validate();
  return scaled(hankel, 1.0 / std::sqrt(static_cast<double>(config.bandwidth)));
}

SymmetricBandMatrix scaled(const SymmetricBandMatrix& matrix, double factor) {
  return SymmetricBandMatrix(matrix.values() * factor, matrix.shape(), matrix.half_width());
}

SymmetricBandMatrix build_tilde_A(const SymmetricBandMatrix& a, double a0_value, const BandConfig& config) {
  config.validate();
  if (a0_value == 0.0) return a;
  Eigen::MatrixXd values = a.values();
  values.diagonal().array() += a0_value / std::sqrt(static_cast<double>(config.bandwidth));
  return SymmetricBandMatrix(std::move(values), BandShape::dense, a.order());
}

void write_matrix_csv(std::ostream& out, const SymmetricBandMatrix& matrix) {
  char buffer[32];
  const int n = matrix.order();
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      std::snprintf(buffer, sizeof buffer, "%.17g", matrix(row, col));
      if (col > 0) out << ',';
      out << buffer;
    }
    out << '\n';
  }
}

}  // namespace hanklab
