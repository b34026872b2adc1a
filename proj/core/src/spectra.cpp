#include "hanklab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hanklab/errors.hpp"
#include "hanklab/numeric.hpp"
#include "hanklab/stats.hpp"

namespace hanklab {
namespace {

BandShape product_shape(BandShape a, BandShape b) noexcept {
  if (a == BandShape::dense || b == BandShape::dense) return BandShape::dense;
  // Two reversals cancel.
  return (a == BandShape::anti_diagonal) == (b == BandShape::anti_diagonal) ? BandShape::diagonal
                                                                            : BandShape::anti_diagonal;
}

SymmetricBandMatrix multiply(const SymmetricBandMatrix& a, const SymmetricBandMatrix& b) {
  const int n = a.order();
  const BandShape shape = product_shape(a.shape(), b.shape());
  const int width = shape == BandShape::dense ? n : std::min(n, a.half_width() + b.half_width());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int col = 0; col < n; ++col) {
    const auto [k_lo, k_hi] = b.column_support(col);
    for (int k = k_lo; k <= k_hi; ++k) {
      const double coef = b(k, col);
      if (coef == 0.0) continue;
      const auto [r_lo, r_hi] = a.column_support(k);
      c.col(col).segment(r_lo, r_hi - r_lo + 1).noalias() += coef * a.values().col(k).segment(r_lo, r_hi - r_lo + 1);
    }
  }
  return SymmetricBandMatrix(std::move(c), shape, width);
}

// Tr(XY) = sum_ij X_ij Y_ji = sum_ij X_ij Y_ij for symmetric Y.
double trace_of_product(const SymmetricBandMatrix& x, const SymmetricBandMatrix& y) {
  double total = 0.0;
  for (int col = 0; col < x.order(); ++col) {
    const auto [lo, hi] = x.column_support(col);
    const int len = hi - lo + 1;
    total += x.values().col(col).segment(lo, len).dot(y.values().col(col).segment(lo, len));
  }
  return total;
}

void check_exponent(int p) {
  if (p < 1) throw ConfigError("trace power exponent must be >= 1, got " + std::to_string(p));
}

std::vector<double> traces_by_eigen(const SymmetricBandMatrix& matrix, std::span<const int> exponents) {
  const Eigen::VectorXd lambda = symmetric_eigenvalues(matrix);
  std::vector<double> out;
  out.reserve(exponents.size());
  for (int p : exponents) {
    CompensatedSum acc;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) acc.add(int_pow(lambda(i), p));
    out.push_back(acc.value());
  }
  return out;
}

std::vector<double> traces_by_matmul(const SymmetricBandMatrix& matrix, std::span<const int> exponents) {
  const int max_p = *std::max_element(exponents.begin(), exponents.end());
  const int max_half = (max_p + 1) / 2;
  // powers[k-1] = A^k for k = 1..max_half.
  std::vector<SymmetricBandMatrix> powers;
  powers.reserve(static_cast<std::size_t>(max_half));
  powers.push_back(matrix);
  for (int k = 2; k <= max_half; ++k) powers.push_back(multiply(powers.back(), matrix));

  std::vector<double> out;
  out.reserve(exponents.size());
  for (int p : exponents) {
    if (p == 1) {
      out.push_back(matrix.values().trace());
      continue;
    }
    const int hi = (p + 1) / 2;
    const int lo = p / 2;
    out.push_back(trace_of_product(powers[static_cast<std::size_t>(hi - 1)], powers[static_cast<std::size_t>(lo - 1)]));
  }
  return out;
}

struct FormulaWalker {
  int n;
  int b;
  int p;
  const std::vector<double>& symbols;  // symbols[j + b] = x_j, x_0 = 0
  int row = 1;
  CompensatedSum acc;

  void walk(int level, int partial, double product) {
    const int sign = (level & 1) ? -1 : 1;
    for (int j = -b; j <= b; ++j) {
      if (j == 0) continue;
      const int s = partial + sign * j;
      const int position = row - s;
      if (position < 1 || position > n) continue;
      const double next = product * symbols[static_cast<std::size_t>(j + b)];
      if (level == p) {
        const int target = (p & 1) ? 2 * row - 1 - n : 0;
        if (s == target) acc.add(next);
      } else {
        walk(level + 1, s, next);
      }
    }
  }
};

}  // namespace

std::string_view to_string(TraceMethod method) noexcept {
  switch (method) {
    case TraceMethod::eigen:
      return "eigen";
    case TraceMethod::matmul:
      return "matmul";
    case TraceMethod::formula:
      return "formula";
  }
  return "unknown";
}

TraceMethod parse_trace_method(std::string_view text) {
  if (text == "eigen") return TraceMethod::eigen;
  if (text == "matmul") return TraceMethod::matmul;
  if (text == "formula") return TraceMethod::formula;
  throw ConfigError("unknown trace method '" + std::string(text) + "' (expected eigen|matmul|formula)");
}

std::string_view to_string(Centering centering) noexcept {
  return centering == Centering::sample_mean ? "sample_mean" : "wick_exact";
}

Centering parse_centering(std::string_view text) {
  if (text == "sample_mean") return Centering::sample_mean;
  if (text == "wick_exact") return Centering::wick_exact;
  throw ConfigError("unknown centering '" + std::string(text) + "' (expected sample_mean|wick_exact)");
}

Eigen::VectorXd symmetric_eigenvalues(const SymmetricBandMatrix& matrix) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix.values(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver failed to converge for a matrix of order " +
                         std::to_string(matrix.order()));
  }
  return solver.eigenvalues();
}

TracePowerResult trace_power(const SymmetricBandMatrix& matrix, int p, TraceMethod method) {
  const int exponents[] = {p};
  return {p, trace_powers(matrix, exponents, method).front(), method};
}

std::vector<double> trace_powers(const SymmetricBandMatrix& matrix, std::span<const int> exponents,
                                 TraceMethod method) {
  if (exponents.empty()) return {};
  for (int p : exponents) check_exponent(p);
  switch (method) {
    case TraceMethod::eigen:
      return traces_by_eigen(matrix, exponents);
    case TraceMethod::matmul:
      return traces_by_matmul(matrix, exponents);
    case TraceMethod::formula:
      break;
  }
  throw ConfigError("the formula trace route evaluates symbol paths; call trace_power_formula");
}

double trace_power_formula(const SymbolPaths& paths, std::size_t time_index, const BandConfig& config, int p,
                           std::uint64_t term_budget) {
  config.validate();
  check_exponent(p);
  if (paths.bandwidth() != config.bandwidth || paths.convention() != config.convention) {
    throw ConfigError("symbol paths were sampled for a different bandwidth or convention");
  }
  const double terms = std::pow(2.0 * config.bandwidth + 1.0, p);
  if (terms > static_cast<double>(term_budget)) {
    throw BudgetError("trace formula needs (2b+1)^p = " + std::to_string(terms) + " terms, budget is " +
                      std::to_string(term_budget));
  }
  const int b = config.bandwidth;
  std::vector<double> symbols(static_cast<std::size_t>(2 * b + 1), 0.0);
  for (int j = -b; j <= b; ++j) {
    if (j != 0) symbols[static_cast<std::size_t>(j + b)] = paths.value(time_index, j);
  }
  FormulaWalker walker{config.n, b, p, symbols, 1, {}};
  for (int i = 1; i <= config.n; ++i) {
    walker.row = i;
    walker.walk(1, 0, 1.0);
  }
  return walker.acc.value();
}

std::vector<WStatistic> w_stat(std::span<const double> traces, int p, double t, const BandConfig& config,
                               std::optional<double> exact_mean) {
  config.validate();
  if (traces.empty()) throw ConfigError("w statistic needs a nonempty batch of traces");
  const double centre = exact_mean ? *exact_mean : stats::mean(traces);
  const Centering centering = exact_mean ? Centering::wick_exact : Centering::sample_mean;
  const double scale = std::sqrt(static_cast<double>(config.bandwidth)) / config.n;
  std::vector<WStatistic> out;
  out.reserve(traces.size());
  for (double trace : traces) out.push_back({p, t, scale * (trace - centre), centering});
  return out;
}

}  // namespace hanklab
