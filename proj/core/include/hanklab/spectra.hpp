#pragma once

// Trace powers Tr(A^p), the trace-formula oracle, and the centred, scaled
// linear eigenvalue statistic w_p(t) = (sqrt(b)/n) (Tr A(t)^p - c).

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hanklab/ensemble.hpp"

namespace hanklab {

enum class TraceMethod {
  eigen,    // sum of lambda^p from one symmetric eigendecomposition
  matmul,   // trace of the p-fold product, restricted to the known band
  formula,  // explicit index sum over symbol paths (exponential cost)
};

std::string_view to_string(TraceMethod method) noexcept;
TraceMethod parse_trace_method(std::string_view text);

inline constexpr std::uint64_t kDefaultFormulaBudget = 100'000'000;

struct TracePowerResult {
  int p = 1;
  double value = 0.0;
  TraceMethod method = TraceMethod::eigen;
};

/// Eigenvalues of a symmetric matrix in ascending order. Throws
/// NumericalError if the solver does not converge.
Eigen::VectorXd symmetric_eigenvalues(const SymmetricBandMatrix& matrix);

/// Tr(A^p) for one exponent. The formula method needs symbol paths and is
/// rejected here; use trace_power_formula.
TracePowerResult trace_power(const SymmetricBandMatrix& matrix, int p, TraceMethod method = TraceMethod::eigen);

/// Tr(A^p) for several exponents, sharing one eigendecomposition or one set
/// of matrix powers.
std::vector<double> trace_powers(const SymmetricBandMatrix& matrix, std::span<const int> exponents,
                                 TraceMethod method = TraceMethod::eigen);

/// Unscaled Tr(H^p) evaluated from the index-sum representation
///   sum_i sum_{j_1..j_p} prod x_{j_l} prod_l 1{i - s_l in [1,n]} delta,
/// with s_l = sum_{q<=l} (-1)^q j_q and delta forcing s_p = 0 (p even) or
/// s_p = 2i-1-n (p odd). Loops run i outermost, then j_1..j_p ascending, with
/// compensated accumulation. Throws BudgetError when (2b+1)^p > budget.
double trace_power_formula(const SymbolPaths& paths, std::size_t time_index, const BandConfig& config, int p,
                           std::uint64_t term_budget = kDefaultFormulaBudget);

enum class Centering { sample_mean, wick_exact };

std::string_view to_string(Centering centering) noexcept;
Centering parse_centering(std::string_view text);

struct WStatistic {
  int p = 1;
  double t = 0.0;
  double value = 0.0;
  Centering centering = Centering::sample_mean;
};

/// w_r = (sqrt(b)/n) (trace_r - c). With no `exact_mean`, c is the batch
/// sample mean (refined once so the centred batch sums to zero); otherwise
/// c = *exact_mean and the centering is tagged wick_exact.
std::vector<WStatistic> w_stat(std::span<const double> traces, int p, double t, const BandConfig& config,
                               std::optional<double> exact_mean = std::nullopt);

}  // namespace hanklab
