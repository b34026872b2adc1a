#pragma once

// Exact finite-n Gaussian moments of trace powers.
//
// Tr H^p is expanded into a polynomial in the symbol values by walking the
// index-sum representation over tuples (j_1..j_p) only; the number of valid
// row indices i for a tuple is counted in closed form. Means and covariances
// then follow from Gaussian product moments of independent Brownian symbols,
// written as a(t2) = u + v with u = a(t1) and v the independent increment.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hanklab/ensemble.hpp"

namespace hanklab::oracle {

inline constexpr std::uint64_t kDefaultTermBudget = 100'000'000;

/// Powers of u = a_k(t1) and v = a_k(t2) - a_k(t1) for one symbol slot.
struct SymbolPower {
  int symbol = 0;
  int u_power = 0;
  int v_power = 0;
};

struct TermProfile {
  std::vector<SymbolPower> factors;
  double coefficient = 1.0;
};

/// coefficient * prod_k E[u_k^a] E[v_k^b] with E[u^a] = (a-1)!! t1^{a/2} and
/// E[v^b] = (b-1)!! (t2-t1)^{b/2}; odd powers give zero.
double gaussian_product_moment(const TermProfile& profile, double t1, double t2);

struct Monomial {
  std::vector<std::pair<int, int>> factors;  // (slot, power), slots ascending
  double coefficient = 0.0;
};

struct OracleOptions {
  bool include_a0 = false;  // expand Tr (H + a_0 I)^p instead of Tr H^p
  std::uint64_t term_budget = kDefaultTermBudget;
};

/// Tr H^p (or Tr (H + a_0 I)^p) as a polynomial over SymbolPaths slots.
struct TracePolynomial {
  int p = 1;
  BandConfig config;
  bool include_a0 = false;
  std::vector<Monomial> terms;  // ordered by sorted slot multiset
  std::uint64_t tuples = 0;     // index tuples visited during expansion

  /// Value of the polynomial at the symbol values of one grid time.
  [[nodiscard]] double evaluate(const SymbolPaths& paths, std::size_t time_index) const;
};

/// Throws BudgetError when the visited tuple count exceeds the budget.
TracePolynomial expand_trace(const BandConfig& config, int p, const OracleOptions& options = {});

struct ExactValue {
  double value = 0.0;
  std::uint64_t term_count = 0;  // tuples visited plus monomial pairs evaluated
  std::uint64_t budget = kDefaultTermBudget;
  BandConfig config;
  IndexConvention convention = IndexConvention::symmetric;
};

/// Exact E Tr H(t)^p, unscaled. Multiply by b^{-p/2} for A.
ExactValue exact_mean_trace(const BandConfig& config, int p, double t, const OracleOptions& options = {});

/// Exact (b/n^2) b^{-(p+q)/2} Cov(Tr H(t1)^p, Tr H(t2)^q), the covariance of
/// w_p(t1) and w_q(t2). Either time order is accepted.
ExactValue exact_cov_w(const BandConfig& config, int p, int q, double t1, double t2,
                       const OracleOptions& options = {});

struct ProbeResult {
  std::vector<ExactValue> values;
  std::vector<double> abs_gaps;  // |v_{k+1} - v_k|
  std::vector<double> rel_gaps;  // abs_gaps[k] / |v_{k+1}|
  double cauchy_gap = 0.0;       // max abs gap
  bool gaps_shrinking = false;   // rel_gaps strictly decreasing
  /// Linear extrapolation to b/n -> 0 through the last two configs.
  std::optional<double> limit_estimate;
};

/// Requires configs ordered by increasing n.
ProbeResult limit_probe(int p, int q, double t1, double t2, std::span<const BandConfig> configs,
                        const OracleOptions& options = {});

}  // namespace hanklab::oracle
