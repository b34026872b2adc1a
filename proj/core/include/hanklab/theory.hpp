#pragma once

// Closed-form limiting quantities for even-p statistics: the covariance of
// the limit process, the b = 0 band-integral constants, limiting spectral
// moments, the a_0 (tilde) extension, and Gaussian sampling of the limit.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hanklab/combinat.hpp"

namespace hanklab::theory {

/// Which split the class counts inside R(p, r) use. `r_index` counts all
/// three classes on [p+r]; `literal_q` takes Delta_2 on [p+q] as written.
enum class RConvention { r_index, literal_q };

std::string_view to_string(RConvention convention) noexcept;
RConvention parse_r_convention(std::string_view text);

struct CovarianceQuery {
  int p = 2;
  int q = 2;
  double t1 = 1.0;
  double t2 = 1.0;

  /// Copy with t1 <= t2, swapping (p, q) along with the times.
  [[nodiscard]] CovarianceQuery ordered() const noexcept;
  /// p, q even and positive; 0 <= t1 <= t2, both finite.
  void validate() const;
};

struct CovarianceTerm {
  int r = 2;
  double binomial = 0.0;
  double time_factor = 0.0;  // t1^{(p+r)/2} (t2-t1)^{(q-r)/2}
  std::uint64_t r_value = 0;
  double gamma_factor = 0.0;  // ((q-r)/2)!
  double contribution = 0.0;  // includes the 2^{(p+q)/2} prefactor
};

struct LimitCovariance {
  double value = 0.0;
  std::vector<CovarianceTerm> terms;
  RConvention convention = RConvention::r_index;
};

/// Memoized combinat::class_counts, safe for concurrent use.
const combinat::ClassTally& cached_class_counts(int p, int q);

/// R(p, r) under the given convention.
std::uint64_t r_coefficient(int p, int r, int q, RConvention convention = RConvention::r_index);

/// 2^{(p+q)/2} sum_{r=2,4..q} C(q,r) t1^{(p+r)/2} (t2-t1)^{(q-r)/2} R(p,r) ((q-r)/2)!
LimitCovariance limit_cov(const CovarianceQuery& query, RConvention convention = RConvention::r_index);

/// 2^{(p+r)/2 - 1}; requires p, r >= 0 with p + r even.
double band_integral_b0(int p, int r);

/// k-th moment of the density proportional to |x| exp(-x^2): (k/2)! for even
/// k, zero for odd k.
double lsd_moment(int k);

/// Moments under the sqrt(b) normalization: 2^{k/2} (k/2)! for even k.
double scaled_moment_R(int k);

struct TildeCovariance {
  double limit = 0.0;       // limit_cov part
  double correction = 0.0;  // p q t1^{(p-1)/2} t2^{(q-1)/2} R_{p-1} R_{q-1} t1
  double value = 0.0;
  bool derived = true;  // the cross term is our derivation, not a stated result
};

TildeCovariance tilde_cov(const CovarianceQuery& query, RConvention convention = RConvention::r_index);

/// M_ij = limit_cov(p, p, min(t_i, t_j), max(t_i, t_j)).
Eigen::MatrixXd limit_cov_matrix(int p, std::span<const double> grid,
                                 RConvention convention = RConvention::r_index);

struct LimitProcessSample {
  int p = 2;
  std::vector<double> times;
  std::vector<double> values;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double ridge = 0.0;               // 1e-12 * trace added to the diagonal
  double cholesky_condition = 0.0;  // (max + ridge) / (min + ridge)
};

/// One draw of (W_p(t_1), ..., W_p(t_k)) via a ridge-regularized Cholesky
/// factor. Throws NumericalError if the covariance has an eigenvalue below
/// -1e-10 times the largest one.
LimitProcessSample sample_limit_process(int p, std::span<const double> grid, std::uint64_t seed,
                                        RConvention convention = RConvention::r_index);

/// `count` independent draws sharing one factorization, from one stream.
std::vector<LimitProcessSample> sample_limit_paths(int p, std::span<const double> grid, std::size_t count,
                                                   std::uint64_t seed,
                                                   RConvention convention = RConvention::r_index);

}  // namespace hanklab::theory
