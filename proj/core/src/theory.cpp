#include "hanklab/theory.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <string>
#include <utility>

#include "hanklab/errors.hpp"
#include "hanklab/numeric.hpp"

namespace hanklab::theory {
namespace {

void require_even_positive(int k, const char* name) {
  if (k < 2 || (k & 1)) {
    throw ConfigError(std::string(name) + " must be an even positive integer, got " + std::to_string(k));
  }
}

void validate_grid(std::span<const double> grid) {
  if (grid.empty()) throw ConfigError("time grid must contain at least one time");
  double previous = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] <= 0.0) throw ConfigError("limit-process grid times must be positive");
    if (i > 0 && grid[i] <= previous) throw ConfigError("time grid must be strictly increasing");
    previous = grid[i];
  }
}

// Half-integer powers of t; exponent is k/2.
double half_power(double t, int twice_exponent) {
  if (twice_exponent == 0) return 1.0;
  if (twice_exponent & 1) return int_pow(t, twice_exponent / 2) * std::sqrt(t);
  return int_pow(t, twice_exponent / 2);
}

struct Factorization {
  Eigen::MatrixXd lower;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double ridge = 0.0;
  double condition = 0.0;
};

Factorization factorize(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed on the limit covariance matrix");
  Factorization f;
  f.min_eigenvalue = solver.eigenvalues().minCoeff();
  f.max_eigenvalue = solver.eigenvalues().maxCoeff();
  if (f.min_eigenvalue < -1e-10 * std::max(f.max_eigenvalue, 0.0)) {
    throw NumericalError("limit covariance matrix is not positive semidefinite: smallest eigenvalue " +
                         std::to_string(f.min_eigenvalue) + ", largest " + std::to_string(f.max_eigenvalue));
  }
  f.ridge = 1e-12 * m.trace();
  Eigen::MatrixXd shifted = m;
  shifted.diagonal().array() += f.ridge;
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success) throw NumericalError("Cholesky factorization of the limit covariance failed");
  f.lower = llt.matrixL();
  const double floor = std::max(f.min_eigenvalue, 0.0) + f.ridge;
  f.condition = floor > 0.0 ? (f.max_eigenvalue + f.ridge) / floor : 0.0;
  return f;
}

}  // namespace

std::string_view to_string(RConvention convention) noexcept {
  return convention == RConvention::r_index ? "r_index" : "literal_q";
}

RConvention parse_r_convention(std::string_view text) {
  if (text == "r_index") return RConvention::r_index;
  if (text == "literal_q") return RConvention::literal_q;
  throw ConfigError("unknown R convention '" + std::string(text) + "' (expected r_index|literal_q)");
}

CovarianceQuery CovarianceQuery::ordered() const noexcept {
  if (t1 <= t2) return *this;
  return {q, p, t2, t1};
}

void CovarianceQuery::validate() const {
  require_even_positive(p, "p");
  require_even_positive(q, "q");
  if (!std::isfinite(t1) || !std::isfinite(t2) || t1 < 0.0) throw ConfigError("times must be finite and >= 0");
  if (t1 > t2) throw ConfigError("covariance query needs t1 <= t2; use ordered() to swap");
}

const combinat::ClassTally& cached_class_counts(int p, int q) {
  static std::shared_mutex mutex;
  static std::map<std::pair<int, int>, combinat::ClassTally> table;
  const auto key = std::make_pair(p, q);
  {
    std::shared_lock lock(mutex);
    const auto it = table.find(key);
    if (it != table.end()) return it->second;
  }
  combinat::ClassTally tally = combinat::class_counts(p, q);
  std::unique_lock lock(mutex);
  // std::map never moves nodes, so references stay valid.
  return table.emplace(key, tally).first->second;
}

std::uint64_t r_coefficient(int p, int r, int q, RConvention convention) {
  const combinat::ClassTally& at_r = cached_class_counts(p, r);
  if (convention == RConvention::r_index) return at_r.r_value;
  const combinat::ClassTally& at_q = cached_class_counts(p, q);
  return at_q.delta2 + at_r.delta2_tilde + 2 * at_r.delta24;
}

LimitCovariance limit_cov(const CovarianceQuery& query, RConvention convention) {
  query.validate();
  const int p = query.p;
  const int q = query.q;
  const double prefactor = int_pow(2.0, (p + q) / 2);
  LimitCovariance out;
  out.convention = convention;
  CompensatedSum acc;
  for (int r = 2; r <= q; r += 2) {
    CovarianceTerm term;
    term.r = r;
    term.binomial = binomial(q, r);
    term.time_factor = half_power(query.t1, p + r) * int_pow(query.t2 - query.t1, (q - r) / 2);
    term.r_value = r_coefficient(p, r, q, convention);
    term.gamma_factor = factorial((q - r) / 2);
    term.contribution =
        prefactor * term.binomial * term.time_factor * static_cast<double>(term.r_value) * term.gamma_factor;
    acc.add(term.contribution);
    out.terms.push_back(term);
  }
  out.value = acc.value();
  return out;
}

double band_integral_b0(int p, int r) {
  if (p < 0 || r < 0) throw ConfigError("band integral arguments must be nonnegative");
  if ((p + r) & 1) {
    throw ConfigError("band integral needs p + r even, got p=" + std::to_string(p) + " r=" + std::to_string(r));
  }
  if (p + r == 0) return 0.5;
  return int_pow(2.0, (p + r) / 2 - 1);
}

double lsd_moment(int k) {
  if (k < 0) throw ConfigError("moment order must be >= 0, got " + std::to_string(k));
  if (k & 1) return 0.0;
  return factorial(k / 2);
}

double scaled_moment_R(int k) {
  if (k < 0) throw ConfigError("moment order must be >= 0, got " + std::to_string(k));
  if (k & 1) return 0.0;
  return int_pow(2.0, k / 2) * factorial(k / 2);
}

TildeCovariance tilde_cov(const CovarianceQuery& query, RConvention convention) {
  TildeCovariance out;
  out.limit = limit_cov(query, convention).value;
  const int p = query.p;
  const int q = query.q;
  // Cov(a_0(t1), a_0(t2)) = t1; a_0 is independent of W_p.
  out.correction = static_cast<double>(p * q) * half_power(query.t1, p - 1) * half_power(query.t2, q - 1) *
                   scaled_moment_R(p - 1) * scaled_moment_R(q - 1) * query.t1;
  out.value = out.limit + out.correction;
  return out;
}

Eigen::MatrixXd limit_cov_matrix(int p, std::span<const double> grid, RConvention convention) {
  require_even_positive(p, "p");
  validate_grid(grid);
  const Eigen::Index k = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd m(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i; j < k; ++j) {
      const double value =
          limit_cov({p, p, grid[static_cast<std::size_t>(i)], grid[static_cast<std::size_t>(j)]}, convention).value;
      m(i, j) = value;
      m(j, i) = value;
    }
  }
  return m;
}

std::vector<LimitProcessSample> sample_limit_paths(int p, std::span<const double> grid, std::size_t count,
                                                   std::uint64_t seed, RConvention convention) {
  const Eigen::MatrixXd m = limit_cov_matrix(p, grid, convention);
  const Factorization f = factorize(m);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<LimitProcessSample> out;
  out.reserve(count);
  Eigen::VectorXd z(m.rows());
  for (std::size_t s = 0; s < count; ++s) {
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
    const Eigen::VectorXd x = f.lower * z;
    LimitProcessSample sample;
    sample.p = p;
    sample.times.assign(grid.begin(), grid.end());
    sample.values.assign(x.data(), x.data() + x.size());
    sample.min_eigenvalue = f.min_eigenvalue;
    sample.max_eigenvalue = f.max_eigenvalue;
    sample.ridge = f.ridge;
    sample.cholesky_condition = f.condition;
    out.push_back(std::move(sample));
  }
  return out;
}

LimitProcessSample sample_limit_process(int p, std::span<const double> grid, std::uint64_t seed,
                                        RConvention convention) {
  return std::move(sample_limit_paths(p, grid, 1, seed, convention).front());
}

}  // namespace hanklab::theory
