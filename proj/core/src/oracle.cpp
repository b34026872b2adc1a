#include "hanklab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "hanklab/errors.hpp"
#include "hanklab/numeric.hpp"

namespace hanklab::oracle {
namespace {

using SlotKey = std::vector<int>;  // sorted slots with repetition

void check_budget(std::uint64_t used, std::uint64_t budget) {
  if (used > budget) {
    throw BudgetError("oracle term count exceeded the budget of " + std::to_string(budget) +
                      "; lower n, b or p, or raise the budget");
  }
}

// Central moment table of N(0, variance): (k-1)!! variance^{k/2}.
std::vector<double> normal_moments(double variance, int max_order) {
  std::vector<double> out(static_cast<std::size_t>(max_order + 1), 0.0);
  for (int k = 0; k <= max_order; k += 2) {
    out[static_cast<std::size_t>(k)] = gaussian_moment(k) * int_pow(variance, k / 2);
  }
  return out;
}

class Expander {
 public:
  Expander(const BandConfig& config, const OracleOptions& options, std::map<SlotKey, double>& acc,
           std::uint64_t& tuples)
      : n_(config.n), b_(config.bandwidth), convention_(config.convention), budget_(options.term_budget),
        acc_(acc), tuples_(tuples) {}

  // Adds weight * a_0^{a0_power} * Tr H^k to the accumulator.
  void add_power(int k, double weight, int a0_power) {
    k_ = k;
    weight_ = weight;
    a0_power_ = a0_power;
    slots_.assign(static_cast<std::size_t>(k), 0);
    if (k == 0) {
      emit(n_);
      return;
    }
    walk(1, 0, 0, 0);
  }

 private:
  int slot_of(int j) const noexcept { return convention_ == IndexConvention::symmetric ? (j < 0 ? -j : j) : j + b_; }

  void emit(int count) {
    SlotKey key(slots_);
    key.insert(key.end(), static_cast<std::size_t>(a0_power_), slot_of(0));
    std::sort(key.begin(), key.end());
    acc_[key] += weight_ * count;
  }

  void visit() {
    ++tuples_;
    if ((tuples_ & 0xFFFF) == 0) check_budget(tuples_, budget_);
  }

  // `level` is the position of the next j; s, lo, hi describe s_0..s_{level-1}.
  void walk(int level, int s, int lo, int hi) {
    const int sign = (level & 1) ? -1 : 1;
    if (level == k_ && !(k_ & 1)) {
      const int j = -s;  // forces s_k = 0
      if (j == 0 || j < -b_ || j > b_) return;
      visit();
      slots_[static_cast<std::size_t>(level - 1)] = slot_of(j);
      const int count = n_ - (hi - lo);
      if (count > 0) emit(count);
      return;
    }
    for (int j = -b_; j <= b_; ++j) {
      if (j == 0) continue;
      visit();
      const int next = s + sign * j;
      const int next_lo = std::min(lo, next);
      const int next_hi = std::max(hi, next);
      if (next_hi - next_lo > n_ - 1) continue;
      slots_[static_cast<std::size_t>(level - 1)] = slot_of(j);
      if (level < k_) {
        walk(level + 1, next, next_lo, next_hi);
        continue;
      }
      // Odd k: the delta pins the row to i = (s_k + n + 1) / 2.
      const int twice_row = next + n_ + 1;
      if (twice_row & 1) continue;
      const int row = twice_row / 2;
      if (row >= 1 + next_hi && row <= n_ + next_lo) emit(1);
    }
  }

  int n_;
  int b_;
  IndexConvention convention_;
  std::uint64_t budget_;
  std::map<SlotKey, double>& acc_;
  std::uint64_t& tuples_;
  int k_ = 0;
  double weight_ = 1.0;
  int a0_power_ = 0;
  std::vector<int> slots_;
};

Monomial to_monomial(const SlotKey& key, double coefficient) {
  Monomial m;
  m.coefficient = coefficient;
  for (std::size_t i = 0; i < key.size();) {
    std::size_t j = i;
    while (j < key.size() && key[j] == key[i]) ++j;
    m.factors.emplace_back(key[i], static_cast<int>(j - i));
    i = j;
  }
  return m;
}

double product_moment(const Monomial& m, const std::vector<double>& moments) {
  double value = m.coefficient;
  for (const auto& [slot, power] : m.factors) value *= moments[static_cast<std::size_t>(power)];
  return value;
}

// Cov(X(t1), Y(t2)) for t1 <= t2 with X, Y polynomials in the symbols.
double polynomial_covariance(const TracePolynomial& x, const TracePolynomial& y, double t1, double t2,
                             std::uint64_t& work, std::uint64_t budget) {
  const int max_order = x.p + y.p;
  const std::vector<double> mu1 = normal_moments(t1, max_order);
  const std::vector<double> mu2 = normal_moments(t2, max_order);
  const std::vector<double> mv = normal_moments(t2 - t1, max_order);
  // joint[a][c] = E[u^a (u+v)^c] = sum_r C(c,r) E[u^{a+r}] E[v^{c-r}]
  std::vector<std::vector<double>> joint(static_cast<std::size_t>(x.p + 1),
                                         std::vector<double>(static_cast<std::size_t>(y.p + 1), 0.0));
  for (int a = 0; a <= x.p; ++a) {
    for (int c = 0; c <= y.p; ++c) {
      double g = 0.0;
      for (int r = 0; r <= c; ++r) {
        g += binomial(c, r) * mu1[static_cast<std::size_t>(a + r)] * mv[static_cast<std::size_t>(c - r)];
      }
      joint[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)] = g;
    }
  }

  std::vector<double> mean_y(y.terms.size());
  int max_slot = 0;
  for (const auto& m : x.terms) {
    for (const auto& f : m.factors) max_slot = std::max(max_slot, f.first);
  }
  for (const auto& m : y.terms) {
    for (const auto& f : m.factors) max_slot = std::max(max_slot, f.first);
  }
  std::vector<std::vector<std::size_t>> by_slot(static_cast<std::size_t>(max_slot + 1));
  for (std::size_t k = 0; k < y.terms.size(); ++k) {
    mean_y[k] = product_moment(y.terms[k], mu2);
    for (const auto& f : y.terms[k].factors) by_slot[static_cast<std::size_t>(f.first)].push_back(k);
  }

  std::vector<std::size_t> mark(y.terms.size(), static_cast<std::size_t>(-1));
  std::vector<std::size_t> partners;
  CompensatedSum acc;
  for (std::size_t a = 0; a < x.terms.size(); ++a) {
    const Monomial& ma = x.terms[a];
    partners.clear();
    for (const auto& f : ma.factors) {
      for (std::size_t k : by_slot[static_cast<std::size_t>(f.first)]) {
        if (mark[k] == a) continue;
        mark[k] = a;
        partners.push_back(k);
      }
    }
    if (partners.empty()) continue;
    std::sort(partners.begin(), partners.end());
    work += partners.size();
    check_budget(work, budget);
    const double mean_a = product_moment(ma, mu1);
    for (std::size_t k : partners) {
      const Monomial& mb = y.terms[k];
      double joint_value = ma.coefficient * mb.coefficient;
      std::size_t i = 0;
      std::size_t j = 0;
      while (i < ma.factors.size() || j < mb.factors.size()) {
        if (j == mb.factors.size() || (i < ma.factors.size() && ma.factors[i].first < mb.factors[j].first)) {
          joint_value *= mu1[static_cast<std::size_t>(ma.factors[i].second)];
          ++i;
        } else if (i == ma.factors.size() || mb.factors[j].first < ma.factors[i].first) {
          joint_value *= mu2[static_cast<std::size_t>(mb.factors[j].second)];
          ++j;
        } else {
          joint_value *= joint[static_cast<std::size_t>(ma.factors[i].second)]
                              [static_cast<std::size_t>(mb.factors[j].second)];
          ++i;
          ++j;
        }
      }
      acc.add(joint_value - mean_a * mean_y[k]);
    }
  }
  return acc.value();
}

void check_time(double t, const char* name) {
  if (!std::isfinite(t) || t < 0.0) throw ConfigError(std::string(name) + " must be finite and >= 0");
}

}  // namespace

double gaussian_product_moment(const TermProfile& profile, double t1, double t2) {
  check_time(t1, "t1");
  check_time(t2, "t2");
  if (t2 < t1) throw ConfigError("product moment needs t1 <= t2");
  double value = profile.coefficient;
  for (const auto& f : profile.factors) {
    if (f.u_power < 0 || f.v_power < 0) throw ConfigError("symbol powers must be nonnegative");
    value *= gaussian_moment(f.u_power) * int_pow(std::sqrt(t1), f.u_power);
    value *= gaussian_moment(f.v_power) * int_pow(std::sqrt(t2 - t1), f.v_power);
  }
  return value;
}

double TracePolynomial::evaluate(const SymbolPaths& paths, std::size_t time_index) const {
  CompensatedSum acc;
  for (const auto& m : terms) {
    double value = m.coefficient;
    for (const auto& [slot, power] : m.factors) {
      value *= int_pow(paths.values()(static_cast<Eigen::Index>(time_index), slot), power);
    }
    acc.add(value);
  }
  return acc.value();
}

TracePolynomial expand_trace(const BandConfig& config, int p, const OracleOptions& options) {
  config.validate();
  if (p < 1) throw ConfigError("trace power exponent must be >= 1, got " + std::to_string(p));
  TracePolynomial poly;
  poly.p = p;
  poly.config = config;
  poly.include_a0 = options.include_a0;
  std::map<SlotKey, double> acc;
  Expander expander(config, options, acc, poly.tuples);
  if (options.include_a0) {
    // Tr (H + a0 I)^p = sum_k C(p,k) a0^{p-k} Tr H^k.
    for (int k = 0; k <= p; ++k) expander.add_power(k, binomial(p, k), p - k);
  } else {
    expander.add_power(p, 1.0, 0);
  }
  check_budget(poly.tuples, options.term_budget);
  poly.terms.reserve(acc.size());
  for (const auto& [key, coefficient] : acc) {
    if (coefficient != 0.0) poly.terms.push_back(to_monomial(key, coefficient));
  }
  return poly;
}

ExactValue exact_mean_trace(const BandConfig& config, int p, double t, const OracleOptions& options) {
  check_time(t, "t");
  const TracePolynomial poly = expand_trace(config, p, options);
  const std::vector<double> mu = normal_moments(t, p);
  CompensatedSum acc;
  for (const auto& m : poly.terms) acc.add(product_moment(m, mu));
  ExactValue out;
  out.value = acc.value();
  out.term_count = poly.tuples;
  out.budget = options.term_budget;
  out.config = config;
  out.convention = config.convention;
  return out;
}

ExactValue exact_cov_w(const BandConfig& config, int p, int q, double t1, double t2, const OracleOptions& options) {
  check_time(t1, "t1");
  check_time(t2, "t2");
  if (t1 > t2) {
    std::swap(t1, t2);
    std::swap(p, q);
  }
  const TracePolynomial x = expand_trace(config, p, options);
  OracleOptions remaining = options;
  remaining.term_budget = options.term_budget - std::min(options.term_budget, x.tuples);
  const TracePolynomial y = p == q ? x : expand_trace(config, q, remaining);
  std::uint64_t work = x.tuples + (p == q ? 0 : y.tuples);
  const double cov = polynomial_covariance(x, y, t1, t2, work, options.term_budget);
  const double b = config.bandwidth;
  const double n = config.n;
  ExactValue out;
  out.value = b / (n * n) * std::pow(b, -0.5 * (p + q)) * cov;
  out.term_count = work;
  out.budget = options.term_budget;
  out.config = config;
  out.convention = config.convention;
  return out;
}

ProbeResult limit_probe(int p, int q, double t1, double t2, std::span<const BandConfig> configs,
                        const OracleOptions& options) {
  if (configs.empty()) throw ConfigError("limit probe needs at least one config");
  for (std::size_t k = 1; k < configs.size(); ++k) {
    if (configs[k].n <= configs[k - 1].n) throw ConfigError("limit probe configs must be ordered by increasing n");
  }
  ProbeResult out;
  for (const auto& config : configs) out.values.push_back(exact_cov_w(config, p, q, t1, t2, options));
  for (std::size_t k = 1; k < out.values.size(); ++k) {
    const double gap = std::fabs(out.values[k].value - out.values[k - 1].value);
    const double scale = std::fabs(out.values[k].value);
    out.abs_gaps.push_back(gap);
    out.rel_gaps.push_back(scale > 0.0 ? gap / scale : gap);
    out.cauchy_gap = std::max(out.cauchy_gap, gap);
  }
  out.gaps_shrinking = out.rel_gaps.size() >= 2;
  for (std::size_t k = 1; k < out.rel_gaps.size(); ++k) {
    out.gaps_shrinking = out.gaps_shrinking && out.rel_gaps[k] < out.rel_gaps[k - 1];
  }
  if (out.values.size() >= 2) {
    const auto& prev = out.values[out.values.size() - 2];
    const auto& last = out.values.back();
    const double x1 = static_cast<double>(prev.config.bandwidth) / prev.config.n;
    const double x2 = static_cast<double>(last.config.bandwidth) / last.config.n;
    if (x1 != x2) out.limit_estimate = (x1 * last.value - x2 * prev.value) / (x1 - x2);
  }
  return out;
}

}  // namespace hanklab::oracle
