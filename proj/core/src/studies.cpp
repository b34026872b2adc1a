#include "hanklab/studies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hanklab/errors.hpp"
#include "hanklab/numeric.hpp"
#include "hanklab/theory.hpp"

namespace hanklab::mc {
namespace {

ExperimentPlan base_plan(const BandConfig& config, std::size_t replicates, std::uint64_t seed,
                         const StudyOptions& options) {
  ExperimentPlan plan;
  plan.config = config;
  plan.replicates = replicates;
  plan.master_seed = seed;
  plan.trace_method = options.trace_method;
  plan.workers = options.workers;
  return plan;
}

double mean_and_se(std::span<const double> xs, double& se) {
  const double m = stats::mean(xs);
  se = xs.size() > 1 ? std::sqrt(stats::variance(xs) / static_cast<double>(xs.size())) : 0.0;
  return m;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return stats::ols_slope(lx, ly);
}

}  // namespace

OddDecayStudy study_odd_decay(int p, std::span<const int> n_list, double gamma, std::size_t replicates,
                              std::uint64_t seed, std::span<const IidLaw> laws, const StudyOptions& options) {
  if (p < 1 || !(p & 1)) throw ConfigError("odd-decay study needs an odd exponent, got p=" + std::to_string(p));
  if (n_list.size() < 2) throw ConfigError("odd-decay study needs at least two matrix sizes");
  if (laws.empty()) throw ConfigError("odd-decay study needs at least one entry law");
  OddDecayStudy out;
  out.p = p;
  out.gamma = gamma;
  out.replicates = replicates;
  out.seed = seed;
  for (std::size_t li = 0; li < laws.size(); ++li) {
    DecaySeries series;
    series.law = laws[li];
    std::vector<double> ns;
    std::vector<double> vars;
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
      ExperimentPlan plan = base_plan(BandConfig::with_rule(n_list[ni], gamma, options.convention), replicates,
                                      derive_seed(seed, li * n_list.size() + ni), options);
      plan.model.kind = EntryKind::iid;
      plan.model.law = laws[li];
      plan.p_list = {p};
      const McReport report = run_experiment(plan);
      const MomentSummary& m = report.moment(p, 1.0);
      series.rows.push_back({laws[li], plan.config.n, plan.config.bandwidth, m.variance, m.variance_se});
      ns.push_back(plan.config.n);
      vars.push_back(m.variance);
    }
    series.slope = log_log_slope(ns, vars);
    series.strictly_decreasing = true;
    for (std::size_t i = 1; i < vars.size(); ++i) {
      series.strictly_decreasing = series.strictly_decreasing && vars[i] < vars[i - 1];
    }
    out.series.push_back(std::move(series));
  }
  return out;
}

TightnessStudy study_tightness(int p, const BandConfig& config, std::span<const std::pair<double, double>> pairs,
                               std::size_t replicates, std::uint64_t seed, const StudyOptions& options) {
  if (p < 2 || (p & 1)) throw ConfigError("tightness study needs an even exponent, got p=" + std::to_string(p));
  if (pairs.empty()) throw ConfigError("tightness study needs at least one (s, t) pair");
  std::vector<double> grid;
  for (const auto& [s, t] : pairs) {
    if (!std::isfinite(s) || !std::isfinite(t) || s < 0.0 || t < s) {
      throw ConfigError("tightness pairs need 0 <= s <= t");
    }
    grid.push_back(s);
    grid.push_back(t);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  ExperimentPlan plan = base_plan(config, replicates, seed, options);
  plan.p_list = {p};
  plan.times = grid;
  const McReport report = run_experiment(plan);

  TightnessStudy out;
  out.p = p;
  out.config = config;
  out.replicates = replicates;
  out.seed = seed;
  std::vector<double> gaps;
  std::vector<double> moments;
  std::vector<double> fourth(replicates);
  for (const auto& [s, t] : pairs) {
    const std::span<const double> ws = report.samples(p, s);
    const std::span<const double> wt = report.samples(p, t);
    for (std::size_t r = 0; r < replicates; ++r) fourth[r] = int_pow(wt[r] - ws[r], 4);
    TightnessRow row;
    row.s = s;
    row.t = t;
    row.fourth_moment = mean_and_se(fourth, row.se);
    out.rows.push_back(row);
    if (t > s) {
      gaps.push_back(t - s);
      moments.push_back(row.fourth_moment);
    }
  }
  if (gaps.size() >= 2) {
    out.slope = log_log_slope(gaps, moments);
    const auto lo = std::min_element(gaps.begin(), gaps.end()) - gaps.begin();
    const auto hi = std::max_element(gaps.begin(), gaps.end()) - gaps.begin();
    out.monotone = moments[static_cast<std::size_t>(hi)] > moments[static_cast<std::size_t>(lo)];
  }
  return out;
}

LsdStudy study_lsd(const BandConfig& config, std::span<const int> k_list, std::size_t replicates, std::uint64_t seed,
                   const StudyOptions& options) {
  if (k_list.empty()) throw ConfigError("LSD study needs at least one moment order");
  ExperimentPlan plan = base_plan(config, replicates, seed, options);
  plan.p_list.assign(k_list.begin(), k_list.end());
  const McReport report = run_experiment(plan);
  LsdStudy out;
  out.config = config;
  out.replicates = replicates;
  out.seed = seed;
  std::vector<double> scaled(replicates);
  for (int k : k_list) {
    // (1/n) Tr (H / sqrt(2b))^k = (1/n) 2^{-k/2} Tr A^k
    const double factor = 1.0 / (config.n * std::pow(2.0, 0.5 * k));
    const auto& traces = report.traces[report.key_index(k, 1.0)];
    for (std::size_t r = 0; r < replicates; ++r) scaled[r] = factor * traces[r];
    LsdRow row;
    row.k = k;
    row.empirical = mean_and_se(scaled, row.se);
    row.target = theory::lsd_moment(k);
    out.rows.push_back(row);
  }
  return out;
}

SupStudy study_sup(int p, const BandConfig& config, double horizon, int grid_density, std::size_t replicates,
                   std::uint64_t seed, const StudyOptions& options) {
  if (p < 2 || (p & 1)) throw ConfigError("sup study needs an even exponent, got p=" + std::to_string(p));
  if (replicates < 50) throw ConfigError("sup study needs at least 50 replicates, got " + std::to_string(replicates));
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("sup study horizon T must be positive");
  if (grid_density < 1) throw ConfigError("sup study grid density must be >= 1");
  SupStudy out;
  out.p = p;
  out.config = config;
  out.replicates = replicates;
  out.seed = seed;
  for (int i = 1; i <= grid_density; ++i) out.grid.push_back(horizon * i / grid_density);

  ExperimentPlan plan = base_plan(config, replicates, derive_seed(seed, 0), options);
  plan.p_list = {p};
  plan.times = out.grid;
  const McReport report = run_experiment(plan);
  out.finite_sup.assign(replicates, 0.0);
  for (double t : out.grid) {
    const std::span<const double> w = report.samples(p, t);
    for (std::size_t r = 0; r < replicates; ++r) out.finite_sup[r] = std::max(out.finite_sup[r], std::fabs(w[r]));
  }
  const auto paths = theory::sample_limit_paths(p, out.grid, replicates, derive_seed(seed, 1));
  out.cholesky_condition = paths.front().cholesky_condition;
  for (const auto& path : paths) {
    double sup = 0.0;
    for (double v : path.values) sup = std::max(sup, std::fabs(v));
    out.limit_sup.push_back(sup);
  }
  std::sort(out.finite_sup.begin(), out.finite_sup.end());
  std::sort(out.limit_sup.begin(), out.limit_sup.end());
  out.ks_distance = stats::ks_distance(out.finite_sup, out.limit_sup);
  return out;
}

std::vector<Comparison> compare_report(const McReport& report, std::span<const Reference> references) {
  std::vector<Comparison> out;
  for (const auto& ref : references) {
    const CovarianceEstimate& est = report.covariance(ref.key.p, ref.key.t1, ref.key.q, ref.key.t2);
    Comparison c;
    c.key = ref.key;
    c.mc = est.value;
    c.se = est.se.value_or(0.0);
    c.oracle = ref.oracle;
    c.theory = ref.theory;
    const double diff = c.mc - c.oracle;
    if (c.se > 0.0) {
      c.z = diff / c.se;
    } else {
      c.z = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    if (ref.theory && ref.oracle != 0.0) c.ratio = *ref.theory / ref.oracle;
    c.verdict = std::fabs(c.z) <= 4.0 ? Verdict::pass : Verdict::info;
    out.push_back(c);
  }
  return out;
}

std::string to_string(Verdict verdict) { return verdict == Verdict::pass ? "PASS" : "INFO"; }

}  // namespace hanklab::mc
