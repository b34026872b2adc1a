#include "hanklab/mc.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <set>
#include <string>
#include <thread>

#include "hanklab/errors.hpp"
#include "hanklab/numeric.hpp"

namespace hanklab::mc {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

struct Failure {
  std::size_t replicate = 0;
  std::exception_ptr error;
};

[[noreturn]] void rethrow_with_context(const Failure& failure, std::uint64_t seed) {
  const std::string prefix =
      "replicate " + std::to_string(failure.replicate) + " (seed " + std::to_string(seed) + "): ";
  try {
    std::rethrow_exception(failure.error);
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const BudgetError& e) {
    throw BudgetError(prefix + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(prefix + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(prefix + e.what());
  }
}

// Traces for one replicate, laid out [p index][time index].
std::vector<double> replicate_traces(const ExperimentPlan& plan, std::uint64_t seed) {
  const BandConfig& config = plan.config;
  const SymbolPaths paths = sample_symbol_paths(plan.model, config, plan.times, seed);
  const std::size_t times = plan.times.size();
  const std::size_t powers = plan.p_list.size();
  std::vector<double> out(times * powers, 0.0);
  const double root_b = std::sqrt(static_cast<double>(config.bandwidth));
  for (std::size_t ti = 0; ti < times; ++ti) {
    if (plan.trace_method == TraceMethod::formula) {
      for (std::size_t pi = 0; pi < powers; ++pi) {
        const int p = plan.p_list[pi];
        out[pi * times + ti] = trace_power_formula(paths, ti, config, p, plan.formula_budget) / int_pow(root_b, p);
      }
      continue;
    }
    const SymmetricBandMatrix h = build_band_hankel(paths, ti, config);
    std::vector<double> values;
    if (plan.model.include_a0) {
      const SymmetricBandMatrix a = build_tilde_A(scale_to_A(h, config), paths.a0(ti), config);
      values = trace_powers(a, plan.p_list, plan.trace_method);
    } else {
      // Tr (H / sqrt b)^p = b^{-p/2} Tr H^p; skips a scaled copy.
      values = trace_powers(h, plan.p_list, plan.trace_method);
      for (std::size_t pi = 0; pi < powers; ++pi) values[pi] /= int_pow(root_b, plan.p_list[pi]);
    }
    for (std::size_t pi = 0; pi < powers; ++pi) out[pi * times + ti] = values[pi];
  }
  return out;
}

unsigned resolve_workers(unsigned requested, std::size_t replicates) {
  unsigned workers = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(workers, replicates));
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  std::uint64_t z = x + kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t replicate) noexcept {
  return splitmix64(master_seed + kGolden * replicate);
}

void ExperimentPlan::validate() const {
  config.validate();
  if (p_list.empty()) throw ConfigError("p_list must name at least one exponent");
  std::set<int> seen;
  for (int p : p_list) {
    if (p < 1) throw ConfigError("exponents in p_list must be >= 1, got " + std::to_string(p));
    if (!seen.insert(p).second) throw ConfigError("p_list contains " + std::to_string(p) + " twice");
  }
  if (times.empty()) throw ConfigError("times must contain at least one grid time");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0) throw ConfigError("times must be finite and >= 0");
    if (i > 0 && times[i] <= times[i - 1]) throw ConfigError("times must be strictly increasing");
  }
  if (replicates < 2) throw ConfigError("replicates must be >= 2, got " + std::to_string(replicates));
  if (model.kind == EntryKind::iid && times.size() != 1) {
    throw ConfigError("i.i.d. entry models take exactly one time");
  }
  if (centering == Centering::wick_exact && !model.gaussian()) {
    throw ConfigError("exact Wick centering needs a Gaussian entry model");
  }
  if (trace_method == TraceMethod::formula && model.include_a0) {
    throw ConfigError("the formula trace route does not support the a_0 diagonal term");
  }
}

std::uint64_t ExperimentPlan::replicate_seed(std::size_t r) const noexcept {
  return derive_seed(master_seed, identical_replicate_seeds ? 0 : r);
}

std::size_t McReport::key_index(int p, double t) const {
  for (std::size_t k = 0; k < keys.size(); ++k) {
    if (keys[k].p == p && keys[k].t == t) return k;
  }
  throw ConfigError("report has no statistic for p=" + std::to_string(p) + " t=" + std::to_string(t));
}

const MomentSummary& McReport::moment(int p, double t) const { return moments[key_index(p, t)]; }

const CovarianceEstimate& McReport::covariance(int p, double t1, int q, double t2) const {
  const StatKey a{p, t1};
  const StatKey b{q, t2};
  for (const auto& c : covariances) {
    if ((c.first == a && c.second == b) || (c.first == b && c.second == a)) return c;
  }
  throw ConfigError("report has no covariance for (p=" + std::to_string(p) + ", t=" + std::to_string(t1) +
                    ") x (q=" + std::to_string(q) + ", t=" + std::to_string(t2) + ")");
}

std::span<const double> McReport::samples(int p, double t) const { return w_samples[key_index(p, t)]; }

double wick_centering(const ExperimentPlan& plan, int p, double t) {
  if (!plan.model.gaussian()) throw ConfigError("exact Wick centering needs a Gaussian entry model");
  const double time = plan.model.kind == EntryKind::iid ? 1.0 : t;
  oracle::OracleOptions options;
  options.include_a0 = plan.model.include_a0;
  options.term_budget = plan.oracle_budget;
  const double mean_h = oracle::exact_mean_trace(plan.config, p, time, options).value;
  return mean_h / int_pow(std::sqrt(static_cast<double>(plan.config.bandwidth)), p);
}

McReport run_experiment(const ExperimentPlan& plan) {
  plan.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t replicates = plan.replicates;
  const std::size_t times = plan.times.size();
  const std::size_t key_count = plan.p_list.size() * times;

  McReport report;
  report.plan = plan;
  for (int p : plan.p_list) {
    for (double t : plan.times) report.keys.push_back({p, t});
  }

  std::vector<std::optional<double>> exact(key_count);
  if (plan.centering == Centering::wick_exact) {
    for (std::size_t k = 0; k < key_count; ++k) exact[k] = wick_centering(plan, report.keys[k].p, report.keys[k].t);
  }

  std::vector<std::vector<double>> per_replicate(replicates);
  std::vector<Failure> failures;
  const unsigned workers = resolve_workers(plan.workers, replicates);
  report.workers_used = workers;
  if (workers <= 1) {
    for (std::size_t r = 0; r < replicates; ++r) {
      try {
        per_replicate[r] = replicate_traces(plan, plan.replicate_seed(r));
      } catch (...) {
        rethrow_with_context({r, std::current_exception()}, plan.replicate_seed(r));
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::vector<Failure>> worker_failures(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t r = next.fetch_add(1); r < replicates; r = next.fetch_add(1)) {
          try {
            per_replicate[r] = replicate_traces(plan, plan.replicate_seed(r));
          } catch (...) {
            worker_failures[w].push_back({r, std::current_exception()});
          }
        }
      });
    }
    for (auto& thread : pool) thread.join();
    for (auto& list : worker_failures) failures.insert(failures.end(), list.begin(), list.end());
    if (!failures.empty()) {
      const auto first = std::min_element(failures.begin(), failures.end(),
                                          [](const Failure& a, const Failure& b) { return a.replicate < b.replicate; });
      rethrow_with_context(*first, plan.replicate_seed(first->replicate));
    }
  }

  report.traces.assign(key_count, std::vector<double>(replicates));
  for (std::size_t r = 0; r < replicates; ++r) {
    for (std::size_t k = 0; k < key_count; ++k) report.traces[k][r] = per_replicate[r][k];
  }

  report.w_samples.resize(key_count);
  for (std::size_t k = 0; k < key_count; ++k) {
    const StatKey key = report.keys[k];
    const std::vector<WStatistic> w = w_stat(report.traces[k], key.p, key.t, plan.config, exact[k]);
    auto& values = report.w_samples[k];
    values.reserve(replicates);
    for (const auto& s : w) values.push_back(s.value);

    MomentSummary m;
    m.key = key;
    m.mean_trace = stats::mean(report.traces[k]);
    m.centering_value = exact[k] ? *exact[k] : m.mean_trace;
    m.mean = stats::mean(values);
    m.variance = stats::variance(values);
    m.mean_se = std::sqrt(m.variance / static_cast<double>(replicates));
    m.variance_se = stats::jackknife_covariance_se(values, values);
    m.shape = stats::shape_moments(values);
    report.moments.push_back(m);
  }
  for (std::size_t i = 0; i < key_count; ++i) {
    for (std::size_t j = i; j < key_count; ++j) {
      CovarianceEstimate c;
      c.first = report.keys[i];
      c.second = report.keys[j];
      c.value = i == j ? report.moments[i].variance : stats::covariance(report.w_samples[i], report.w_samples[j]);
      c.se = stats::jackknife_covariance_se(report.w_samples[i], report.w_samples[j]);
      report.covariances.push_back(c);
    }
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<double> polynomial_w(const McReport& report, std::span<const std::pair<int, double>> terms, double t) {
  if (terms.empty()) throw ConfigError("polynomial needs at least one term");
  std::vector<double> out(report.plan.replicates, 0.0);
  for (const auto& [p, coefficient] : terms) {
    const std::span<const double> w = report.samples(p, t);
    for (std::size_t r = 0; r < out.size(); ++r) out[r] += coefficient * w[r];
  }
  return out;
}

}  // namespace hanklab::mc
