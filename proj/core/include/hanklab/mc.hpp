#pragma once

// Seeded, replicate-parallel Monte Carlo over coupled Brownian symbol paths.
//
// Each replicate draws one SymbolPaths on the full time grid, so all grid
// times share the same paths. Replicates run on worker threads but write to
// their own slots; every aggregate is computed afterwards in replicate order,
// which makes reports bitwise independent of the worker count.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hanklab/ensemble.hpp"
#include "hanklab/oracle.hpp"
#include "hanklab/spectra.hpp"
#include "hanklab/stats.hpp"

namespace hanklab::mc {

/// One SplitMix64 output step: mixes x + golden gamma.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// seed_r = splitmix64(master + golden * r), the r-th SplitMix64 output.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t replicate) noexcept;

struct ExperimentPlan {
  BandConfig config;
  EntryModel model;
  std::vector<int> p_list{2};
  std::vector<double> times{1.0};
  std::size_t replicates = 400;
  std::uint64_t master_seed = 0;
  Centering centering = Centering::sample_mean;
  TraceMethod trace_method = TraceMethod::eigen;
  unsigned workers = 0;  // 0 = hardware concurrency
  std::uint64_t oracle_budget = oracle::kDefaultTermBudget;
  std::uint64_t formula_budget = kDefaultFormulaBudget;
  bool identical_replicate_seeds = false;  // degenerate-batch test hook

  void validate() const;
  [[nodiscard]] std::uint64_t replicate_seed(std::size_t r) const noexcept;
};

struct StatKey {
  int p = 2;
  double t = 1.0;
  friend bool operator==(const StatKey&, const StatKey&) = default;
};

struct MomentSummary {
  StatKey key;
  double mean_trace = 0.0;  // mean of Tr A(t)^p
  double centering_value = 0.0;
  double mean = 0.0;  // mean of w
  double mean_se = 0.0;
  double variance = 0.0;
  std::optional<double> variance_se;  // jackknife
  stats::ShapeMoments shape;
};

struct CovarianceEstimate {
  StatKey first;
  StatKey second;
  double value = 0.0;
  std::optional<double> se;  // jackknife
};

struct McReport {
  ExperimentPlan plan;
  unsigned workers_used = 1;
  std::vector<StatKey> keys;  // p-major, then time
  std::vector<MomentSummary> moments;
  std::vector<CovarianceEstimate> covariances;  // upper triangle incl. diagonal
  std::vector<std::vector<double>> traces;      // [key][replicate], Tr A^p
  std::vector<std::vector<double>> w_samples;   // [key][replicate]
  double wall_seconds = 0.0;                    // not part of serialized reports

  [[nodiscard]] std::size_t key_index(int p, double t) const;
  [[nodiscard]] const MomentSummary& moment(int p, double t) const;
  [[nodiscard]] const CovarianceEstimate& covariance(int p, double t1, int q, double t2) const;
  [[nodiscard]] std::span<const double> samples(int p, double t) const;
};

/// Runs every replicate. Errors inside a replicate are rethrown with the
/// replicate index and seed prepended, keeping their exception type.
McReport run_experiment(const ExperimentPlan& plan);

/// Centering value for Tr A(t)^p under exact Wick centering. Needs a
/// Gaussian model; i.i.d. models are evaluated at t = 1.
double wick_centering(const ExperimentPlan& plan, int p, double t);

/// w samples of the polynomial statistic sum_k c_k x^{p_k} at time t, as the
/// same linear combination of the monomial statistics.
std::vector<double> polynomial_w(const McReport& report, std::span<const std::pair<int, double>> terms, double t);

}  // namespace hanklab::mc
