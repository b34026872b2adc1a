#pragma once

// Empirical studies built on run_experiment, plus the MC/oracle/theory
// comparison.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hanklab/mc.hpp"

namespace hanklab::mc {

/// Knobs shared by the studies.
struct StudyOptions {
  IndexConvention convention = IndexConvention::symmetric;
  TraceMethod trace_method = TraceMethod::matmul;
  unsigned workers = 0;
};

struct DecayRow {
  IidLaw law = IidLaw::standard_gaussian;
  int n = 0;
  int bandwidth = 0;
  double variance = 0.0;
  std::optional<double> se;
};

struct DecaySeries {
  IidLaw law = IidLaw::standard_gaussian;
  std::vector<DecayRow> rows;
  double slope = 0.0;  // least squares of log variance on log n
  bool strictly_decreasing = false;
};

struct OddDecayStudy {
  int p = 1;
  double gamma = kDefaultBandwidthExponent;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::vector<DecaySeries> series;  // one per law
};

/// Var(w_p(1)) along n for each law. p must be odd.
OddDecayStudy study_odd_decay(int p, std::span<const int> n_list, double gamma, std::size_t replicates,
                              std::uint64_t seed, std::span<const IidLaw> laws, const StudyOptions& options = {});

struct TightnessRow {
  double s = 0.0;
  double t = 0.0;
  double fourth_moment = 0.0;  // mean |w_p(t) - w_p(s)|^4
  double se = 0.0;
};

struct TightnessStudy {
  int p = 2;
  BandConfig config;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::vector<TightnessRow> rows;
  double slope = 0.0;  // over rows with t > s
  bool monotone = false;
};

/// Fourth moments of coupled increments for each (s, t) pair, all pairs
/// evaluated on one shared grid. p must be even.
TightnessStudy study_tightness(int p, const BandConfig& config, std::span<const std::pair<double, double>> pairs,
                               std::size_t replicates, std::uint64_t seed, const StudyOptions& options = {});

struct LsdRow {
  int k = 2;
  double empirical = 0.0;  // mean of (1/n) Tr (H / sqrt(2b))^k
  double se = 0.0;
  double target = 0.0;
};

struct LsdStudy {
  BandConfig config;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::vector<LsdRow> rows;
};

LsdStudy study_lsd(const BandConfig& config, std::span<const int> k_list, std::size_t replicates, std::uint64_t seed,
                   const StudyOptions& options = {});

struct SupStudy {
  int p = 2;
  BandConfig config;
  std::vector<double> grid;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::vector<double> finite_sup;  // sorted
  std::vector<double> limit_sup;   // sorted
  double ks_distance = 0.0;
  double cholesky_condition = 0.0;
};

/// grid = T (1..density) / density. Needs R >= 50 and even p.
SupStudy study_sup(int p, const BandConfig& config, double horizon, int grid_density, std::size_t replicates,
                   std::uint64_t seed, const StudyOptions& options = {});

struct QueryKey {
  int p = 2;
  int q = 2;
  double t1 = 1.0;
  double t2 = 1.0;
};

struct Reference {
  QueryKey key;
  double oracle = 0.0;
  std::optional<double> theory;
};

enum class Verdict { pass, info };

struct Comparison {
  QueryKey key;
  double mc = 0.0;
  double se = 0.0;
  double oracle = 0.0;
  std::optional<double> theory;
  double z = 0.0;
  std::optional<double> ratio;  // theory / oracle
  Verdict verdict = Verdict::info;
};

/// PASS when |z| <= 4 against the oracle; INFO otherwise. Throws ConfigError
/// when a reference key has no estimate in the report.
std::vector<Comparison> compare_report(const McReport& report, std::span<const Reference> references);

std::string to_string(Verdict verdict);

}  // namespace hanklab::mc
