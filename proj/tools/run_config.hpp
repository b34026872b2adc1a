#pragma once

// Resolved configuration of a `simulate` run. Precedence: defaults, then a
// JSON config file, then command-line flags.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hanklab/mc.hpp"

namespace hanklab::cli {

using Json = nlohmann::ordered_json;

struct RunConfig {
  int n = 256;
  std::optional<double> gamma = kDefaultBandwidthExponent;
  std::optional<int> bn;
  std::string kind = "brownian";
  std::string law = "standard_gaussian";
  bool include_a0 = false;
  bool independent_negative_indices = false;
  std::vector<int> p_list{2};
  std::optional<int> q;  // merged into the exponent list for cross covariances
  std::vector<double> times{1.0};
  std::size_t replicates = 400;
  std::optional<std::uint64_t> seed;
  std::string centering = "sample_mean";
  std::string trace_method = "eigen";
  std::uint64_t oracle_budget = oracle::kDefaultTermBudget;
  std::uint64_t formula_budget = kDefaultFormulaBudget;
  std::string output_dir = "out";
  std::vector<std::string> formats{"json", "csv"};

  /// Overlays the keys present in `j`. Unknown keys throw ConfigError.
  void merge_json(const Json& j);
  [[nodiscard]] Json to_json() const;
  /// Checks ranges and builds the experiment plan (workers left at 0).
  [[nodiscard]] mc::ExperimentPlan to_plan() const;
};

/// Reads and parses a JSON file; failures are ConfigError.
Json read_json_file(const std::string& path);

}  // namespace hanklab::cli
