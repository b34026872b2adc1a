#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hanklab::cli {

struct StudyArgs {
  std::string name;  // odd | tightness | lsd | sup | all
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  unsigned workers = 0;
  bool independent = false;
  std::string trace_method = "matmul";
  std::string preset = "quick";

  int odd_p = 1;
  int even_p = 2;
  std::vector<int> n_list{256, 512, 1024, 2048};
  int n = 0;  // 0 picks the per-study default
  double gamma = 0.6;
  std::optional<std::size_t> replicates;
  std::vector<std::string> laws{"standard_gaussian", "rademacher"};
  double anchor = 0.5;
  std::vector<double> gaps{0.0625, 0.125, 0.25, 0.5};
  std::vector<int> k_list{2, 3, 4};
  double horizon = 1.0;
  int density = 8;
};

/// Runs one study, writes report.json and report.csv (plus findings.md for
/// `all`) into the output directory, and prints a summary line per verdict.
int run_study(const StudyArgs& args, std::ostream& out);

}  // namespace hanklab::cli
