#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hanklab/ensemble.hpp"
#include "hanklab/oracle.hpp"

namespace hanklab::cli {

using Json = nlohmann::ordered_json;

/// One row of the flat CSV schema kind,p,q,t1,t2,value,se,n,bn,R,seed.
struct CsvRow {
  std::string kind;
  int p = 0;
  int q = 0;
  double t1 = 0.0;
  double t2 = 0.0;
  double value = 0.0;
  std::optional<double> se;
  std::optional<int> n;
  std::optional<int> bn;
  std::optional<std::size_t> replicates;
  std::optional<std::uint64_t> seed;
};

std::string csv_text(const std::vector<CsvRow>& rows, const Json& config_echo);

/// Wraps a payload with schema, tool, version and the resolved config.
Json envelope(const Json& config_echo, const std::string& kind);

/// Files written by one command. Unless commit() is called, the destructor
/// removes every file it wrote.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet();

  std::filesystem::path write(const std::string& name, const std::string& content);
  void commit() noexcept { committed_ = true; }
  [[nodiscard]] const std::vector<std::filesystem::path>& written() const noexcept { return written_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> written_;
  bool committed_ = false;
};

Json band_json(const BandConfig& config);
Json exact_json(const oracle::ExactValue& value);

/// BandConfig from flags: an explicit bandwidth wins, otherwise floor(n^gamma).
BandConfig resolve_band(int n, std::optional<int> bn, double gamma, bool independent);

/// Nonfinite values serialize as null.
Json number_or_null(double value);

}  // namespace hanklab::cli
