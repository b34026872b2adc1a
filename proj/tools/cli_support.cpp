#include "cli_support.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hanklab/errors.hpp"
#include "hanklab/report_io.hpp"
#include "hanklab/version.hpp"

namespace hanklab::cli {

std::string csv_text(const std::vector<CsvRow>& rows, const Json& config_echo) {
  std::ostringstream out;
  out << "# hanklab " << kVersion << " config=" << config_echo.dump() << '\n';
  out << "kind,p,q,t1,t2,value,se,n,bn,R,seed\n";
  for (const auto& row : rows) {
    out << row.kind << ',' << row.p << ',' << row.q << ',' << io::format_double(row.t1) << ','
        << io::format_double(row.t2) << ',' << io::format_double(row.value) << ','
        << (row.se ? io::format_double(*row.se) : "") << ',' << (row.n ? std::to_string(*row.n) : "") << ','
        << (row.bn ? std::to_string(*row.bn) : "") << ','
        << (row.replicates ? std::to_string(*row.replicates) : "") << ','
        << (row.seed ? std::to_string(*row.seed) : "") << '\n';
  }
  return out.str();
}

Json envelope(const Json& config_echo, const std::string& kind) {
  Json j;
  j["schema"] = kReportSchema;
  j["tool"] = "hanklab";
  j["version"] = std::string(kVersion);
  j["kind"] = kind;
  j["config"] = config_echo;
  return j;
}

OutputSet::~OutputSet() {
  if (committed_) return;
  std::error_code ignored;
  for (const auto& path : written_) std::filesystem::remove(path, ignored);
}

std::filesystem::path OutputSet::write(const std::string& name, const std::string& content) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir_.string() + "': " + ec.message());
  const std::filesystem::path path = dir_ / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  written_.push_back(path);
  out << content;
  out.close();
  if (!out) throw ConfigError("failed while writing '" + path.string() + "'");
  return path;
}

Json band_json(const BandConfig& config) {
  Json j;
  j["n"] = config.n;
  j["bn"] = config.bandwidth;
  j["gamma"] = config.gamma ? Json(*config.gamma) : Json(nullptr);
  j["convention"] = std::string(to_string(config.convention));
  return j;
}

Json exact_json(const oracle::ExactValue& value) {
  Json j;
  j["value"] = value.value;
  j["term_count"] = value.term_count;
  j["convention"] = std::string(to_string(value.convention));
  j["budget"] = value.budget;
  j["band"] = band_json(value.config);
  return j;
}

BandConfig resolve_band(int n, std::optional<int> bn, double gamma, bool independent) {
  const IndexConvention convention = independent ? IndexConvention::independent : IndexConvention::symmetric;
  if (bn) return BandConfig::with_bandwidth(n, *bn, convention);
  return BandConfig::with_rule(n, gamma, convention);
}

Json number_or_null(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

}  // namespace hanklab::cli
