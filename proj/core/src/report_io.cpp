#include "hanklab/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "hanklab/version.hpp"

namespace hanklab::io {
namespace {

using Json = nlohmann::ordered_json;

Json parse_echo(std::string_view text) {
  if (text.empty()) return nullptr;
  return Json::parse(text);
}

Json optional_number(const std::optional<double>& value) {
  if (!value || !std::isfinite(*value)) return nullptr;
  return *value;
}

Json plan_json(const mc::ExperimentPlan& plan) {
  Json j;
  j["n"] = plan.config.n;
  j["bn"] = plan.config.bandwidth;
  j["gamma"] = plan.config.gamma ? Json(*plan.config.gamma) : Json(nullptr);
  j["convention"] = std::string(to_string(plan.config.convention));
  j["model"] = {{"kind", std::string(to_string(plan.model.kind))},
                {"law", std::string(to_string(plan.model.law))},
                {"include_a0", plan.model.include_a0}};
  j["p_list"] = plan.p_list;
  j["times"] = plan.times;
  j["replicates"] = plan.replicates;
  j["master_seed"] = plan.master_seed;
  j["seed_rule"] = "splitmix64(master_seed + 0x9E3779B97F4A7C15 * r)";
  j["centering"] = std::string(to_string(plan.centering));
  j["trace_method"] = std::string(to_string(plan.trace_method));
  return j;
}

struct CsvRow {
  const char* kind;
  int p;
  int q;
  double t1;
  double t2;
  double value;
  std::optional<double> se;
};

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_report_json(std::ostream& out, const mc::McReport& report, std::string_view resolved_config_json) {
  Json j;
  j["schema"] = kReportSchema;
  j["tool"] = "hanklab";
  j["version"] = std::string(kVersion);
  j["kind"] = "simulate";
  j["config"] = parse_echo(resolved_config_json);
  j["plan"] = plan_json(report.plan);
  Json moments = Json::array();
  for (const auto& m : report.moments) {
    moments.push_back({{"p", m.key.p},
                       {"t", m.key.t},
                       {"mean_trace", m.mean_trace},
                       {"centering_value", m.centering_value},
                       {"mean", m.mean},
                       {"mean_se", m.mean_se},
                       {"variance", m.variance},
                       {"variance_se", optional_number(m.variance_se)},
                       {"skewness", m.shape.skewness},
                       {"skewness_se", m.shape.skewness_se},
                       {"excess_kurtosis", m.shape.excess_kurtosis},
                       {"kurtosis_se", m.shape.kurtosis_se}});
  }
  j["moments"] = std::move(moments);
  Json covariances = Json::array();
  for (const auto& c : report.covariances) {
    covariances.push_back({{"p", c.first.p},
                           {"t1", c.first.t},
                           {"q", c.second.p},
                           {"t2", c.second.t},
                           {"value", c.value},
                           {"se", optional_number(c.se)}});
  }
  j["covariances"] = std::move(covariances);
  out << j.dump(2) << '\n';
}

void write_report_csv(std::ostream& out, const mc::McReport& report, std::string_view resolved_config_json) {
  out << "# hanklab " << kVersion << " config=" << parse_echo(resolved_config_json).dump() << '\n';
  out << "kind,p,q,t1,t2,value,se,n,bn,R,seed\n";
  std::vector<CsvRow> rows;
  for (const auto& m : report.moments) {
    const int p = m.key.p;
    const double t = m.key.t;
    rows.push_back({"mean_trace", p, p, t, t, m.mean_trace, std::nullopt});
    rows.push_back({"mean", p, p, t, t, m.mean, m.mean_se});
    rows.push_back({"variance", p, p, t, t, m.variance, m.variance_se});
    rows.push_back({"skewness", p, p, t, t, m.shape.skewness, m.shape.skewness_se});
    rows.push_back({"excess_kurtosis", p, p, t, t, m.shape.excess_kurtosis, m.shape.kurtosis_se});
  }
  for (const auto& c : report.covariances) {
    rows.push_back({"covariance", c.first.p, c.second.p, c.first.t, c.second.t, c.value, c.se});
  }
  const auto& plan = report.plan;
  for (const auto& row : rows) {
    out << row.kind << ',' << row.p << ',' << row.q << ',' << format_double(row.t1) << ',' << format_double(row.t2)
        << ',' << format_double(row.value) << ',' << (row.se ? format_double(*row.se) : std::string()) << ','
        << plan.config.n << ',' << plan.config.bandwidth << ',' << plan.replicates << ',' << plan.master_seed << '\n';
  }
}

}  // namespace hanklab::io
