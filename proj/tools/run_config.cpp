#include "run_config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "hanklab/errors.hpp"

namespace hanklab::cli {
namespace {

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& item : j.items()) {
    if (!allowed.contains(item.key())) {
      std::string names;
      for (const auto& a : allowed) names += (names.empty() ? "" : ", ") + a;
      throw ConfigError("unknown config key '" + where + item.key() + "' (allowed: " + names + ")");
    }
  }
}

template <typename T>
T typed(const Json& j, const std::string& key, const char* expected) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config key '" + key + "' must be " + expected + ", got " + j.dump());
  }
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

void RunConfig::merge_json(const Json& j) {
  reject_unknown(j,
                 {"n", "gamma", "bn", "model", "p_list", "q", "times", "replicates", "seed", "centering",
                  "trace_method", "budgets", "output"},
                 "");
  const bool has_gamma = j.contains("gamma") && !j["gamma"].is_null();
  const bool has_bn = j.contains("bn") && !j["bn"].is_null();
  if (has_gamma && has_bn) throw ConfigError("give either 'gamma' or 'bn', not both");
  if (j.contains("n")) n = typed<int>(j["n"], "n", "an integer");
  if (has_gamma) {
    gamma = typed<double>(j["gamma"], "gamma", "a number");
    bn.reset();
  }
  if (has_bn) {
    bn = typed<int>(j["bn"], "bn", "an integer");
    gamma.reset();
  }
  if (j.contains("model")) {
    const Json& m = j["model"];
    reject_unknown(m, {"kind", "law", "include_a0", "independent_negative_indices"}, "model.");
    if (m.contains("kind")) kind = typed<std::string>(m["kind"], "model.kind", "a string");
    if (m.contains("law")) law = typed<std::string>(m["law"], "model.law", "a string");
    if (m.contains("include_a0")) include_a0 = typed<bool>(m["include_a0"], "model.include_a0", "a boolean");
    if (m.contains("independent_negative_indices")) {
      independent_negative_indices =
          typed<bool>(m["independent_negative_indices"], "model.independent_negative_indices", "a boolean");
    }
  }
  if (j.contains("p_list")) p_list = typed<std::vector<int>>(j["p_list"], "p_list", "a list of integers");
  if (j.contains("q")) {
    if (j["q"].is_null()) {
      q.reset();
    } else {
      q = typed<int>(j["q"], "q", "an integer");
    }
  }
  if (j.contains("times")) times = typed<std::vector<double>>(j["times"], "times", "a list of numbers");
  if (j.contains("replicates")) {
    const auto r = typed<long long>(j["replicates"], "replicates", "an integer");
    if (r < 2) throw ConfigError("replicates must be >= 2, got " + std::to_string(r));
    replicates = static_cast<std::size_t>(r);
  }
  if (j.contains("seed")) seed = typed<std::uint64_t>(j["seed"], "seed", "a nonnegative integer");
  if (j.contains("centering")) centering = typed<std::string>(j["centering"], "centering", "a string");
  if (j.contains("trace_method")) trace_method = typed<std::string>(j["trace_method"], "trace_method", "a string");
  if (j.contains("budgets")) {
    const Json& b = j["budgets"];
    reject_unknown(b, {"oracle", "formula"}, "budgets.");
    if (b.contains("oracle")) oracle_budget = typed<std::uint64_t>(b["oracle"], "budgets.oracle", "an integer");
    if (b.contains("formula")) formula_budget = typed<std::uint64_t>(b["formula"], "budgets.formula", "an integer");
  }
  if (j.contains("output")) {
    const Json& o = j["output"];
    reject_unknown(o, {"dir", "formats"}, "output.");
    if (o.contains("dir")) output_dir = typed<std::string>(o["dir"], "output.dir", "a string");
    if (o.contains("formats")) {
      formats = typed<std::vector<std::string>>(o["formats"], "output.formats", "a list of strings");
    }
  }
}

Json RunConfig::to_json() const {
  Json j;
  j["n"] = n;
  j["gamma"] = gamma ? Json(*gamma) : Json(nullptr);
  j["bn"] = bn ? Json(*bn) : Json(nullptr);
  j["model"] = {{"kind", kind},
                {"law", law},
                {"include_a0", include_a0},
                {"independent_negative_indices", independent_negative_indices}};
  j["p_list"] = p_list;
  j["q"] = q ? Json(*q) : Json(nullptr);
  j["times"] = times;
  j["replicates"] = replicates;
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  j["centering"] = centering;
  j["trace_method"] = trace_method;
  j["budgets"] = {{"oracle", oracle_budget}, {"formula", formula_budget}};
  // the destination is left out so the same run written to two places stays byte-identical
  j["output"] = {{"formats", formats}};
  return j;
}

mc::ExperimentPlan RunConfig::to_plan() const {
  if (!seed) throw ConfigError("a seed is required: pass --seed or set \"seed\" in the config file");
  for (const auto& f : formats) {
    if (f != "json" && f != "csv") throw ConfigError("unknown output format '" + f + "' (expected json|csv)");
  }
  if (formats.empty()) throw ConfigError("output.formats must name at least one of json, csv");
  const IndexConvention convention =
      independent_negative_indices ? IndexConvention::independent : IndexConvention::symmetric;
  mc::ExperimentPlan plan;
  if (bn) {
    plan.config = BandConfig::with_bandwidth(n, *bn, convention);
  } else if (gamma) {
    plan.config = BandConfig::with_rule(n, *gamma, convention);
  } else {
    throw ConfigError("give either 'gamma' or 'bn'");
  }
  plan.model.kind = parse_entry_kind(kind);
  plan.model.law = parse_law(law);
  plan.model.include_a0 = include_a0;
  plan.p_list = p_list;
  if (q && std::find(plan.p_list.begin(), plan.p_list.end(), *q) == plan.p_list.end()) plan.p_list.push_back(*q);
  plan.times = times;
  plan.replicates = replicates;
  plan.master_seed = *seed;
  plan.centering = parse_centering(centering);
  plan.trace_method = parse_trace_method(trace_method);
  plan.oracle_budget = oracle_budget;
  plan.formula_budget = formula_budget;
  plan.validate();
  return plan;
}

}  // namespace hanklab::cli
