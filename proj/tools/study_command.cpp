#include "study_command.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "cli_support.hpp"
#include "hanklab/errors.hpp"
#include "hanklab/report_io.hpp"
#include "hanklab/studies.hpp"
#include "hanklab/theory.hpp"
#include "hanklab/version.hpp"

namespace hanklab::cli {
namespace {

struct Section {
  Json payload;
  std::vector<CsvRow> rows;
  std::vector<std::string> verdicts;  // "PASS ..." / "INFO ..." lines
};

std::string fmt(double value, int digits = 6) {
  if (!std::isfinite(value)) return "nan";
  std::ostringstream out;
  out.precision(digits);
  out << value;
  return out.str();
}

std::string verdict_line(bool pass, const std::string& text) { return std::string(pass ? "PASS " : "INFO ") + text; }

mc::StudyOptions options_from(const StudyArgs& args, bool independent) {
  mc::StudyOptions o;
  o.convention = independent ? IndexConvention::independent : IndexConvention::symmetric;
  o.trace_method = parse_trace_method(args.trace_method);
  o.workers = args.workers;
  return o;
}

Section odd_section(int p, std::span<const int> n_list, double gamma, std::size_t replicates, std::uint64_t seed,
                    const std::vector<std::string>& law_names, const mc::StudyOptions& options) {
  std::vector<IidLaw> laws;
  for (const auto& name : law_names) laws.push_back(parse_law(name));
  const mc::OddDecayStudy study = mc::study_odd_decay(p, n_list, gamma, replicates, seed, laws, options);
  Section s;
  s.payload["study"] = "odd_decay";
  s.payload["p"] = p;
  s.payload["gamma"] = gamma;
  s.payload["replicates"] = replicates;
  s.payload["seed"] = seed;
  Json series = Json::array();
  for (const auto& line : study.series) {
    const bool pass = line.strictly_decreasing && line.slope <= -0.4;
    Json rows = Json::array();
    for (const auto& row : line.rows) {
      rows.push_back({{"n", row.n},
                      {"bn", row.bandwidth},
                      {"variance", row.variance},
                      {"se", row.se ? Json(*row.se) : Json(nullptr)}});
      s.rows.push_back({"odd_variance_" + std::string(to_string(line.law)), p, p, 1.0, 1.0, row.variance, row.se,
                        row.n, row.bandwidth, replicates, seed});
    }
    s.rows.push_back({"odd_slope_" + std::string(to_string(line.law)), p, p, 1.0, 1.0, line.slope, std::nullopt,
                      std::nullopt, std::nullopt, replicates, seed});
    series.push_back({{"law", std::string(to_string(line.law))},
                      {"slope", number_or_null(line.slope)},
                      {"strictly_decreasing", line.strictly_decreasing},
                      {"verdict", pass ? "PASS" : "INFO"},
                      {"rows", rows}});
    s.verdicts.push_back(verdict_line(pass, "odd decay p=" + std::to_string(p) + " law=" +
                                                std::string(to_string(line.law)) + " slope=" + fmt(line.slope) +
                                                " decreasing=" + (line.strictly_decreasing ? "yes" : "no")));
  }
  s.payload["series"] = std::move(series);
  return s;
}

Section tightness_section(int p, const BandConfig& config, double anchor, const std::vector<double>& gaps,
                          std::size_t replicates, std::uint64_t seed, const mc::StudyOptions& options) {
  std::vector<std::pair<double, double>> pairs;
  pairs.emplace_back(anchor, anchor);
  for (double g : gaps) pairs.emplace_back(anchor, anchor + g);
  const mc::TightnessStudy study = mc::study_tightness(p, config, pairs, replicates, seed, options);
  Section s;
  const bool pass = study.slope >= 1.8 && study.monotone;
  s.payload["study"] = "tightness";
  s.payload["p"] = p;
  s.payload["band"] = band_json(config);
  s.payload["replicates"] = replicates;
  s.payload["seed"] = seed;
  Json rows = Json::array();
  for (const auto& row : study.rows) {
    rows.push_back({{"s", row.s}, {"t", row.t}, {"fourth_moment", row.fourth_moment}, {"se", row.se}});
    s.rows.push_back({"tightness_fourth_moment", p, p, row.s, row.t, row.fourth_moment, row.se, config.n,
                      config.bandwidth, replicates, seed});
  }
  s.rows.push_back({"tightness_slope", p, p, anchor, anchor, study.slope, std::nullopt, config.n, config.bandwidth,
                    replicates, seed});
  s.payload["rows"] = std::move(rows);
  s.payload["slope"] = number_or_null(study.slope);
  s.payload["monotone"] = study.monotone;
  s.payload["verdict"] = pass ? "PASS" : "INFO";
  s.verdicts.push_back(verdict_line(pass, "tightness p=" + std::to_string(p) + " n=" + std::to_string(config.n) +
                                              " slope=" + fmt(study.slope)));
  return s;
}

Section lsd_section(const BandConfig& config, const std::vector<int>& k_list, std::size_t replicates,
                    std::uint64_t seed, const mc::StudyOptions& options) {
  const mc::LsdStudy study = mc::study_lsd(config, k_list, replicates, seed, options);
  Section s;
  const std::string convention(to_string(config.convention));
  s.payload["study"] = "lsd";
  s.payload["band"] = band_json(config);
  s.payload["replicates"] = replicates;
  s.payload["seed"] = seed;
  Json rows = Json::array();
  for (const auto& row : study.rows) {
    const bool pass = (row.k & 1) ? std::fabs(row.empirical) <= 0.05
                                  : std::fabs(row.empirical - row.target) <= 0.1 * row.target;
    rows.push_back({{"k", row.k},
                    {"empirical", row.empirical},
                    {"se", row.se},
                    {"target", row.target},
                    {"verdict", pass ? "PASS" : "INFO"}});
    s.rows.push_back({"lsd_moment_" + convention, row.k, row.k, 1.0, 1.0, row.empirical, row.se, config.n,
                      config.bandwidth, replicates, seed});
    s.verdicts.push_back(verdict_line(pass, "LSD moment k=" + std::to_string(row.k) + " convention=" + convention +
                                                " empirical=" + fmt(row.empirical) + " target=" + fmt(row.target)));
  }
  s.payload["rows"] = std::move(rows);
  return s;
}

Json quantiles(const std::vector<double>& sorted) {
  Json q = Json::array();
  for (int d = 1; d <= 9; ++d) {
    const std::size_t index = std::min(sorted.size() - 1, sorted.size() * static_cast<std::size_t>(d) / 10);
    q.push_back(sorted[index]);
  }
  return q;
}

Section sup_section(int p, const BandConfig& config, double horizon, int density, std::size_t replicates,
                    std::uint64_t seed, const mc::StudyOptions& options) {
  const mc::SupStudy study = mc::study_sup(p, config, horizon, density, replicates, seed, options);
  Section s;
  s.payload["study"] = "sup";
  s.payload["p"] = p;
  s.payload["band"] = band_json(config);
  s.payload["grid"] = study.grid;
  s.payload["replicates"] = replicates;
  s.payload["seed"] = seed;
  s.payload["ks_distance"] = study.ks_distance;
  s.payload["cholesky_condition"] = number_or_null(study.cholesky_condition);
  s.payload["finite_sup_deciles"] = quantiles(study.finite_sup);
  s.payload["limit_sup_deciles"] = quantiles(study.limit_sup);
  s.payload["finite_sup"] = study.finite_sup;
  s.payload["limit_sup"] = study.limit_sup;
  s.payload["verdict"] = "INFO";
  s.rows.push_back({"sup_ks_distance", p, p, horizon, horizon, study.ks_distance, std::nullopt, config.n,
                    config.bandwidth, replicates, seed});
  s.verdicts.push_back(verdict_line(false, "sup functional p=" + std::to_string(p) +
                                               " KS distance finite vs limit = " + fmt(study.ks_distance)));
  return s;
}

struct Preset {
  std::vector<int> odd_n;
  std::size_t odd_r;
  int tight_n;
  std::size_t tight_r;
  int lsd_n;
  std::size_t lsd_r;
  int sup_n;
  std::size_t sup_r;
  int cmp_n;
  int cmp_bn;
  std::size_t cmp_r;
  std::vector<int> probe_n;
};

Preset preset_named(const std::string& name) {
  if (name == "quick") return {{64, 128, 256}, 200, 128, 300, 256, 20, 128, 100, 64, 8, 400, {32, 64, 128}};
  if (name == "full") {
    return {{256, 512, 1024, 2048}, 600, 512, 1000, 2048, 50, 512, 500, 256, 16, 2000, {64, 128, 256}};
  }
  throw ConfigError("unknown preset '" + name + "' (expected quick|full)");
}

Section comparison_section(const Preset& preset, std::uint64_t seed, const mc::StudyOptions& options,
                           std::vector<std::string>& findings) {
  Section s;
  mc::ExperimentPlan plan;
  plan.config = BandConfig::with_bandwidth(preset.cmp_n, preset.cmp_bn, options.convention);
  plan.p_list = {2};
  plan.times = {1.0, 2.0};
  plan.replicates = preset.cmp_r;
  plan.master_seed = seed;
  plan.trace_method = options.trace_method;
  plan.workers = options.workers;
  const mc::McReport report = mc::run_experiment(plan);
  std::vector<mc::Reference> refs;
  for (double t2 : {1.0, 2.0}) {
    mc::Reference ref;
    ref.key = {2, 2, 1.0, t2};
    ref.oracle = oracle::exact_cov_w(plan.config, 2, 2, 1.0, t2).value;
    ref.theory = theory::limit_cov({2, 2, 1.0, t2}).value;
    refs.push_back(ref);
  }
  const auto results = mc::compare_report(report, refs);
  Json rows = Json::array();
  findings.push_back("| key | MC | SE | oracle | z | closed form | closed form / oracle | verdict |");
  findings.push_back("|---|---|---|---|---|---|---|---|");
  for (const auto& c : results) {
    const std::string key = "(p=" + std::to_string(c.key.p) + ", q=" + std::to_string(c.key.q) +
                            ", t1=" + fmt(c.key.t1) + ", t2=" + fmt(c.key.t2) + ")";
    rows.push_back({{"p", c.key.p},
                    {"q", c.key.q},
                    {"t1", c.key.t1},
                    {"t2", c.key.t2},
                    {"mc", c.mc},
                    {"se", c.se},
                    {"oracle", c.oracle},
                    {"z", number_or_null(c.z)},
                    {"theory", c.theory ? Json(*c.theory) : Json(nullptr)},
                    {"ratio", c.ratio ? Json(*c.ratio) : Json(nullptr)},
                    {"verdict", mc::to_string(c.verdict)}});
    s.rows.push_back({"compare_mc", c.key.p, c.key.q, c.key.t1, c.key.t2, c.mc, c.se, plan.config.n,
                      plan.config.bandwidth, plan.replicates, seed});
    s.rows.push_back({"compare_oracle", c.key.p, c.key.q, c.key.t1, c.key.t2, c.oracle, std::nullopt, plan.config.n,
                      plan.config.bandwidth, std::nullopt, std::nullopt});
    findings.push_back("| " + key + " | " + fmt(c.mc) + " | " + fmt(c.se) + " | " + fmt(c.oracle) + " | " +
                       fmt(c.z, 3) + " | " + (c.theory ? fmt(*c.theory) : "-") + " | " +
                       (c.ratio ? fmt(*c.ratio, 4) : "-") + " | " + mc::to_string(c.verdict) + " |");
    s.verdicts.push_back(verdict_line(c.verdict == mc::Verdict::pass, "MC vs oracle " + key + " z=" + fmt(c.z, 3)));
    if (c.ratio) s.verdicts.push_back("INFO closed form / finite-n oracle " + key + " = " + fmt(*c.ratio, 4));
  }
  s.payload["study"] = "comparison";
  s.payload["band"] = band_json(plan.config);
  s.payload["replicates"] = plan.replicates;
  s.payload["seed"] = seed;
  s.payload["rows"] = std::move(rows);
  return s;
}

Section probe_section(const Preset& preset, double gamma, const mc::StudyOptions& options,
                      std::vector<std::string>& findings) {
  std::vector<BandConfig> configs;
  for (int n : preset.probe_n) configs.push_back(BandConfig::with_rule(n, gamma, options.convention));
  const oracle::ProbeResult probe = oracle::limit_probe(2, 2, 1.0, 1.0, configs);
  const double closed_form = theory::limit_cov({2, 2, 1.0, 1.0}).value;
  Section s;
  Json values = Json::array();
  for (const auto& v : probe.values) {
    values.push_back(exact_json(v));
    s.rows.push_back({"probe_exact", 2, 2, 1.0, 1.0, v.value, std::nullopt, v.config.n, v.config.bandwidth,
                      std::nullopt, std::nullopt});
  }
  s.payload["study"] = "limit_probe";
  s.payload["values"] = std::move(values);
  s.payload["rel_gaps"] = probe.rel_gaps;
  s.payload["gaps_shrinking"] = probe.gaps_shrinking;
  s.payload["limit_estimate"] = probe.limit_estimate ? Json(*probe.limit_estimate) : Json(nullptr);
  s.payload["closed_form"] = closed_form;
  const bool pass = probe.gaps_shrinking && !probe.rel_gaps.empty() && probe.rel_gaps.back() <= 0.1;
  s.verdicts.push_back(verdict_line(pass, "oracle limit probe p=q=2 final relative gap " +
                                              fmt(probe.rel_gaps.empty() ? 0.0 : probe.rel_gaps.back())));
  findings.push_back("| n | bn | exact variance of w_2(1) |");
  findings.push_back("|---|---|---|");
  for (const auto& v : probe.values) {
    findings.push_back("| " + std::to_string(v.config.n) + " | " + std::to_string(v.config.bandwidth) + " | " +
                       fmt(v.value, 8) + " |");
  }
  if (probe.limit_estimate) {
    const double ratio = closed_form / *probe.limit_estimate;
    s.payload["ratio"] = ratio;
    s.rows.push_back({"probe_limit_estimate", 2, 2, 1.0, 1.0, *probe.limit_estimate, std::nullopt, std::nullopt,
                      std::nullopt, std::nullopt, std::nullopt});
    findings.push_back("");
    findings.push_back("Extrapolated oracle limit (linear in bn/n): " + fmt(*probe.limit_estimate, 6) +
                       ". Closed-form limit: " + fmt(closed_form) + ". Ratio closed form / oracle limit: " +
                       fmt(ratio, 4) + " (INFO).");
    s.verdicts.push_back("INFO closed form / oracle limit estimate = " + fmt(ratio, 4));
  }
  return s;
}

void append(std::vector<Section>& sections, Section s, std::ostream& out) {
  for (const auto& line : s.verdicts) out << line << '\n';
  sections.push_back(std::move(s));
}

std::size_t pick(const std::optional<std::size_t>& flag, std::size_t fallback) { return flag ? *flag : fallback; }

}  // namespace

int run_study(const StudyArgs& args, std::ostream& out) {
  if (!args.seed) throw ConfigError("--seed is required for stochastic subcommands");
  const std::uint64_t seed = *args.seed;
  const mc::StudyOptions options = options_from(args, args.independent);

  Json echo;
  echo["study"] = args.name;
  echo["seed"] = seed;
  echo["convention"] = args.independent ? "independent" : "symmetric";
  echo["trace_method"] = args.trace_method;
  echo["gamma"] = args.gamma;

  std::vector<Section> sections;
  std::vector<std::string> findings;
  if (args.name == "odd") {
    const std::size_t r = pick(args.replicates, 600);
    echo["p"] = args.odd_p;
    echo["n_list"] = args.n_list;
    echo["replicates"] = r;
    echo["laws"] = args.laws;
    append(sections, odd_section(args.odd_p, args.n_list, args.gamma, r, seed, args.laws, options), out);
  } else if (args.name == "tightness") {
    const int n = args.n > 0 ? args.n : 512;
    const std::size_t r = pick(args.replicates, 1000);
    echo["p"] = args.even_p;
    echo["n"] = n;
    echo["replicates"] = r;
    echo["anchor"] = args.anchor;
    echo["gaps"] = args.gaps;
    const BandConfig config = BandConfig::with_rule(n, args.gamma, options.convention);
    append(sections, tightness_section(args.even_p, config, args.anchor, args.gaps, r, seed, options), out);
  } else if (args.name == "lsd") {
    const int n = args.n > 0 ? args.n : 2048;
    const std::size_t r = pick(args.replicates, 50);
    echo["n"] = n;
    echo["replicates"] = r;
    echo["k_list"] = args.k_list;
    const BandConfig config = BandConfig::with_rule(n, args.gamma, options.convention);
    append(sections, lsd_section(config, args.k_list, r, seed, options), out);
  } else if (args.name == "sup") {
    const int n = args.n > 0 ? args.n : 512;
    const std::size_t r = pick(args.replicates, 500);
    echo["p"] = args.even_p;
    echo["n"] = n;
    echo["replicates"] = r;
    echo["horizon"] = args.horizon;
    echo["density"] = args.density;
    const BandConfig config = BandConfig::with_rule(n, args.gamma, options.convention);
    append(sections, sup_section(args.even_p, config, args.horizon, args.density, r, seed, options), out);
  } else if (args.name == "all") {
    const Preset preset = preset_named(args.preset);
    echo["preset"] = args.preset;
    const auto sub = [&](std::uint64_t k) { return mc::derive_seed(seed, k); };
    findings.push_back("## Closed form versus exact finite-n oracle");
    findings.push_back("");
    append(sections, probe_section(preset, args.gamma, options, findings), out);
    findings.push_back("");
    findings.push_back("## Monte Carlo versus oracle");
    findings.push_back("");
    append(sections, comparison_section(preset, sub(1), options, findings), out);
    append(sections, odd_section(1, preset.odd_n, args.gamma, preset.odd_r, sub(2), args.laws, options), out);
    append(sections, odd_section(3, preset.odd_n, args.gamma, preset.odd_r, sub(3), args.laws, options), out);
    append(sections,
           tightness_section(2, BandConfig::with_rule(preset.tight_n, args.gamma, options.convention), 0.5,
                             args.gaps, preset.tight_r, sub(4), options),
           out);
    for (bool independent : {false, true}) {
      const mc::StudyOptions o = options_from(args, independent);
      append(sections,
             lsd_section(BandConfig::with_rule(preset.lsd_n, args.gamma, o.convention), {2, 3, 4}, preset.lsd_r,
                         sub(independent ? 6 : 5), o),
             out);
    }
    append(sections,
           sup_section(2, BandConfig::with_rule(preset.sup_n, args.gamma, options.convention), 1.0, 8, preset.sup_r,
                       sub(7), options),
           out);
  } else {
    throw ConfigError("unknown study '" + args.name + "' (expected odd|tightness|lsd|sup|all)");
  }

  Json report = envelope(echo, "study");
  Json results = Json::array();
  std::vector<CsvRow> rows;
  for (auto& s : sections) {
    results.push_back(s.payload);
    rows.insert(rows.end(), s.rows.begin(), s.rows.end());
  }
  report["results"] = std::move(results);

  OutputSet files(args.out_dir);
  files.write("report.json", report.dump(2) + "\n");
  files.write("report.csv", csv_text(rows, echo));
  if (args.name == "all") {
    std::ostringstream md;
    md << "# hanklab findings\n\n";
    md << "Tool version " << kVersion << ". Resolved configuration:\n\n```json\n" << echo.dump(2) << "\n```\n\n";
    for (const auto& line : findings) md << line << '\n';
    md << "\n## Verdicts\n\n";
    for (const auto& s : sections) {
      for (const auto& line : s.verdicts) md << "- " << line << '\n';
    }
    files.write("findings.md", md.str());
  }
  files.commit();
  for (const auto& path : files.written()) out << "wrote " << path.string() << '\n';
  return 0;
}

}  // namespace hanklab::cli
