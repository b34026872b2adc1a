#include "cli.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli_support.hpp"
#include "hanklab/combinat.hpp"
#include "hanklab/errors.hpp"
#include "hanklab/mc.hpp"
#include "hanklab/report_io.hpp"
#include "hanklab/theory.hpp"
#include "hanklab/version.hpp"
#include "run_config.hpp"
#include "study_command.hpp"

namespace hanklab::cli {
namespace {

// Flags naming a band configuration.
struct BandFlags {
  int n = 64;
  int bn = 0;  // 0 means derive from gamma
  double gamma = kDefaultBandwidthExponent;
  bool independent = false;

  void attach(CLI::App* app) {
    app->add_option("--n", n, "Matrix order")->capture_default_str();
    app->add_option("--bn", bn, "Bandwidth (overrides --gamma)");
    app->add_option("--gamma", gamma, "Bandwidth exponent, bn = floor(n^gamma)")->capture_default_str();
    app->add_flag("--independent", independent, "Independent negative-index symbols");
  }
  [[nodiscard]] BandConfig resolve() const {
    return resolve_band(n, bn > 0 ? std::optional<int>(bn) : std::nullopt, gamma, independent);
  }
};

// Optional report files for the deterministic subcommands.
void maybe_write(const std::string& dir, const Json& report, const std::vector<CsvRow>& rows, const Json& echo,
                 std::ostream& out) {
  if (dir.empty()) return;
  OutputSet files(dir);
  files.write("report.json", report.dump(2) + "\n");
  files.write("report.csv", csv_text(rows, echo));
  files.commit();
  for (const auto& path : files.written()) out << "wrote " << path.string() << '\n';
}

int cmd_partitions(int p, int q, const std::string& format, int cap, std::ostream& out) {
  if (format != "csv" && format != "json") throw ConfigError("--format must be csv or json");
  const combinat::ClassTally t = combinat::class_counts(p, q, cap);
  if (format == "csv") {
    out << "p,q,delta2,delta2_tilde,delta24,r_value\n";
    out << t.p << ',' << t.q << ',' << t.delta2 << ',' << t.delta2_tilde << ',' << t.delta24 << ',' << t.r_value
        << '\n';
  } else {
    Json j = {{"p", t.p},
              {"q", t.q},
              {"delta2", t.delta2},
              {"delta2_tilde", t.delta2_tilde},
              {"delta24", t.delta24},
              {"r_value", t.r_value}};
    out << j.dump(2) << '\n';
  }
  return 0;
}

Json cov_json(const theory::CovarianceQuery& query, const theory::LimitCovariance& cov) {
  Json terms = Json::array();
  for (const auto& term : cov.terms) {
    terms.push_back({{"r", term.r},
                     {"binomial", term.binomial},
                     {"time_factor", term.time_factor},
                     {"R", term.r_value},
                     {"gamma_factor", term.gamma_factor},
                     {"contribution", term.contribution}});
  }
  Json j;
  j["query"] = {{"p", query.p}, {"q", query.q}, {"t1", query.t1}, {"t2", query.t2}};
  j["value"] = cov.value;
  j["terms"] = std::move(terms);
  j["convention"] = std::string(theory::to_string(cov.convention));
  return j;
}

std::vector<double> checked_grid(const std::vector<double>& times) {
  if (times.empty()) throw ConfigError("--times must list at least one time");
  return times;
}

void run_simulate(const std::string& config_path, CLI::App* sub, RunConfig flags, const std::string& out_dir,
                  unsigned workers, std::ostream& out) {
  RunConfig cfg;
  if (!config_path.empty()) cfg.merge_json(read_json_file(config_path));
  const auto given = [&](const char* name) { return sub->get_option(name)->count() > 0; };
  if (given("--n")) cfg.n = flags.n;
  if (given("--gamma") && given("--bn")) throw ConfigError("give either --gamma or --bn, not both");
  if (given("--gamma")) {
    cfg.gamma = flags.gamma;
    cfg.bn.reset();
  }
  if (given("--bn")) {
    cfg.bn = flags.bn;
    cfg.gamma.reset();
  }
  if (given("--kind")) cfg.kind = flags.kind;
  if (given("--law")) cfg.law = flags.law;
  if (given("--include-a0")) cfg.include_a0 = flags.include_a0;
  if (given("--independent")) cfg.independent_negative_indices = flags.independent_negative_indices;
  if (given("--p")) cfg.p_list = flags.p_list;
  if (given("--q")) cfg.q = flags.q;
  if (given("--times")) cfg.times = flags.times;
  if (given("--replicates")) cfg.replicates = flags.replicates;
  if (given("--seed")) cfg.seed = flags.seed;
  if (given("--centering")) cfg.centering = flags.centering;
  if (given("--trace-method")) cfg.trace_method = flags.trace_method;
  if (given("--oracle-budget")) cfg.oracle_budget = flags.oracle_budget;
  if (given("--formula-budget")) cfg.formula_budget = flags.formula_budget;
  if (given("--formats")) cfg.formats = flags.formats;
  if (!out_dir.empty()) cfg.output_dir = out_dir;

  mc::ExperimentPlan plan = cfg.to_plan();
  plan.workers = workers;
  const Json echo = cfg.to_json();
  const std::string echo_text = echo.dump();
  const mc::McReport report = mc::run_experiment(plan);

  OutputSet files(cfg.output_dir);
  for (const auto& format : cfg.formats) {
    std::ostringstream buffer;
    if (format == "json") {
      io::write_report_json(buffer, report, echo_text);
      files.write("report.json", buffer.str());
    } else {
      io::write_report_csv(buffer, report, echo_text);
      files.write("report.csv", buffer.str());
    }
  }
  Json timing = envelope(echo, "timing");
  timing["wall_seconds"] = report.wall_seconds;
  timing["workers"] = report.workers_used;
  files.write("timing.json", timing.dump(2) + "\n");
  files.commit();
  for (const auto& path : files.written()) out << "wrote " << path.string() << '\n';
}

int exit_code_for(const std::exception_ptr& error, std::ostream& err) {
  try {
    std::rethrow_exception(error);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hanklab: band Hankel eigenvalue-statistics laboratory", "hanklab"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // partitions
  int part_p = 2;
  int part_q = 2;
  int part_cap = combinat::kDefaultEnumerationCap;
  std::string part_format = "csv";
  CLI::App* partitions = app.add_subcommand("partitions", "Class counts of pair partitions of [p+q]");
  partitions->add_option("--p", part_p, "Left block size")->required();
  partitions->add_option("--q", part_q, "Right block size")->required();
  partitions->add_option("--format", part_format, "csv or json")->capture_default_str();
  partitions->add_option("--cap", part_cap, "Largest enumerated p+q")->capture_default_str();

  // theory
  CLI::App* theory_cmd = app.add_subcommand("theory", "Closed-form limiting quantities");
  theory_cmd->require_subcommand(1);
  int th_p = 2;
  int th_q = 2;
  int th_k = 2;
  double th_t1 = 1.0;
  double th_t2 = 1.0;
  bool th_tilde = false;
  std::string th_convention = "r_index";
  std::vector<double> th_times{1.0};
  std::uint64_t th_seed = 0;
  std::string th_out;
  CLI::App* th_cov = theory_cmd->add_subcommand("cov", "Limit covariance of W_p(t1), W_q(t2)");
  th_cov->add_option("--p", th_p)->capture_default_str();
  th_cov->add_option("--q", th_q)->capture_default_str();
  th_cov->add_option("--t1", th_t1)->capture_default_str();
  th_cov->add_option("--t2", th_t2)->capture_default_str();
  th_cov->add_option("--convention", th_convention, "r_index or literal_q")->capture_default_str();
  th_cov->add_flag("--tilde", th_tilde, "Also report the a_0-extended covariance");
  th_cov->add_option("--out", th_out, "Also write report.json/report.csv here");
  CLI::App* th_moment = theory_cmd->add_subcommand("moment", "Limiting spectral moments");
  th_moment->add_option("--k", th_k)->capture_default_str();
  CLI::App* th_matrix = theory_cmd->add_subcommand("matrix", "Limit covariance matrix on a grid");
  th_matrix->add_option("--p", th_p)->capture_default_str();
  th_matrix->add_option("--times", th_times)->delimiter(',')->capture_default_str();
  th_matrix->add_option("--convention", th_convention)->capture_default_str();
  CLI::App* th_sample = theory_cmd->add_subcommand("sample", "One draw of the limit process on a grid");
  th_sample->add_option("--p", th_p)->capture_default_str();
  th_sample->add_option("--times", th_times)->delimiter(',')->capture_default_str();
  th_sample->add_option("--seed", th_seed)->required();
  th_sample->add_option("--convention", th_convention)->capture_default_str();

  // oracle
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Exact finite-n Gaussian moments");
  oracle_cmd->require_subcommand(1);
  BandFlags or_band;
  int or_p = 2;
  int or_q = 2;
  double or_t = 1.0;
  double or_t1 = 1.0;
  double or_t2 = 1.0;
  bool or_a0 = false;
  std::uint64_t or_budget = oracle::kDefaultTermBudget;
  std::vector<int> or_n_list{64, 128, 256};
  std::string or_out;
  const auto oracle_common = [&](CLI::App* sub) {
    or_band.attach(sub);
    sub->add_flag("--include-a0", or_a0, "Use Tr (H + a_0 I)^p");
    sub->add_option("--budget", or_budget, "Term budget")->capture_default_str();
    sub->add_option("--out", or_out, "Also write report.json/report.csv here");
  };
  CLI::App* or_mean = oracle_cmd->add_subcommand("mean", "Exact E Tr H(t)^p (unscaled)");
  oracle_common(or_mean);
  or_mean->add_option("--p", or_p)->capture_default_str();
  or_mean->add_option("--t", or_t)->capture_default_str();
  CLI::App* or_cov = oracle_cmd->add_subcommand("cov", "Exact Cov(w_p(t1), w_q(t2))");
  oracle_common(or_cov);
  or_cov->add_option("--p", or_p)->capture_default_str();
  or_cov->add_option("--q", or_q)->capture_default_str();
  or_cov->add_option("--t1", or_t1)->capture_default_str();
  or_cov->add_option("--t2", or_t2)->capture_default_str();
  CLI::App* or_probe = oracle_cmd->add_subcommand("probe", "Exact covariance along increasing n");
  or_probe->add_option("--p", or_p)->capture_default_str();
  or_probe->add_option("--q", or_q)->capture_default_str();
  or_probe->add_option("--t1", or_t1)->capture_default_str();
  or_probe->add_option("--t2", or_t2)->capture_default_str();
  or_probe->add_option("--n-list", or_n_list)->delimiter(',')->capture_default_str();
  or_probe->add_option("--gamma", or_band.gamma)->capture_default_str();
  or_probe->add_flag("--independent", or_band.independent);
  or_probe->add_flag("--include-a0", or_a0);
  or_probe->add_option("--budget", or_budget)->capture_default_str();
  or_probe->add_option("--out", or_out);

  // simulate
  RunConfig sim;
  std::string sim_config;
  std::string sim_out;
  unsigned workers = 0;
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo estimates of w_p moments and covariances");
  simulate->add_option("--config", sim_config, "JSON RunConfig file; flags override its values");
  simulate->add_option("--n", sim.n, "Matrix order")->capture_default_str();
  simulate->add_option("--gamma", sim.gamma, "Bandwidth exponent");
  simulate->add_option("--bn", sim.bn, "Bandwidth");
  simulate->add_option("--kind", sim.kind, "brownian or iid")->capture_default_str();
  simulate->add_option("--law", sim.law, "standard_gaussian, rademacher or centered_uniform")->capture_default_str();
  simulate->add_flag("--include-a0", sim.include_a0, "Add the a_0 diagonal term");
  simulate->add_flag("--independent", sim.independent_negative_indices, "Independent negative-index symbols");
  simulate->add_option("--p", sim.p_list, "Exponents")->delimiter(',')->capture_default_str();
  simulate->add_option("--q", sim.q, "Extra exponent for cross covariances");
  simulate->add_option("--times", sim.times, "Strictly increasing grid")->delimiter(',')->capture_default_str();
  simulate->add_option("--replicates", sim.replicates)->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Master seed (required here or in the config)");
  simulate->add_option("--centering", sim.centering, "sample_mean or wick_exact")->capture_default_str();
  simulate->add_option("--trace-method", sim.trace_method, "eigen, matmul or formula")->capture_default_str();
  simulate->add_option("--oracle-budget", sim.oracle_budget)->capture_default_str();
  simulate->add_option("--formula-budget", sim.formula_budget)->capture_default_str();
  simulate->add_option("--formats", sim.formats, "json,csv")->delimiter(',')->capture_default_str();
  simulate->add_option("--out", sim_out, "Output directory (default ./out)");
  simulate->add_option("--workers", workers, "Worker threads, 0 = logical cores")->capture_default_str();

  // study
  StudyArgs study;
  CLI::App* study_cmd = app.add_subcommand("study", "Empirical studies and the findings report");
  study_cmd->require_subcommand(1);
  const auto study_common = [&](CLI::App* sub) {
    sub->add_option("--seed", study.seed, "Master seed")->required();
    sub->add_option("--out", study.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--workers", study.workers, "Worker threads, 0 = logical cores")->capture_default_str();
    sub->add_flag("--independent", study.independent, "Independent negative-index symbols");
    sub->add_option("--trace-method", study.trace_method, "eigen or matmul")->capture_default_str();
    sub->add_option("--gamma", study.gamma, "Bandwidth exponent")->capture_default_str();
  };
  CLI::App* st_odd = study_cmd->add_subcommand("odd", "Variance decay of odd-p statistics");
  study_common(st_odd);
  st_odd->add_option("--p", study.odd_p)->capture_default_str();
  st_odd->add_option("--n-list", study.n_list)->delimiter(',')->capture_default_str();
  st_odd->add_option("--replicates", study.replicates, "Default 600");
  st_odd->add_option("--laws", study.laws)->delimiter(',')->capture_default_str();
  CLI::App* st_tight = study_cmd->add_subcommand("tightness", "Fourth moments of increments");
  study_common(st_tight);
  st_tight->add_option("--p", study.even_p)->capture_default_str();
  st_tight->add_option("--n", study.n, "Default 512");
  st_tight->add_option("--replicates", study.replicates, "Default 1000");
  st_tight->add_option("--anchor", study.anchor)->capture_default_str();
  st_tight->add_option("--gaps", study.gaps)->delimiter(',')->capture_default_str();
  CLI::App* st_lsd = study_cmd->add_subcommand("lsd", "Empirical spectral moments");
  study_common(st_lsd);
  st_lsd->add_option("--n", study.n, "Default 2048");
  st_lsd->add_option("--replicates", study.replicates, "Default 50");
  st_lsd->add_option("--k", study.k_list)->delimiter(',')->capture_default_str();
  CLI::App* st_sup = study_cmd->add_subcommand("sup", "Sup functional, finite n versus the limit process");
  study_common(st_sup);
  st_sup->add_option("--p", study.even_p)->capture_default_str();
  st_sup->add_option("--n", study.n, "Default 512");
  st_sup->add_option("--replicates", study.replicates, "Default 500");
  st_sup->add_option("--horizon", study.horizon)->capture_default_str();
  st_sup->add_option("--density", study.density)->capture_default_str();
  CLI::App* st_all = study_cmd->add_subcommand("all", "Every study plus findings.md");
  study_common(st_all);
  st_all->add_option("--preset", study.preset, "quick or full")->capture_default_str();

  // matrix
  BandFlags mx_band;
  std::uint64_t mx_seed = 0;
  double mx_t = 1.0;
  bool mx_scaled = false;
  bool mx_a0 = false;
  std::string mx_kind = "brownian";
  std::string mx_law = "standard_gaussian";
  CLI::App* matrix = app.add_subcommand("matrix", "Dump one sampled matrix as CSV");
  mx_band.attach(matrix);
  matrix->add_option("--seed", mx_seed)->required();
  matrix->add_option("--t", mx_t)->capture_default_str();
  matrix->add_option("--kind", mx_kind)->capture_default_str();
  matrix->add_option("--law", mx_law)->capture_default_str();
  matrix->add_flag("--scaled", mx_scaled, "Divide by sqrt(bn)");
  matrix->add_flag("--include-a0", mx_a0, "Add the a_0 diagonal term (implies --scaled)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      app.exit(e, out, err);
      return 0;
    }
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (partitions->parsed()) return cmd_partitions(part_p, part_q, part_format, part_cap, out);

    if (th_cov->parsed()) {
      const theory::CovarianceQuery query = theory::CovarianceQuery{th_p, th_q, th_t1, th_t2}.ordered();
      const theory::RConvention convention = theory::parse_r_convention(th_convention);
      Json j = cov_json(query, theory::limit_cov(query, convention));
      if (th_tilde) {
        const theory::TildeCovariance tc = theory::tilde_cov(query, convention);
        j["tilde"] = {{"value", tc.value}, {"correction", tc.correction}, {"derived", tc.derived}};
      }
      out << j.dump(2) << '\n';
      const Json echo = {{"command", "theory cov"}, {"p", th_p}, {"q", th_q}, {"t1", th_t1}, {"t2", th_t2},
                         {"convention", th_convention}};
      Json report = envelope(echo, "theory_cov");
      report["result"] = j;
      maybe_write(th_out, report, {{"theory_cov", query.p, query.q, query.t1, query.t2, j["value"].get<double>(), std::nullopt,
                                    std::nullopt, std::nullopt, std::nullopt, std::nullopt}},
                  echo, out);
      return 0;
    }
    if (th_moment->parsed()) {
      Json j = {{"k", th_k}, {"lsd_moment", theory::lsd_moment(th_k)}, {"scaled_moment_R", theory::scaled_moment_R(th_k)}};
      out << j.dump(2) << '\n';
      return 0;
    }
    if (th_matrix->parsed()) {
      const std::vector<double> grid = checked_grid(th_times);
      const Eigen::MatrixXd m = theory::limit_cov_matrix(th_p, grid, theory::parse_r_convention(th_convention));
      Json rows = Json::array();
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(row);
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
      Json j = {{"p", th_p},
                {"times", grid},
                {"matrix", rows},
                {"trace", m.trace()},
                {"min_eigenvalue", solver.eigenvalues().minCoeff()}};
      out << j.dump(2) << '\n';
      return 0;
    }
    if (th_sample->parsed()) {
      const std::vector<double> grid = checked_grid(th_times);
      const theory::LimitProcessSample s =
          theory::sample_limit_process(th_p, grid, th_seed, theory::parse_r_convention(th_convention));
      Json j = {{"p", s.p},
                {"seed", th_seed},
                {"times", s.times},
                {"values", s.values},
                {"min_eigenvalue", s.min_eigenvalue},
                {"ridge", s.ridge},
                {"cholesky_condition", number_or_null(s.cholesky_condition)}};
      out << j.dump(2) << '\n';
      return 0;
    }

    if (or_mean->parsed() || or_cov->parsed()) {
      const BandConfig config = or_band.resolve();
      const oracle::OracleOptions options{or_a0, or_budget};
      const bool mean = or_mean->parsed();
      const oracle::ExactValue v = mean ? oracle::exact_mean_trace(config, or_p, or_t, options)
                                        : oracle::exact_cov_w(config, or_p, or_q, or_t1, or_t2, options);
      Json j = exact_json(v);
      j["include_a0"] = or_a0;
      out << j.dump(2) << '\n';
      Json echo = {{"command", mean ? "oracle mean" : "oracle cov"}, {"band", band_json(config)}, {"p", or_p}};
      if (mean) {
        echo["t"] = or_t;
      } else {
        echo["q"] = or_q;
        echo["t1"] = or_t1;
        echo["t2"] = or_t2;
      }
      echo["include_a0"] = or_a0;
      echo["budget"] = or_budget;
      Json report = envelope(echo, mean ? "oracle_mean" : "oracle_cov");
      report["result"] = j;
      const CsvRow row = mean ? CsvRow{"oracle_mean", or_p, or_p, or_t, or_t, v.value, std::nullopt, config.n,
                                       config.bandwidth, std::nullopt, std::nullopt}
                              : CsvRow{"oracle_cov", or_p, or_q, or_t1, or_t2, v.value, std::nullopt, config.n,
                                       config.bandwidth, std::nullopt, std::nullopt};
      maybe_write(or_out, report, {row}, echo, out);
      return 0;
    }
    if (or_probe->parsed()) {
      std::vector<BandConfig> configs;
      for (int n : or_n_list) configs.push_back(resolve_band(n, std::nullopt, or_band.gamma, or_band.independent));
      const oracle::ProbeResult probe =
          oracle::limit_probe(or_p, or_q, or_t1, or_t2, configs, oracle::OracleOptions{or_a0, or_budget});
      Json values = Json::array();
      std::vector<CsvRow> rows;
      for (const auto& v : probe.values) {
        values.push_back(exact_json(v));
        rows.push_back({"probe_exact", or_p, or_q, or_t1, or_t2, v.value, std::nullopt, v.config.n,
                        v.config.bandwidth, std::nullopt, std::nullopt});
      }
      Json j;
      j["values"] = std::move(values);
      j["abs_gaps"] = probe.abs_gaps;
      j["rel_gaps"] = probe.rel_gaps;
      j["cauchy_gap"] = probe.cauchy_gap;
      j["gaps_shrinking"] = probe.gaps_shrinking;
      j["limit_estimate"] = probe.limit_estimate ? Json(*probe.limit_estimate) : Json(nullptr);
      if (or_p % 2 == 0 && or_q % 2 == 0 && !or_a0) {
        const double closed = theory::limit_cov(theory::CovarianceQuery{or_p, or_q, or_t1, or_t2}.ordered()).value;
        j["closed_form"] = closed;
        if (probe.limit_estimate && *probe.limit_estimate != 0.0) j["ratio"] = closed / *probe.limit_estimate;
      }
      out << j.dump(2) << '\n';
      const Json echo = {{"command", "oracle probe"}, {"p", or_p},        {"q", or_q},
                         {"t1", or_t1},               {"t2", or_t2},      {"n_list", or_n_list},
                         {"gamma", or_band.gamma},    {"include_a0", or_a0}, {"budget", or_budget}};
      Json report = envelope(echo, "oracle_probe");
      report["result"] = j;
      maybe_write(or_out, report, rows, echo, out);
      return 0;
    }

    if (simulate->parsed()) {
      run_simulate(sim_config, simulate, sim, sim_out, workers, out);
      return 0;
    }

    for (CLI::App* sub : {st_odd, st_tight, st_lsd, st_sup, st_all}) {
      if (sub->parsed()) {
        study.name = sub->get_name();
        return run_study(study, out);
      }
    }

    if (matrix->parsed()) {
      const BandConfig config = mx_band.resolve();
      EntryModel model;
      model.kind = parse_entry_kind(mx_kind);
      model.law = parse_law(mx_law);
      model.include_a0 = mx_a0;
      const double grid[] = {model.kind == EntryKind::iid ? 1.0 : mx_t};
      const SymbolPaths paths = sample_symbol_paths(model, config, grid, mx_seed);
      SymmetricBandMatrix m = build_band_hankel(paths, 0, config);
      if (mx_scaled || mx_a0) m = scale_to_A(m, config);
      if (mx_a0) m = build_tilde_A(m, paths.a0(0), config);
      write_matrix_csv(out, m);
      return 0;
    }
  } catch (...) {
    return exit_code_for(std::current_exception(), err);
  }
  err << "no subcommand given\n";
  return 2;
}

}  // namespace hanklab::cli
