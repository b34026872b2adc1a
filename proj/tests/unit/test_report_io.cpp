#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hanklab/mc.hpp"
#include "hanklab/report_io.hpp"
#include "hanklab/version.hpp"

using namespace hanklab;

namespace {

mc::McReport tiny_report() {
  mc::ExperimentPlan plan;
  plan.config = BandConfig::with_bandwidth(16, 3);
  plan.p_list = {2, 4};
  plan.times = {1.0, 2.0};
  plan.replicates = 20;
  plan.master_seed = 5;
  return mc::run_experiment(plan);
}

}  // namespace

TEST(ReportIo, FormatDouble) {
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_double(2.0), "2");
  EXPECT_EQ(io::format_double(NAN), "nan");
  EXPECT_EQ(io::format_double(-INFINITY), "-inf");
}

TEST(ReportIo, JsonCarriesSchemaVersionAndConfig) {
  const auto report = tiny_report();
  std::ostringstream out;
  io::write_report_json(out, report, R"({"n":16})");
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j.at("schema"), kReportSchema);
  EXPECT_EQ(j.at("version"), std::string(kVersion));
  EXPECT_EQ(j.at("kind"), "simulate");
  EXPECT_EQ(j.at("config").at("n"), 16);
  EXPECT_EQ(j.at("moments").size(), 4u);
  EXPECT_EQ(j.at("covariances").size(), 10u);
  EXPECT_FALSE(j.contains("wall_seconds"));
  EXPECT_EQ(j.at("plan").at("master_seed"), 5);
}

TEST(ReportIo, CsvHeaderAndRows) {
  const auto report = tiny_report();
  std::ostringstream out;
  io::write_report_csv(out, report, R"({"n":16})");
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, std::string("# hanklab ") + std::string(kVersion) + R"( config={"n":16})");
  std::getline(in, line);
  EXPECT_EQ(line, "kind,p,q,t1,t2,value,se,n,bn,R,seed");
  int rows = 0;
  int covariance_rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (line.rfind("covariance,", 0) == 0) ++covariance_rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 10) << line;
  }
  EXPECT_EQ(covariance_rows, 10);
  EXPECT_EQ(rows, 4 * 5 + 10);
}

TEST(ReportIo, OutputIsIndependentOfWorkers) {
  mc::ExperimentPlan plan;
  plan.config = BandConfig::with_bandwidth(16, 3);
  plan.replicates = 30;
  plan.master_seed = 77;
  plan.workers = 1;
  std::ostringstream a;
  io::write_report_json(a, mc::run_experiment(plan), "{}");
  plan.workers = 4;
  std::ostringstream b;
  io::write_report_json(b, mc::run_experiment(plan), "{}");
  EXPECT_EQ(a.str(), b.str());
}
