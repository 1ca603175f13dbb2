#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rcm/cli.hpp"

using namespace rcm;
using namespace rcm::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_job(const JobSpec& job) {
  std::ostringstream out, err;
  int code = run(job, out, err);
  return {code, out.str(), err.str()};
}

// Runs the installed binary; stderr is folded into `out`.
Outcome run_binary(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + std::string(RCM_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, "", "popen failed"};
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, ""};
}

JobSpec edge_job(const std::string& command) {
  JobSpec j;
  j.command = command;
  j.graphs = {GraphSpec::from_edges({{1, 2}}, {{1}, {2}})};
  j.workers = 1;
  return j;
}

// Drops wall-clock fields so two runs of the same job compare equal.
json without_timing(json j) {
  if (j.is_object()) {
    j.erase("seconds");
    for (auto& [key, value] : j.items()) value = without_timing(value);
  } else if (j.is_array()) {
    for (auto& value : j) value = without_timing(value);
  }
  return j;
}

const char* kEdge = R"('{"edges":[[1,2]],"endpoints":[[1],[2]]}')";

}  // namespace

TEST(Cli, JobSpecRoundTrip) {
  JobSpec j = edge_job("gram-charlier");
  j.dimension = 2;
  j.beta = "0.75";
  j.intensity = Intensity::gaussian;
  j.endpoints = {{1.0, 2.0}, {0.5, -1.0}};
  j.lambdas = {0.5, 1.25};
  j.kappas = {1, 2, 0.1};
  j.x_min = -3.0;
  j.filter = PartitionFilter::single_pass_connected_non_flat;
  j.rows = {3, 5};
  j.seed = 99;
  EXPECT_EQ(job_from_json(to_json(j)), j);
  EXPECT_EQ(job_from_json(json::parse(to_json(j).dump())), j);
}

TEST(Cli, Parsers) {
  EXPECT_EQ(parse_lambda_grid("1,2.5"), (std::vector<double>{1, 2.5}));
  EXPECT_EQ(parse_lambda_grid("0:1:3"), (std::vector<double>{0, 0.5, 1}));
  EXPECT_THROW(parse_lambda_grid("1:2"), DomainError);
  EXPECT_THROW(parse_lambda_grid("x"), DomainError);
  EXPECT_TRUE(parse_beta("pi").is_pi);
  EXPECT_FALSE(parse_beta("2.5").is_pi);
  EXPECT_THROW(parse_beta("-1"), DomainError);
  EXPECT_EQ(parse_filter("single-pass"), PartitionFilter::single_pass_connected_non_flat);
  EXPECT_THROW(parse_filter("bogus"), DomainError);
  EXPECT_THROW(parse_intensity("uniform"), DomainError);
  EXPECT_THROW(parse_json_argument("{nope", "graph spec"), DomainError);
}

TEST(Cli, CumulantJson) {
  auto j = edge_job("cumulant");
  j.order = 2;
  auto r = run_job(j);
  ASSERT_EQ(r.code, kOk) << r.err;
  auto doc = json::parse(r.out);
  EXPECT_EQ(job_from_json(doc["job"]), j);
  EXPECT_EQ(doc["result"]["partition_count"], 6);
  EXPECT_TRUE(doc["result"]["exact"].get<bool>());
  auto poly = io::poly_from_json(doc["result"]["polynomial"]);
  EXPECT_EQ(poly, cumulant(2, j.graphs[0], model_of(j)).value);
}

TEST(Cli, PartitionsCensus) {
  JobSpec j;
  j.command = "partitions";
  j.order = 3;
  j.r = 2;
  auto doc = json::parse(run_job(j).out);
  auto census = io::census_from_json(doc["result"]["census"]);
  EXPECT_EQ(census.total, 68u);
  EXPECT_EQ(census.by_block_count, (std::map<int, std::uint64_t>{{2, 4}, {3, 32}, {4, 32}}));
  j.format = "csv";
  auto csv = run_job(j).out;
  EXPECT_EQ(csv.rfind("# job: ", 0), 0u);
  EXPECT_NE(csv.find("\nblocks,count\n2,4\n3,32\n4,32\n"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  auto diverging = edge_job("moment");
  diverging.graphs = {GraphSpec::from_edges({{1, 2}})};
  auto r = run_job(diverging);
  EXPECT_EQ(r.code, kDivergenceError);
  EXPECT_NE(r.err.find("{{(1,1)},{(1,2)}}"), std::string::npos) << r.err;

  auto invalid = edge_job("cumulant");
  invalid.graphs = {GraphSpec::from_edges({{1, 2}}, {{}})};
  r = run_job(invalid);
  EXPECT_EQ(r.code, kValidationError);
  EXPECT_NE(r.err.find("empty endpoint attachment"), std::string::npos);

  auto big = edge_job("cumulant");
  big.order = 6;
  big.max_elements = 10;
  EXPECT_EQ(run_job(big).code, kResourceError);

  auto unknown = edge_job("frobnicate");
  EXPECT_EQ(run_job(unknown).code, kValidationError);
}

TEST(Cli, ConnectivityCsv) {
  auto j = edge_job("connectivity");
  j.lambdas = {0.5, 1.0, 2.0};
  j.format = "csv";
  auto r = run_job(j);
  ASSERT_EQ(r.code, kOk) << r.err;
  std::istringstream lines(r.out);
  std::string comment, header, row;
  std::getline(lines, comment);
  std::getline(lines, header);
  EXPECT_EQ(comment.rfind("# job: ", 0), 0u);
  EXPECT_EQ(job_from_json(json::parse(comment.substr(7))), j);
  EXPECT_EQ(header, "lambda,lower_bound,series_estimate,last_gap");
  int rows = 0;
  while (std::getline(lines, row)) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(Cli, GramCharlierDefaultsToSixStandardDeviations) {
  auto j = edge_job("gram-charlier");
  j.kappas = {10.0, 4.0, 1.0, 0.5};
  j.points = 5;
  auto doc = json::parse(run_job(j).out);
  auto grid = doc["result"]["grid"];
  ASSERT_EQ(grid.size(), 5u);
  EXPECT_DOUBLE_EQ(grid[0]["x"].get<double>(), -2.0);
  EXPECT_DOUBLE_EQ(grid[4]["x"].get<double>(), 22.0);
  EXPECT_TRUE(grid[2].contains("order4"));
}

TEST(Cli, SimulateIsReproducible) {
  auto j = edge_job("simulate");
  j.lambdas = {1.0};
  j.replications = 200;
  j.seed = 5;
  auto a = json::parse(run_job(j).out);
  j.workers = 3;
  auto b = json::parse(run_job(j).out);
  EXPECT_EQ(a["result"]["estimates"], b["result"]["estimates"]);
  EXPECT_EQ(a["result"]["seed"], 5);
}

TEST(Cli, ValidateWithLegacyFilterPasses) {
  JobSpec j;
  j.command = "validate";
  j.filter = PartitionFilter::single_pass_connected_non_flat;
  auto r = run_job(j);
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(json::parse(r.out)["result"]["failed"], 0);
}

TEST(CliBinary, CumulantExample) {
  auto r = run_binary(std::string("cumulant -n 2 --workers 1 --graph ") + kEdge);
  ASSERT_EQ(r.code, 0) << r.out;
  auto doc = json::parse(r.out);
  EXPECT_EQ(doc["result"]["partition_count"], 6);
}

TEST(CliBinary, ExitCodes) {
  EXPECT_EQ(run_binary("").code, kValidationError);
  EXPECT_EQ(run_binary("cumulant -n 1 --graph '{\"edges\":[[1,2]],\"endpoints\":[[]]}'").code, kValidationError);
  EXPECT_EQ(run_binary("moment -n 1 --graph '{\"edges\":[[1,2]]}'").code, kDivergenceError);
  EXPECT_EQ(run_binary(std::string("cumulant -n 6 --graph ") + kEdge, "RCM_MAX_GROUND_SET=10").code, kResourceError);
  EXPECT_EQ(run_binary("partitions -n 2 -r 2", "RCM_MAX_GROUND_SET=99").code, kValidationError);
  EXPECT_EQ(run_binary("cumulant -n 1 --format xml --graph x").code, kValidationError);
}

TEST(CliBinary, ReplayEchoedJob) {
  auto first = run_binary(std::string("connectivity --lambda 0.5,1 --workers 1 --graph ") + kEdge);
  ASSERT_EQ(first.code, 0) << first.out;
  auto doc = json::parse(first.out);
  auto path = std::filesystem::temp_directory_path() / "rcm_replay_job.json";
  std::ofstream(path) << doc["job"].dump();
  auto again = run_binary("run --job @" + path.string());
  ASSERT_EQ(again.code, 0) << again.out;
  EXPECT_EQ(without_timing(json::parse(again.out)["result"]), without_timing(doc["result"]));
  std::filesystem::remove(path);
}
