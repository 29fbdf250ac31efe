#include "hgv/cli.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"

using namespace hgv;

namespace {

struct Result {
  int status = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "hgverify");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.status = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string tri() { return fixtures::graph_path("tri.hg"); }

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("hgv_cli_test_" + name);
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST(Cli, oracle_passes_on_sample_graph) {
  const Result r = invoke({"oracle", "--graph", tri()});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_NE(r.out.find("PASS commutation"), std::string::npos);
}

TEST(Cli, params_paper_exact_text) {
  const Result r = invoke({"params", "--graph", tri(), "--paper-exact"});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("k: 69984\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("m: 14849155748497\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("definetti_correction: 0.0555555555555"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("runnable: no (exceeds register budget)"), std::string::npos) << r.out;
}

TEST(Cli, params_json) {
  const Result r = invoke({"params", "--graph", tri(), "--k", "10", "--m", "2", "--epsilon", "0.1", "--format", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["params"]["k"], 10);
  EXPECT_EQ(j["params"]["m"], 2);
  EXPECT_EQ(j["params"]["runnable"], true);
}

TEST(Cli, verify_json_fields) {
  const Result r = invoke({"verify", "--graph", tri(), "--k", "20", "--m", "3", "--epsilon", "0.1", "--trials",
                           "4", "--seed", "17"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["format_version"], 1);
  EXPECT_EQ(j["command"], "verify");
  EXPECT_EQ(j["seed"], 17);
  ASSERT_EQ(j["points"].size(), 1u);
  const auto& pt = j["points"][0];
  EXPECT_EQ(pt["prover"], "honest");
  ASSERT_EQ(pt["runs"].size(), 4u);
  const auto& run = pt["runs"][0];
  ASSERT_EQ(run["alice"]["groups"].size(), 3u);
  for (const char* key : {"vertex", "r_i", "K_i", "threshold", "min_pass_count", "passed"})
    EXPECT_TRUE(run["alice"]["groups"][0].contains(key)) << key;
  EXPECT_TRUE(run["alice"].contains("accepted"));
  EXPECT_DOUBLE_EQ(run["auditor"]["compute_fidelity"].get<double>(), 1.0);
  EXPECT_TRUE(pt["summary"].contains("acceptance_rate"));
}

TEST(Cli, verify_csv_header) {
  const Result r = invoke({"verify", "--graph", tri(), "--k", "5", "--m", "1", "--epsilon", "0.1", "--trials",
                           "3", "--seed", "2", "--format", "csv"});
  ASSERT_EQ(r.status, 0) << r.err;
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "format_version,point,prover,trial,seed,accepted,compute_fidelity,K_1,K_2,K_3");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(Cli, verify_is_reproducible) {
  const std::vector<std::string> args{"verify", "--graph", tri(), "--k", "20", "--m", "2", "--epsilon", "0.1",
                                      "--noise-grid", "0,0.05", "--trials", "5", "--seed", "123"};
  const Result a = invoke(args);
  const Result b = invoke(args);
  ASSERT_EQ(a.status, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto threaded = args;
  threaded.insert(threaded.end(), {"--threads", "3"});
  const auto ja = nlohmann::json::parse(a.out), jt = nlohmann::json::parse(invoke(threaded).out);
  EXPECT_EQ(ja["points"], jt["points"]);
}

TEST(Cli, seed_is_recorded_when_omitted) {
  const Result r = invoke({"verify", "--graph", tri(), "--k", "2", "--m", "0", "--epsilon", "0.1", "--trials", "1"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  const auto seed = j["seed"].get<std::uint64_t>();
  const Result again = invoke({"verify", "--graph", tri(), "--k", "2", "--m", "0", "--epsilon", "0.1", "--trials",
                               "1", "--seed", std::to_string(seed)});
  EXPECT_EQ(nlohmann::json::parse(again.out)["points"], j["points"]);
}

TEST(Cli, script_prover) {
  const auto path = temp_file("script.txt", "# registers\nhonest 5\nzero\nhonest 5\n");
  const Result r = invoke({"verify", "--graph", tri(), "--k", "3", "--m", "1", "--epsilon", "0.1", "--trials", "2",
                           "--seed", "4", "--script", path.string()});
  EXPECT_EQ(r.status, 0) << r.err;
  const Result bad = invoke({"verify", "--graph", tri(), "--k", "3", "--m", "2", "--epsilon", "0.1", "--trials",
                             "2", "--seed", "4", "--script", path.string()});
  EXPECT_EQ(bad.status, 2);
  EXPECT_NE(bad.err.find("script"), std::string::npos);
}

TEST(Cli, state_dump) {
  const Result r = invoke({"state", "--graph", fixtures::graph_path("edge.hg")});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "00 0.5 0\n01 0.5 0\n10 0.5 0\n11 -0.5 0\n");
}

TEST(Cli, test_command_reports_rates) {
  const Result r = invoke({"test", "--graph", tri(), "--trials", "200", "--seed", "1"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["vertices"].size(), 3u);
  EXPECT_DOUBLE_EQ(j["vertices"][0]["pass_probability"].get<double>(), 0.75);
}

TEST(Cli, sample_distance_fields) {
  const Result r = invoke({"sample-distance", "--graph", tri(), "--seed", "3", "--shots", "100"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_GE(j["surrogate_fidelity"].get<double>(), 0.99);
  EXPECT_TRUE(j["within_bound"].get<bool>());
  EXPECT_EQ(j["config"]["bases"], "XXX");
  ASSERT_EQ(j["samplers"].size(), 2u);
  for (const auto& s : j["samplers"]) EXPECT_TRUE(s["triangle_holds"].get<bool>());
  EXPECT_EQ(j["empirical"]["shots"], 100);
}

TEST(Cli, bad_input_exits_nonzero) {
  EXPECT_NE(invoke({}).status, 0);
  EXPECT_NE(invoke({"verify", "--graph", tri()}).status, 0);
  EXPECT_NE(invoke({"params", "--graph", tri(), "--paper-exact", "--k", "3"}).status, 0);
  EXPECT_NE(invoke({"state", "--graph", tri(), "--format", "xml"}).status, 0);
  EXPECT_EQ(invoke({"state", "--graph", "/nonexistent/graph.hg"}).status, 2);
  const auto malformed = temp_file("bad.hg", "3\n1 x\n");
  const Result r = invoke({"state", "--graph", malformed.string()});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_EQ(invoke({"verify", "--graph", tri(), "--k", "1000", "--m", "0", "--epsilon", "0.1", "--budget", "10"})
                .status,
            2);
}

TEST(Cli, binary_writes_output_file) {
  const auto out = std::filesystem::temp_directory_path() / "hgv_cli_test_params.json";
  std::filesystem::remove(out);
  const std::string cmd = std::string(HGV_CLI_PATH) + " params --graph " + tri() +
                          " --paper-exact --format json --out " + out.string();
  const int status = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
  std::ifstream in(out);
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["params"]["k"], 69984);
  EXPECT_EQ(j["params"]["runnable"], false);
}
