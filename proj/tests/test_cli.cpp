#include "json.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = MODGAUSS_CLI;
const fs::path kConfigs = MODGAUSS_CONFIGS;

struct Result {
    int code;
    std::string out;
};

Result run(const std::string& args) {
    const fs::path log = fs::temp_directory_path() / ("modgauss_cli_" + std::to_string(::getpid()) + ".log");
    int status = std::system((kCli + " " + args + " > " + log.string() + " 2>&1").c_str());
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("modgauss_test_" + std::to_string(::getpid())) / name;
    fs::create_directories(p);
    return p;
}

fs::path write_config(const std::string& name, const json& j) {
    auto p = scratch("configs") / (name + ".json");
    std::ofstream(p) << j.dump(2);
    return p;
}

json read_json(const fs::path& p) {
    std::ifstream in(p);
    return json::parse(in);
}

// CSV content without the leading '#' header line.
std::string csv_body(const fs::path& p) {
    std::ifstream in(p);
    std::string line, body;
    while (std::getline(in, line))
        if (line.empty() || line[0] != '#') body += line + "\n";
    return body;
}

json small_clt() {
    return {{"pipeline", "clt"},
            {"model", {{"family", "permuton"}, {"variant", "uniform"}}},
            {"observable", {{"family", "permutation"}, {"value", "21"}}},
            {"n", 30},
            {"reps", 2000},
            {"seed", 4}};
}

}  // namespace

TEST(Cli, Catalog) {
    auto r = run("catalog");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("graphon:product"), std::string::npos);
    EXPECT_NE(r.out.find("thoma"), std::string::npos);
    EXPECT_NE(r.out.find("concentration"), std::string::npos);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("run").code, 2);
    EXPECT_EQ(run("run --config /nonexistent/cfg.json").code, 2);
    auto bad = scratch("configs") / "broken.json";
    std::ofstream(bad) << "{ not json";
    EXPECT_EQ(run("run --config " + bad.string()).code, 2);
    auto cfg = small_clt();
    cfg["pipeline"] = "nope";
    EXPECT_EQ(run("run --config " + write_config("unknown", cfg).string()).code, 2);
    cfg = small_clt();
    cfg["model"] = {{"family", "thoma"}, {"variant", "plancherel"}};
    EXPECT_EQ(run("run --config " + write_config("mismatch", cfg).string()).code, 2);
    cfg = small_clt();
    cfg["reps"] = 10;
    EXPECT_EQ(run("run --config " + write_config("few", cfg).string()).code, 2);
    cfg = small_clt();
    cfg["model"] = {{"family", "graphon"}, {"variant", "constant"}, {"p", "3/2"}};
    cfg["observable"] = {{"family", "graph"}, {"value", "K2"}};
    EXPECT_EQ(run("run --config " + write_config("outside", cfg).string()).code, 2);
}

TEST(Cli, DensityDemo) {
    auto out = scratch("density");
    auto r = run("run --config " + (kConfigs / "density_product_triangle.json").string() + " --out " + out.string());
    ASSERT_EQ(r.code, 0) << r.out;
    auto rep = read_json(out / "report.json");
    EXPECT_EQ(rep["exact"], "1/27");
    EXPECT_EQ(rep["pipeline"], "density");
    EXPECT_TRUE(rep.contains("config_hash"));
    EXPECT_TRUE(rep.contains("version"));
}

TEST(Cli, Mc1Demo) {
    auto out = scratch("mc1");
    auto r = run("run --config " + (kConfigs / "mc1_constant_edges.json").string() + " --out " + out.string());
    ASSERT_EQ(r.code, 0) << r.out;
    auto rep = read_json(out / "report.json");
    EXPECT_TRUE(rep["pass"].get<bool>());
    EXPECT_EQ(rep["results"][0]["kappa_exact"][1], "6");
}

TEST(Cli, OracleTvDemo) {
    auto out = scratch("tv");
    auto r = run("run --config " + (kConfigs / "oracle_tv_thoma.json").string() + " --out " + out.string() +
                 " --threads 2");
    ASSERT_EQ(r.code, 0) << r.out;
    auto rep = read_json(out / "report.json");
    EXPECT_LE(rep["results"][0]["tv"].get<double>(), 0.02);
}

TEST(Cli, ReproducibleAcrossThreadCounts) {
    auto cfg = write_config("clt", small_clt());
    auto a = scratch("rep_a"), b = scratch("rep_b"), c = scratch("rep_c");
    ASSERT_EQ(run("run --config " + cfg.string() + " --out " + a.string() + " --threads 1").code, 0);
    ASSERT_EQ(run("run --config " + cfg.string() + " --out " + b.string() + " --threads 3").code, 0);
    EXPECT_EQ(csv_body(a / "samples.csv"), csv_body(b / "samples.csv"));
    EXPECT_FALSE(csv_body(a / "samples.csv").empty());
    EXPECT_EQ(read_json(a / "report.json")["results"], read_json(b / "report.json")["results"]);
    ASSERT_EQ(run("run --config " + cfg.string() + " --out " + c.string() + " --seed 5").code, 0);
    EXPECT_NE(csv_body(a / "samples.csv"), csv_body(c / "samples.csv"));
    EXPECT_EQ(read_json(c / "report.json")["seed"], 5);
}

TEST(Cli, FailingPredicateExitsOne) {
    auto cfg = small_clt();
    cfg["thresholds"] = {{"kolmogorov", 0.0}};
    auto out = scratch("fail");
    auto r = run("run --config " + write_config("strict", cfg).string() + " --out " + out.string());
    EXPECT_EQ(r.code, 1) << r.out;
    EXPECT_FALSE(read_json(out / "report.json")["pass"].get<bool>());
}

TEST(Cli, PipelineOverride) {
    auto cfg = small_clt();
    cfg["reps"] = 10000;
    cfg["n"] = json::array({20});
    auto out = scratch("override");
    auto r = run("run --config " + write_config("over", cfg).string() + " --pipeline concentration --out " +
                 out.string());
    ASSERT_EQ(r.code, 0) << r.out;
    auto rep = read_json(out / "report.json");
    EXPECT_EQ(rep["pipeline"], "concentration");
    EXPECT_EQ(rep["results"][0]["prefactor"], 2.0);
    EXPECT_TRUE(fs::exists(out / "tails.csv"));
}
