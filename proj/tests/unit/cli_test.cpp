#include "sybilsim/cli/backend.hpp"
#include "sybilsim/cli/cli.hpp"
#include "sybilsim/cli/config.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sybilsim::cli;
namespace fs = std::filesystem;

namespace
{

struct Result
{
    int status;
    std::string out;
    std::string err;
};

Result
run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int status = runCli(args, out, err);
    return {status, out.str(), err.str()};
}

fs::path
scratch(std::string const& leaf)
{
    fs::path p = fs::temp_directory_path() / ("sybilsim_cli_test_" + leaf);
    fs::remove_all(p);
    return p;
}

std::string
slurp(fs::path const& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json
summaryOf(fs::path const& dir)
{
    return nlohmann::json::parse(slurp(dir / kSummaryFile));
}

} // namespace

TEST_CASE("simulate the static preset")
{
    auto dir = scratch("static");
    auto r = run({"simulate", "--preset", "static-paper", "--seed", "7", "--out",
                  dir.string()});
    CHECK_MESSAGE(r.status == kExitOk, r.err);
    CHECK(fs::exists(dir / kSeriesFile));
    CHECK(fs::exists(dir / kPerMintRoundFile));
    auto s = summaryOf(dir);
    CHECK(s["final"]["circulation_plus_tax"] == "50000");
    CHECK(s["rounds_completed"] == 500);
    CHECK(s["seed"] == 7);
    CHECK(s["arithmetic"] == "exact");
    CHECK(s["checks_passed"] == true);
    CHECK(s["config"]["variant"] == "static");
    CHECK(r.out.find("excess zero from round") != std::string::npos);
}

TEST_CASE("reruns are byte identical")
{
    auto a = scratch("rerun_a");
    auto b = scratch("rerun_b");
    std::vector<std::string> base{"simulate", "--variant", "regenerating",
                                  "--honest", "12", "--corrupt", "8", "--sybil",
                                  "4", "--degree", "4", "--rounds", "50"};
    auto argsA = base;
    argsA.insert(argsA.end(), {"--out", a.string()});
    auto argsB = base;
    argsB.insert(argsB.end(), {"--out", b.string()});
    REQUIRE(run(argsA).status == kExitOk);
    REQUIRE(run(argsB).status == kExitOk);
    CHECK(slurp(a / kSeriesFile) == slurp(b / kSeriesFile));
    CHECK(slurp(a / kPerMintRoundFile) == slurp(b / kPerMintRoundFile));
}

TEST_CASE("zero rounds writes header-only files")
{
    auto dir = scratch("zero");
    auto r = run({"simulate", "--rounds", "0", "--out", dir.string()});
    CHECK(r.status == kExitOk);
    CHECK(r.out.find("no rounds run") != std::string::npos);
    auto series = slurp(dir / kSeriesFile);
    CHECK(std::count(series.begin(), series.end(), '\n') == 1);
    CHECK(summaryOf(dir)["rounds_completed"] == 0);
}

TEST_CASE("float arithmetic and decimal output")
{
    auto dir = scratch("float");
    auto r = run({"simulate", "--arithmetic", "float", "--float", "--honest",
                  "12", "--corrupt", "8", "--sybil", "4", "--degree", "4",
                  "--rounds", "40", "--out", dir.string()});
    CHECK_MESSAGE(r.status == kExitOk, r.err);
    auto s = summaryOf(dir);
    CHECK(s["arithmetic"] == "float");
    CHECK(slurp(dir / kSeriesFile).find('/') == std::string::npos);
}

TEST_CASE("invalid configurations exit with the config status")
{
    CHECK(run({"simulate", "--sybil", "40"}).status == kExitConfig);
    CHECK(run({"simulate", "--alpha", "1/2"}).status == kExitConfig);
    CHECK(run({"simulate", "--variant", "dynamic"}).status == kExitConfig);
    CHECK(run({"simulate", "--preset", "nope"}).status == kExitConfig);
    CHECK(run({"simulate", "--variant", "probabilistic", "--p", "0.01", "--q",
               "0.5"})
              .status == kExitConfig);
    CHECK(run({"simulate", "--bogus"}).status != kExitOk);
    CHECK(run({}).status != kExitOk);
}

TEST_CASE("config files are read and unknown keys rejected")
{
    auto dir = scratch("config");
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "good.json");
        f << R"({"name": "fromfile", "honest": 12, "corrupt": 8, "sybil": 4,
                 "degree": 4, "rounds": 20, "alpha": "5/2"})";
    }
    {
        std::ofstream f(dir / "bad.json");
        f << R"({"honest": 12, "colour": "blue"})";
    }
    auto r = run({"simulate", "--config", (dir / "good.json").string(), "--out",
                  (dir / "out").string()});
    CHECK_MESSAGE(r.status == kExitOk, r.err);
    auto s = summaryOf(dir / "out");
    CHECK(s["config"]["name"] == "fromfile");
    CHECK(s["config"]["alpha"] == "5/2");
    CHECK(run({"simulate", "--config", (dir / "bad.json").string()}).status ==
          kExitConfig);
    CHECK(run({"simulate", "--config", (dir / "missing.json").string()}).status !=
          kExitOk);
}

TEST_CASE("default output goes under the output root")
{
    auto r = run({"simulate", "--name", "envcheck", "--rounds", "3", "--seed", "4"});
    REQUIRE(r.status == kExitOk);
    auto dir = outputRoot() / "envcheck-seed4";
    CHECK(fs::exists(dir / kSeriesFile));
    if (char const* env = std::getenv(kOutputRootEnv))
        CHECK(outputRoot() == fs::path(env));
}

TEST_CASE("check-graph")
{
    auto dir = scratch("graphs");
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "k2.txt");
        f << "0 C 0\n1 C 0\n0 1\n";
    }
    {
        std::ofstream f(dir / "c6.txt");
        for (int i = 0; i < 6; ++i)
            f << i << " C 0\n";
        for (int i = 0; i < 6; ++i)
            f << i << ' ' << (i + 1) % 6 << '\n';
    }
    auto k2 = run({"check-graph", (dir / "k2.txt").string()});
    CHECK(k2.out.find("phi = 1 ") != std::string::npos);
    auto c6 = run({"check-graph", (dir / "c6.txt").string(), "--degree", "2"});
    CHECK(c6.status == kExitOk);
    CHECK(c6.out.find("phi = 2/3 ") != std::string::npos);

    auto big = run({"check-graph", "--gen"});
    CHECK(big.status == kExitConfig);
    auto approx = run({"check-graph", "--gen", "--approx", "--samples", "500",
                       "--write", (dir / "gen.txt").string()});
    CHECK_MESSAGE(approx.status == kExitOk, approx.err);
    CHECK(approx.out.find("phi <= ") != std::string::npos);
    CHECK(fs::exists(dir / "gen.txt"));
    CHECK(run({"check-graph"}).status == kExitConfig);
}

TEST_CASE("sweep writes an aggregate row per q")
{
    auto dir = scratch("sweep");
    auto r = run({"sweep", "--variant", "probabilistic", "--exposure", "bernoulli",
                  "--honest", "12", "--corrupt", "8", "--sybil", "4", "--degree",
                  "4", "--rounds", "60", "--p", "0.05", "--q", "0,0.01",
                  "--replicates", "2", "--jobs", "2", "--out", dir.string()});
    CHECK_MESSAGE(r.status == kExitOk, r.err);
    auto agg = slurp(dir / kAggregateFile);
    CHECK(agg.rfind(kAggregateHeader, 0) == 0);
    CHECK(std::count(agg.begin(), agg.end(), '\n') == 3);
    CHECK(fs::exists(dir / "q_0" / "rep_1" / kSeriesFile));
    CHECK(fs::exists(dir / "q_0.01" / "rep_0" / kSummaryFile));
}

TEST_CASE("presets are listed and printable")
{
    auto r = run({"presets"});
    CHECK(r.status == kExitOk);
    for (auto const& p : presets())
        CHECK(r.out.find(p.name) != std::string::npos);
    auto one = run({"presets", "sweep-paper"});
    CHECK(one.status == kExitOk);
    auto j = nlohmann::json::parse(one.out);
    CHECK(j["sweep"]["replicates"] == 3);
    CHECK(run({"presets", "nope"}).status == kExitConfig);
}

TEST_CASE("config JSON round trips")
{
    for (auto const& p : presets())
    {
        auto back = fromJson(toJson(p.config));
        CHECK(toJson(back) == toJson(p.config));
    }
}
