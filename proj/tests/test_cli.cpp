#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "../tools/cli.hpp"
#include "crnrobust/report_json.hpp"
#include "support.hpp"

using namespace crnrobust;
using nlohmann::json;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Run r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string tmp(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("crnrobust_test_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kData = CRN_DATA_DIR;

}  // namespace

TEST_CASE("exit codes for input errors") {
    CHECK(run({}).code == cli::kInputError);
    CHECK(run({"bogus"}).code == cli::kInputError);
    CHECK(run({"--help"}).code == cli::kOk);
    const auto missing = run({"simulate", "/nonexistent/model.json"});
    CHECK(missing.code == cli::kInputError);
    CHECK(missing.err.rfind("error: ", 0) == 0);

    const auto bad = run({"check", "--trace", kData + "/rising_trace.csv", "-f", "[B] = 1"});
    CHECK(bad.code == cli::kInputError);
    CHECK(bad.err.find("error: formula: ") != std::string::npos);
    CHECK(bad.err.find("position 4") != std::string::npos);

    CHECK(run({"simulate", kData + "/raf.json", "--t-end", "-1"}).code == cli::kInputError);
    CHECK(run({"robustness", kData + "/conversion.json", "-f", "F([B] > 1)", "-n", "0"}).code == cli::kInputError);
    CHECK(run({"robustness", kData + "/conversion.json", "-f", "F([B] > y1)"}).code == cli::kInputError);
    CHECK(run({"robustness", kData + "/conversion.json", "-f", "F([B] > 1)", "--interval", "A=2:1"}).code ==
          cli::kInputError);
    CHECK(run({"alpha-check", kData + "/conversion.json", "--output", "B", "--alpha", "-1"}).code == cli::kInputError);
    CHECK(run({"alpha-check", kData + "/conversion.json", "--output", "B", "--alpha", "1", "--n", "0"}).code ==
          cli::kInputError);
    CHECK(run({"alpha-check", kData + "/inconclusive.json", "--output", "C", "--alpha", "1", "--strategy", "endpoints"})
              .code == cli::kInputError);
}

TEST_CASE("check on a trace file") {
    const auto r = run({"check", "--trace", kData + "/rising_trace.csv", "-f", "F([B] > 7)"});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out.find("holds: true\n") != std::string::npos);
    CHECK(r.out.find("vd: 0\n") != std::string::npos);
    CHECK(r.out.find("sd: 1\n") != std::string::npos);
    CHECK(r.out.find("abstraction: F([B] > y1)\n") != std::string::npos);
    CHECK(r.out.find("reference: (7)\n") != std::string::npos);
    CHECK(r.out.find("domain: (y1 <= 10)\n") != std::string::npos);

    const auto j = tmp("check.json");
    CHECK(run({"--json", j, "check", "--trace", kData + "/rising_trace.csv", "-f", "F([B] > 12)"}).code == cli::kOk);
    const auto doc = json::parse(slurp(j));
    CHECK(doc["vd"] == 2.0);
    CHECK(doc["holds"] == false);
}

TEST_CASE("simulate writes a trace CSV") {
    const auto path = tmp("erk.csv");
    const auto r = run({"simulate", kData + "/erk.json", "--t-end", "10", "--out", path});
    REQUIRE(r.code == cli::kOk);
    const auto csv = slurp(path);
    CHECK(csv.rfind("t,Raf,PRaf,Mek1,PMek1,PPMek1,dRaf,", 0) == 0);
    const auto tr = read_trace_csv(path);
    CHECK(tr.species.size() == 5);
    CHECK(tr.size() == 101);
    CHECK(tr.back().t == 10.0);
    CHECK(r.out.find("steady state: ") != std::string::npos);

    const auto ss = run({"simulate", kData + "/raf.json", "--until-steady", "--out", tmp("raf.csv")});
    CHECK(ss.code == cli::kOk);
    CHECK(ss.out.find("reached at t = ") != std::string::npos);

    const auto never = run({"simulate", kData + "/raf.json", "--until-steady", "--t-end", "1", "--t-max", "2",
                            "--out", tmp("raf2.csv")});
    CHECK(never.code == cli::kNumericFailure);
}

TEST_CASE("robustness is deterministic and its JSON round-trips") {
    const std::vector<std::string> args{"--seed", "7", "robustness", kData + "/conversion.json", "-f", "F([B] > 1.5)",
                                        "-n", "40", "--t-end", "20", "--emit-samples"};
    const auto a = run(args);
    const auto b = run(args);
    REQUIRE(a.code == cli::kOk);
    CHECK(a.out == b.out);
    const auto doc = json::parse(a.out);
    const auto rep = doc.get<RobustnessReport>();
    CHECK(rep.samples_used == 40);
    CHECK(rep.per_sample.size() == 40);
    CHECK(json(rep).dump(2) == doc.dump(2));

    auto other = args;
    other[1] = "8";
    CHECK(run(other).out != a.out);

    const auto trivial = run({"robustness", kData + "/conversion.json", "-f", "F([B] > 0.5)", "--interval", "A=1:1"});
    CHECK(trivial.code == cli::kOk);
    CHECK(trivial.err.find("trivial") != std::string::npos);
    CHECK(json::parse(trivial.out)["estimate"] == 1.0);
}

TEST_CASE("monotonicity verdicts and DOT export") {
    const auto dot = tmp("rgraph.dot");
    const auto r = run({"monotonicity", kData + "/erk.json", "--reactions", "R21,R23", "--input", "Mek1", "--output",
                        "PPMek1", "--dot", dot});
    REQUIRE(r.code == cli::kOk);
    const auto doc = json::parse(r.out);
    CHECK(doc["kind"] == "PositivelyMonotonic");
    CHECK(doc["p_in"] == -1);
    CHECK(doc["p_out"] == 1);
    CHECK(doc["labels"]["R21"] == "+");
    const auto text = slurp(dot);
    CHECK(text.find("label=\"R23 (+)\"") != std::string::npos);
    CHECK(text.find("[style=solid]") != std::string::npos);

    const auto inc = run({"monotonicity", kData + "/inconclusive.json", "--input", "A", "--output", "C"});
    CHECK(inc.code == cli::kOk);
    CHECK(json::parse(inc.out)["failed_condition"] == "no_consistent_labeling");

    const auto chain = run({"monotonicity", kData + "/erk.json", "--chain", kData + "/erk_chain.json"});
    CHECK(chain.code == cli::kOk);
    CHECK(json::parse(chain.out)["kind"] == "PositivelyMonotonic");
    CHECK(run({"monotonicity", kData + "/erk.json", "--input", "Mek1"}).code == cli::kInputError);
}

TEST_CASE("alpha-check with a declared chain uses two simulations") {
    const auto csv = tmp("probes.csv");
    const auto r = run({"alpha-check", kData + "/erk.json", "--output", "PPMek1", "--alpha", "0.001", "--auto",
                        "--chain", kData + "/erk_chain.json", "--probes-csv", csv});
    REQUIRE(r.code == cli::kOk);
    const auto doc = json::parse(r.out);
    CHECK(doc["verdict"]["kind"] == "PositivelyMonotonic");
    const auto rep = doc["report"].get<AlphaReport>();
    CHECK(rep.probes.size() == 2);
    CHECK(rep.strategy_used == "monotone_endpoints");
    CHECK_FALSE(rep.approximate);
    CHECK(rep.spread > 0.0);
    CHECK_FALSE(rep.robust);
    CHECK(slurp(csv).rfind("Raf,PPMek1,reached\n1,", 0) == 0);
    CHECK(r.err.empty());
}

TEST_CASE("alpha-check falls back to a grid without a certificate") {
    const auto r =
        run({"alpha-check", kData + "/inconclusive.json", "--output", "C", "--alpha", "1", "--auto", "--n", "5"});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.err.find("falling back to grid(5)") != std::string::npos);
    CHECK(r.err.find("approximate") != std::string::npos);
    const auto rep = json::parse(r.out)["report"].get<AlphaReport>();
    CHECK(rep.strategy_used == "grid");
    CHECK(rep.probes.size() == 5);
    CHECK(rep.approximate);
}

TEST_CASE("alpha-check on a trivial interval") {
    const auto r = run({"alpha-check", kData + "/conversion.json", "--output", "B", "--alpha", "0", "--interval",
                        "A=1.5:1.5", "--t-end", "100"});
    REQUIRE(r.code == cli::kOk);
    const auto rep = json::parse(r.out).get<AlphaReport>();
    CHECK(rep.robust);
    CHECK(rep.spread == 0.0);
    CHECK(rep.probes.size() == 1);

    const auto mc = run({"--seed", "3", "alpha-check", kData + "/conversion.json", "--output", "B", "--alpha", "2",
                         "--strategy", "mc", "--n", "6", "--t-end", "100"});
    REQUIRE(mc.code == cli::kOk);
    CHECK(json::parse(mc.out)["strategy_used"] == "monte_carlo");
}

TEST_CASE("alpha-check reports steady-state failures as numeric") {
    const auto r = run({"alpha-check", kData + "/conversion.json", "--output", "B", "--alpha", "1", "--n", "3",
                        "--t-end", "1", "--t-max", "2"});
    CHECK(r.code == cli::kNumericFailure);
    CHECK(r.err.find("did not reach steady state") != std::string::npos);
    CHECK(json::parse(r.out)["status"] == "undetermined");
}
