#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "divexp/cli.hpp"
#include "divexp/moments.hpp"

using namespace divexp;
using Json = nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

void check_round_trip(const Json& j) {
    if (j.is_structured()) {
        for (const auto& item : j) check_round_trip(item);
    } else if (j.is_number_float()) {
        const double v = j.get<double>();
        CHECK(Json::parse(Json(v).dump()).get<double>() == v);
    }
}

}  // namespace

TEST_CASE("corr reports the correlation") {
    const Result r = invoke({"corr", "--r", "0.05", "--sigma", "0.2", "--T", "1"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["R"].get<double>() == correlation(GbmParams(0.05, 0.2, 1.0)).R);
    CHECK(j["R"].get<double>() == doctest::Approx(0.8663).epsilon(1e-4));
    CHECK(j["params"]["sigma"].get<double>() == 0.2);
    check_round_trip(j);

    const Result csv = invoke({"corr", "--format", "csv"});
    REQUIRE(csv.code == 0);
    CHECK(csv.out.rfind("r,sigma,T,R,", 0) == 0);
}

TEST_CASE("moments of a frozen path are all one") {
    const Result r = invoke({"moments", "--r", "0", "--sigma", "0", "--T", "1", "--max-m", "3"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    REQUIRE(j["moments"].size() == 4);
    for (const auto& row : j["moments"]) CHECK(row["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-15));

    const Result csv = invoke({"moments", "--r", "0", "--sigma", "0", "--max-m", "3", "--format", "csv"});
    CHECK(csv.out == "m,value\n0,1\n1,1\n2,1\n3,1\n");
}

TEST_CASE("exit codes") {
    CHECK(invoke({}).code == cli::kUsage);
    CHECK(invoke({"bogus"}).code == cli::kUsage);
    CHECK(invoke({"corr", "--sigma"}).code == cli::kUsage);
    CHECK(invoke({"corr", "--sigma", "abc"}).code == cli::kUsage);
    CHECK(invoke({"corr", "--format", "xml"}).code == cli::kUsage);
    CHECK(invoke({"corr", "--T", "0"}).code == cli::kUsage);
    CHECK(invoke({"price", "--style", "digital"}).code == cli::kUsage);
    CHECK(invoke({"--help"}).code == cli::kOk);

    const Result domain = invoke({"corr", "--sigma", "0"});
    CHECK(domain.code == cli::kDomain);
    CHECK(domain.out.empty());
    CHECK(domain.err.find("deterministic") != std::string::npos);
    CHECK(invoke({"price", "--sigma", "0"}).code == cli::kDomain);
}

TEST_CASE("scan emits the full default grid") {
    const Result r = invoke({"scan"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "r,a,S");
    std::size_t rows = 0;
    double min_s = HUGE_VAL;
    while (std::getline(in, line)) {
        ++rows;
        min_s = std::min(min_s, std::stod(line.substr(line.rfind(',') + 1)));
    }
    CHECK(rows == 12100);
    CHECK(min_s >= 1.0 - 1e-9);
    CHECK(r.err.find("min_S=") == 0);

    const Result j = invoke({"scan", "--format", "json", "--na", "3", "--nr", "2"});
    REQUIRE(j.code == 0);
    const Json parsed = Json::parse(j.out);
    CHECK(parsed["cells"].size() == 6);
    CHECK(parsed["min_S"].get<double>() >= 1.0);
    check_round_trip(parsed);
}

TEST_CASE("mc compares estimates with closed forms") {
    const Result r = invoke({"mc", "--paths", "20000", "--steps", "100", "--m", "3", "--seed", "11"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["comparisons"].size() == 6);
    for (const auto& c : j["comparisons"]) {
        CAPTURE(c["name"].get<std::string>());
        CHECK(std::abs(c["z"].get<double>()) <= 4.0);
        const auto& e = c["estimate"];
        for (const char* key : {"value", "stderr", "paths", "steps", "seed"}) CHECK(e.contains(key));
        CHECK(e["seed"].get<std::uint64_t>() == 11);
    }
    check_round_trip(j);
}

TEST_CASE("mc at the shipped defaults") {
    const Result r = invoke({"mc"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["config"]["paths"].get<int>() == 100000);
    CHECK(j["config"]["steps"].get<int>() == 1000);
    CHECK(j["max_abs_z"].get<double>() <= 4.0);
}

TEST_CASE("seed override from the environment") {
    ::setenv("DIVEXP_SEED", "424242", 1);
    const Result r = invoke({"mc", "--paths", "200", "--steps", "10"});
    CHECK(Json::parse(r.out)["config"]["seed"].get<std::uint64_t>() == 424242);
    const Result explicit_seed = invoke({"mc", "--paths", "200", "--steps", "10", "--seed", "5"});
    CHECK(Json::parse(explicit_seed.out)["config"]["seed"].get<std::uint64_t>() == 5);
    ::setenv("DIVEXP_SEED", "not-a-number", 1);
    CHECK(invoke({"mc", "--paths", "200"}).code == cli::kUsage);
    ::unsetenv("DIVEXP_SEED");
}

TEST_CASE("price") {
    const Result r = invoke({"price", "--style", "floating"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["quote"]["method"] == "MargrabeApprox");
    CHECK(j["quote"]["inputs"].contains("rho"));
    CHECK_FALSE(j.contains("mc"));

    const Result with_mc = invoke({"price", "--style", "fixed", "--K", "1.0", "--mc-paths", "5000", "--steps", "50"});
    REQUIRE(with_mc.code == 0);
    const Json m = Json::parse(with_mc.out);
    CHECK(m["quote"]["method"] == "BlackApprox");
    CHECK(m["mc"]["paths"].get<int>() == 5000);
    CHECK(std::abs(m["relative_gap"].get<double>()) < 0.1);
}

TEST_CASE("oracle suite passes") {
    const Result r = invoke({"oracle"});
    CHECK(r.code == cli::kOk);
    const Json j = Json::parse(r.out);
    CHECK(j["passed"].get<bool>());
    CHECK(j["checks"].size() >= 6);
}

TEST_CASE("report file") {
    const auto path = std::filesystem::temp_directory_path() / "divexp_cli_test.json";
    const Result r = invoke({"corr", "--out", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    const Json j = Json::parse(in);
    CHECK(j.contains("R"));
    std::filesystem::remove(path);
    CHECK(invoke({"corr", "--out", "/nonexistent-dir/x.json"}).code == cli::kUsage);
}
