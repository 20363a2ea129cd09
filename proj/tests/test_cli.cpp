#include "doctest.h"

#include "expderiv/cli.hpp"
#include "json.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace expderiv;
using namespace expderiv::cli;
using nlohmann::json;

namespace {

struct Outcome {
    int status;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int status = run(args, out, err);
    return {status, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) v.push_back(line);
    return v;
}

/// Sets an environment variable for the lifetime of the guard.
struct EnvGuard {
    std::string name;
    EnvGuard(const char* n, const char* value) : name(n) { setenv(n, value, 1); }
    ~EnvGuard() { unsetenv(name.c_str()); }
};

} // namespace

TEST_CASE("order, point and method parsing") {
    CHECK(parse_orders("5") == std::vector<int>{5});
    CHECK(parse_orders("1..4") == std::vector<int>{1, 2, 3, 4});
    CHECK(parse_orders("1,2,7") == std::vector<int>{1, 2, 7});
    CHECK_THROWS_AS(parse_orders("3,2"), UsageError);
    CHECK_THROWS_AS(parse_orders("4..1"), UsageError);
    CHECK_THROWS_AS(parse_orders("-1"), UsageError);
    CHECK_THROWS_AS(parse_orders("a"), UsageError);
    CHECK(parse_points("ln2") == std::vector<double>{0.6931471805599453});
    CHECK(parse_points("-pi,0.5,2") == std::vector<double>{-3.141592653589793, 0.5, 2.0});
    CHECK_THROWS_AS(parse_points("1,1"), UsageError);
    CHECK_THROWS_AS(parse_points("2,1"), UsageError);
    CHECK_THROWS_AS(parse_points("inf"), UsageError);
    CHECK_THROWS_AS(parse_points("nan"), UsageError);
    CHECK_THROWS_AS(parse_points("1e"), UsageError);
    CHECK(parse_methods("eq1,quad") == std::vector<Method>{Method::ClosedForm1, Method::Quadrature});
    CHECK_THROWS_AS(parse_methods(""), UsageError);
    CHECK_THROWS_AS(parse_methods("eq3"), UsageError);
}

TEST_CASE("eval examples") {
    auto r = invoke({"eval", "-n", "2", "-x", "0.6931471805599453", "--method", "eq1,eq2,series"});
    REQUIRE(r.status == kExitOk);
    const auto j = json::parse(r.out);
    CHECK(j["schema"] == kSchemaVersion);
    CHECK(j["command"] == "eval");
    REQUIRE(j["records"].size() == 3);
    const char* methods[] = {"eq1", "eq2", "series"};
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& rec = j["records"][i];
        CHECK(rec["method"] == methods[i]);
        CHECK(rec["n"] == 2);
        CHECK(std::abs(rec["value"].get<double>() - 6.0) <= 6e-10);
        CHECK(rec["err_estimate"].get<double>() >= 0.0);
    }

    r = invoke({"eval", "-n", "0", "-x", "0.6931471805599453", "--method", "eq1"});
    CHECK(r.status == kExitOk);
    CHECK(json::parse(r.out)["records"][0]["value"] == 1.0);

    r = invoke({"eval", "-n", "1", "-x", "0", "--method", "eq1"});
    CHECK(r.status == kExitFailure);
    CHECK(r.err.find("pole") != std::string::npos);

    r = invoke({"eval", "-n", "2", "-x", "ln2", "--method", "eq1,eq2,series,quad,smallx,fd", "--format", "plain"});
    CHECK(r.status == kExitOk);
    CHECK(r.out.find("quad") != std::string::npos);
}

TEST_CASE("exit status contract") {
    struct Case {
        std::vector<std::string> args;
        int status;
    };
    const std::vector<Case> cases = {
        // usage errors
        {{}, kExitUsage},
        {{"frobnicate"}, kExitUsage},
        {{"eval", "-x", "1"}, kExitUsage},
        {{"eval", "-n", "1"}, kExitUsage},
        {{"eval", "-n", "1..3", "-x", "1"}, kExitUsage},
        {{"eval", "-n", "1", "-x", "1,2"}, kExitUsage},
        {{"eval", "-n", "1", "-x", "1", "--method", "nope"}, kExitUsage},
        {{"eval", "-n", "1", "-x", "1", "--method", ""}, kExitUsage},
        {{"eval", "-n", "1", "-x", "1", "--format", "xml"}, kExitUsage},
        {{"eval", "-n", "1", "-x", "1", "--rel-tol", "0"}, kExitUsage},
        {{"eval", "-n", "1", "-x", "1", "--abs-tol", "-1"}, kExitUsage},
        {{"eval", "-n", "1", "-x", "1", "--bogus"}, kExitUsage},
        {{"table", "-n", "1..3", "-x", "2,1"}, kExitUsage},
        {{"table", "-n", "1..3", "-x", "inf"}, kExitUsage},
        {{"verify", "--suite", "nope"}, kExitUsage},
        {{"verify", "--suite", "spot", "--format", "csv"}, kExitUsage},
        {{"verify", "--suite", "cross", "--n", "3,1"}, kExitUsage},
        {{"stirling"}, kExitUsage},
        {{"stirling", "--max-n", "-1"}, kExitUsage},
        {{"bernoulli", "--max-n", "x"}, kExitUsage},
        {{"omega", "-n", "1,2"}, kExitUsage},
        // kernel / domain failures
        {{"eval", "-n", "1", "-x", "0", "--method", "eq2"}, kExitFailure},
        {{"eval", "-n", "171", "-x", "1", "--method", "eq1"}, kExitFailure},
        {{"eval", "-n", "1", "-x", "-1", "--method", "series"}, kExitFailure},
        {{"eval", "-n", "0", "-x", "1", "--method", "quad"}, kExitFailure},
        {{"eval", "-n", "1", "-x", "7", "--method", "smallx"}, kExitFailure},
        {{"eval", "-n", "7", "-x", "1", "--method", "fd"}, kExitFailure},
        {{"table", "-n", "1", "-x", "-1,0,1", "--method", "eq1"}, kExitFailure},
        {{"omega", "-n", "2", "-x", "1"}, kExitOk},
        // success
        {{"eval", "-n", "3", "-x", "pi"}, kExitOk},
        {{"table", "-n", "0..2", "-x", "-1,1", "--method", "eq1,eq2"}, kExitOk},
        {{"verify", "--suite", "spot"}, kExitOk},
        {{"stirling", "--max-n", "0"}, kExitOk},
        {{"bernoulli", "--max-n", "0"}, kExitOk},
        {{"--help"}, kExitOk},
    };
    for (const auto& c : cases) {
        std::string joined;
        for (const auto& a : c.args) joined += a + ' ';
        CAPTURE(joined);
        const auto r = invoke(c.args);
        CHECK(r.status == c.status);
        if (c.status != kExitOk) CHECK_FALSE(r.err.empty());
    }
}

TEST_CASE("verification failures exit 1 with the report still emitted") {
    EnvGuard guard("EXPDERIV_MAX_TERMS", "5");
    const auto r = invoke({"verify", "--suite", "cross", "--n", "1..2"});
    CHECK(r.status == kExitFailure);
    const auto j = json::parse(r.out);
    CHECK(j["summary"]["failed"].get<int>() > 0);
    CHECK(j["summary"]["total"].get<int>() == j["summary"]["passed"].get<int>() + j["summary"]["failed"].get<int>());
}

TEST_CASE("EXPDERIV_MAX_TERMS") {
    {
        EnvGuard guard("EXPDERIV_MAX_TERMS", "10");
        CHECK(invoke({"eval", "-n", "5", "-x", "0.01", "--method", "series"}).status == kExitFailure);
        CHECK(invoke({"eval", "-n", "5", "-x", "0.01", "--method", "eq1"}).status == kExitOk);
    }
    for (const char* bad : {"0", "-3", "abc", "12x"}) {
        EnvGuard guard("EXPDERIV_MAX_TERMS", bad);
        CHECK(invoke({"eval", "-n", "1", "-x", "1"}).status == kExitUsage);
    }
    EnvGuard guard("EXPDERIV_MAX_TERMS", "100000");
    CHECK(invoke({"eval", "-n", "5", "-x", "0.01", "--method", "series"}).status == kExitOk);
}

TEST_CASE("table output") {
    const auto r = invoke({"table", "-n", "1..3", "-x", "0.5,1,2", "--method", "eq2", "--format", "csv"});
    REQUIRE(r.status == kExitOk);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 10);
    CHECK(rows[0] == "n,x,method,value,err_estimate");
    // n-major, then x ascending
    CHECK(rows[1].rfind("1,0.5,eq2,", 0) == 0);
    CHECK(rows[2].rfind("1,1,eq2,", 0) == 0);
    CHECK(rows[4].rfind("2,0.5,eq2,", 0) == 0);
    CHECK(rows[9].rfind("3,2,eq2,", 0) == 0);

    const auto def = invoke({"table", "-n", "1", "-x", "1", "--method", "eq1"});
    CHECK(lines(def.out).at(0) == "n,x,method,value,err_estimate");
    const auto js = invoke({"table", "-n", "1", "-x", "1,2", "--method", "eq1,series", "--format", "json"});
    CHECK(json::parse(js.out)["records"].size() == 4);
}

TEST_CASE("exact tables") {
    auto r = invoke({"stirling", "--max-n", "5", "--format", "csv"});
    REQUIRE(r.status == kExitOk);
    auto rows = lines(r.out);
    CHECK(rows.size() == 22);
    CHECK(rows[0] == "n,k,value");
    CHECK(std::find(rows.begin(), rows.end(), "4,2,7") != rows.end());

    r = invoke({"bernoulli", "--max-n", "10", "--format", "json"});
    REQUIRE(r.status == kExitOk);
    CHECK(r.out.find("\"B_10\": \"5/66\"") != std::string::npos);
    const auto j = json::parse(r.out);
    CHECK(j["schema"] == 1);
    CHECK(j["values"]["B_1"] == "-1/2");
    CHECK(j["values"].size() == 11);

    r = invoke({"omega", "-n", "2", "-x", "1", "--format", "json"});
    REQUIRE(r.status == kExitOk);
    const auto o = json::parse(r.out);
    CHECK(o["coeffs"] == json::array({"0", "1", "2"}));
    CHECK(o["values"][0]["value"] == 3.0);
}

TEST_CASE("verify suites") {
    auto r = invoke({"verify", "--suite", "stirling", "--max-n", "30"});
    CHECK(r.status == kExitOk);
    r = invoke({"verify", "--suite", "euler", "--max-m", "15"});
    REQUIRE(r.status == kExitOk);
    const auto e = json::parse(r.out);
    CHECK(e["certificates"].size() == 15);
    CHECK(e["summary"]["passed"] == 15);
    r = invoke({"verify", "--suite", "cross", "--n", "1..15"});
    REQUIRE(r.status == kExitOk);
    const auto c = json::parse(r.out);
    CHECK(c["worst"]["defect"].get<double>() <= 1e-10);
    for (const auto& rec : c["comparisons"]) CHECK(rec["passed"] == true);
    r = invoke({"verify", "--suite", "spot", "--format", "plain"});
    CHECK(r.status == kExitOk);
    CHECK_FALSE(r.out.empty());
}

TEST_CASE("identical configurations give identical bytes") {
    const std::vector<std::string> args = {"verify", "--suite", "quadrature", "--n", "1..3"};
    const auto a = invoke(args);
    const auto b = invoke(args);
    CHECK(a.status == kExitOk);
    CHECK(a.out == b.out);
    const std::vector<std::string> t = {"table", "-n", "0..6", "-x", "0.1,ln2,pi"};
    CHECK(invoke(t).out == invoke(t).out);
}

TEST_CASE("output file") {
    const auto path = std::filesystem::temp_directory_path() / "expderiv_cli_test_output.json";
    std::filesystem::remove(path);
    const auto r = invoke({"bernoulli", "--max-n", "4", "-o", path.string()});
    CHECK(r.status == kExitOk);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream content;
    content << in.rdbuf();
    CHECK(content.str() == invoke({"bernoulli", "--max-n", "4"}).out);
    std::filesystem::remove(path);
}
