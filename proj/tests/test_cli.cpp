#include <fstream>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "fuchs/cli.hpp"

using namespace fuchs;
using namespace fuchs::cli;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "fuchs");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

const std::string kGauss = std::string(FUCHS_DATA_DIR) + "/operators/gauss.json";

std::string temp_file(const std::string& name, const std::string& content) {
    const std::string path = std::string(FUCHS_TEST_TMP) + "/" + name;
    std::ofstream(path) << content;
    return path;
}

}  // namespace

TEST_CASE("run configuration round-trips") {
    RunConfig c;
    c.subcommand = "logderiv";
    c.op_path = "op.json";
    c.z = "1/5,0";
    c.tol = 3e-9;
    c.n_max = 123;
    c.richardson = false;
    c.backend = "float";
    c.precision_bits = 96;
    const io::Json j = to_json(c);
    CHECK(to_json(config_from_json(j)) == j);
    CHECK(to_json(config_from_json(io::Json::object())) == to_json(RunConfig{}));
    CHECK_THROWS_AS(config_from_json(io::Json{{"nope", 1}}), ParseError);
    CHECK_THROWS_AS(config_from_json(io::Json{{"tol", "small"}}), ParseError);
}

TEST_CASE("configuration file with flag overrides") {
    RunConfig c;
    c.subcommand = "logderiv";
    c.op_path = kGauss;
    c.z = "1/5";
    c.tol = 1e-6;
    const std::string path = temp_file("cfg.json", to_json(c).dump());
    auto dumped = invoke({"--config", path, "logderiv", "--tol", "1e-9", "--dump-config"});
    REQUIRE(dumped.code == 0);
    const RunConfig back = config_from_json(io::Json::parse(dumped.out));
    CHECK(back.tol == 1e-9);
    CHECK(back.z == "1/5");
    CHECK(back.op_path == kGauss);
    auto ran = invoke({"--config", path});
    CHECK(ran.code == 0);
    CHECK(io::Json::parse(ran.out)["command"] == "logderiv");
}

TEST_CASE("regions of the Gauss operator: one line Re z = 1/2") {
    auto r = invoke({"regions", "--op", kGauss});
    REQUIRE(r.code == 0);
    const auto j = io::Json::parse(r.out);
    REQUIRE(j["lines"].size() == 1);
    CHECK(j["lines"][0]["midpoint"] == io::Json::array({"1/2", "0"}));
    CHECK(j["lines"][0]["direction"][0].get<double>() == 0.0);
    CHECK(std::abs(j["lines"][0]["direction"][1].get<double>()) == 1.0);
    auto grid = invoke({"regions", "--op", kGauss, "--grid", "-1,2,4,-1,1,3", "--out", "csv"});
    CHECK(grid.code == 0);
    CHECK(std::count(grid.out.begin(), grid.out.end(), '\n') == 13);
}

TEST_CASE("exit codes") {
    CHECK(invoke({"logderiv", "--op", kGauss, "--z", "1/2"}).code == kRefused);
    CHECK(invoke({"logderiv", "--op", kGauss, "--z", "1/5", "--n-max", "3", "--tol", "1e-30"}).code ==
          kNoConvergence);
    const std::string bad = temp_file("bad.json", "{\"form\": \"standard\", \"coeffs\": [");
    auto r = invoke({"singular", "--op", bad});
    CHECK(r.code == kParseError);
    const auto j = io::Json::parse(r.out);
    CHECK(j["error"] == "parse");
    CHECK(j["reason"].get<std::string>().find("byte") != std::string::npos);
    CHECK(invoke({"logderiv", "--op", kGauss, "--z", "abc"}).code == kParseError);
    CHECK(invoke({"logderiv", "--op", kGauss}).code == kParseError);
    CHECK(invoke({"frobnicate"}).code == kParseError);
    const std::string wrong_order =
        temp_file("order.json", R"({"form": "theta", "order": 3, "coeffs": [[0, -1, 1], [1]]})");
    CHECK(invoke({"singular", "--op", wrong_order}).code == kParseError);
}

TEST_CASE("output is deterministic") {
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"cf", "--op", kGauss, "--z", "1/5"},
          std::vector<std::string>{"logderiv", "--op", kGauss, "--z", "0.2", "--backend", "float"},
          std::vector<std::string>{"regions", "--op", kGauss, "--grid", "-1,2,9,-1,1,9"}}) {
        auto a = invoke(args), b = invoke(args);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("schemas are embedded") {
    std::vector<std::string> names;
    for (const auto& [name, text] : embedded_schemas()) {
        names.push_back(name);
        CHECK_NOTHROW(io::Json::parse(text));
    }
    for (const char* n : {"operator", "run-config", "error", "singular", "regions", "series-ratio", "logderiv", "cf",
                          "hypergeom-check", "chain-verify"}) {
        CHECK(std::find(names.begin(), names.end(), n) != names.end());
    }
    auto all = invoke({"--schema"});
    CHECK(all.code == 0);
    CHECK(io::Json::parse(all.out).size() == names.size());
    auto one = invoke({"--schema", "logderiv"});
    CHECK(io::Json::parse(one.out)["title"] == "logderiv report");
    CHECK(invoke({"--schema", "nothing"}).code == kParseError);
}

TEST_CASE("operator JSON round-trips") {
    for (const char* file : {"gauss.json", "gauss_theta.json", "three_poles.json", "three_sites.json"}) {
        const auto op = io::load_operator(std::string(FUCHS_DATA_DIR) + "/operators/" + file);
        const io::Json j = io::to_json(op);
        CHECK(io::to_json(io::operator_from_json(j)) == j);
    }
    const auto g = io::load_operator(kGauss);
    const auto t = io::load_operator(std::string(FUCHS_DATA_DIR) + "/operators/gauss_theta.json");
    CHECK(to_theta_form(g).theta_coeffs() == t.theta_coeffs());
}
