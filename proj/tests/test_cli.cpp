#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gale/cli.hpp"
#include "gale/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace gale;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "gale");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(int(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

Json result(const std::string& json_text, const std::string& name) {
    Json j = Json::parse(json_text);
    for (const auto& r : j.at("results"))
        if (r.at("name") == name) return r.at("value");
    FAIL("missing result " << name);
    return {};
}

std::string temp_file(const std::string& name, const std::string& body) {
    auto path = std::filesystem::temp_directory_path() / ("gale_cli_" + name);
    std::ofstream(path) << body;
    return path.string();
}

const std::string kData = GALE_DATA_DIR "/gale1960.csv";

} // namespace

TEST_CASE("demand command") {
    auto r = run({"--json", "demand", "9", "16", "12", "--income", "9"});
    CHECK(r.code == 0);
    CHECK(result(r.out, "bundle") == Json::array({"1", "0", "0"}));
    auto unit = run({"--json", "demand", "1", "1", "1", "--income", "3"});
    CHECK(result(unit.out, "bundle") == Json::array({"1", "1", "1"}));
    auto bad = run({"demand", "0", "1", "1", "--income", "1"});
    CHECK(bad.code == 2);
    CHECK_FALSE(bad.err.empty());
    CHECK(run({"demand", "1", "1", "x", "--income", "1"}).code == 2);
    CHECK(run({"demand", "1", "1", "1", "--income", "-1"}).code == 2);
    CHECK(run({"demand", "1", "1"}).code == 2);
}

TEST_CASE("text output is readable") {
    auto r = run({"demand", "8", "4", "2", "--income", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("normalized price") != std::string::npos);
    CHECK(r.out.find("II") != std::string::npos);
}

TEST_CASE("axioms command exit codes") {
    auto sarp = run({"--json", "axioms", kData, "--check", "sarp"});
    CHECK(sarp.code == 1);
    CHECK(sarp.err.empty());
    CHECK(result(sarp.out, "cycle length") == 10);
    CHECK(result(sarp.out, "cycle") == Json::array({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}));

    auto warp = run({"axioms", kData, "--check", "warp"});
    CHECK(warp.code == 0);

    auto extend = run({"axioms", kData, "--check", "extend"});
    CHECK(extend.code == 1);

    auto empty = run({"--json", "axioms", temp_file("empty.csv", ""), "--check", "sarp"});
    CHECK(empty.code == 0);
    CHECK(result(empty.out, "observations") == 0);

    auto bad = run({"axioms", temp_file("bad.csv", "p1,p2,p3,m,x1,x2,x3\n1,1,1,3,1,1,1\n1,1,1,3,1,q,1\n")});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("3") != std::string::npos);
    CHECK(run({"axioms", "/nonexistent/file.csv"}).code == 2);
    CHECK(run({"axioms", kData, "--check", "garp"}).code == 2);
}

TEST_CASE("diagnose command") {
    auto s = run({"--json", "diagnose", "--at", "1", "1", "1", "3", "--test", "slutsky"});
    CHECK(s.code == 0);
    CHECK(result(s.out, "s12") == "11/3");
    CHECK(result(s.out, "s21") == "-1/3");

    auto j = run({"--json", "diagnose", "--bundle", "1", "1", "1", "--test", "jacobi"});
    CHECK(result(j.out, "residual of h = dBx") == "-444");

    auto l = run({"--json", "diagnose", "--bundle", "1", "1", "1", "--test", "lemma6"});
    CHECK(result(l.out, "residual").get<double>() <= 1e-6);

    auto d = run({"--json", "diagnose", "--bundle", "1", "1", "1", "--test", "definiteness"});
    CHECK(result(d.out, "verdict") == "negative-definite");

    CHECK(run({"diagnose", "--bundle", "1", "0", "1", "--test", "lemma6"}).code == 2);
    CHECK(run({"diagnose", "--at", "8", "4", "2", "1", "--test", "slutsky"}).code == 2);
}

TEST_CASE("paths command") {
    auto curve = std::filesystem::temp_directory_path() / "gale_cli_curve.csv";
    auto t = run({"--json", "paths", "--trace", "1", "2", "3", "2", "4", "6", "--out", curve.string()});
    CHECK(t.code == 0);
    CHECK(result(t.out, "u").get<double>() == doctest::Approx(0.5));
    std::ifstream in(curve);
    std::string line;
    int rows = 0;
    std::getline(in, line);
    CHECK(line == "t,y1,y2,y3");
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 1);

    auto sym = run({"--json", "--spec", "symmetric", "paths", "--tower", "0.3", "0.5", "0.9", "0.8", "0.2", "0.4",
                    "0.5", "0.9", "0.1"});
    CHECK(sym.code == 0);
    CHECK(result(sym.out, "|c - 1|").get<double>() <= 1e-5);

    auto search = run({"--json", "paths", "--search"});
    CHECK(search.code == 0);
    CHECK(result(search.out, "|c - 1|").get<double>() > 1e-3);

    CHECK(run({"paths", "--ville", "auto"}).code == 0);
    auto rejected = run({"--spec", "symmetric", "paths", "--ville", "auto"});
    CHECK(rejected.code == 1);
    CHECK(run({"paths", "--trace", "1", "2", "3", "0", "1", "1"}).code == 2);
}

TEST_CASE("custom matrix file") {
    auto path = temp_file("a.txt", "-3 4 0\n0 -3 4\n4 0 -3\n");
    auto r = run({"--json", "--spec", path, "demand", "9", "16", "12", "--income", "9"});
    CHECK(r.code == 0);
    CHECK(result(r.out, "bundle") == Json::array({"1", "0", "0"}));
    CHECK(run({"--spec", temp_file("bad.txt", "1 2\n"), "demand", "1", "1", "1", "--income", "1"}).code == 2);
    CHECK(run({"--spec", temp_file("sing.txt", "1 2 3\n2 4 6\n0 1 1\n"), "demand", "1", "1", "1", "--income", "1"})
              .code == 2);
}

TEST_CASE("reproduce command") {
    auto r = run({"--json", "reproduce"});
    CHECK(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j.at("pass") == true);
    Report back = Report::from_json(j);
    CHECK(back.to_json() == j);
    CHECK(back.all_pass());
    CHECK(run({"--json", "reproduce"}).out == r.out);

    auto only = run({"--json", "reproduce", "--only", "slutsky"});
    CHECK(only.code == 0);
    CHECK(Report::from_json(Json::parse(only.out)).assertions.size() < back.assertions.size());
    CHECK(run({"reproduce", "--only", "nothing"}).code == 2);
}

TEST_CASE("reports round trip through JSON") {
    Report r;
    r.command = "x";
    r.inputs["a"] = 1;
    r.add("exact", encode(Rational(11, 3)));
    r.add("float", encode(0.1), 1e-9);
    r.add("matrix", encode(Mat3q::Identity().eval()));
    r.check("ok", true);
    r.check("bad", false, "why");
    CHECK_FALSE(r.all_pass());
    Report back = Report::from_json(Json::parse(r.to_json().dump()));
    CHECK(back == r);
    CHECK(r.to_text().find("FAIL") != std::string::npos);
}

TEST_CASE("help and unknown commands") {
    auto h = run({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("reproduce") != std::string::npos);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
}
