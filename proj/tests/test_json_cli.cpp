#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "tcs/cli.hpp"
#include "tcs/harness.hpp"
#include "tcs/json_io.hpp"

using namespace tcs;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const Json& content)
        : path("/tmp/tcs_test_" + name) {
        write_json_file(path, content);
    }
    ~TempFile() { std::remove(path.c_str()); }
};

struct CliResult {
    int code;
    std::string out, err;
};

CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("space serialization round trips bit-exactly") {
    for (const auto& space :
         {fixtures::two_point(), fixtures::line4(), fixtures::two_triangles()}) {
        auto j = space_to_json(space);
        auto back = space_from_json(j);
        CHECK(back == space);
        CHECK(space_to_json(back).dump() == j.dump());
    }
    // Property: parse-serialize is the identity on generated spaces too.
    for (std::uint64_t seed : {10ull, 20ull}) {
        GeneratorSpec spec{MetricKind::GraphShortestPath, 7, seed, 5};
        auto space = gen_random_metric(spec);
        CHECK(space_from_json(space_to_json(space)) == space);
    }
}

TEST_CASE("rational cells accept integers, fractions and decimals") {
    Json j;
    j["points"] = {"a", "b"};
    j["distances"] = Json::array();
    j["distances"].push_back(Json::array({0, "7/3"}));
    j["distances"].push_back(Json::array({"2.3333", 0}));
    // 7/3 != 2.3333 -> asymmetric
    CHECK_THROWS_AS(space_from_json(j), TcsError);

    j["distances"][1][0] = "7/3";
    auto space = space_from_json(j);
    CHECK(space.dist(0, 1) == Rational(7, 3));

    j["distances"][1][0] = "1/0";
    CHECK_THROWS_AS(space_from_json(j), TcsError);
}

TEST_CASE("problem and pairs files") {
    auto tt = fixtures::two_triangles();
    TransportationProblem f(tt);
    f.add(0, Rational(1, 2)).add(5, Rational(-1, 2));
    auto j = problem_to_json(tt, f);
    auto back = problem_from_json(tt, j);
    CHECK(back.masses() == f.masses());

    Json bad;
    bad["masses"] = {{"a1", "1"}};
    CHECK_THROWS_AS(problem_from_json(tt, bad), TcsError);

    auto pj = pairs_to_json(tt, {{0, 1}, {2, 5}});
    auto pairs = pairs_from_json(tt, pj);
    CHECK(pairs == std::vector<std::pair<int, int>>{{0, 1}, {2, 5}});
}

TEST_CASE("dual dump round trips through the instance") {
    auto tt = fixtures::two_triangles();
    auto inst = MatchingInstance::from_labels(tt, tt.labels());
    auto mr = brute_force_min_matching(inst);
    auto lam = uncross_to_laminar(inst, mr.matching, solve_dual_lp(inst));
    auto j = dual_to_json(inst, lam);
    auto back = dual_from_json(inst, j);
    CHECK(back.family == lam.family);
    CHECK(back.weights == lam.weights);
    CHECK(dual_to_json(inst, back).dump() == j.dump());
}

TEST_CASE("cli: tc-norm on the two point fixture") {
    TempFile space("space2.json", space_to_json(fixtures::two_point()));
    Json prob;
    prob["masses"] = {{"p", "1"}, {"q", "-1"}};
    TempFile problem("prob2.json", prob);
    auto r = run_cli({"tc-norm", "--space", space.path, "--problem", problem.path});
    CHECK(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j.at("value") == "1");
}

TEST_CASE("cli: criterion failure yields exit 1 and the failing prefix") {
    TempFile space("line4.json", space_to_json(fixtures::line4()));
    Json bad;
    bad["pairs"] = Json::array();
    bad["pairs"].push_back(Json::array({"0", "10"}));
    bad["pairs"].push_back(Json::array({"1", "11"}));
    TempFile pairs("badpairs.json", bad);
    auto r = run_cli({"criterion", "--space", space.path, "--pairs", pairs.path});
    CHECK(r.code == 1);
    auto j = Json::parse(r.out);
    CHECK(j.at("pass") == false);
    CHECK(j.at("failing_prefix") == 2);
}

TEST_CASE("cli: certify the two-triangles pairs end to end") {
    auto tt = fixtures::two_triangles();
    TempFile space("tt.json", space_to_json(tt));
    TempFile pairs("ttpairs.json", pairs_to_json(tt, {{0, 1}, {3, 4}, {2, 5}}));
    auto r = run_cli({"certify", "--space", space.path, "--pairs", pairs.path});
    CHECK(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j.at("all_pass") == true);

    // And with a pinned dual file.
    Json dual;
    dual["family"] = Json::array();
    dual["weights"] = Json::object();
    for (const char* lbl : {"a1", "a2", "b1", "b2", "a3", "b3"}) {
        dual["family"].push_back(Json::array({lbl}));
        dual["weights"][lbl] = "1/2";
    }
    dual["family"].push_back(Json::array({"a1", "a2", "a3"}));
    dual["weights"]["a1,a2,a3"] = "9";
    dual["objective"] = "12";
    TempFile dual_file("ttdual.json", dual);
    auto r2 = run_cli({"certify", "--space", space.path, "--pairs", pairs.path,
                       "--dual", dual_file.path});
    CHECK(r2.code == 0);

    // The projection dump under the pinned dual carries the golden values.
    auto r3 = run_cli({"project", "--space", space.path, "--pairs", pairs.path,
                       "--dual", dual_file.path});
    REQUIRE(r3.code == 0);
    auto pj = Json::parse(r3.out);
    CHECK(pj.at("t").at("3").at("a3") == "0");
    CHECK(pj.at("t").at("3").at("b1") == "19/2");
    CHECK(pj.at("t").at("3").at("b3") == "10");
    CHECK(pj.at("thresholds")[2] == "19/2");
}

TEST_CASE("cli: validate distinguishes violation from syntax error") {
    Json bad;
    bad["points"] = {"u", "v", "w"};
    bad["distances"] = Json::array();
    bad["distances"].push_back(Json::array({0, 1, 5}));
    bad["distances"].push_back(Json::array({1, 0, 1}));
    bad["distances"].push_back(Json::array({5, 1, 0}));
    TempFile f("badspace.json", bad);
    auto r = run_cli({"validate", "--space", f.path});
    CHECK(r.code == 1);
    auto j = Json::parse(r.out);
    CHECK(j.at("valid") == false);
    CHECK(j.at("violation").at("axiom") == "TriangleViolation");

    auto good = run_cli(
        {"validate", "--space", "/root/proj/tests/data/two_triangles.json"});
    CHECK(good.code == 0);

    auto missing = run_cli({"validate", "--space", "/nonexistent.json"});
    CHECK(missing.code == 2);
}

TEST_CASE("cli: match and dual on a space file") {
    TempFile space("tt2.json", space_to_json(fixtures::two_triangles()));
    auto r = run_cli({"match", "--space", space.path});
    CHECK(r.code == 0);
    CHECK(Json::parse(r.out).at("weight") == "12");

    auto r2 = run_cli({"dual", "--space", space.path});
    CHECK(r2.code == 0);
    auto j = Json::parse(r2.out);
    CHECK(j.at("certificate").at("all_pass") == true);
    CHECK(j.at("dual").at("objective") == "12");
}

TEST_CASE("cli: generate then certify through files") {
    auto gen = run_cli({"generate", "--kind", "clustered", "--size", "6",
                        "--seed", "7", "--out", "/tmp/tcs_test_gen.json"});
    REQUIRE(gen.code == 0);
    auto space = space_from_json(read_json_file("/tmp/tcs_test_gen.json"));
    auto pairs = gen_greedy_pair_sequence(space, 3);
    REQUIRE(pairs.has_value());
    TempFile pf("genpairs.json", pairs_to_json(space, *pairs));
    auto r = run_cli({"certify", "--space", "/tmp/tcs_test_gen.json", "--pairs",
                      pf.path});
    CHECK(r.code == 0);
    std::remove("/tmp/tcs_test_gen.json");
}

TEST_CASE("cli: suite is deterministic and fault injection reports") {
    auto a = run_cli({"suite", "--kind", "clustered", "--size", "6", "--seed",
                      "3", "--trials", "4"});
    auto b = run_cli({"suite", "--kind", "clustered", "--size", "6", "--seed",
                      "3", "--trials", "4"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);

    auto f = run_cli({"suite", "--kind", "clustered", "--size", "6", "--seed",
                      "3", "--trials", "2", "--inject-fault"});
    CHECK(f.code == 0); // faults are expected to be *detected*
    auto j = Json::parse(f.out);
    CHECK(j.at("pass_counts").at("fault-detected") == 2);
}

TEST_CASE("cli: usage errors exit 2") {
    CHECK(run_cli({"no-such-command"}).code == 2);
    CHECK(run_cli({"tc-norm", "--bogus-flag"}).code == 2);
    CHECK(run_cli({"tc-norm"}).code == 2); // missing required files
    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("cli: text format renders terse lines") {
    TempFile space("tp.json", space_to_json(fixtures::two_point()));
    Json prob;
    prob["masses"] = {{"p", "1"}, {"q", "-1"}};
    TempFile problem("tpprob.json", prob);
    auto r = run_cli({"tc-norm", "--space", space.path, "--problem",
                      problem.path, "--format", "text"});
    CHECK(r.code == 0);
    CHECK(r.out == "value = 1\n");
}
