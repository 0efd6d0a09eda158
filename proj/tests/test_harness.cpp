#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "tcs/harness.hpp"

using namespace tcs;

namespace {

// Four-point condition: among the three pairings of any quadruple, the two
// largest sums coincide. Holds exactly for tree metrics.
bool four_point_condition(const FiniteMetricSpace& s) {
    for (int a = 0; a < s.size(); ++a)
        for (int b = a + 1; b < s.size(); ++b)
            for (int c = b + 1; c < s.size(); ++c)
                for (int d = c + 1; d < s.size(); ++d) {
                    std::vector<Rational> sums = {
                        s.dist(a, b) + s.dist(c, d),
                        s.dist(a, c) + s.dist(b, d),
                        s.dist(a, d) + s.dist(b, c)};
                    std::sort(sums.begin(), sums.end());
                    if (sums[1] != sums[2]) return false;
                }
    return true;
}

} // namespace

TEST_CASE("generated spaces are valid for every kind and seed") {
    for (MetricKind kind :
         {MetricKind::EuclideanRounded, MetricKind::TreeMetric,
          MetricKind::GraphShortestPath, MetricKind::Clustered})
        for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
            GeneratorSpec spec{kind, 6, seed, 4};
            auto space = gen_random_metric(spec);
            CHECK(space.size() == 6);
            CHECK_FALSE(check_metric_axioms(space.labels(), space.matrix()));
        }
}

TEST_CASE("generation is deterministic per seed") {
    GeneratorSpec spec{MetricKind::EuclideanRounded, 8, 42, 4};
    auto a = gen_random_metric(spec);
    auto b = gen_random_metric(spec);
    CHECK(a == b);
    spec.seed = 43;
    CHECK_FALSE(gen_random_metric(spec) == a);
}

TEST_CASE("tree metrics satisfy the four-point condition") {
    GeneratorSpec spec{MetricKind::TreeMetric, 4, 7, 3};
    CHECK(four_point_condition(gen_random_metric(spec)));
    spec.size = 6;
    spec.seed = 11;
    CHECK(four_point_condition(gen_random_metric(spec)));
}

TEST_CASE("clustered spaces have tight clusters far apart") {
    GeneratorSpec spec{MetricKind::Clustered, 6, 5, 2};
    auto space = gen_random_metric(spec);
    int small = 0, large = 0;
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) {
            if (space.dist(i, j) <= 2) ++small;
            if (space.dist(i, j) >= 10) ++large;
        }
    CHECK(small + large == 15);
    CHECK(small >= 3);
    CHECK(large >= 6);
}

TEST_CASE("greedy pair sequence on the fixtures") {
    auto tt = fixtures::two_triangles();
    auto seq = gen_greedy_pair_sequence(tt, 3);
    REQUIRE(seq.has_value());
    CHECK_FALSE(check_prefix_matching_criterion(tt, *seq).has_value());
    // Intra pairs first, the cross pair last.
    CHECK((*seq)[2] == std::make_pair(2, 5));

    auto l4 = fixtures::line4();
    auto seq2 = gen_greedy_pair_sequence(l4, 2);
    REQUIRE(seq2.has_value());
    CHECK(*seq2 == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});

    // n = 1 is just the closest pair and always succeeds.
    auto seq3 = gen_greedy_pair_sequence(l4, 1);
    REQUIRE(seq3.has_value());
    CHECK_FALSE(check_prefix_matching_criterion(l4, *seq3).has_value());

    // Too many pairs requested.
    CHECK_FALSE(gen_greedy_pair_sequence(l4, 3).has_value());
}

TEST_CASE("grain oracle basics") {
    auto tp = fixtures::two_point();
    TransportationProblem f(tp);
    f.add(0, Rational(1)).add(1, Rational(-1));
    CHECK(oracle_tc_norm_integer(tp, f) == 1);

    TransportationProblem g(tp);
    g.add(0, Rational(2)).add(1, Rational(-2));
    CHECK(oracle_tc_norm_integer(tp, g) == 2);

    auto tt = fixtures::two_triangles();
    TransportationProblem h(tt);
    h.add(0, Rational(1)).add(1, Rational(1));
    h.add(3, Rational(-1)).add(4, Rational(-1));
    CHECK(oracle_tc_norm_integer(tt, h) == 20);
    CHECK(tc_norm(tt, h).value == 20);

    TransportationProblem big(tt);
    big.add(0, Rational(9)).add(3, Rational(-9));
    CHECK_THROWS_AS(oracle_tc_norm_integer(tt, big), TcsError);

    TransportationProblem frac(tt);
    frac.add(0, Rational(1, 2)).add(3, Rational(-1, 2));
    CHECK_THROWS_AS(oracle_tc_norm_integer(tt, frac), TcsError);
}

TEST_CASE("norm equals grain oracle on generated instances") {
    for (std::uint64_t seed : {3ull, 4ull, 5ull}) {
        GeneratorSpec spec{MetricKind::GraphShortestPath, 6, seed, 3};
        auto space = gen_random_metric(spec);
        harness_detail::Rng rng(seed);
        for (int rep = 0; rep < 5; ++rep) {
            TransportationProblem f(space);
            int a = static_cast<int>(rng.uniform(0, 5));
            int b = static_cast<int>(rng.uniform(0, 5));
            int c = static_cast<int>(rng.uniform(0, 5));
            int d = static_cast<int>(rng.uniform(0, 5));
            if (a == b || c == d || (a == c && b == d)) continue;
            f.add(a, Rational(2)).add(b, Rational(-2));
            if (c != a && c != b && d != a && d != b)
                f.add(c, Rational(1)).add(d, Rational(-1));
            CHECK(tc_norm(space, f).value == oracle_tc_norm_integer(space, f));
        }
    }
}

TEST_CASE("property suite passes and is byte-deterministic") {
    GeneratorSpec spec{MetricKind::Clustered, 6, 2024, 3};
    auto r1 = run_property_suite(spec, 6);
    CHECK(r1.failures == 0);
    CHECK(r1.skipped == 0);
    CHECK(r1.pass_counts.at("prefix-criterion") == 6);
    CHECK(r1.pass_counts.at("certify/one-lipschitz") == 6);
    CHECK(r1.counterexample_trial == -1);

    auto r2 = run_property_suite(spec, 6);
    CHECK(r1.to_json().dump() == r2.to_json().dump());
}

TEST_CASE("property suite runs every kind") {
    for (MetricKind kind :
         {MetricKind::EuclideanRounded, MetricKind::TreeMetric,
          MetricKind::GraphShortestPath}) {
        GeneratorSpec spec{kind, 6, 77, 4};
        auto r = run_property_suite(spec, 3);
        INFO(metric_kind_name(kind));
        INFO(r.to_json().dump(2));
        CHECK(r.failures == 0);
    }
}

TEST_CASE("injected faults are reported with a replayable artifact") {
    GeneratorSpec spec{MetricKind::Clustered, 6, 99, 3};
    auto r = run_property_suite(spec, 3, /*inject_fault=*/true);
    CHECK(r.pass_counts["fault-detected"] == 3);
    CHECK(r.failures == 0);

    // A suite that fails must carry the counterexample.
    // Force one by injecting and inverting expectations: use the report
    // structure directly.
    CHECK(r.to_json().contains("counterexample"));
}

TEST_CASE("zero trials give an empty report") {
    GeneratorSpec spec{MetricKind::Clustered, 6, 1, 3};
    auto r = run_property_suite(spec, 0);
    CHECK(r.trials == 0);
    CHECK(r.failures == 0);
    CHECK(r.pass_counts.empty());
    CHECK(r.to_json().at("counterexample").is_null());
}
