#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "tcs/matching.hpp"

using namespace tcs;

namespace {

FiniteMetricSpace line6() {
    std::vector<std::string> labels;
    DistanceMatrix d(6, std::vector<Rational>(6));
    for (int i = 0; i < 6; ++i) labels.push_back("v" + std::to_string(i));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) d[i][j] = Rational(std::abs(i - j));
    return FiniteMetricSpace::create(labels, d);
}

CutSet mask(std::initializer_list<int> bits) {
    CutSet s = 0;
    for (int b : bits) s |= CutSet(1) << b;
    return s;
}

} // namespace

TEST_CASE("brute force on the fixtures") {
    auto tp = fixtures::two_point();
    auto r1 = brute_force_min_matching(
        MatchingInstance::from_labels(tp, tp.labels()));
    CHECK(r1.weight == 1);
    CHECK(r1.matching.pairs == std::vector<std::pair<int, int>>{{0, 1}});

    auto l4 = fixtures::line4();
    auto r2 = brute_force_min_matching(
        MatchingInstance::from_labels(l4, l4.labels()));
    CHECK(r2.weight == 2); // matchings weigh 2, 20, 20
    CHECK(r2.matching.pairs == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});

    auto tt = fixtures::two_triangles();
    auto r3 = brute_force_min_matching(
        MatchingInstance::from_labels(tt, tt.labels()));
    CHECK(r3.weight == 12); // enumeration of all 15 matchings
    // Several matchings attain 12; the tie-break keeps the lexicographically
    // first one, which pairs a3 across to b1.
    CHECK(r3.matching.pairs ==
          std::vector<std::pair<int, int>>{{0, 1}, {2, 3}, {4, 5}});
    CHECK(r3.matching.weight(MatchingInstance::from_labels(tt, tt.labels())) ==
          12);
}

TEST_CASE("instance validation") {
    auto tp = fixtures::two_point();
    CHECK_THROWS_AS(MatchingInstance::from_labels(tp, {"p"}), TcsError);
    CHECK_THROWS_AS(MatchingInstance::from_labels(tp, {"p", "p"}), TcsError);

    auto big_labels = std::vector<std::string>(14, "x");
    CHECK_THROWS_AS(MatchingInstance::from_labels(tp, big_labels), TcsError);
}

TEST_CASE("odd cut enumeration is canonical") {
    auto l4 = fixtures::line4();
    auto inst = MatchingInstance::from_labels(l4, l4.labels());
    auto cuts = enumerate_odd_cuts(inst);
    // n = 2: only trivial cuts survive canonicalization.
    REQUIRE(cuts.size() == 4);
    for (auto c : cuts) CHECK(cut_size(c) == 1);

    auto tt = fixtures::two_triangles();
    auto inst6 = MatchingInstance::from_labels(tt, tt.labels());
    auto cuts6 = enumerate_odd_cuts(inst6);
    // 6 singletons + C(6,3)/2 = 10 three-sets containing vertex 0.
    CHECK(cuts6.size() == 16);
    for (auto c : cuts6) {
        CHECK(cut_size(c) % 2 == 1);
        CHECK(cut_size(c) <= 3);
        if (cut_size(c) == 3) CHECK(cut_contains(c, 0));
    }
}

TEST_CASE("LP matching equals brute force on the fixtures") {
    for (const auto& space :
         {fixtures::two_point(), fixtures::line4(), fixtures::two_triangles()}) {
        auto inst = MatchingInstance::from_labels(space, space.labels());
        auto lp = solve_matching_lp(inst);
        auto bf = brute_force_min_matching(inst);
        CHECK(lp.weight == bf.weight);
        CHECK(lp.matching.weight(inst) == lp.weight);
    }
}

TEST_CASE("dual LP objective equals the minimum matching weight") {
    auto l4 = fixtures::line4();
    auto inst = MatchingInstance::from_labels(l4, l4.labels());
    auto dual = solve_dual_lp(inst);
    CHECK(dual.objective() == 2);
    for (const auto& [c, y] : dual.weights) {
        CHECK(cut_size(c) == 1); // every canonical cut is trivial here
        CHECK(y >= 0);
    }

    auto tt = fixtures::two_triangles();
    auto inst6 = MatchingInstance::from_labels(tt, tt.labels());
    CHECK(solve_dual_lp(inst6).objective() == 12);

    auto tp = fixtures::two_point();
    auto inst2 = MatchingInstance::from_labels(tp, tp.labels());
    auto d2 = solve_dual_lp(inst2);
    CHECK(d2.objective() == 1); // y_p + y_q = 1 over the single cut
}

TEST_CASE("uncrossing keeps an already-laminar dual, canonicalized") {
    // The symmetric two-triangles dual: singletons 1/2, triangles 9/2 each.
    // The two triangle sides name the same cut, so they merge to weight 9
    // on the side containing the first vertex.
    auto tt = fixtures::two_triangles();
    auto inst = MatchingInstance::from_labels(tt, tt.labels());
    Matching m{{{0, 1}, {2, 5}, {3, 4}}};
    RawOddCutDual raw;
    for (int v = 0; v < 6; ++v) raw.weights[mask({v})] = Rational(1, 2);
    raw.weights[mask({0, 1, 2})] = Rational(9, 2);
    raw.weights[mask({3, 4, 5})] = Rational(9, 2);

    auto lam = uncross_to_laminar(inst, m, raw);
    CHECK(lam.objective() == 12);
    REQUIRE(lam.family.size() == 7);
    CHECK(lam.weight_of(mask({0, 1, 2})) == 9);
    for (int v = 0; v < 6; ++v) CHECK(lam.weight_of(mask({v})) == Rational(1, 2));
    CHECK(verify_dual_certificate(inst, m, lam).all_pass());
}

TEST_CASE("uncrossing resolves a genuinely crossing optimal dual") {
    // Unit-gap 6-point line; minimum matching (0,1)(2,3)(4,5) has weight 3.
    // This dual is optimal and feasible but crosses at {0,1,2} vs {0,1,4}:
    // shifting onto the odd pair moves the weight to the singletons {2},{4}.
    auto s = line6();
    auto inst = MatchingInstance::from_labels(s, s.labels());
    Matching m{{{0, 1}, {2, 3}, {4, 5}}};
    REQUIRE(brute_force_min_matching(inst).weight == 3);

    RawOddCutDual raw;
    raw.weights[mask({0})] = Rational(1, 2);
    raw.weights[mask({1})] = Rational(1, 2);
    raw.weights[mask({2})] = Rational(1, 4);
    raw.weights[mask({3})] = Rational(1, 2);
    raw.weights[mask({4})] = Rational(1, 4);
    raw.weights[mask({5})] = Rational(1, 2);
    raw.weights[mask({0, 1, 2})] = Rational(1, 4);
    raw.weights[mask({0, 1, 4})] = Rational(1, 4);
    REQUIRE(raw.objective() == 3);

    auto lam = uncross_to_laminar(inst, m, raw);
    CHECK(lam.objective() == 3);
    auto rep = verify_dual_certificate(inst, m, lam);
    CHECK(rep.all_pass());
    for (int v = 0; v < 6; ++v)
        CHECK(lam.weight_of(mask({v})) == Rational(1, 2));
    CHECK(lam.family.size() == 6); // nothing non-trivial survives
}

TEST_CASE("solver dual pipeline passes the certificate on all fixtures") {
    for (const auto& space :
         {fixtures::two_point(), fixtures::line4(), fixtures::two_triangles(),
          line6()}) {
        auto inst = MatchingInstance::from_labels(space, space.labels());
        auto mr = brute_force_min_matching(inst);
        auto raw = solve_dual_lp(inst);
        CHECK(raw.objective() == mr.weight);
        auto lam = uncross_to_laminar(inst, mr.matching, raw);
        auto rep = verify_dual_certificate(inst, mr.matching, lam);
        INFO(rep.first_failure());
        CHECK(rep.all_pass());
    }
}

TEST_CASE("certificate rejects broken duals") {
    auto tt = fixtures::two_triangles();
    auto inst = MatchingInstance::from_labels(tt, tt.labels());
    Matching m{{{0, 1}, {2, 5}, {3, 4}}};
    RawOddCutDual raw;
    for (int v = 0; v < 6; ++v) raw.weights[mask({v})] = Rational(1, 2);
    raw.weights[mask({0, 1, 2})] = Rational(9);
    auto lam = uncross_to_laminar(inst, m, raw);
    REQUIRE(verify_dual_certificate(inst, m, lam).all_pass());

    SECTION("weight bumped by one breaks edge feasibility") {
        auto broken = lam;
        broken.weights[broken.find(mask({0}))] += 1;
        auto rep = verify_dual_certificate(inst, m, broken);
        CHECK_FALSE(rep.all_pass());
        bool found = false;
        for (const auto& it : rep.items)
            if (it.name == "edge-feasible" && !it.pass) found = true;
        CHECK(found);
    }
    SECTION("missing singleton violates the family contract") {
        LaminarDual broken;
        for (std::size_t i = 0; i < lam.family.size(); ++i) {
            if (lam.family[i] == mask({3})) continue;
            broken.family.push_back(lam.family[i]);
            broken.weights.push_back(lam.weights[i]);
        }
        auto rep = verify_dual_certificate(inst, m, broken);
        CHECK_FALSE(rep.all_pass());
        bool found = false;
        for (const auto& it : rep.items)
            if (it.name == "singletons-present" && !it.pass) found = true;
        CHECK(found);
    }
    SECTION("crossing members violate laminarity") {
        auto broken = lam;
        broken.family.push_back(mask({0, 1, 3}));
        broken.weights.push_back(Rational(1, 8));
        broken.sort_canonical();
        auto rep = verify_dual_certificate(inst, m, broken);
        CHECK_FALSE(rep.all_pass());
    }
}

TEST_CASE("no positive member splits an uncrossed matched pair") {
    // Restated unit-crossing property: a positive member containing exactly
    // one endpoint of a matched pair must be crossed by that pair only.
    for (const auto& space : {fixtures::two_triangles(), line6()}) {
        auto inst = MatchingInstance::from_labels(space, space.labels());
        auto mr = brute_force_min_matching(inst);
        auto lam = uncross_to_laminar(inst, mr.matching, solve_dual_lp(inst));
        for (std::size_t i = 0; i < lam.family.size(); ++i) {
            if (cut_size(lam.family[i]) == 1 || lam.weights[i] == 0) continue;
            int split = 0;
            for (const auto& p : mr.matching.pairs)
                if (cut_contains(lam.family[i], p.first) !=
                    cut_contains(lam.family[i], p.second))
                    ++split;
            CHECK(split == 1);
        }
    }
}

TEST_CASE("canonical members have size at most n and the same boundary as "
          "their complement") {
    for (const auto& space : {fixtures::two_triangles(), line6()}) {
        auto inst = MatchingInstance::from_labels(space, space.labels());
        auto mr = brute_force_min_matching(inst);
        auto lam = uncross_to_laminar(inst, mr.matching, solve_dual_lp(inst));
        for (CutSet s : lam.family) {
            CHECK(cut_size(s) <= inst.pairs_count());
            CutSet comp = inst.full_set() & ~s;
            for (const auto& e : instance_edges(inst))
                CHECK(edge_crosses(e, s) == edge_crosses(e, comp));
        }
    }
}

TEST_CASE("prefix criterion on the fixtures") {
    auto tt = fixtures::two_triangles();
    std::vector<std::pair<int, int>> good = {{0, 1}, {3, 4}, {2, 5}};
    CHECK_FALSE(check_prefix_matching_criterion(tt, good).has_value());

    auto l4 = fixtures::line4();
    std::vector<std::pair<int, int>> bad = {{0, 2}, {1, 3}}; // (0,10),(1,11)
    auto fail = check_prefix_matching_criterion(l4, bad);
    REQUIRE(fail.has_value());
    CHECK(*fail == 2);

    std::vector<std::pair<int, int>> single = {{0, 2}};
    CHECK_FALSE(check_prefix_matching_criterion(l4, single).has_value());

    std::vector<std::pair<int, int>> dup = {{0, 1}, {1, 2}};
    CHECK_THROWS_AS(check_prefix_matching_criterion(l4, dup), TcsError);
}

TEST_CASE("LP matching equals brute force on random-ish small instances") {
    // Deterministic battery over induced subspaces of the fixtures.
    auto tt = fixtures::two_triangles();
    std::vector<std::vector<std::string>> subsets = {
        {"a1", "a2", "b1", "b2"},
        {"a1", "a3", "b2", "b3"},
        {"a1", "a2", "a3", "b1", "b2", "b3"},
        {"a2", "a3", "b1", "b3"},
    };
    for (const auto& sub : subsets) {
        auto space = tt.induced_subspace(sub);
        auto inst = MatchingInstance::from_labels(space, space.labels());
        CHECK(solve_matching_lp(inst).weight ==
              brute_force_min_matching(inst).weight);
    }
}
