#pragma once

// Minimum-weight perfect matching on complete metric-weighted graphs, the
// odd-cut dual LP, uncrossing of optimal duals into a laminar family, and
// exact certificate verification.
//
// Vertices are addressed by instance-local ids 0..2n-1; vertex subsets are
// bitmasks over those ids. Odd cuts are keyed by their canonical side: the
// side of cardinality <= n, ties at exactly n broken toward the side
// containing vertex 0.
//
// LP instances enumerate all odd cuts explicitly, which caps the scale at
// 2n <= 12 (at most 1024 cuts).

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tcs/error.hpp"
#include "tcs/metric_space.hpp"
#include "tcs/rational.hpp"
#include "tcs/report.hpp"
#include "tcs/simplex.hpp"

namespace tcs {

using CutSet = std::uint32_t; // bitmask over instance-local vertex ids

inline int cut_size(CutSet s) { return std::popcount(s); }
inline bool cut_contains(CutSet s, int v) { return (s >> v) & 1u; }

constexpr int kMaxMatchingVertices = 12;

struct MatchingInstance {
    FiniteMetricSpace space; // own copy: instances are self-contained values
    std::vector<int> vertices; // global point ids, all distinct

    static MatchingInstance create(const FiniteMetricSpace& space,
                                   std::vector<int> vertices) {
        if (vertices.size() < 2 || vertices.size() % 2 != 0)
            throw TcsError(ErrorCode::InvalidSpec,
                           "vertex count must be even and >= 2");
        std::vector<int> sorted = vertices;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i] < 0 || sorted[i] >= space.size())
                throw TcsError(ErrorCode::UnknownPoint, "vertex id out of range");
            if (i > 0 && sorted[i] == sorted[i - 1])
                throw TcsError(ErrorCode::DuplicatePoint, space.label(sorted[i]),
                               {space.label(sorted[i])});
        }
        return MatchingInstance{space, std::move(vertices)};
    }

    static MatchingInstance from_labels(const FiniteMetricSpace& space,
                                        const std::vector<std::string>& labels) {
        std::vector<int> ids;
        ids.reserve(labels.size());
        for (const auto& l : labels) ids.push_back(space.index_of(l));
        return create(space, std::move(ids));
    }

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int pairs_count() const { return num_vertices() / 2; }

    const Rational& weight(int a, int b) const {
        return space.dist(vertices[a], vertices[b]);
    }

    std::string local_label(int a) const { return space.label(vertices[a]); }

    CutSet full_set() const {
        return static_cast<CutSet>((1u << num_vertices()) - 1u);
    }

    void require_lp_scale() const {
        if (num_vertices() > kMaxMatchingVertices)
            throw TcsError(ErrorCode::TooLarge,
                           "instance exceeds the 2n <= 12 enumeration cap");
    }
};

struct Edge {
    int a, b; // local ids, a < b
};

inline std::vector<Edge> instance_edges(const MatchingInstance& inst) {
    std::vector<Edge> es;
    const int v = inst.num_vertices();
    for (int a = 0; a < v; ++a)
        for (int b = a + 1; b < v; ++b) es.push_back({a, b});
    return es;
}

inline bool edge_crosses(const Edge& e, CutSet s) {
    return cut_contains(s, e.a) != cut_contains(s, e.b);
}

/// Perfect matching, local ids; each pair (a,b) has a < b, pairs sorted by a.
struct Matching {
    std::vector<std::pair<int, int>> pairs;

    void normalize() {
        for (auto& p : pairs)
            if (p.first > p.second) std::swap(p.first, p.second);
        std::sort(pairs.begin(), pairs.end());
    }

    Rational weight(const MatchingInstance& inst) const {
        Rational w(0);
        for (const auto& p : pairs) w += inst.weight(p.first, p.second);
        return w;
    }

    bool covers(int v) const {
        for (const auto& p : pairs)
            if (p.first == v || p.second == v) return true;
        return false;
    }
};

/// Canonical representative of the cut {S, V \ S}.
inline CutSet canonical_cut(CutSet s, const MatchingInstance& inst) {
    const int n = inst.pairs_count();
    const CutSet comp = inst.full_set() & ~s;
    if (cut_size(s) < n) return s;
    if (cut_size(comp) < n) return comp;
    return cut_contains(s, 0) ? s : comp; // both sides have size exactly n
}

/// All canonical odd-cut representatives, ordered by (size, mask).
inline std::vector<CutSet> enumerate_odd_cuts(const MatchingInstance& inst) {
    inst.require_lp_scale();
    const int v = inst.num_vertices();
    const int n = inst.pairs_count();
    std::vector<CutSet> cuts;
    for (CutSet s = 1; s < (1u << v); ++s) {
        int sz = cut_size(s);
        if (sz % 2 == 0) continue;
        if (sz < n || (sz == n && (s & 1u))) cuts.push_back(s);
    }
    std::sort(cuts.begin(), cuts.end(), [](CutSet x, CutSet y) {
        int sx = cut_size(x), sy = cut_size(y);
        return sx != sy ? sx < sy : x < y;
    });
    return cuts;
}

// ---------------------------------------------------------------------------
// Brute-force oracle

struct MatchingResult {
    Matching matching;
    Rational weight;
};

namespace matching_detail {

inline void enumerate_matchings(int v, std::vector<char>& used,
                                std::vector<std::pair<int, int>>& current,
                                const MatchingInstance& inst, Rational& acc,
                                MatchingResult& best, bool& have) {
    int a = 0;
    while (a < v && used[a]) ++a;
    if (a == v) {
        if (!have || acc < best.weight) {
            best.matching.pairs = current;
            best.weight = acc;
            have = true;
        }
        // Lexicographic tie-break: the enumeration emits matchings in
        // lexicographic pair order, so the first optimum found is kept.
        return;
    }
    used[a] = 1;
    for (int b = a + 1; b < v; ++b) {
        if (used[b]) continue;
        used[b] = 1;
        current.emplace_back(a, b);
        Rational w = inst.weight(a, b);
        acc += w;
        enumerate_matchings(v, used, current, inst, acc, best, have);
        acc -= w;
        current.pop_back();
        used[b] = 0;
    }
    used[a] = 0;
}

} // namespace matching_detail

/// Enumerates all (2n-1)!! perfect matchings. Independent of the LP path.
inline MatchingResult brute_force_min_matching(const MatchingInstance& inst) {
    inst.require_lp_scale();
    const int v = inst.num_vertices();
    std::vector<char> used(v, 0);
    std::vector<std::pair<int, int>> current;
    MatchingResult best;
    bool have = false;
    Rational acc(0);
    matching_detail::enumerate_matchings(v, used, current, inst, acc, best, have);
    return best;
}

// ---------------------------------------------------------------------------
// LP formulations

/// The primal matching LP over explicit odd cuts: minimize w'x subject to
/// x(cut) = 1 on trivial cuts, x(cut) >= 1 on non-trivial ones, x >= 0.
inline LinearProgram make_matching_lp(const MatchingInstance& inst) {
    inst.require_lp_scale();
    const auto edges = instance_edges(inst);
    const auto cuts = enumerate_odd_cuts(inst);
    LinearProgram lp;
    lp.sense = Sense::Minimize;
    lp.objective.reserve(edges.size());
    for (const auto& e : edges) lp.objective.push_back(inst.weight(e.a, e.b));
    for (CutSet c : cuts) {
        LinearConstraint row;
        row.coeffs.assign(edges.size(), Rational(0));
        for (std::size_t j = 0; j < edges.size(); ++j)
            if (edge_crosses(edges[j], c)) row.coeffs[j] = 1;
        row.rel = cut_size(c) == 1 ? Rel::Eq : Rel::GreaterEq;
        row.rhs = 1;
        lp.constraints.push_back(std::move(row));
    }
    return lp;
}

/// The odd-cut dual LP: maximize sum y_C subject to, for every edge e,
/// sum over cuts containing e of y_C <= w(e). `nonnegative_trivial` decides
/// whether trivial-cut variables are sign-constrained or free.
inline LinearProgram make_dual_lp(const MatchingInstance& inst,
                                  bool nonnegative_trivial) {
    inst.require_lp_scale();
    const auto edges = instance_edges(inst);
    const auto cuts = enumerate_odd_cuts(inst);
    LinearProgram lp;
    lp.sense = Sense::Maximize;
    lp.objective.assign(cuts.size(), Rational(1));
    lp.bounds.resize(cuts.size());
    for (std::size_t k = 0; k < cuts.size(); ++k)
        lp.bounds[k].free = !nonnegative_trivial && cut_size(cuts[k]) == 1;
    for (const auto& e : edges) {
        LinearConstraint row;
        row.coeffs.assign(cuts.size(), Rational(0));
        for (std::size_t k = 0; k < cuts.size(); ++k)
            if (edge_crosses(e, cuts[k])) row.coeffs[k] = 1;
        row.rel = Rel::LessEq;
        row.rhs = inst.weight(e.a, e.b);
        lp.constraints.push_back(std::move(row));
    }
    return lp;
}

/// Solves the matching LP exactly and decodes the optimal vertex, which is
/// 0/1-integral on these instances. The solve runs on the dual formulation
/// (one row per edge instead of one row per odd cut); the integral primal
/// is recovered as the dual of that program.
inline MatchingResult solve_matching_lp(const MatchingInstance& inst) {
    LinearProgram lp = make_dual_lp(inst, /*nonnegative_trivial=*/false);
    LPOutcome out = solve_lp(lp);
    if (out.status != LPStatus::Optimal)
        throw TcsError(ErrorCode::Internal, "matching LP not optimal");
    const auto edges = instance_edges(inst);
    Matching m;
    for (std::size_t j = 0; j < edges.size(); ++j) {
        const Rational& x = out.dual[j];
        if (x == 0) continue;
        if (x != 1)
            throw TcsError(ErrorCode::Internal,
                           "matching LP vertex not integral at edge " +
                               std::to_string(j));
        m.pairs.emplace_back(edges[j].a, edges[j].b);
    }
    m.normalize();
    for (int a = 0; a < inst.num_vertices(); ++a)
        if (!m.covers(a))
            throw TcsError(ErrorCode::Internal, "decoded matching not perfect");
    return MatchingResult{std::move(m), out.objective};
}

// ---------------------------------------------------------------------------
// Dual solutions

/// Nonnegative weights on canonical odd cuts; zero entries are not stored.
struct RawOddCutDual {
    std::map<CutSet, Rational> weights;

    Rational objective() const {
        Rational s(0);
        for (const auto& [c, y] : weights) s += y;
        return s;
    }
};

/// Optimal dual with every cut weight nonnegative (trivial cuts included),
/// deterministic for a given instance.
inline RawOddCutDual solve_dual_lp(const MatchingInstance& inst) {
    LinearProgram lp = make_dual_lp(inst, /*nonnegative_trivial=*/true);
    LPOutcome out = solve_lp(lp);
    if (out.status != LPStatus::Optimal)
        throw TcsError(ErrorCode::Internal, "dual LP not optimal");
    const auto cuts = enumerate_odd_cuts(inst);
    RawOddCutDual dual;
    for (std::size_t k = 0; k < cuts.size(); ++k) {
        if (out.primal[k] == 0) continue;
        if (out.primal[k] < 0)
            throw TcsError(ErrorCode::Internal, "negative dual weight");
        dual.weights[cuts[k]] = out.primal[k];
    }
    return dual;
}

// ---------------------------------------------------------------------------
// Laminar duals

/// Laminar family over the instance vertices with nonnegative weights:
/// members pairwise nested or disjoint, all singletons present, every
/// non-singleton member strictly positive, cardinalities at most n.
struct LaminarDual {
    std::vector<CutSet> family;    // ordered by (size, mask)
    std::vector<Rational> weights; // parallel to family

    int find(CutSet s) const {
        for (std::size_t i = 0; i < family.size(); ++i)
            if (family[i] == s) return static_cast<int>(i);
        return -1;
    }

    const Rational& weight_of(CutSet s) const {
        int i = find(s);
        if (i < 0)
            throw TcsError(ErrorCode::NotAMember, "set is not in the family");
        return weights[i];
    }

    Rational objective() const {
        Rational s(0);
        for (const auto& y : weights) s += y;
        return s;
    }

    void sort_canonical() {
        std::vector<std::size_t> idx(family.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
            int si = cut_size(family[i]), sj = cut_size(family[j]);
            return si != sj ? si < sj : family[i] < family[j];
        });
        std::vector<CutSet> f;
        std::vector<Rational> w;
        for (auto i : idx) {
            f.push_back(family[i]);
            w.push_back(weights[i]);
        }
        family = std::move(f);
        weights = std::move(w);
    }
};

inline bool sets_nested_or_disjoint(CutSet a, CutSet b) {
    CutSet inter = a & b;
    return inter == 0 || inter == a || inter == b;
}

/// Uncrosses an optimal nonnegative dual into a laminar one with the same
/// objective. Crossing weight is shifted onto the odd pair among
/// {intersection, union} / {differences}; the potential
/// sum y_C |C| (2n - |C|) strictly decreases, which bounds the loop.
inline LaminarDual uncross_to_laminar(const MatchingInstance& inst,
                                      const Matching& matching,
                                      const RawOddCutDual& raw) {
    const int n = inst.pairs_count();
    std::map<CutSet, Rational> work;
    for (const auto& [s, y] : raw.weights) {
        if (y < 0)
            throw TcsError(ErrorCode::UncrossingFailed, "negative input weight");
        if (y == 0) continue;
        if (cut_size(s) % 2 == 0)
            throw TcsError(ErrorCode::UncrossingFailed, "even cut in input");
        work[canonical_cut(s, inst)] += y;
    }

    const Rational objective_before = raw.objective();

    auto add_weight = [&](CutSet s, const Rational& y) {
        CutSet c = canonical_cut(s, inst);
        auto it = work.find(c);
        if (it == work.end())
            work.emplace(c, y);
        else
            it->second += y;
    };

    long guard = 0;
    for (;;) {
        if (++guard > 200000)
            throw TcsError(ErrorCode::UncrossingFailed, "uncrossing did not settle");
        // First crossing pair in (size, mask) order.
        std::vector<CutSet> keys;
        keys.reserve(work.size());
        for (const auto& [s, y] : work)
            if (y != 0) keys.push_back(s);
        std::sort(keys.begin(), keys.end(), [](CutSet x, CutSet y) {
            int sx = cut_size(x), sy = cut_size(y);
            return sx != sy ? sx < sy : x < y;
        });
        CutSet d = 0, t = 0;
        bool found = false;
        for (std::size_t i = 0; i < keys.size() && !found; ++i)
            for (std::size_t j = i + 1; j < keys.size() && !found; ++j)
                if (!sets_nested_or_disjoint(keys[i], keys[j])) {
                    d = keys[i];
                    t = keys[j];
                    found = true;
                }
        if (!found) break;

        Rational eps = std::min(work[d], work[t]);
        work[d] -= eps;
        work[t] -= eps;
        if (work[d] == 0) work.erase(d);
        if (work[t] == 0) work.erase(t);
        CutSet inter = d & t, uni = d | t;
        if (cut_size(inter) % 2 == 1) {
            add_weight(inter, eps);
            add_weight(uni, eps);
        } else {
            add_weight(d & ~t, eps);
            add_weight(t & ~d, eps);
        }
    }

    LaminarDual dual;
    for (int v = 0; v < inst.num_vertices(); ++v) {
        // canonical({v}) != {v} only when 2n = 2, where both singletons name
        // the same cut; the cut weight then sits on the vertex-0 side.
        CutSet s = CutSet(1) << v;
        dual.family.push_back(s);
        auto it = work.find(s);
        if (it != work.end()) {
            dual.weights.push_back(it->second);
            work.erase(it);
        } else {
            dual.weights.push_back(Rational(0));
        }
    }
    for (const auto& [s, y] : work) {
        if (y == 0 || cut_size(s) == 1) continue;
        dual.family.push_back(s);
        dual.weights.push_back(y);
    }
    dual.sort_canonical();

    if (dual.objective() != objective_before)
        throw TcsError(ErrorCode::UncrossingFailed, "objective drifted");
    return dual;
}

/// Exact verification of a laminar dual against a matching: feasibility on
/// every edge, objective equal to the matching weight, tightness on matched
/// edges, unit crossing of positive non-singleton cuts, laminarity and the
/// cardinality conditions.
inline CheckReport verify_dual_certificate(const MatchingInstance& inst,
                                           const Matching& matching,
                                           const LaminarDual& dual) {
    CheckReport rep;
    const int v = inst.num_vertices();
    const int n = inst.pairs_count();

    // (P-1) laminarity over stored members.
    {
        bool ok = true;
        std::string witness;
        for (std::size_t i = 0; i < dual.family.size() && ok; ++i)
            for (std::size_t j = i + 1; j < dual.family.size() && ok; ++j)
                if (!sets_nested_or_disjoint(dual.family[i], dual.family[j])) {
                    ok = false;
                    witness = "members " + std::to_string(i) + "," + std::to_string(j);
                }
        rep.add("laminar", ok, witness);
    }
    // (P-2) all singletons present; no duplicates.
    {
        bool ok = true;
        for (int a = 0; a < v; ++a)
            if (dual.find(CutSet(1) << a) < 0) ok = false;
        std::vector<CutSet> f = dual.family;
        std::sort(f.begin(), f.end());
        if (std::adjacent_find(f.begin(), f.end()) != f.end()) ok = false;
        rep.add("singletons-present", ok);
    }
    // (P-3) positive weight on every non-singleton member; none negative.
    {
        bool ok = true;
        std::string witness;
        for (std::size_t i = 0; i < dual.family.size(); ++i) {
            if (dual.weights[i] < 0) ok = false;
            if (cut_size(dual.family[i]) > 1 && dual.weights[i] <= 0) {
                ok = false;
                witness = "member " + std::to_string(i);
            }
        }
        rep.add("nonnegative-and-positive-nonsingleton", ok, witness);
    }
    // Cardinalities at most n; at most one member of size exactly n.
    // For 2n = 2 the two singletons are complements of each other and are
    // both required, so size-n uniqueness applies to non-singletons only.
    {
        bool ok = true;
        int at_n = 0;
        for (CutSet s : dual.family) {
            if (cut_size(s) > n) ok = false;
            if (cut_size(s) == n) ++at_n;
        }
        // n = 1 is exempt: both singletons are required members there and
        // they name the same cut from opposite sides.
        if (n > 1 && at_n > 1) ok = false;
        rep.add("cardinality", ok);
    }
    // (D2) feasibility on every edge, tightness on matched edges.
    {
        bool feas = true, tight = true;
        std::string feas_w, tight_w;
        for (const auto& e : instance_edges(inst)) {
            Rational s(0);
            for (std::size_t i = 0; i < dual.family.size(); ++i)
                if (edge_crosses(e, dual.family[i])) s += dual.weights[i];
            if (s > inst.weight(e.a, e.b)) {
                feas = false;
                feas_w = inst.local_label(e.a) + "-" + inst.local_label(e.b);
            }
            bool in_matching = false;
            for (const auto& p : matching.pairs)
                if ((p.first == e.a && p.second == e.b) ||
                    (p.first == e.b && p.second == e.a))
                    in_matching = true;
            if (in_matching && s != inst.weight(e.a, e.b)) {
                tight = false;
                tight_w = inst.local_label(e.a) + "-" + inst.local_label(e.b);
            }
        }
        rep.add("edge-feasible", feas, feas_w);
        rep.add("matched-edge-tight", tight, tight_w);
    }
    // Objective equals the matching weight.
    rep.add("objective-equals-matching-weight",
            dual.objective() == matching.weight(inst));
    // Every non-singleton member is crossed by exactly one matched edge.
    {
        bool ok = true;
        std::string witness;
        for (std::size_t i = 0; i < dual.family.size(); ++i) {
            if (cut_size(dual.family[i]) == 1) continue;
            int crossings = 0;
            for (const auto& p : matching.pairs)
                if (edge_crosses(Edge{p.first, p.second}, dual.family[i]))
                    ++crossings;
            if (crossings != 1) {
                ok = false;
                witness = "member " + std::to_string(i) + " crossed " +
                          std::to_string(crossings) + " times";
            }
        }
        rep.add("positive-cut-crossed-once", ok, witness);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Prefix criterion

/// Checks that every prefix {(x_1,y_1)..(x_k,y_k)} is a minimum-weight
/// perfect matching on its own 2k points. Returns the smallest failing k,
/// or nullopt when every prefix passes.
inline std::optional<int> check_prefix_matching_criterion(
    const FiniteMetricSpace& space,
    const std::vector<std::pair<int, int>>& pairs) {
    std::vector<int> seen;
    for (const auto& p : pairs) {
        seen.push_back(p.first);
        seen.push_back(p.second);
    }
    std::vector<int> sorted = seen;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] == sorted[i - 1])
            throw TcsError(ErrorCode::DuplicatePoint, space.label(sorted[i]),
                           {space.label(sorted[i])});

    for (std::size_t k = 1; k <= pairs.size(); ++k) {
        std::vector<int> verts;
        Rational prefix_weight(0);
        for (std::size_t i = 0; i < k; ++i) {
            verts.push_back(pairs[i].first);
            verts.push_back(pairs[i].second);
            prefix_weight += space.dist(pairs[i].first, pairs[i].second);
        }
        MatchingInstance inst = MatchingInstance::create(space, verts);
        MatchingResult best = brute_force_min_matching(inst);
        if (prefix_weight != best.weight) return static_cast<int>(k);
    }
    return std::nullopt;
}

} // namespace tcs
