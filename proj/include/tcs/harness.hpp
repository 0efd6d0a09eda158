#pragma once

// Random instance generation and the property suite tying the whole
// pipeline together: generate a space, find a pair sequence passing the
// prefix criterion, build the projection, certify it, and cross-check the
// norm against an LP-free grain oracle. Everything is deterministic per
// seed; trials re-run bit-identically.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tcs/error.hpp"
#include "tcs/json_io.hpp"
#include "tcs/matching.hpp"
#include "tcs/metric_space.hpp"
#include "tcs/projection.hpp"
#include "tcs/rational.hpp"
#include "tcs/transport.hpp"

namespace tcs {

enum class MetricKind {
    EuclideanRounded,  // integer grid points, distances rounded up to 1/q
    TreeMetric,        // random tree with rational edge weights
    GraphShortestPath, // random connected graph, exact shortest paths
    Clustered,         // tight clusters far apart (two-triangles-like)
};

inline const char* metric_kind_name(MetricKind k) {
    switch (k) {
        case MetricKind::EuclideanRounded: return "euclidean-rounded";
        case MetricKind::TreeMetric: return "tree-metric";
        case MetricKind::GraphShortestPath: return "graph-shortest-path";
        case MetricKind::Clustered: return "clustered";
    }
    return "unknown";
}

inline MetricKind metric_kind_from_name(const std::string& name) {
    for (MetricKind k :
         {MetricKind::EuclideanRounded, MetricKind::TreeMetric,
          MetricKind::GraphShortestPath, MetricKind::Clustered})
        if (name == metric_kind_name(k)) return k;
    throw TcsError(ErrorCode::InvalidSpec, "unknown metric kind: " + name);
}

struct GeneratorSpec {
    MetricKind kind = MetricKind::EuclideanRounded;
    int size = 6;
    std::uint64_t seed = 0;
    int denominator_bound = 4;

    void check() const {
        if (size < 2)
            throw TcsError(ErrorCode::InvalidSpec, "size must be at least 2");
        if (denominator_bound < 1)
            throw TcsError(ErrorCode::InvalidSpec, "denominator bound must be >= 1");
    }
};

namespace harness_detail {

/// Deterministic RNG helpers. Raw draws come from the standardized
/// mt19937_64 stream; everything else is derived by rejection so the
/// sequences are identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x1234567890abcdefull) {}

    std::uint64_t next() {
        // splitmix64; standard constants.
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [lo, hi], inclusive.
    long uniform(long lo, long hi) {
        std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % range);
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return lo + static_cast<long>(v % range);
    }

    /// Rational in [lo, hi] with denominator at most `den_bound`.
    Rational rational_in(long lo, long hi, int den_bound) {
        long q = uniform(1, den_bound);
        long p = uniform(lo * q, hi * q);
        return Rational(p, q);
    }

private:
    std::uint64_t state_;
};

inline BigInt isqrt_floor(const BigInt& s) { return boost::multiprecision::sqrt(s); }

/// ceil(sqrt(s) * q) / q, computed exactly. Rounding distances up keeps
/// the triangle inequality: ceil is monotone and superadditive.
inline Rational rounded_root(const BigInt& s, int q) {
    BigInt scaled = s * q * q;
    BigInt r = isqrt_floor(scaled);
    if (r * r != scaled) r += 1;
    return Rational(r, q);
}

inline std::vector<std::string> point_labels(int size) {
    std::vector<std::string> labels;
    for (int i = 0; i < size; ++i) labels.push_back("p" + std::to_string(i));
    return labels;
}

inline FiniteMetricSpace gen_euclidean(const GeneratorSpec& spec, Rng& rng) {
    const int n = spec.size;
    std::vector<std::pair<long, long>> pts;
    while (static_cast<int>(pts.size()) < n) {
        std::pair<long, long> p{rng.uniform(0, 40), rng.uniform(0, 40)};
        if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    }
    DistanceMatrix d(n, std::vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            long dx = pts[i].first - pts[j].first;
            long dy = pts[i].second - pts[j].second;
            d[i][j] = d[j][i] =
                rounded_root(BigInt(dx) * dx + BigInt(dy) * dy,
                             spec.denominator_bound);
        }
    return FiniteMetricSpace::create(point_labels(n), std::move(d));
}

inline FiniteMetricSpace gen_tree(const GeneratorSpec& spec, Rng& rng) {
    const int n = spec.size;
    std::vector<int> parent(n, -1);
    std::vector<Rational> up_weight(n, Rational(0));
    for (int i = 1; i < n; ++i) {
        parent[i] = static_cast<int>(rng.uniform(0, i - 1));
        up_weight[i] = rng.rational_in(1, 3, spec.denominator_bound);
    }
    // Path distances by walking both nodes to the root.
    auto path_to_root = [&](int v) {
        std::vector<int> path;
        for (int u = v; u != -1; u = parent[u]) path.push_back(u);
        return path;
    };
    DistanceMatrix d(n, std::vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            auto pi = path_to_root(i), pj = path_to_root(j);
            // Find the lowest common ancestor by membership.
            int lca = 0;
            for (int u : pi)
                if (std::find(pj.begin(), pj.end(), u) != pj.end()) {
                    lca = u;
                    break;
                }
            Rational dist(0);
            for (int u = i; u != lca; u = parent[u]) dist += up_weight[u];
            for (int u = j; u != lca; u = parent[u]) dist += up_weight[u];
            d[i][j] = d[j][i] = dist;
        }
    return FiniteMetricSpace::create(point_labels(n), std::move(d));
}

inline FiniteMetricSpace gen_graph(const GeneratorSpec& spec, Rng& rng) {
    const int n = spec.size;
    std::vector<std::vector<std::optional<Rational>>> w(
        n, std::vector<std::optional<Rational>>(n));
    for (int i = 1; i < n; ++i) {
        int p = static_cast<int>(rng.uniform(0, i - 1));
        w[i][p] = w[p][i] = rng.rational_in(1, 2, spec.denominator_bound);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!w[i][j] && rng.uniform(0, 99) < 30)
                w[i][j] = w[j][i] = rng.rational_in(1, 2, spec.denominator_bound);
    // Exact all-pairs shortest paths.
    const Rational inf(1000000);
    DistanceMatrix d(n, std::vector<Rational>(n, inf));
    for (int i = 0; i < n; ++i) d[i][i] = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (w[i][j]) d[i][j] = *w[i][j];
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    return FiniteMetricSpace::create(point_labels(n), std::move(d));
}

inline FiniteMetricSpace gen_clustered(const GeneratorSpec& spec, Rng& rng) {
    const int n = spec.size;
    const int clusters = std::max(2, n / 3);
    std::vector<int> cluster_of(n);
    for (int i = 0; i < n; ++i) cluster_of[i] = i % clusters;
    // Constant distance per cluster pair keeps the triangle inequality
    // trivially: intra in [1,2], inter in [10,11].
    std::vector<std::vector<Rational>> inter(clusters,
                                             std::vector<Rational>(clusters));
    for (int a = 0; a < clusters; ++a)
        for (int b = a + 1; b < clusters; ++b)
            inter[a][b] = inter[b][a] =
                rng.rational_in(10, 11, spec.denominator_bound);
    DistanceMatrix d(n, std::vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (cluster_of[i] == cluster_of[j])
                d[i][j] = d[j][i] = rng.rational_in(1, 2, spec.denominator_bound);
            else
                d[i][j] = d[j][i] = inter[cluster_of[i]][cluster_of[j]];
        }
    return FiniteMetricSpace::create(point_labels(n), std::move(d));
}

} // namespace harness_detail

/// Deterministic per (kind, size, seed, denominator bound); the result
/// always passes the metric axioms.
inline FiniteMetricSpace gen_random_metric(const GeneratorSpec& spec) {
    spec.check();
    harness_detail::Rng rng(spec.seed ^ (static_cast<std::uint64_t>(spec.kind) << 56));
    switch (spec.kind) {
        case MetricKind::EuclideanRounded:
            return harness_detail::gen_euclidean(spec, rng);
        case MetricKind::TreeMetric: return harness_detail::gen_tree(spec, rng);
        case MetricKind::GraphShortestPath:
            return harness_detail::gen_graph(spec, rng);
        case MetricKind::Clustered: return harness_detail::gen_clustered(spec, rng);
    }
    throw TcsError(ErrorCode::InvalidSpec, "unhandled kind");
}

/// Greedy closest-pair extension with backtracking: tries candidate pairs
/// in increasing distance order, keeping only prefixes that stay
/// minimum-weight matchings. Exhausting the node budget is a result, not
/// an error.
inline std::optional<std::vector<std::pair<int, int>>> gen_greedy_pair_sequence(
    const FiniteMetricSpace& space, int n, long node_budget = 10000) {
    if (2 * n > space.size()) return std::nullopt;
    std::vector<std::pair<int, int>> all_pairs;
    for (int i = 0; i < space.size(); ++i)
        for (int j = i + 1; j < space.size(); ++j) all_pairs.emplace_back(i, j);
    std::sort(all_pairs.begin(), all_pairs.end(),
              [&](const auto& a, const auto& b) {
                  const Rational &da = space.dist(a.first, a.second),
                                 &db = space.dist(b.first, b.second);
                  if (da != db) return da < db;
                  return a < b;
              });

    std::vector<std::pair<int, int>> chosen;
    std::vector<char> used(space.size(), 0);
    long nodes = 0;

    auto prefix_ok = [&]() {
        // Earlier prefixes were checked on the way down; only the newest
        // prefix needs the oracle comparison.
        std::vector<int> verts;
        Rational w(0);
        for (const auto& [x, y] : chosen) {
            verts.push_back(x);
            verts.push_back(y);
            w += space.dist(x, y);
        }
        auto inst = MatchingInstance::create(space, verts);
        return brute_force_min_matching(inst).weight == w;
    };

    std::function<bool()> dfs = [&]() -> bool {
        if (static_cast<int>(chosen.size()) == n) return true;
        if (++nodes > node_budget) return false;
        for (const auto& [x, y] : all_pairs) {
            if (used[x] || used[y]) continue;
            chosen.emplace_back(x, y);
            used[x] = used[y] = 1;
            if (prefix_ok() && dfs()) return true;
            if (nodes > node_budget) {
                chosen.pop_back();
                used[x] = used[y] = 0;
                return false;
            }
            chosen.pop_back();
            used[x] = used[y] = 0;
        }
        return false;
    };
    if (!dfs()) return std::nullopt;
    return chosen;
}

/// LP-free exact oracle for integer-mass problems: expand the masses into
/// unit grains and enumerate every assignment. Capped at 8 grains.
inline Rational oracle_tc_norm_integer(const FiniteMetricSpace& space,
                                       const TransportationProblem& f) {
    std::vector<int> pos, neg;
    for (int i = 0; i < space.size(); ++i) {
        const Rational& m = f.mass(i);
        if (denominator(m) != 1)
            throw TcsError(ErrorCode::InvalidSpec, "masses must be integers");
        BigInt k = numerator(m) < 0 ? BigInt(-numerator(m)) : numerator(m);
        for (BigInt c = 0; c < k; ++c) (m > 0 ? pos : neg).push_back(i);
    }
    if (pos.size() != neg.size())
        throw TcsError(ErrorCode::Internal, "grain imbalance");
    if (pos.size() > 8)
        throw TcsError(ErrorCode::TooLarge, "more than 8 grains");
    if (pos.empty()) return Rational(0);
    std::vector<int> perm(pos.size());
    std::iota(perm.begin(), perm.end(), 0);
    bool first = true;
    Rational best(0);
    do {
        Rational cost(0);
        for (std::size_t i = 0; i < perm.size(); ++i)
            cost += space.dist(pos[i], neg[perm[i]]);
        if (first || cost < best) best = cost;
        first = false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// ---------------------------------------------------------------------------
// Property suite

struct TrialReport {
    GeneratorSpec spec;
    int trials = 0;
    bool inject_fault = false;
    std::map<std::string, int> pass_counts;
    int failures = 0;
    int skipped = 0; // pair search exhausted; nothing to certify
    int counterexample_trial = -1;
    Json counterexample; // replayable: space, pairs, dual, failed checks

    Json to_json() const {
        Json j;
        Json sp;
        sp["kind"] = metric_kind_name(spec.kind);
        sp["size"] = spec.size;
        sp["seed"] = spec.seed;
        sp["denominator_bound"] = spec.denominator_bound;
        j["spec"] = std::move(sp);
        j["trials"] = trials;
        j["inject_fault"] = inject_fault;
        Json pc = Json::object();
        for (const auto& [name, count] : pass_counts) pc[name] = count;
        j["pass_counts"] = std::move(pc);
        j["failures"] = failures;
        j["skipped"] = skipped;
        if (counterexample_trial >= 0) {
            j["counterexample_trial"] = counterexample_trial;
            j["counterexample"] = counterexample;
        } else {
            j["counterexample"] = nullptr;
        }
        return j;
    }
};

/// One full pipeline pass per trial. With fault injection the laminar dual
/// is perturbed before use; the failure report plus a replayable artifact
/// is the expected outcome then.
inline TrialReport run_property_suite(const GeneratorSpec& spec, int trials,
                                      bool inject_fault = false) {
    spec.check();
    TrialReport report;
    report.spec = spec;
    report.trials = trials;
    report.inject_fault = inject_fault;

    for (int trial = 0; trial < trials; ++trial) {
        GeneratorSpec tspec = spec;
        harness_detail::Rng mix(spec.seed + 0x9e3779b97f4a7c15ull *
                                                static_cast<std::uint64_t>(trial + 1));
        tspec.seed = mix.next();
        FiniteMetricSpace space = gen_random_metric(tspec);

        int want = std::min(4, space.size() / 2);
        std::optional<std::vector<std::pair<int, int>>> pairs;
        for (int n = want; n >= 1 && !pairs; --n)
            pairs = gen_greedy_pair_sequence(space, n);
        if (!pairs) {
            ++report.skipped;
            continue;
        }

        auto record = [&](const std::string& name, bool pass,
                          const Json& artifact) {
            if (pass) {
                ++report.pass_counts[name];
            } else {
                ++report.failures;
                if (report.counterexample_trial < 0) {
                    report.counterexample_trial = trial;
                    Json ce;
                    ce["failed_check"] = name;
                    ce["space"] = space_to_json(space);
                    ce["pairs"] = pairs_to_json(space, *pairs)["pairs"];
                    ce["artifact"] = artifact;
                    report.counterexample = std::move(ce);
                }
            }
        };

        try {
            if (auto k = check_prefix_matching_criterion(space, *pairs)) {
                record("prefix-criterion", false, Json{{"failing_prefix", *k}});
                continue;
            }
            record("prefix-criterion", true, {});

            if (inject_fault) {
                // Perturb one dual weight and demand that certification
                // catches it.
                std::vector<int> verts;
                for (const auto& [x, y] : *pairs) {
                    verts.push_back(x);
                    verts.push_back(y);
                }
                auto inst = MatchingInstance::create(space, verts);
                Matching m;
                for (int i = 0; i < inst.pairs_count(); ++i)
                    m.pairs.emplace_back(2 * i, 2 * i + 1);
                m.normalize();
                auto lam = uncross_to_laminar(inst, m, solve_dual_lp(inst));
                lam.weights[0] += 1;
                auto rep = verify_dual_certificate(inst, m, lam);
                record("fault-detected", !rep.all_pass(),
                       Json{{"dual", dual_to_json(inst, lam)},
                            {"certificate", report_to_json(rep)}});
                continue;
            }

            auto P = build_projection(space, *pairs);
            auto cert = certify_projection(P);
            for (const auto& item : cert.items)
                record("certify/" + item.name, item.pass,
                       report_to_json(cert));

            // Grain-oracle agreement on a small integer problem.
            TransportationProblem f(space);
            harness_detail::Rng frng(tspec.seed ^ 0xabcdef);
            int a = static_cast<int>(frng.uniform(0, space.size() - 1));
            int b = static_cast<int>(frng.uniform(0, space.size() - 1));
            if (a != b) {
                f.add(a, Rational(2)).add(b, Rational(-2));
                bool agree =
                    tc_norm(space, f).value == oracle_tc_norm_integer(space, f);
                record("grain-oracle", agree, problem_to_json(space, f));
            }
        } catch (const TcsError& e) {
            record(std::string("exception/") + error_code_name(e.code()), false,
                   Json{{"message", e.what()}});
        }
    }
    return report;
}

} // namespace tcs
