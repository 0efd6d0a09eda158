#pragma once

// Construction and certification of the norm-1 projection onto the span of
// the matched-pair molecules.
//
// Given matched pairs (x_i, y_i) forming a minimum-weight perfect matching
// and a laminar odd-cut dual for it, each pair receives a 1-Lipschitz
// functional t_i built from the dual weights. The functionals are
// biorthogonal to the molecules m_i = (1_{y_i} - 1_{x_i})/d(x_i,y_i), and
// f -> sum_i <t_i, f> m_i is a projection of operator norm exactly 1.
//
// Geometry of the construction: every laminar member H carries a "halo"
// U_H, the union of balls around its vertices whose radii accumulate the
// dual weights of the members nested inside H. Ramp functions measure the
// distance past those inner shells; step functions cap the ramp at y_H.
// The functional t_i climbs ramps along the chain of members separating
// x_i from y_i and descends symmetrically along the chain around y_i.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tcs/error.hpp"
#include "tcs/lipschitz.hpp"
#include "tcs/matching.hpp"
#include "tcs/metric_space.hpp"
#include "tcs/rational.hpp"
#include "tcs/report.hpp"
#include "tcs/transport.hpp"

namespace tcs {

/// Strictly increasing run of laminar members, stored as family indices.
struct Chain {
    std::vector<int> members;
};

/// A matching instance with oriented pairs, a laminar dual for it, and the
/// per-pair chains the functional construction walks.
class DualStructure {
public:
    /// `pairs` are global point ids (x_i, y_i); the instance's local ids
    /// are 2i and 2i+1 in that order. The dual must be a valid certificate
    /// for this matching (callers verify; structural failures throw).
    DualStructure(MatchingInstance inst,
                  std::vector<std::pair<int, int>> pairs_global,
                  LaminarDual dual)
        : inst_(std::move(inst)),
          pairs_(std::move(pairs_global)),
          dual_(std::move(dual)) {
        const int n = inst_.pairs_count();
        if (static_cast<int>(pairs_.size()) != n)
            throw TcsError(ErrorCode::DimensionMismatch, "pair count");
        d_chains_.resize(n);
        f_chains_.resize(n);
        thresholds_.resize(n);
        for (int i = 0; i < n; ++i) {
            d_chains_[i] = collect_chain(2 * i, 2 * i + 1);
            f_chains_[i] = collect_chain(2 * i + 1, 2 * i);
            Rational t(0), u(0);
            for (int m : d_chains_[i].members) t += dual_.weights[m];
            for (int m : f_chains_[i].members) u += dual_.weights[m];
            thresholds_[i] = t;
            // Tightness on the matched edge: the members separating x_i
            // from y_i are exactly the two chains, and their weights sum
            // to d(x_i, y_i) for any optimal dual.
            if (t + u != inst_.weight(2 * i, 2 * i + 1))
                throw TcsError(ErrorCode::InvalidSpec,
                               "dual is not tight on matched pair " +
                                   std::to_string(i + 1));
        }
    }

    const MatchingInstance& instance() const { return inst_; }
    const FiniteMetricSpace& space() const { return inst_.space; }
    const LaminarDual& dual() const { return dual_; }
    const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
    int num_pairs() const { return static_cast<int>(pairs_.size()); }

    const Chain& d_chain(int i) const { return d_chains_.at(i); }
    const Chain& f_chain(int i) const { return f_chains_.at(i); }
    const Rational& threshold(int i) const { return thresholds_.at(i); }

    int member_index(CutSet s) const {
        int idx = dual_.find(s);
        if (idx < 0)
            throw TcsError(ErrorCode::NotAMember, "set is not a family member");
        return idx;
    }

    // -- geometry ---------------------------------------------------------

    /// Dual weight accumulated strictly inside H around vertex v:
    /// sum of y_D over members D with v in D and D a proper subset of H.
    Rational inner_radius(int v_local, int member) const {
        CutSet h = dual_.family[member];
        if (!cut_contains(h, v_local))
            throw TcsError(ErrorCode::NotAMember, "vertex not in member");
        Rational r(0);
        for (std::size_t k = 0; k < dual_.family.size(); ++k) {
            CutSet d = dual_.family[k];
            if (d != h && cut_contains(d, v_local) && (d & ~h) == 0)
                r += dual_.weights[k];
        }
        return r;
    }

    /// Ball radius of the halo U_F at vertex v: weights of all members
    /// containing v and contained in F, F itself included.
    Rational halo_radius(int v_local, int member) const {
        return inner_radius(v_local, member) + dual_.weights[member];
    }

    /// Membership of an arbitrary point of the space in the halo U_F.
    bool in_halo(int point_global, int member) const {
        CutSet f = dual_.family[member];
        for (int v = 0; v < inst_.num_vertices(); ++v) {
            if (!cut_contains(f, v)) continue;
            if (space().dist(point_global, inst_.vertices[v]) <=
                halo_radius(v, member))
                return true;
        }
        return false;
    }

    /// Distance of x past the inner shells of H, floored at zero:
    /// min over v in H of max(d(x,v) - inner_radius(v,H), 0).
    Rational excess(int point_global, int member) const {
        CutSet h = dual_.family[member];
        std::optional<Rational> best;
        for (int v = 0; v < inst_.num_vertices(); ++v) {
            if (!cut_contains(h, v)) continue;
            Rational e = space().dist(point_global, inst_.vertices[v]) -
                         inner_radius(v, member);
            if (e < 0) e = 0;
            if (!best || e < *best) best = e;
        }
        return *best; // members are nonempty
    }

    /// lambda + theta * excess; constant lambda on every halo nested in H.
    Rational ramp(const Rational& lambda, int theta, int member,
                  int point_global) const {
        return lambda + Rational(theta) * excess(point_global, member);
    }

    /// Ramp capped at the member's own weight: constant lambda inside the
    /// nested halos and lambda + theta*y_H outside U_H.
    Rational step(const Rational& lambda, int theta, int member,
                  int point_global) const {
        Rational e = excess(point_global, member);
        if (e > dual_.weights[member]) e = dual_.weights[member];
        return lambda + Rational(theta) * e;
    }

    // -- pair functionals ---------------------------------------------------

    /// Envelope climbing the x_i-side chain with cumulative offsets.
    Rational lower_envelope(int i, int point_global) const {
        const auto& chain = d_chains_.at(i).members;
        Rational offset(0);
        std::optional<Rational> best;
        for (int m : chain) {
            Rational v = ramp(offset, +1, m, point_global);
            if (!best || v < *best) best = v;
            offset += dual_.weights[m];
        }
        return *best;
    }

    /// Envelope descending the y_i-side chain; offsets accumulate from the
    /// outermost member down to the singleton, starting at the threshold.
    Rational upper_envelope(int i, int point_global) const {
        const auto& chain = f_chains_.at(i).members;
        Rational offset = thresholds_.at(i);
        std::optional<Rational> best;
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            offset += dual_.weights[*it];
            Rational v = ramp(offset, -1, *it, point_global);
            if (!best || v > *best) best = v;
        }
        return *best;
    }

    /// The pair functional t_i at one point. Exactly one of the two guard
    /// branches may fire; a simultaneous hit is a certification failure of
    /// the supplied dual and throws.
    Rational eval_pair_functional(int i, int point_global) const {
        const Rational& t = thresholds_.at(i);
        Rational lo = lower_envelope(i, point_global);
        Rational hi = upper_envelope(i, point_global);
        ++eval_count_;
        if (lo < t && hi > t) {
            ++conflict_count_;
            throw TcsError(ErrorCode::WellDefinednessViolation,
                           "both envelope guards hold at point " +
                               space().label(point_global) + " for pair " +
                               std::to_string(i + 1));
        }
        if (lo < t) return lo;
        if (hi > t) return hi;
        return t;
    }

    /// The same functional as a sum of capped steps over both chains; the
    /// two evaluations agree everywhere for valid duals.
    Rational eval_pair_functional_via_steps(int i, int point_global) const {
        Rational total(0);
        for (int m : d_chains_.at(i).members)
            total += step(Rational(0), +1, m, point_global);
        for (int m : f_chains_.at(i).members)
            total += step(dual_.weights[m], -1, m, point_global);
        return total;
    }

    LipschitzFunction materialize_pair_functional(int i) const {
        LipschitzFunction t;
        for (int x = 0; x < space().size(); ++x)
            t.set(x, eval_pair_functional(i, x));
        return t;
    }

    // -- chain walking -------------------------------------------------------

    /// Smallest member whose halo contains the point, by (size, mask).
    std::optional<int> smallest_halo_member(int point_global) const {
        std::optional<int> best;
        for (std::size_t k = 0; k < dual_.family.size(); ++k)
            if (in_halo(point_global, static_cast<int>(k))) {
                best = static_cast<int>(k);
                break; // family is sorted by (size, mask)
            }
        return best;
    }

    /// Members on the superset chain of `member`, itself included,
    /// ascending.
    std::vector<int> superset_chain(int member) const {
        std::vector<int> chain;
        CutSet base = dual_.family[member];
        for (std::size_t k = 0; k < dual_.family.size(); ++k)
            if ((base & ~dual_.family[k]) == 0) chain.push_back(static_cast<int>(k));
        std::sort(chain.begin(), chain.end(), [&](int a, int b) {
            return cut_size(dual_.family[a]) < cut_size(dual_.family[b]);
        });
        return chain;
    }

    std::size_t family_size() const { return dual_.family.size(); }

    long eval_count() const { return eval_count_; }
    long conflict_count() const { return conflict_count_; }

private:
    Chain collect_chain(int in_vertex, int out_vertex) const {
        Chain c;
        for (std::size_t k = 0; k < dual_.family.size(); ++k) {
            CutSet s = dual_.family[k];
            if (cut_contains(s, in_vertex) && !cut_contains(s, out_vertex))
                c.members.push_back(static_cast<int>(k));
        }
        std::sort(c.members.begin(), c.members.end(), [&](int a, int b) {
            return cut_size(dual_.family[a]) < cut_size(dual_.family[b]);
        });
        // Laminarity makes this a strict chain starting at the singleton.
        for (std::size_t k = 0; k < c.members.size(); ++k) {
            CutSet cur = dual_.family[c.members[k]];
            if (k == 0) {
                if (cur != (CutSet(1) << in_vertex))
                    throw TcsError(ErrorCode::InvalidSpec,
                                   "chain does not start at a singleton");
            } else {
                CutSet prev = dual_.family[c.members[k - 1]];
                if ((prev & ~cur) != 0 || prev == cur)
                    throw TcsError(ErrorCode::InvalidSpec,
                                   "family members containing a vertex do not nest");
            }
        }
        return c;
    }

    MatchingInstance inst_;
    std::vector<std::pair<int, int>> pairs_;
    LaminarDual dual_;
    std::vector<Chain> d_chains_, f_chains_;
    std::vector<Rational> thresholds_;
    mutable long eval_count_ = 0;
    mutable long conflict_count_ = 0;
};

// ---------------------------------------------------------------------------
// Diagnostic chain functionals for a pair of space points

enum class PairCase {
    Disjoint,      // halo members of the two points are disjoint
    NestedBelow,   // the source member is strictly inside the sink member
    Equal,         // both points resolve to the same member
    SinkUncovered, // the sink lies outside every halo
    BothUncovered, // both points lie outside every halo
};

/// The data behind the per-pair contraction argument: which case applies
/// and the two chains whose capped steps sum to the comparison functional.
struct PairDecomposition {
    PairCase kind = PairCase::BothUncovered;
    bool swapped = false; // true when roles of the two points were exchanged
    std::optional<int> d_member, f_member;
    std::vector<int> d_chain, f_chain; // family indices, ascending
};

/// Classifies a pair (w, z) of space points against the halos and builds
/// the chains. Throws CaseUnresolvable when a chain bound does not exist
/// (a tie in smallest-member selection placed the other point inside the
/// base halo already).
inline PairDecomposition classify_pair(const DualStructure& ds, int w_global,
                                       int z_global) {
    PairDecomposition out;
    auto dm = ds.smallest_halo_member(w_global);
    auto fm = ds.smallest_halo_member(z_global);
    if (!dm && !fm) {
        out.kind = PairCase::BothUncovered;
        return out;
    }
    if (dm && !fm) {
        out.kind = PairCase::SinkUncovered;
    } else if (!dm && fm) {
        out.kind = PairCase::SinkUncovered;
        out.swapped = true;
        std::swap(w_global, z_global);
        dm = fm;
        fm.reset();
    } else if (*dm == *fm) {
        out.kind = PairCase::Equal;
        out.d_member = dm;
        out.d_chain = {*dm};
        return out;
    } else {
        CutSet a = ds.dual().family[*dm], b = ds.dual().family[*fm];
        if ((a & b) == 0) {
            out.kind = PairCase::Disjoint;
        } else {
            out.kind = PairCase::NestedBelow;
            if ((b & ~a) == 0) { // f-member nested inside d-member: swap
                out.swapped = true;
                std::swap(w_global, z_global);
                std::swap(dm, fm);
            }
        }
    }
    out.d_member = dm;
    out.f_member = fm;

    if (out.kind == PairCase::NestedBelow) {
        // Chain runs from the inner member up to the outer one inclusive.
        for (int m : ds.superset_chain(*dm)) {
            out.d_chain.push_back(m);
            if (m == *fm) break;
        }
        return out;
    }

    // Disjoint / SinkUncovered: the chain tops out at the largest superset
    // whose halo still excludes the opposite point.
    auto build_limited = [&](int base, int opposite) {
        std::vector<int> chain;
        for (int m : ds.superset_chain(base)) {
            if (ds.in_halo(opposite, m)) break;
            chain.push_back(m);
        }
        if (chain.empty())
            throw TcsError(ErrorCode::CaseUnresolvable,
                           "opposite point already inside the base halo");
        return chain;
    };
    out.d_chain = build_limited(*dm, z_global);
    if (out.kind == PairCase::Disjoint)
        out.f_chain = build_limited(*fm, w_global);
    return out;
}

/// The comparison functional of a decomposition: capped steps climb the
/// d-chain and descend the f-chain. Identically zero when both points are
/// uncovered.
inline Rational eval_chain_functional(const DualStructure& ds,
                                      const PairDecomposition& dec,
                                      int point_global) {
    Rational total(0);
    for (int m : dec.d_chain) total += ds.step(Rational(0), +1, m, point_global);
    for (int m : dec.f_chain)
        total += ds.step(ds.dual().weights[m], -1, m, point_global);
    return total;
}

/// Locates the unique pair whose functional decomposition owns a family
/// member (the member separates exactly one matched pair). Returns the
/// owner count alongside the first owner for bookkeeping checks.
inline std::pair<int, int> chain_owner(const DualStructure& ds, int member) {
    int count = 0, owner = -1;
    for (int i = 0; i < ds.num_pairs(); ++i) {
        const auto& dc = ds.d_chain(i).members;
        const auto& fc = ds.f_chain(i).members;
        if (std::find(dc.begin(), dc.end(), member) != dc.end() ||
            std::find(fc.begin(), fc.end(), member) != fc.end()) {
            ++count;
            if (owner < 0) owner = i;
        }
    }
    return {count, owner};
}

// ---------------------------------------------------------------------------
// The projection operator

/// Coefficients over the molecules; the span element it names has
/// transportation cost norm exactly sum |a_i|.
struct SpanElement {
    std::vector<Rational> coefficients;

    Rational l1_norm() const {
        Rational s(0);
        for (const auto& c : coefficients) s += rat_abs(c);
        return s;
    }
};

class ProjectionOperator {
public:
    ProjectionOperator(DualStructure ds) : ds_(std::move(ds)) {
        const auto& space = ds_.space();
        for (int i = 0; i < ds_.num_pairs(); ++i) {
            const auto& [x, y] = ds_.pairs()[i];
            molecules_.push_back(Molecule::between(space, x, y));
            functionals_.push_back(ds_.materialize_pair_functional(i));
        }
        for (int i = 0; i < ds_.num_pairs(); ++i)
            for (int j = 0; j < ds_.num_pairs(); ++j) {
                Rational p =
                    pairing(functionals_[i], molecules_[j].as_problem(space));
                if (p != Rational(i == j ? 1 : 0))
                    throw TcsError(ErrorCode::Internal,
                                   "functionals are not biorthogonal to the "
                                   "molecules");
            }
    }

    const DualStructure& structure() const { return ds_; }
    const FiniteMetricSpace& space() const { return ds_.space(); }
    int num_pairs() const { return ds_.num_pairs(); }
    const std::vector<Molecule>& molecules() const { return molecules_; }
    const std::vector<LipschitzFunction>& functionals() const {
        return functionals_;
    }

    /// Coefficients of P(f) over the molecules: a_i = <t_i, f>.
    SpanElement apply(const TransportationProblem& f) const {
        SpanElement a;
        for (const auto& t : functionals_) a.coefficients.push_back(pairing(t, f));
        return a;
    }

    /// The transportation problem named by span coefficients.
    TransportationProblem realize(const SpanElement& a) const {
        if (a.coefficients.size() != molecules_.size())
            throw TcsError(ErrorCode::DimensionMismatch, "coefficient count");
        TransportationProblem f(space());
        for (std::size_t i = 0; i < molecules_.size(); ++i) {
            const auto& m = molecules_[i];
            f.add(m.positive, a.coefficients[i] * m.scale);
            f.add(m.negative, -(a.coefficients[i] * m.scale));
        }
        return f;
    }

private:
    DualStructure ds_;
    std::vector<Molecule> molecules_;
    std::vector<LipschitzFunction> functionals_;
};

// ---------------------------------------------------------------------------
// Pipeline entry points

/// Builds the projection for explicitly supplied laminar dual data. The
/// dual is verified as a certificate for the pairs-as-matching first.
inline ProjectionOperator build_projection_with_dual(
    const FiniteMetricSpace& space,
    const std::vector<std::pair<int, int>>& pairs, LaminarDual dual) {
    std::vector<int> verts;
    for (const auto& [x, y] : pairs) {
        verts.push_back(x);
        verts.push_back(y);
    }
    MatchingInstance inst = MatchingInstance::create(space, verts);
    Matching m;
    for (int i = 0; i < inst.pairs_count(); ++i)
        m.pairs.emplace_back(2 * i, 2 * i + 1);
    m.normalize();
    auto rep = verify_dual_certificate(inst, m, dual);
    if (!rep.all_pass())
        throw TcsError(ErrorCode::InvalidSpec,
                       "supplied dual fails certification: " + rep.first_failure());
    return ProjectionOperator(
        DualStructure(std::move(inst), pairs, std::move(dual)));
}

/// Full pipeline: check the prefix matching criterion, solve the odd-cut
/// dual, uncross it, build chains and functionals.
inline ProjectionOperator build_projection(
    const FiniteMetricSpace& space,
    const std::vector<std::pair<int, int>>& pairs) {
    if (auto k = check_prefix_matching_criterion(space, pairs))
        throw TcsError(ErrorCode::NotAMinimumMatching,
                       "prefix " + std::to_string(*k) +
                           " is not a minimum-weight matching",
                       {}, *k);
    std::vector<int> verts;
    for (const auto& [x, y] : pairs) {
        verts.push_back(x);
        verts.push_back(y);
    }
    MatchingInstance inst = MatchingInstance::create(space, verts);
    Matching m;
    for (int i = 0; i < inst.pairs_count(); ++i)
        m.pairs.emplace_back(2 * i, 2 * i + 1);
    m.normalize();
    RawOddCutDual raw = solve_dual_lp(inst);
    LaminarDual lam = uncross_to_laminar(inst, m, raw);
    auto rep = verify_dual_certificate(inst, m, lam);
    if (!rep.all_pass())
        throw TcsError(ErrorCode::Internal,
                       "pipeline dual fails certification: " + rep.first_failure());
    return ProjectionOperator(
        DualStructure(std::move(inst), pairs, std::move(lam)));
}

// ---------------------------------------------------------------------------
// Certification

namespace projection_detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Deterministic small rationals for coefficient batteries.
inline Rational small_rational(std::uint64_t& state) {
    long num = static_cast<long>(splitmix64(state) % 21) - 10;
    long den = static_cast<long>(splitmix64(state) % 8) + 1;
    return Rational(num, den);
}

} // namespace projection_detail

/// Runs every obligation of the construction as an exact check:
///  1. each functional is 1-Lipschitz over all point pairs;
///  2. functionals and molecules are biorthogonal;
///  3. sum_i |t_i(z) - t_i(w)| <= d(z,w) for every pair of points;
///  4. molecule combinations realize their l1 norm in transportation cost;
///  5. ||P(f)|| <= ||f|| on a sampled battery of problems;
///  6. the envelope and step-sum evaluations of each t_i agree pointwise;
///  7. no point triggers both envelope guards (well-definedness).
inline CheckReport certify_projection(const ProjectionOperator& P) {
    CheckReport rep;
    const auto& space = P.space();
    const auto& ds = P.structure();
    const int n = P.num_pairs();

    {
        bool ok = true;
        std::string witness;
        for (int i = 0; i < n && ok; ++i)
            if (auto bad = lipschitz_violation(space, P.functionals()[i])) {
                ok = false;
                witness = "t" + std::to_string(i + 1) + " at (" +
                          space.label(bad->first) + "," + space.label(bad->second) +
                          ")";
            }
        rep.add("one-lipschitz", ok, witness);
    }
    {
        bool ok = true;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Rational p = pairing(P.functionals()[i],
                                     P.molecules()[j].as_problem(space));
                if (p != Rational(i == j ? 1 : 0)) ok = false;
            }
        rep.add("biorthogonal", ok);
    }
    {
        bool ok = true;
        std::string witness;
        for (int w = 0; w < space.size() && ok; ++w)
            for (int z = w + 1; z < space.size() && ok; ++z) {
                Rational total(0);
                for (int i = 0; i < n; ++i)
                    total += rat_abs(P.functionals()[i].at(z) -
                                     P.functionals()[i].at(w));
                if (total > space.dist(w, z)) {
                    ok = false;
                    witness = "(" + space.label(w) + "," + space.label(z) + ")";
                }
            }
        rep.add("pair-sum-contraction", ok, witness);
    }
    {
        // l1 isometry of the molecule span on a deterministic battery.
        std::vector<SpanElement> battery;
        for (int i = 0; i < n; ++i) {
            SpanElement e;
            e.coefficients.assign(n, Rational(0));
            e.coefficients[i] = 1;
            battery.push_back(e);
        }
        SpanElement ones, alt, ramp;
        for (int i = 0; i < n; ++i) {
            ones.coefficients.push_back(Rational(1));
            alt.coefficients.push_back(Rational(i % 2 == 0 ? 1 : -1));
            ramp.coefficients.push_back(Rational(i + 1, 2));
        }
        battery.push_back(ones);
        battery.push_back(alt);
        battery.push_back(ramp);
        std::uint64_t state = 0x5eed;
        for (int k = 0; k < 8; ++k) {
            SpanElement e;
            for (int i = 0; i < n; ++i)
                e.coefficients.push_back(projection_detail::small_rational(state));
            battery.push_back(e);
        }
        bool ok = true;
        for (const auto& e : battery) {
            auto f = P.realize(e);
            if (tc_norm(space, f).value != e.l1_norm()) ok = false;
        }
        rep.add("l1-isometry", ok);
    }
    {
        // Contraction on sampled problems, via the realized span element.
        bool ok = true;
        std::string witness;
        std::vector<TransportationProblem> samples;
        for (int i = 0; i < n; ++i)
            samples.push_back(P.molecules()[i].as_problem(space));
        for (int w = 0; w < space.size(); ++w)
            for (int z = w + 1; z < space.size(); ++z) {
                TransportationProblem f(space);
                f.add(w, Rational(1)).add(z, Rational(-1));
                samples.push_back(f);
            }
        std::uint64_t state = 0xfeed;
        for (int k = 0; k < 4; ++k) {
            TransportationProblem f(space);
            Rational sum(0);
            for (int x = 0; x + 1 < space.size(); ++x) {
                Rational c = projection_detail::small_rational(state);
                f.add(x, c);
                sum += c;
            }
            f.add(space.size() - 1, -sum);
            samples.push_back(f);
        }
        for (const auto& f : samples) {
            Rational pf = tc_norm(space, P.realize(P.apply(f))).value;
            if (pf > tc_norm(space, f).value) {
                ok = false;
                witness = "sampled problem";
                break;
            }
        }
        rep.add("projection-contraction", ok, witness);
    }
    {
        bool ok = true;
        bool well_defined = true;
        std::string witness;
        for (int i = 0; i < n; ++i)
            for (int x = 0; x < space.size(); ++x) {
                try {
                    Rational direct = ds.eval_pair_functional(i, x);
                    Rational via = ds.eval_pair_functional_via_steps(i, x);
                    if (direct != via) {
                        ok = false;
                        witness = "t" + std::to_string(i + 1) + " at " +
                                  space.label(x);
                    }
                } catch (const TcsError& e) {
                    if (e.code() == ErrorCode::WellDefinednessViolation)
                        well_defined = false;
                    else
                        throw;
                }
            }
        rep.add("step-sum-identity", ok, witness);
        rep.add("well-definedness", well_defined && ds.conflict_count() == 0);
    }
    return rep;
}

} // namespace tcs
