#pragma once

// Transportation problems over a finite metric space and their exact cost
// norm. The norm of a zero-sum mass function is computed as the bipartite
// transportation LP between its positive and negative supports; the LP dual
// yields Kantorovich potentials certifying optimality by complementary
// slackness.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tcs/error.hpp"
#include "tcs/lipschitz.hpp"
#include "tcs/metric_space.hpp"
#include "tcs/rational.hpp"
#include "tcs/simplex.hpp"

namespace tcs {

/// Zero-sum rational mass function, stored densely in point order.
class TransportationProblem {
public:
    explicit TransportationProblem(const FiniteMetricSpace& space)
        : masses_(space.size(), Rational(0)) {}

    TransportationProblem(const FiniteMetricSpace& space,
                          std::vector<Rational> masses)
        : masses_(std::move(masses)) {
        if (static_cast<int>(masses_.size()) != space.size())
            throw TcsError(ErrorCode::DimensionMismatch, "mass vector length");
        check_zero_sum();
    }

    TransportationProblem(const FiniteMetricSpace& space,
                          const std::map<std::string, Rational>& by_label)
        : masses_(space.size(), Rational(0)) {
        for (const auto& [label, m] : by_label) {
            auto idx = space.find(label);
            if (!idx) throw TcsError(ErrorCode::UnknownPoint, label, {label});
            masses_[*idx] = m;
        }
        check_zero_sum();
    }

    const std::vector<Rational>& masses() const { return masses_; }
    const Rational& mass(int i) const { return masses_.at(i); }

    std::vector<int> support() const {
        std::vector<int> s;
        for (std::size_t i = 0; i < masses_.size(); ++i)
            if (masses_[i] != 0) s.push_back(static_cast<int>(i));
        return s;
    }

    bool is_zero() const {
        for (const auto& m : masses_)
            if (m != 0) return false;
        return true;
    }

    TransportationProblem& add(int point, const Rational& m) {
        masses_.at(point) += m;
        return *this;
    }

    friend TransportationProblem operator+(TransportationProblem a,
                                           const TransportationProblem& b) {
        if (a.masses_.size() != b.masses_.size())
            throw TcsError(ErrorCode::DimensionMismatch, "problem sizes differ");
        for (std::size_t i = 0; i < a.masses_.size(); ++i)
            a.masses_[i] += b.masses_[i];
        return a;
    }

    friend TransportationProblem operator*(const Rational& c,
                                           TransportationProblem p) {
        for (auto& m : p.masses_) m *= c;
        return p;
    }

private:
    void check_zero_sum() const {
        Rational sum(0);
        for (const auto& m : masses_) sum += m;
        if (sum != 0)
            throw TcsError(ErrorCode::NotZeroSum, "masses sum to " + to_string(sum));
    }

    std::vector<Rational> masses_;
};

/// One nonnegative point-to-point move.
struct TransportMove {
    int source;
    int sink;
    Rational mass;
};

struct TransportationPlan {
    std::vector<TransportMove> moves;
};

/// Exact cost of a plan: sum of mass * distance.
inline Rational plan_cost(const FiniteMetricSpace& space,
                          const TransportationPlan& plan) {
    Rational total(0);
    for (const auto& mv : plan.moves) {
        if (mv.source < 0 || mv.source >= space.size() || mv.sink < 0 ||
            mv.sink >= space.size())
            throw TcsError(ErrorCode::UnknownPoint, "move endpoint out of range");
        total += mv.mass * space.dist(mv.source, mv.sink);
    }
    return total;
}

/// Net mass effect of a plan, as a signed vector over the space's points.
inline std::vector<Rational> plan_effect(const FiniteMetricSpace& space,
                                         const TransportationPlan& plan) {
    std::vector<Rational> eff(space.size(), Rational(0));
    for (const auto& mv : plan.moves) {
        eff[mv.source] += mv.mass;
        eff[mv.sink] -= mv.mass;
    }
    return eff;
}

/// Exact value on the support only: potential per point, empty off support.
struct DualPotentials {
    std::map<int, Rational> values;
};

struct TcNormResult {
    Rational value;
    TransportationPlan plan;
    DualPotentials potentials;
};

namespace transport_detail {

/// The bipartite transportation LP for given supplies/demands.
inline LinearProgram make_transport_lp(const FiniteMetricSpace& space,
                                       const std::vector<int>& sources,
                                       const std::vector<Rational>& supply,
                                       const std::vector<int>& sinks,
                                       const std::vector<Rational>& demand) {
    const std::size_t p = sources.size(), q = sinks.size();
    LinearProgram lp;
    lp.sense = Sense::Minimize;
    lp.objective.resize(p * q);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < q; ++j)
            lp.objective[i * q + j] = space.dist(sources[i], sinks[j]);
    for (std::size_t i = 0; i < p; ++i) {
        LinearConstraint c;
        c.coeffs.assign(p * q, Rational(0));
        for (std::size_t j = 0; j < q; ++j) c.coeffs[i * q + j] = 1;
        c.rel = Rel::Eq;
        c.rhs = supply[i];
        lp.constraints.push_back(std::move(c));
    }
    for (std::size_t j = 0; j < q; ++j) {
        LinearConstraint c;
        c.coeffs.assign(p * q, Rational(0));
        for (std::size_t i = 0; i < p; ++i) c.coeffs[i * q + j] = 1;
        c.rel = Rel::Eq;
        c.rhs = demand[j];
        lp.constraints.push_back(std::move(c));
    }
    return lp;
}

} // namespace transport_detail

/// Exact transportation cost norm with an optimal plan and certifying
/// potentials. Sources are the positive support, sinks the negative one.
inline TcNormResult tc_norm(const FiniteMetricSpace& space,
                            const TransportationProblem& f) {
    std::vector<int> sources, sinks;
    std::vector<Rational> supply, demand;
    for (int i = 0; i < space.size(); ++i) {
        const Rational& m = f.mass(i);
        if (m > 0) {
            sources.push_back(i);
            supply.push_back(m);
        } else if (m < 0) {
            sinks.push_back(i);
            demand.push_back(-m);
        }
    }
    if (sources.empty()) return TcNormResult{Rational(0), {}, {}};

    LinearProgram lp = transport_detail::make_transport_lp(space, sources, supply,
                                                           sinks, demand);
    LPOutcome out = solve_lp(lp);
    if (out.status != LPStatus::Optimal)
        throw TcsError(ErrorCode::Internal, "transport LP not optimal");

    const std::size_t p = sources.size(), q = sinks.size();
    TransportationPlan plan;
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < q; ++j) {
            const Rational& x = out.primal[i * q + j];
            if (x != 0) plan.moves.push_back({sources[i], sinks[j], x});
        }

    // Potentials phi with phi(source_i) - phi(sink_j) <= d and
    // sum_x phi(x) f(x) equal to the norm: row duals are alpha_i, column
    // duals beta_j with alpha_i + beta_j <= d_ij; set phi = alpha on
    // sources and -beta on sinks.
    DualPotentials pot;
    for (std::size_t i = 0; i < p; ++i) pot.values[sources[i]] = out.dual[i];
    for (std::size_t j = 0; j < q; ++j) pot.values[sinks[j]] = -out.dual[p + j];

    return TcNormResult{out.objective, std::move(plan), std::move(pot)};
}

/// Exact pairing sum_x t(x) f(x) of a function (given on at least the
/// support of f) with a zero-sum problem. Constants pair to zero.
inline Rational pairing(const LipschitzFunction& t,
                        const TransportationProblem& f) {
    Rational total(0);
    for (std::size_t i = 0; i < f.masses().size(); ++i) {
        if (f.masses()[i] == 0) continue;
        total += t.at(static_cast<int>(i)) * f.masses()[i];
    }
    return total;
}

/// Normalized two-point problem (unit positive mass at `positive` spread by
/// 1/d): its transportation cost norm is exactly 1.
struct Molecule {
    int positive; // receives +1/d
    int negative; // receives -1/d
    Rational scale;

    static Molecule between(const FiniteMetricSpace& space, int negative,
                            int positive) {
        if (positive == negative)
            throw TcsError(ErrorCode::InvalidSpec, "molecule endpoints equal");
        return Molecule{positive, negative,
                        Rational(1) / space.dist(negative, positive)};
    }

    TransportationProblem as_problem(const FiniteMetricSpace& space) const {
        TransportationProblem f(space);
        f.add(positive, scale).add(negative, -scale);
        return f;
    }
};

} // namespace tcs
