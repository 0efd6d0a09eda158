#pragma once

// JSON serialization for every file format the tools speak. Rationals are
// always written as canonical strings ("9/2", never floats); readers accept
// JSON integers, "p/q" strings and decimal strings. All writers emit keys
// in deterministic order, so equal inputs produce byte-equal output.

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tcs/error.hpp"
#include "tcs/matching.hpp"
#include "tcs/metric_space.hpp"
#include "tcs/projection.hpp"
#include "tcs/rational.hpp"
#include "tcs/report.hpp"
#include "tcs/simplex.hpp"
#include "tcs/transport.hpp"

namespace tcs {

using Json = nlohmann::ordered_json;

inline Rational rational_from_json(const Json& j) {
    if (j.is_number_integer())
        return Rational(static_cast<long long>(j.get<long long>()));
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw TcsError(ErrorCode::SyntaxError,
                   "expected an integer or a rational string, got " + j.dump());
}

inline Json rational_to_json(const Rational& r) { return Json(to_string(r)); }

// -- metric spaces -----------------------------------------------------------

inline Json space_to_json(const FiniteMetricSpace& space) {
    Json j;
    j["points"] = space.labels();
    Json rows = Json::array();
    for (int i = 0; i < space.size(); ++i) {
        Json row = Json::array();
        for (int k = 0; k < space.size(); ++k)
            row.push_back(rational_to_json(space.dist(i, k)));
        rows.push_back(std::move(row));
    }
    j["distances"] = std::move(rows);
    return j;
}

inline FiniteMetricSpace space_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("points") || !j.contains("distances"))
        throw TcsError(ErrorCode::SyntaxError,
                       "space file needs 'points' and 'distances'");
    std::vector<std::string> labels;
    for (const auto& p : j.at("points")) labels.push_back(p.get<std::string>());
    DistanceMatrix dist;
    for (const auto& row : j.at("distances")) {
        std::vector<Rational> r;
        for (const auto& cell : row) r.push_back(rational_from_json(cell));
        dist.push_back(std::move(r));
    }
    return FiniteMetricSpace::create(std::move(labels), std::move(dist));
}

// -- transportation problems ---------------------------------------------------

inline Json problem_to_json(const FiniteMetricSpace& space,
                            const TransportationProblem& f) {
    Json masses = Json::object();
    for (int i = 0; i < space.size(); ++i)
        if (f.mass(i) != 0) masses[space.label(i)] = rational_to_json(f.mass(i));
    Json j;
    j["masses"] = std::move(masses);
    return j;
}

inline TransportationProblem problem_from_json(const FiniteMetricSpace& space,
                                               const Json& j) {
    if (!j.is_object() || !j.contains("masses"))
        throw TcsError(ErrorCode::SyntaxError, "problem file needs 'masses'");
    std::map<std::string, Rational> by_label;
    for (const auto& [label, v] : j.at("masses").items())
        by_label[label] = rational_from_json(v);
    return TransportationProblem(space, by_label);
}

inline Json plan_to_json(const FiniteMetricSpace& space,
                         const TransportationPlan& plan) {
    Json moves = Json::array();
    for (const auto& mv : plan.moves) {
        Json m;
        m["from"] = space.label(mv.source);
        m["to"] = space.label(mv.sink);
        m["mass"] = rational_to_json(mv.mass);
        moves.push_back(std::move(m));
    }
    return moves;
}

inline Json potentials_to_json(const FiniteMetricSpace& space,
                               const DualPotentials& pot) {
    Json j = Json::object();
    for (const auto& [i, v] : pot.values) j[space.label(i)] = rational_to_json(v);
    return j;
}

// -- pairs ---------------------------------------------------------------------

inline Json pairs_to_json(const FiniteMetricSpace& space,
                          const std::vector<std::pair<int, int>>& pairs) {
    Json arr = Json::array();
    for (const auto& [x, y] : pairs)
        arr.push_back(Json::array({space.label(x), space.label(y)}));
    Json j;
    j["pairs"] = std::move(arr);
    return j;
}

inline std::vector<std::pair<int, int>> pairs_from_json(
    const FiniteMetricSpace& space, const Json& j) {
    if (!j.is_object() || !j.contains("pairs"))
        throw TcsError(ErrorCode::SyntaxError, "pairs file needs 'pairs'");
    std::vector<std::pair<int, int>> out;
    for (const auto& p : j.at("pairs")) {
        if (!p.is_array() || p.size() != 2)
            throw TcsError(ErrorCode::SyntaxError, "each pair is a 2-array");
        out.emplace_back(space.index_of(p.at(0).get<std::string>()),
                         space.index_of(p.at(1).get<std::string>()));
    }
    return out;
}

// -- laminar duals ---------------------------------------------------------------

namespace json_detail {

inline std::string member_key(const MatchingInstance& inst, CutSet s) {
    std::string key;
    for (int v = 0; v < inst.num_vertices(); ++v)
        if (cut_contains(s, v)) {
            if (!key.empty()) key += ",";
            key += inst.local_label(v);
        }
    return key;
}

} // namespace json_detail

inline Json dual_to_json(const MatchingInstance& inst, const LaminarDual& dual) {
    Json family = Json::array();
    Json weights = Json::object();
    for (std::size_t i = 0; i < dual.family.size(); ++i) {
        Json member = Json::array();
        for (int v = 0; v < inst.num_vertices(); ++v)
            if (cut_contains(dual.family[i], v)) member.push_back(inst.local_label(v));
        family.push_back(std::move(member));
        weights[json_detail::member_key(inst, dual.family[i])] =
            rational_to_json(dual.weights[i]);
    }
    Json j;
    j["family"] = std::move(family);
    j["weights"] = std::move(weights);
    j["objective"] = rational_to_json(dual.objective());
    return j;
}

inline LaminarDual dual_from_json(const MatchingInstance& inst, const Json& j) {
    if (!j.is_object() || !j.contains("family") || !j.contains("weights"))
        throw TcsError(ErrorCode::SyntaxError, "dual file needs 'family' and 'weights'");
    LaminarDual dual;
    std::map<std::string, int> local_of;
    for (int v = 0; v < inst.num_vertices(); ++v)
        local_of[inst.local_label(v)] = v;
    for (const auto& member : j.at("family")) {
        CutSet s = 0;
        for (const auto& lbl : member) {
            auto it = local_of.find(lbl.get<std::string>());
            if (it == local_of.end())
                throw TcsError(ErrorCode::UnknownLabel, lbl.get<std::string>());
            s |= CutSet(1) << it->second;
        }
        dual.family.push_back(s);
        std::string key = json_detail::member_key(inst, s);
        if (!j.at("weights").contains(key))
            throw TcsError(ErrorCode::SyntaxError, "missing weight for " + key);
        dual.weights.push_back(rational_from_json(j.at("weights").at(key)));
    }
    dual.sort_canonical();
    return dual;
}

// -- reports ---------------------------------------------------------------------

inline Json report_to_json(const CheckReport& rep) {
    Json checks = Json::array();
    for (const auto& it : rep.items) {
        Json c;
        c["name"] = it.name;
        c["pass"] = it.pass;
        if (!it.witness.empty()) c["witness"] = it.witness;
        checks.push_back(std::move(c));
    }
    Json j;
    j["all_pass"] = rep.all_pass();
    j["checks"] = std::move(checks);
    return j;
}

// -- projections -----------------------------------------------------------------

inline Json projection_to_json(const ProjectionOperator& P) {
    const auto& space = P.space();
    const auto& ds = P.structure();
    Json j;
    j["pairs"] = pairs_to_json(space, ds.pairs())["pairs"];
    Json thresholds = Json::array();
    for (int i = 0; i < P.num_pairs(); ++i)
        thresholds.push_back(rational_to_json(ds.threshold(i)));
    j["thresholds"] = std::move(thresholds);
    Json t = Json::object();
    for (int i = 0; i < P.num_pairs(); ++i) {
        Json values = Json::object();
        for (int x = 0; x < space.size(); ++x)
            values[space.label(x)] = rational_to_json(P.functionals()[i].at(x));
        t[std::to_string(i + 1)] = std::move(values);
    }
    j["t"] = std::move(t);
    j["dual"] = dual_to_json(ds.instance(), ds.dual());
    return j;
}

// -- LP debug dumps -----------------------------------------------------------------

inline Json lp_to_json(const LinearProgram& lp) {
    Json j;
    j["sense"] = lp.sense == Sense::Minimize ? "minimize" : "maximize";
    Json obj = Json::array();
    for (const auto& c : lp.objective) obj.push_back(rational_to_json(c));
    j["objective"] = std::move(obj);
    Json rows = Json::array();
    for (const auto& c : lp.constraints) {
        Json row;
        Json coeffs = Json::array();
        for (const auto& v : c.coeffs) coeffs.push_back(rational_to_json(v));
        row["coeffs"] = std::move(coeffs);
        row["rel"] = c.rel == Rel::LessEq ? "<=" : (c.rel == Rel::Eq ? "=" : ">=");
        row["rhs"] = rational_to_json(c.rhs);
        rows.push_back(std::move(row));
    }
    j["constraints"] = std::move(rows);
    if (!lp.bounds.empty()) {
        Json bounds = Json::array();
        for (const auto& b : lp.bounds)
            bounds.push_back(b.free ? Json("free") : rational_to_json(b.lower));
        j["bounds"] = std::move(bounds);
    }
    return j;
}

// -- files -------------------------------------------------------------------------

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TcsError(ErrorCode::IoError, "cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw TcsError(ErrorCode::SyntaxError,
                       path + " is not valid JSON: " + e.what());
    }
}

inline void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw TcsError(ErrorCode::IoError, "cannot write " + path);
    out << j.dump(2) << "\n";
}

} // namespace tcs
