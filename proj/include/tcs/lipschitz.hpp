#pragma once

// Exact-valued functions on a space's points, with an all-pairs Lipschitz
// check. Values are kept per point index; a function normally covers the
// whole space but hand-built partial tables are allowed (pairing reports
// MissingValue when a support point has no value).

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "tcs/error.hpp"
#include "tcs/metric_space.hpp"
#include "tcs/rational.hpp"

namespace tcs {

struct LipschitzFunction {
    std::map<int, Rational> values;

    const Rational& at(int point) const {
        auto it = values.find(point);
        if (it == values.end())
            throw TcsError(ErrorCode::MissingValue,
                           "no value at point index " + std::to_string(point));
        return it->second;
    }

    LipschitzFunction& set(int point, Rational v) {
        values[point] = std::move(v);
        return *this;
    }
};

/// First pair violating |t(u) - t(v)| <= d(u,v), if any. Only pairs with
/// both values present are checked.
inline std::optional<std::pair<int, int>> lipschitz_violation(
    const FiniteMetricSpace& space, const LipschitzFunction& t) {
    for (auto iu = t.values.begin(); iu != t.values.end(); ++iu)
        for (auto iv = std::next(iu); iv != t.values.end(); ++iv) {
            Rational diff = rat_abs(iu->second - iv->second);
            if (diff > space.dist(iu->first, iv->first))
                return std::make_pair(iu->first, iv->first);
        }
    return std::nullopt;
}

inline bool is_one_lipschitz(const FiniteMetricSpace& space,
                             const LipschitzFunction& t) {
    return !lipschitz_violation(space, t).has_value();
}

} // namespace tcs
