#pragma once

// Shared fixtures: the smallest spaces exercising every code path.
//  - two_point:     {p,q} at distance 1
//  - line4:         {0,1,10,11} on the line, d = |difference|
//  - two_triangles: clusters {a1,a2,a3} and {b1,b2,b3}, intra distance 1,
//                   every cross distance 10

#include <string>
#include <vector>

#include "tcs/metric_space.hpp"
#include "tcs/rational.hpp"

namespace fixtures {

inline tcs::FiniteMetricSpace two_point() {
    using tcs::Rational;
    return tcs::FiniteMetricSpace::create(
        {"p", "q"}, {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}});
}

inline tcs::FiniteMetricSpace line4() {
    using tcs::Rational;
    std::vector<long> xs = {0, 1, 10, 11};
    std::vector<std::string> labels = {"0", "1", "10", "11"};
    tcs::DistanceMatrix d(4, std::vector<Rational>(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            d[i][j] = Rational(xs[i] > xs[j] ? xs[i] - xs[j] : xs[j] - xs[i]);
    return tcs::FiniteMetricSpace::create(labels, d);
}

inline tcs::FiniteMetricSpace two_triangles() {
    using tcs::Rational;
    std::vector<std::string> labels = {"a1", "a2", "a3", "b1", "b2", "b3"};
    tcs::DistanceMatrix d(6, std::vector<Rational>(6, Rational(0)));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            if (i == j) continue;
            bool same_cluster = (i < 3) == (j < 3);
            d[i][j] = Rational(same_cluster ? 1 : 10);
        }
    return tcs::FiniteMetricSpace::create(labels, d);
}

} // namespace fixtures
