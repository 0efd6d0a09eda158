#pragma once

// Finite metric spaces with exact rational distances. A space owns an
// ordered point list; the order fixes matrix indexing and every
// deterministic tie-break downstream. Immutable after construction.

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tcs/error.hpp"
#include "tcs/rational.hpp"

namespace tcs {

using DistanceMatrix = std::vector<std::vector<Rational>>;

/// First metric-axiom violation found in a candidate table, if any.
struct MetricViolation {
    ErrorCode code;
    std::vector<std::string> witnesses; // offending point labels
    std::string describe() const {
        std::string s = error_code_name(code);
        for (const auto& w : witnesses) s += " " + w;
        return s;
    }
};

/// Checks labels + table against the metric axioms without constructing a
/// space. Scans in point order and reports the first violation.
inline std::optional<MetricViolation> check_metric_axioms(
    const std::vector<std::string>& labels, const DistanceMatrix& dist) {
    const std::size_t n = labels.size();
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i].empty())
            return MetricViolation{ErrorCode::DuplicateLabel, {"<empty>"}};
        if (!seen.emplace(labels[i], i).second)
            return MetricViolation{ErrorCode::DuplicateLabel, {labels[i]}};
    }
    if (dist.size() != n)
        return MetricViolation{ErrorCode::DimensionMismatch, {}};
    for (std::size_t i = 0; i < n; ++i)
        if (dist[i].size() != n)
            return MetricViolation{ErrorCode::DimensionMismatch, {labels[i]}};

    for (std::size_t i = 0; i < n; ++i)
        if (dist[i][i] != 0)
            return MetricViolation{ErrorCode::NonZeroDiagonal, {labels[i]}};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dist[i][j] != dist[j][i])
                return MetricViolation{ErrorCode::NonSymmetric, {labels[i], labels[j]}};
            if (dist[i][j] <= 0)
                return MetricViolation{ErrorCode::NegativeOrZeroOffDiagonal,
                                       {labels[i], labels[j]}};
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                // d(i,k) <= d(i,j) + d(j,k)
                if (dist[i][k] > dist[i][j] + dist[j][k])
                    return MetricViolation{ErrorCode::TriangleViolation,
                                           {labels[i], labels[j], labels[k]}};
            }
        }
    return std::nullopt;
}

class FiniteMetricSpace {
public:
    /// Validates and builds. Throws TcsError carrying the first violated
    /// axiom and its witnessing points.
    static FiniteMetricSpace create(std::vector<std::string> labels,
                                    DistanceMatrix dist) {
        if (auto v = check_metric_axioms(labels, dist))
            throw TcsError(v->code, v->describe(), v->witnesses);
        return FiniteMetricSpace(std::move(labels), std::move(dist));
    }

    int size() const { return static_cast<int>(labels_.size()); }

    const std::string& label(int i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }

    std::optional<int> find(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end()) return std::nullopt;
        return static_cast<int>(it->second);
    }

    int index_of(const std::string& label) const {
        auto i = find(label);
        if (!i) throw TcsError(ErrorCode::UnknownLabel, label, {label});
        return *i;
    }

    const Rational& dist(int i, int j) const { return dist_[i][j]; }

    const Rational& dist(const std::string& u, const std::string& v) const {
        return dist_[index_of(u)][index_of(v)];
    }

    const DistanceMatrix& matrix() const { return dist_; }

    /// Restriction of the metric to `subset`, order preserved as given.
    FiniteMetricSpace induced_subspace(const std::vector<std::string>& subset) const {
        if (subset.empty())
            throw TcsError(ErrorCode::InvalidSpec, "empty subset");
        std::vector<int> idx;
        idx.reserve(subset.size());
        for (const auto& s : subset) idx.push_back(index_of(s));
        DistanceMatrix d(idx.size(), std::vector<Rational>(idx.size()));
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = 0; b < idx.size(); ++b)
                d[a][b] = dist_[idx[a]][idx[b]];
        return create(subset, std::move(d));
    }

    bool operator==(const FiniteMetricSpace& other) const {
        return labels_ == other.labels_ && dist_ == other.dist_;
    }

private:
    FiniteMetricSpace(std::vector<std::string> labels, DistanceMatrix dist)
        : labels_(std::move(labels)), dist_(std::move(dist)) {
        for (std::size_t i = 0; i < labels_.size(); ++i) index_[labels_[i]] = i;
    }

    std::vector<std::string> labels_;
    std::unordered_map<std::string, std::size_t> index_;
    DistanceMatrix dist_;
};

} // namespace tcs
