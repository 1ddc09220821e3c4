#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "profinite/framework.hpp"

/**
 * @brief Finite truncations of the profinite completion: the projection of
 *        the closed object space onto finitely many recogniser coordinates.
 * @file
 */

namespace profinite {

/// Raised when an isolation check is asked without a separating recogniser
/// among the chosen coordinates.
struct missing_separator_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The realized point set of finitely many recogniser coordinates.
///
/// `exact` marks spaces computed by an exact projector; enumerated spaces
/// are under-approximations and every downstream report keeps the flag.
template <typename Object>
struct ApproximationSpace {
    std::vector<std::size_t> recogniser_indices;
    std::vector<TruncatedPoint> points;  // sorted, distinct
    bool exact = false;
    std::size_t budget_used = 0;                 // objects scanned when enumerated
    std::map<TruncatedPoint, Object> witnesses;  // one realizing object per point

    std::size_t level() const { return recogniser_indices.size(); }

    bool has_point(const TruncatedPoint& p) const {
        return std::binary_search(points.begin(), points.end(), p);
    }

    /// Coordinate position of a recogniser index within this space.
    std::optional<std::size_t> coordinate_of(std::size_t recogniser_index) const {
        auto it = std::find(recogniser_indices.begin(), recogniser_indices.end(), recogniser_index);
        if (it == recogniser_indices.end()) return std::nullopt;
        return static_cast<std::size_t>(it - recogniser_indices.begin());
    }
};

/// Observes one object through the chosen recognisers.
template <typename Object>
TruncatedPoint truncate(const Framework<Object>& fw, const std::vector<std::size_t>& indices,
                        const Object& w) {
    TruncatedPoint p;
    p.reserve(indices.size());
    for (std::size_t i : indices) p.push_back(fw.recogniser(i)(w));
    return p;
}

/// Truncated space collected from the first `budget` enumerated objects.
/// Always an under-approximation unless the coordinate list is empty.
template <typename Object>
ApproximationSpace<Object> enumerated_space(const Framework<Object>& fw,
                                            std::vector<std::size_t> indices, std::size_t budget) {
    for (std::size_t i : indices) fw.recogniser(i);  // validate indices
    ApproximationSpace<Object> space;
    space.recogniser_indices = std::move(indices);
    space.budget_used = budget;
    if (space.recogniser_indices.empty()) {
        space.points = {TruncatedPoint{}};
        space.witnesses.emplace(TruncatedPoint{}, fw.object_at(0));
        space.exact = true;
        return space;
    }
    for (std::size_t n = 0; n < budget; ++n) {
        Object w = fw.object_at(n);
        TruncatedPoint p = truncate(fw, space.recogniser_indices, w);
        space.witnesses.try_emplace(std::move(p), std::move(w));
    }
    for (const auto& [p, w] : space.witnesses) space.points.push_back(p);
    space.exact = false;
    return space;
}

/// Truncated space over the chosen coordinates. Uses the framework's exact
/// projector when it applies, otherwise falls back to enumeration up to
/// `budget` objects.
template <typename Object>
ApproximationSpace<Object> approximation_space(const Framework<Object>& fw,
                                               std::vector<std::size_t> indices,
                                               std::size_t budget = 0) {
    for (std::size_t i : indices) fw.recogniser(i);
    if (indices.empty()) return enumerated_space(fw, std::move(indices), budget);
    auto projection = fw.exact_projection(indices);
    if (!projection) return enumerated_space(fw, std::move(indices), budget);
    ApproximationSpace<Object> space;
    space.recogniser_indices = std::move(indices);
    space.exact = true;
    for (auto& [p, w] : *projection) space.witnesses.emplace(p, std::move(w));
    for (const auto& [p, w] : space.witnesses) space.points.push_back(p);
    return space;
}

/// First enumerated object realizing `p`, shortest witness for exact word
/// spaces. Empty result only for under-approximated spaces whose budget ran
/// out.
template <typename Object>
std::optional<Object> realize(const Framework<Object>& fw, const ApproximationSpace<Object>& space,
                              const TruncatedPoint& p) {
    if (!space.has_point(p)) throw std::invalid_argument("point does not belong to the space");
    auto it = space.witnesses.find(p);
    if (it != space.witnesses.end()) return it->second;
    for (std::size_t n = 0; n < space.budget_used; ++n) {
        Object w = fw.object_at(n);
        if (truncate(fw, space.recogniser_indices, w) == p) return w;
    }
    return std::nullopt;
}

struct IsolationReport {
    bool isolated = false;
    bool exact = false;                   // exact analysis vs. bounded enumeration
    std::size_t separator_coordinate = 0; // position of the separating recogniser
};

/// Whether the truncation of `w` is a singleton cylinder, i.e. `w` is its
/// only realization. Requires a coordinate that separates `w` from every
/// other object; reports `missing_separator_error` otherwise. Exact when
/// the framework can count realizations, bounded by `budget` if not.
template <typename Object>
IsolationReport check_isolated(const Framework<Object>& fw, const Object& w,
                               const std::vector<std::size_t>& indices, std::size_t budget = 0) {
    if (indices.empty()) throw missing_separator_error("no coordinates given");
    TruncatedPoint p = truncate(fw, indices, w);

    std::optional<std::size_t> separator;
    bool exact_separator = false;
    for (std::size_t k = 0; k < indices.size() && !separator; ++k) {
        auto exact_count = fw.count_realizations({indices[k]}, {p[k]});
        if (exact_count) {
            if (*exact_count == Multiplicity::one) {
                separator = k;
                exact_separator = true;
            }
            continue;
        }
        bool separates = true;
        for (std::size_t n = 0; n < budget && separates; ++n) {
            Object other = fw.object_at(n);
            if (other == w) continue;
            separates = fw.recogniser(indices[k])(other) != p[k];
        }
        if (separates && budget > 0) separator = k;
    }
    if (!separator)
        throw missing_separator_error("no chosen recogniser separates " + fw.describe(w) +
                                      " from every other object");

    IsolationReport report;
    report.separator_coordinate = *separator;
    auto exact_count = fw.count_realizations(indices, p);
    if (exact_count) {
        report.exact = exact_separator;
        report.isolated = *exact_count == Multiplicity::one;
        return report;
    }
    std::size_t found = 0;
    for (std::size_t n = 0; n < budget && found < 2; ++n) {
        if (truncate(fw, indices, fw.object_at(n)) == p) ++found;
    }
    report.exact = false;
    report.isolated = found <= 1;  // w itself may lie beyond the budget
    return report;
}

struct DualityReport {
    bool pass = false;
    bool exact = false;
    std::vector<TruncatedPoint> image;  // points of the space that carry the language
    std::string detail;
};

/// Checks that a language's trace on the space is a union of cylinders of
/// its own coordinate and that point membership agrees with object-level
/// membership through realizing objects.
template <typename Object>
DualityReport check_duality(const Framework<Object>& fw, const Language& l,
                            const ApproximationSpace<Object>& space,
                            std::size_t check_budget = 64) {
    auto coord = space.coordinate_of(l.recogniser_index);
    if (!coord) throw std::invalid_argument("language's recogniser is not a coordinate of the space");

    DualityReport report;
    report.exact = space.exact;
    for (const TruncatedPoint& p : space.points)
        if (l.accepts_value(p[*coord])) report.image.push_back(p);

    // Membership must depend on the language's coordinate alone.
    for (const TruncatedPoint& p : space.points)
        for (const TruncatedPoint& q : space.points) {
            if (p[*coord] != q[*coord]) continue;
            bool pin = l.accepts_value(p[*coord]);
            bool qin = l.accepts_value(q[*coord]);
            if (pin != qin) {
                report.detail = "cylinder property violated";
                return report;
            }
        }

    // Realizing objects must agree with the point image.
    for (const TruncatedPoint& p : space.points) {
        auto w = realize(fw, space, p);
        if (!w) continue;
        bool object_side = contains(fw, l, *w);
        bool point_side = l.accepts_value(p[*coord]);
        if (object_side != point_side) {
            report.detail = "witness " + fw.describe(*w) + " disagrees with its point";
            return report;
        }
    }

    // Enumerated objects land on points and agree as well.
    for (std::size_t n = 0; n < check_budget; ++n) {
        Object w = fw.object_at(n);
        TruncatedPoint p = truncate(fw, space.recogniser_indices, w);
        if (!space.has_point(p)) {
            if (space.exact) {
                report.detail = "exact space misses the truncation of " + fw.describe(w);
                return report;
            }
            continue;
        }
        if (contains(fw, l, w) != l.accepts_value(p[*coord])) {
            report.detail = "object " + fw.describe(w) + " disagrees with its point";
            return report;
        }
    }

    report.pass = true;
    return report;
}

struct PermutationReport {
    bool pass = false;
    std::string detail;
};

/// Reordering the coordinate list only permutes point coordinates; the
/// realized set is otherwise unchanged.
template <typename Object>
PermutationReport permutation_invariance(const Framework<Object>& fw,
                                         const std::vector<std::size_t>& indices,
                                         const std::vector<std::size_t>& perm,
                                         std::size_t budget = 0) {
    if (perm.size() != indices.size())
        throw std::invalid_argument("permutation length mismatch");
    std::vector<bool> seen(perm.size(), false);
    for (std::size_t k : perm) {
        if (k >= perm.size() || seen[k]) throw std::invalid_argument("not a permutation");
        seen[k] = true;
    }

    std::vector<std::size_t> permuted_indices(indices.size());
    for (std::size_t k = 0; k < perm.size(); ++k) permuted_indices[k] = indices[perm[k]];

    auto base = approximation_space(fw, indices, budget);
    auto permuted = approximation_space(fw, permuted_indices, budget);

    std::vector<TruncatedPoint> expected;
    expected.reserve(base.points.size());
    for (const TruncatedPoint& p : base.points) {
        TruncatedPoint q(p.size());
        for (std::size_t k = 0; k < perm.size(); ++k) q[k] = p[perm[k]];
        expected.push_back(std::move(q));
    }
    std::sort(expected.begin(), expected.end());

    PermutationReport report;
    if (base.exact != permuted.exact) {
        report.detail = "exactness flags differ";
        return report;
    }
    if (expected != permuted.points) {
        report.detail = "permuted point sets differ";
        return report;
    }
    report.pass = true;
    return report;
}

}  // namespace profinite
