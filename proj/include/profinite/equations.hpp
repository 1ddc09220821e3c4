#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "profinite/framework.hpp"
#include "profinite/space.hpp"

/**
 * @brief Equations between truncated points, lattice and Boolean closures
 *        of language families, and the equational characterisation of
 *        lattices on a finite truncated space.
 * @file
 */

namespace profinite {

/// An equation u -> v: a subset satisfies it when membership of u forces
/// membership of v.
struct Equation {
    TruncatedPoint u;
    TruncatedPoint v;

    friend auto operator<=>(const Equation&, const Equation&) = default;
};

/// A finite set of equations over one truncated space, kept sorted.
struct EquationSet {
    std::vector<Equation> pairs;
};

/// A finite family of recognisable languages over a common space.
struct LanguageFamily {
    std::vector<Language> members;
};

/// Subset of a space's point list, by position.
using PointSubset = std::vector<bool>;

// ---------------------------------------------------------------------------
// Index-level combinatorics. These work on plain subsets of {0,...,n-1} and
// are the computational core shared by the language-level operations and the
// randomized theorem harness.
// ---------------------------------------------------------------------------

using IndexPair = std::pair<std::size_t, std::size_t>;

inline bool subset_satisfies_pair(const PointSubset& a, std::size_t u, std::size_t v) {
    return !a[u] || a[v];
}

inline PointSubset full_subset(std::size_t n) { return PointSubset(n, true); }
inline PointSubset empty_subset(std::size_t n) { return PointSubset(n, false); }

inline PointSubset subset_union(const PointSubset& a, const PointSubset& b) {
    PointSubset r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] || b[i];
    return r;
}

inline PointSubset subset_intersection(const PointSubset& a, const PointSubset& b) {
    PointSubset r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] && b[i];
    return r;
}

inline PointSubset subset_complement(const PointSubset& a) {
    PointSubset r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = !a[i];
    return r;
}

namespace detail {

inline void insert_sorted(std::vector<PointSubset>& family, const PointSubset& s) {
    auto it = std::lower_bound(family.begin(), family.end(), s);
    if (it == family.end() || *it != s) family.insert(it, s);
}

inline std::vector<PointSubset> close_subsets(std::vector<PointSubset> gens, std::size_t n,
                                              bool with_complement) {
    std::vector<PointSubset> family;
    insert_sorted(family, empty_subset(n));
    insert_sorted(family, full_subset(n));
    for (const auto& g : gens) {
        if (g.size() != n) throw std::invalid_argument("generator size mismatch");
        insert_sorted(family, g);
    }
    // Fixpoint: grow until closed under the requested operations.
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<PointSubset> snapshot = family;
        for (std::size_t i = 0; i < snapshot.size(); ++i) {
            if (with_complement) {
                PointSubset c = subset_complement(snapshot[i]);
                std::size_t before = family.size();
                insert_sorted(family, c);
                grew = grew || family.size() != before;
            }
            for (std::size_t j = i; j < snapshot.size(); ++j) {
                for (const PointSubset& candidate :
                     {subset_union(snapshot[i], snapshot[j]),
                      subset_intersection(snapshot[i], snapshot[j])}) {
                    std::size_t before = family.size();
                    insert_sorted(family, candidate);
                    grew = grew || family.size() != before;
                }
            }
        }
    }
    return family;
}

}  // namespace detail

/// Closure of the generators under binary union and intersection, always
/// containing the empty and the full subset. Sorted canonical order.
inline std::vector<PointSubset> lattice_closure_subsets(std::vector<PointSubset> gens,
                                                        std::size_t n) {
    return detail::close_subsets(std::move(gens), n, false);
}

/// Closure under union, intersection and complement.
inline std::vector<PointSubset> boolean_closure_subsets(std::vector<PointSubset> gens,
                                                        std::size_t n) {
    return detail::close_subsets(std::move(gens), n, true);
}

/// Direct oracle: closed under union and intersection and contains the
/// empty and the full subset.
inline bool is_lattice_of_subsets(const std::vector<PointSubset>& family, std::size_t n) {
    auto present = [&](const PointSubset& s) {
        return std::find(family.begin(), family.end(), s) != family.end();
    };
    if (!present(empty_subset(n)) || !present(full_subset(n))) return false;
    for (const auto& a : family)
        for (const auto& b : family)
            if (!present(subset_union(a, b)) || !present(subset_intersection(a, b))) return false;
    return true;
}

/// Every equation pair satisfied by every member, as ordered index pairs,
/// sorted. Reflexive pairs are always included.
inline std::vector<IndexPair> derive_equation_pairs(const std::vector<PointSubset>& members,
                                                    std::size_t n) {
    std::vector<IndexPair> pairs;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            bool common = true;
            for (const auto& m : members)
                if (!subset_satisfies_pair(m, u, v)) {
                    common = false;
                    break;
                }
            if (common) pairs.emplace_back(u, v);
        }
    return pairs;
}

/// Pairs whose both directions hold in every member; both orientations are
/// listed.
inline std::vector<IndexPair> derive_symmetric_pairs(const std::vector<PointSubset>& members,
                                                     std::size_t n) {
    std::vector<IndexPair> directed = derive_equation_pairs(members, n);
    auto has = [&](std::size_t u, std::size_t v) {
        return std::binary_search(directed.begin(), directed.end(), IndexPair{u, v});
    };
    std::vector<IndexPair> pairs;
    for (const auto& [u, v] : directed)
        if (has(v, u)) pairs.emplace_back(u, v);
    return pairs;
}

/// All subsets of an n-point space satisfying every given pair. Exhaustive
/// over 2^n subsets; guarded at n <= 20.
inline std::vector<PointSubset> defined_subsets(const std::vector<IndexPair>& pairs,
                                                std::size_t n) {
    if (n > 20)
        throw std::domain_error("exhaustive subset scan limited to 20 points, got " +
                                std::to_string(n));
    std::vector<PointSubset> family;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        bool ok = true;
        for (const auto& [u, v] : pairs)
            if ((mask >> u & 1) && !(mask >> v & 1)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        PointSubset s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = (mask >> i) & 1;
        family.push_back(std::move(s));
    }
    std::sort(family.begin(), family.end());
    return family;
}

// ---------------------------------------------------------------------------
// Language-level operations over a fixed approximation space.
// ---------------------------------------------------------------------------

/// Trace of a language on the space. Languages living on a coordinate are
/// read off the points directly; other languages (products built from
/// coordinate languages, say) are evaluated on each point's realizing
/// witness, which agrees whenever membership factors through the space's
/// coordinates.
template <typename Object>
PointSubset image_of(const Framework<Object>& fw, const ApproximationSpace<Object>& space,
                     const Language& l) {
    PointSubset s(space.points.size());
    if (auto coord = space.coordinate_of(l.recogniser_index)) {
        for (std::size_t i = 0; i < space.points.size(); ++i)
            s[i] = l.accepts_value(space.points[i][*coord]);
        return s;
    }
    const auto& r = fw.recogniser(l.recogniser_index);
    for (std::size_t i = 0; i < space.points.size(); ++i) {
        auto it = space.witnesses.find(space.points[i]);
        if (it == space.witnesses.end())
            throw std::invalid_argument("image needs a realizing witness for every point");
        s[i] = l.accepts_value(r(it->second));
    }
    return s;
}

/// Language-level satisfaction: membership of u's coordinate value forces
/// membership of v's.
template <typename Object>
bool satisfies_equation(const ApproximationSpace<Object>& space, const Language& l,
                        const Equation& e) {
    auto coord = space.coordinate_of(l.recogniser_index);
    if (!coord) throw std::invalid_argument("language's recogniser is not a coordinate of the space");
    if (e.u.size() != space.level() || e.v.size() != space.level())
        throw std::invalid_argument("equation points do not match the space level");
    return !l.accepts_value(e.u[*coord]) || l.accepts_value(e.v[*coord]);
}

/// Set-level satisfaction, literally u in A implies v in A.
inline bool subset_satisfies(const std::vector<TruncatedPoint>& a, const Equation& e) {
    auto member = [&](const TruncatedPoint& p) {
        return std::find(a.begin(), a.end(), p) != a.end();
    };
    return !member(e.u) || member(e.v);
}

namespace detail {

template <typename Object>
std::vector<TruncatedPoint> subset_to_points(const ApproximationSpace<Object>& space,
                                             const PointSubset& s) {
    std::vector<TruncatedPoint> points;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i]) points.push_back(space.points[i]);
    return points;
}

template <typename Object>
std::vector<PointSubset> family_images(const Framework<Object>& fw,
                                       const ApproximationSpace<Object>& space,
                                       const LanguageFamily& fam) {
    std::vector<PointSubset> images;
    images.reserve(fam.members.size());
    for (const Language& l : fam.members) images.push_back(image_of(fw, space, l));
    return images;
}

}  // namespace detail

/// Closure of the family under binary union and intersection, with the
/// empty and full languages added, deduplicated extensionally over the
/// space's points. New product recognisers are appended to the framework.
template <typename Object>
LanguageFamily lattice_closure(Framework<Object>& fw, const ApproximationSpace<Object>& space,
                               const LanguageFamily& fam, bool with_complement = false) {
    std::size_t anchor =
        fam.members.empty() ? space.recogniser_indices.at(0) : fam.members.front().recogniser_index;

    LanguageFamily closed;
    std::vector<PointSubset> images;
    auto add = [&](const Language& l) {
        PointSubset img = image_of(fw, space, l);
        if (std::find(images.begin(), images.end(), img) != images.end()) return false;
        images.push_back(std::move(img));
        closed.members.push_back(l);
        return true;
    };

    add(empty_language(fw, anchor));
    add(full_language(fw, anchor));
    for (const Language& l : fam.members) add(l);

    bool grew = true;
    while (grew) {
        grew = false;
        const auto snapshot = closed.members;
        for (std::size_t i = 0; i < snapshot.size() && !grew; ++i) {
            if (with_complement && add(complement_language(fw, snapshot[i]))) grew = true;
            for (std::size_t j = i; j < snapshot.size() && !grew; ++j) {
                if (add(union_languages(fw, snapshot[i], snapshot[j]))) grew = true;
                if (!grew && add(intersect_languages(fw, snapshot[i], snapshot[j]))) grew = true;
            }
        }
    }
    return closed;
}

/// Closure under union, intersection and complement.
template <typename Object>
LanguageFamily boolean_closure(Framework<Object>& fw, const ApproximationSpace<Object>& space,
                               const LanguageFamily& fam) {
    return lattice_closure(fw, space, fam, true);
}

/// Every equation over the space's points satisfied by every family member.
/// Canonically sorted.
template <typename Object>
EquationSet derive_equations(const Framework<Object>& fw, const ApproximationSpace<Object>& space,
                             const LanguageFamily& fam) {
    auto images = detail::family_images(fw, space, fam);
    EquationSet es;
    for (const auto& [u, v] : derive_equation_pairs(images, space.points.size()))
        es.pairs.push_back(Equation{space.points[u], space.points[v]});
    std::sort(es.pairs.begin(), es.pairs.end());
    return es;
}

/// All subsets of the space's points satisfying the equation set.
template <typename Object>
std::vector<std::vector<TruncatedPoint>> defined_family(const ApproximationSpace<Object>& space,
                                                        const EquationSet& es) {
    std::vector<IndexPair> pairs;
    for (const Equation& e : es.pairs) {
        auto u = std::lower_bound(space.points.begin(), space.points.end(), e.u);
        auto v = std::lower_bound(space.points.begin(), space.points.end(), e.v);
        if (u == space.points.end() || *u != e.u || v == space.points.end() || *v != e.v)
            throw std::invalid_argument("equation mentions a point outside the space");
        pairs.emplace_back(u - space.points.begin(), v - space.points.begin());
    }
    std::vector<std::vector<TruncatedPoint>> family;
    for (const PointSubset& s : defined_subsets(pairs, space.points.size()))
        family.push_back(detail::subset_to_points(space, s));
    return family;
}

struct TheoremReport {
    bool pass = false;
    bool exact = false;
    std::size_t closure_size = 0;
    std::size_t defined_size = 0;
    std::size_t equation_count = 0;
    std::optional<Equation> witness;  // proof-style witness when the sets differ
    std::string detail;
};

namespace detail {

/// Shared pipeline: close the generator images, derive the common
/// equations, enumerate the defined family and compare. The witness on
/// failure follows the classical argument: a defined subset A outside the
/// closure yields x in A not covered by members below A and y in every
/// member through x but outside A.
inline TheoremReport compare_closure_with_defined(const std::vector<PointSubset>& closure,
                                                  const std::vector<IndexPair>& equations,
                                                  std::size_t n) {
    TheoremReport report;
    report.closure_size = closure.size();
    report.equation_count = equations.size();

    std::vector<PointSubset> defined = defined_subsets(equations, n);
    report.defined_size = defined.size();

    if (defined == closure) {
        report.pass = true;
        return report;
    }
    report.detail = "defined family and closure differ";
    return report;
}

template <typename Object>
std::optional<Equation> proof_witness(const ApproximationSpace<Object>& space,
                                      const std::vector<PointSubset>& members,
                                      const PointSubset& outside) {
    const std::size_t n = outside.size();
    PointSubset covered = empty_subset(n);
    for (const auto& m : members) {
        bool below = true;
        for (std::size_t i = 0; i < n && below; ++i) below = !m[i] || outside[i];
        if (below) covered = subset_union(covered, m);
    }
    for (std::size_t x = 0; x < n; ++x) {
        if (!outside[x] || covered[x]) continue;
        PointSubset meet = full_subset(n);
        for (const auto& m : members)
            if (m[x]) meet = subset_intersection(meet, m);
        for (std::size_t y = 0; y < n; ++y)
            if (meet[y] && !outside[y]) return Equation{space.points[x], space.points[y]};
    }
    return std::nullopt;
}

}  // namespace detail

/// Verifies on this finite space that the lattice closure of the family is
/// exactly the family defined by its common equations.
template <typename Object>
TheoremReport verify_lattice_theorem(const Framework<Object>& fw,
                                     const ApproximationSpace<Object>& space,
                                     const LanguageFamily& fam) {
    const std::size_t n = space.points.size();
    auto closure = lattice_closure_subsets(detail::family_images(fw, space, fam), n);
    auto equations = derive_equation_pairs(closure, n);
    TheoremReport report = detail::compare_closure_with_defined(closure, equations, n);
    report.exact = space.exact;
    if (!report.pass) {
        auto defined = defined_subsets(equations, n);
        for (const auto& a : defined)
            if (std::find(closure.begin(), closure.end(), a) == closure.end()) {
                report.witness = detail::proof_witness(space, closure, a);
                break;
            }
    }
    return report;
}

/// Boolean variant: closure under complement as well, against the
/// symmetric common equations.
template <typename Object>
TheoremReport verify_boolean_corollary(const Framework<Object>& fw,
                                       const ApproximationSpace<Object>& space,
                                       const LanguageFamily& fam) {
    const std::size_t n = space.points.size();
    auto closure = boolean_closure_subsets(detail::family_images(fw, space, fam), n);
    auto equations = derive_symmetric_pairs(closure, n);
    TheoremReport report = detail::compare_closure_with_defined(closure, equations, n);
    report.exact = space.exact;
    return report;
}

struct DefinabilityVerdict {
    bool in_lattice = false;
    bool exact = false;  // advisory only when the space is an under-approximation
    std::optional<Equation> certificate;
};

/// Whether the candidate satisfies every equation common to the family's
/// lattice closure. On an exact space this decides membership in the
/// closure; a violated equation is returned as a separation certificate.
template <typename Object>
DefinabilityVerdict check_definable(const Framework<Object>& fw,
                                    const ApproximationSpace<Object>& space,
                                    const LanguageFamily& fam, const Language& candidate) {
    const std::size_t n = space.points.size();
    PointSubset candidate_image = image_of(fw, space, candidate);
    auto closure = lattice_closure_subsets(detail::family_images(fw, space, fam), n);
    auto equations = derive_equation_pairs(closure, n);

    DefinabilityVerdict verdict;
    verdict.exact = space.exact;
    for (const auto& [u, v] : equations) {
        if (!subset_satisfies_pair(candidate_image, u, v)) {
            verdict.certificate = Equation{space.points[u], space.points[v]};
            return verdict;
        }
    }
    verdict.in_lattice = true;
    return verdict;
}

}  // namespace profinite
