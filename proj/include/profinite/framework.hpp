#pragma once

#include <algorithm>
#include <any>
#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

/**
 * @brief Core abstractions: frameworks of objects and recognisers,
 *        recognisable languages and their Boolean operations.
 * @file
 */

namespace profinite {

/// Opaque value label produced by a recogniser.
using Value = std::string;

/// Values of finitely many recognisers on one object, in coordinate order.
using TruncatedPoint = std::vector<Value>;

/// How many objects realize a given description.
enum class Multiplicity { none, one, many };

namespace detail {

inline std::vector<Value> normalized_value_set(std::vector<Value> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.empty())
        throw std::invalid_argument("recogniser value set must be nonempty");
    return values;
}

}  // namespace detail

/// A total function from objects to a finite set of value labels.
///
/// `payload` may hold the concrete representation behind `evaluate`
/// (an automaton, a sentence, ...) so that instance-specific algorithms
/// can recover it; generic code never inspects it.
template <typename Object>
struct Recogniser {
    std::string name;
    std::vector<Value> value_set;  // sorted, distinct, nonempty
    std::function<Value(const Object&)> evaluate;
    std::any payload;

    Value operator()(const Object& w) const {
        Value v = evaluate(w);
        if (!std::binary_search(value_set.begin(), value_set.end(), v))
            throw std::logic_error("recogniser '" + name + "' left its value set: " + v);
        return v;
    }

    bool has_value(const Value& v) const {
        return std::binary_search(value_set.begin(), value_set.end(), v);
    }
};

template <typename Object>
Recogniser<Object> make_recogniser(std::string name, std::vector<Value> values,
                                   std::function<Value(const Object&)> evaluate,
                                   std::any payload = {}) {
    return Recogniser<Object>{std::move(name), detail::normalized_value_set(std::move(values)),
                              std::move(evaluate), std::move(payload)};
}

/// A recognisable language: the preimage of `accepted` under one recogniser.
struct Language {
    std::size_t recogniser_index = 0;
    std::vector<Value> accepted;  // sorted, distinct, subset of the recogniser's value set

    bool accepts_value(const Value& v) const {
        return std::binary_search(accepted.begin(), accepted.end(), v);
    }

    friend bool operator==(const Language&, const Language&) = default;
};

/// A countable family of objects together with a growable sequence of
/// recognisers. The optional hooks let concrete instances plug in their
/// own exact algorithms; everything else falls back to enumeration.
///
/// All parts are immutable after construction except the recogniser
/// registry, which supports single-writer append. Concurrent read-only
/// use is safe.
template <typename Object>
class Framework {
public:
    using Enumerator = std::function<Object(std::size_t)>;
    using Printer = std::function<std::string(const Object&)>;
    using Validator = std::function<bool(const Object&)>;

    /// Builds a recogniser that separates the given object from every other one.
    using CharacteristicHook = std::function<Recogniser<Object>(const Object&)>;

    /// Builds a recogniser (and accepted set) equivalent to the intersection
    /// of two recognisable languages.
    using IntersectionHook = std::function<std::pair<Recogniser<Object>, std::vector<Value>>(
        const Recogniser<Object>&, const std::vector<Value>&, const Recogniser<Object>&,
        const std::vector<Value>&)>;

    /// Exact projection of the whole object family onto the given recogniser
    /// coordinates, with one shortest realizing object per tuple. Returns
    /// nullopt when exact computation is not available for these indices.
    using ExactProjector =
        std::function<std::optional<std::vector<std::pair<TruncatedPoint, Object>>>(
            const Framework&, const std::vector<std::size_t>&)>;

    /// Exact count (none / one / many) of objects whose truncation at the
    /// given coordinates equals the given point. nullopt when unavailable.
    using RealizationCounter = std::function<std::optional<Multiplicity>(
        const Framework&, const std::vector<std::size_t>&, const TruncatedPoint&)>;

    Framework(Enumerator enumerate, Printer print)
        : enumerate_(std::move(enumerate)), print_(std::move(print)) {
        if (!enumerate_ || !print_)
            throw std::invalid_argument("framework requires an enumerator and a printer");
    }

    std::size_t recogniser_count() const { return recognisers_.size(); }

    const Recogniser<Object>& recogniser(std::size_t i) const {
        if (i >= recognisers_.size())
            throw std::out_of_range("recogniser index " + std::to_string(i) + " out of range");
        return recognisers_[i];
    }

    /// Appends a recogniser and returns its index.
    std::size_t add_recogniser(Recogniser<Object> r) {
        recognisers_.push_back(std::move(r));
        return recognisers_.size() - 1;
    }

    Object object_at(std::size_t n) const { return enumerate_(n); }

    std::string describe(const Object& w) const { return print_(w); }

    bool valid_object(const Object& w) const { return !validate_ || validate_(w); }

    void set_validator(Validator v) { validate_ = std::move(v); }
    void set_characteristic_hook(CharacteristicHook h) { characteristic_ = std::move(h); }
    void set_intersection_hook(IntersectionHook h) { intersection_ = std::move(h); }
    void set_exact_projector(ExactProjector p) { projector_ = std::move(p); }
    void set_realization_counter(RealizationCounter c) { counter_ = std::move(c); }

    bool has_characteristic_hook() const { return static_cast<bool>(characteristic_); }
    bool has_intersection_hook() const { return static_cast<bool>(intersection_); }

    Recogniser<Object> make_characteristic(const Object& w) const {
        if (!characteristic_)
            throw std::logic_error("framework has no characteristic-recogniser hook");
        return characteristic_(w);
    }

    std::pair<Recogniser<Object>, std::vector<Value>> make_intersection(
        const Recogniser<Object>& r1, const std::vector<Value>& v1, const Recogniser<Object>& r2,
        const std::vector<Value>& v2) const {
        if (!intersection_)
            throw std::logic_error("framework has no intersection hook");
        return intersection_(r1, v1, r2, v2);
    }

    std::optional<std::vector<std::pair<TruncatedPoint, Object>>> exact_projection(
        const std::vector<std::size_t>& indices) const {
        if (!projector_) return std::nullopt;
        return projector_(*this, indices);
    }

    std::optional<Multiplicity> count_realizations(const std::vector<std::size_t>& indices,
                                                   const TruncatedPoint& p) const {
        if (!counter_) return std::nullopt;
        return counter_(*this, indices, p);
    }

private:
    Enumerator enumerate_;
    Printer print_;
    Validator validate_;
    CharacteristicHook characteristic_;
    IntersectionHook intersection_;
    ExactProjector projector_;
    RealizationCounter counter_;
    std::vector<Recogniser<Object>> recognisers_;
};

template <typename Object>
Language make_language(const Framework<Object>& fw, std::size_t recogniser_index,
                       std::vector<Value> accepted) {
    const auto& r = fw.recogniser(recogniser_index);
    std::sort(accepted.begin(), accepted.end());
    accepted.erase(std::unique(accepted.begin(), accepted.end()), accepted.end());
    for (const Value& v : accepted)
        if (!r.has_value(v))
            throw std::invalid_argument("accepted value '" + v + "' not in value set of recogniser '" +
                                        r.name + "'");
    return Language{recogniser_index, std::move(accepted)};
}

template <typename Object>
Language empty_language(const Framework<Object>& fw, std::size_t recogniser_index) {
    return make_language(fw, recogniser_index, {});
}

template <typename Object>
Language full_language(const Framework<Object>& fw, std::size_t recogniser_index) {
    return make_language(fw, recogniser_index, fw.recogniser(recogniser_index).value_set);
}

/// Membership of an object in a recognisable language.
template <typename Object>
bool contains(const Framework<Object>& fw, const Language& lang, const Object& w) {
    if (!fw.valid_object(w))
        throw std::invalid_argument("object outside the framework's domain: " + fw.describe(w));
    const auto& r = fw.recogniser(lang.recogniser_index);
    return lang.accepts_value(r(w));
}

/// Complement within the same recogniser: accepted becomes its value-set complement.
template <typename Object>
Language complement_language(const Framework<Object>& fw, const Language& l) {
    const auto& r = fw.recogniser(l.recogniser_index);
    std::vector<Value> rest;
    std::set_difference(r.value_set.begin(), r.value_set.end(), l.accepted.begin(),
                        l.accepted.end(), std::back_inserter(rest));
    return Language{l.recogniser_index, std::move(rest)};
}

/// Intersection of two languages. When both live on the same recogniser the
/// accepted sets are intersected in place; otherwise the framework's
/// intersection hook supplies a fresh recogniser, which is appended to the
/// registry.
template <typename Object>
Language intersect_languages(Framework<Object>& fw, const Language& l1, const Language& l2) {
    if (l1.recogniser_index == l2.recogniser_index) {
        std::vector<Value> both;
        std::set_intersection(l1.accepted.begin(), l1.accepted.end(), l2.accepted.begin(),
                              l2.accepted.end(), std::back_inserter(both));
        return Language{l1.recogniser_index, std::move(both)};
    }
    auto [r, accepted] = fw.make_intersection(fw.recogniser(l1.recogniser_index), l1.accepted,
                                              fw.recogniser(l2.recogniser_index), l2.accepted);
    std::size_t idx = fw.add_recogniser(std::move(r));
    return make_language(fw, idx, std::move(accepted));
}

/// Union via De Morgan; same-recogniser unions stay on that recogniser.
template <typename Object>
Language union_languages(Framework<Object>& fw, const Language& l1, const Language& l2) {
    if (l1.recogniser_index == l2.recogniser_index) {
        std::vector<Value> either;
        std::set_union(l1.accepted.begin(), l1.accepted.end(), l2.accepted.begin(),
                       l2.accepted.end(), std::back_inserter(either));
        return Language{l1.recogniser_index, std::move(either)};
    }
    Language inner = intersect_languages(fw, complement_language(fw, l1), complement_language(fw, l2));
    return complement_language(fw, inner);
}

/// Result of the separation check: either every inspected object has a
/// recogniser distinguishing it from all the others, or a counterexample
/// pair of enumeration indices is reported. Verdicts hold up to the bound
/// only, never universally.
struct AxiomAReport {
    bool pass = false;
    std::size_t bound = 0;
    std::vector<std::size_t> witness_indices;  // per object, when pass
    std::optional<std::pair<std::size_t, std::size_t>> counterexample;
    std::string detail;
};

/// Checks that every object among the first `bound` enumerated is separated
/// from the others by some recogniser, synthesizing one through the
/// characteristic hook when the registry has none. Synthesized recognisers
/// are appended to the registry.
template <typename Object>
AxiomAReport check_axiom_a(Framework<Object>& fw, std::size_t bound) {
    if (bound < 1) throw std::invalid_argument("axiom check bound must be at least 1");
    std::vector<Object> objects;
    objects.reserve(bound);
    for (std::size_t n = 0; n < bound; ++n) objects.push_back(fw.object_at(n));

    AxiomAReport report;
    report.bound = bound;

    auto separates_all = [&](const Recogniser<Object>& r, std::size_t k) {
        Value vk = r(objects[k]);
        for (std::size_t j = 0; j < objects.size(); ++j)
            if (j != k && r(objects[j]) == vk) return false;
        return true;
    };

    for (std::size_t k = 0; k < objects.size(); ++k) {
        std::optional<std::size_t> witness;
        for (std::size_t i = 0; i < fw.recogniser_count(); ++i) {
            if (separates_all(fw.recogniser(i), k)) {
                witness = i;
                break;
            }
        }
        if (!witness && fw.has_characteristic_hook()) {
            std::size_t idx = fw.add_recogniser(fw.make_characteristic(objects[k]));
            if (separates_all(fw.recogniser(idx), k)) witness = idx;
        }
        if (!witness) {
            // Prefer a pair no recogniser tells apart at all.
            for (std::size_t j = 0; j < objects.size() && !report.counterexample; ++j) {
                if (j == k) continue;
                bool separated = false;
                for (std::size_t i = 0; i < fw.recogniser_count() && !separated; ++i)
                    separated = fw.recogniser(i)(objects[k]) != fw.recogniser(i)(objects[j]);
                if (!separated) report.counterexample = {k, j};
            }
            report.pass = false;
            report.detail = "no recogniser separates " + fw.describe(objects[k]) +
                            " from every other object up to bound " + std::to_string(bound);
            return report;
        }
        report.witness_indices.push_back(*witness);
    }
    report.pass = true;
    return report;
}

struct AxiomBReport {
    bool pass = false;
    std::size_t trials = 0;
    std::size_t bound = 0;
    std::string detail;
};

/// Random-trial check of intersection closure: builds the intersection of
/// two random languages and verifies the membership biconditional on every
/// object up to `bound`.
template <typename Object>
AxiomBReport check_axiom_b(Framework<Object>& fw, std::size_t trials, std::size_t bound,
                           std::mt19937_64& rng) {
    if (trials < 1) throw std::invalid_argument("axiom check needs at least one trial");
    AxiomBReport report;
    report.trials = trials;
    report.bound = bound;

    const std::size_t base_count = fw.recogniser_count();
    if (base_count == 0)
        throw std::invalid_argument("framework has no recognisers to sample from");

    auto random_language = [&]() {
        std::uniform_int_distribution<std::size_t> pick(0, base_count - 1);
        std::size_t idx = pick(rng);
        std::vector<Value> accepted;
        for (const Value& v : fw.recogniser(idx).value_set)
            if (std::uniform_int_distribution<int>(0, 1)(rng)) accepted.push_back(v);
        return Language{idx, std::move(accepted)};
    };

    for (std::size_t t = 0; t < trials; ++t) {
        Language l1 = random_language();
        Language l2 = random_language();
        Language meet = intersect_languages(fw, l1, l2);
        for (std::size_t n = 0; n < bound; ++n) {
            Object w = fw.object_at(n);
            bool lhs = contains(fw, l1, w) && contains(fw, l2, w);
            bool rhs = contains(fw, meet, w);
            if (lhs != rhs) {
                report.pass = false;
                report.detail = "intersection biconditional fails on " + fw.describe(w) +
                                " in trial " + std::to_string(t);
                return report;
            }
        }
    }
    report.pass = true;
    return report;
}

}  // namespace profinite
