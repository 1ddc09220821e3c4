#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "profinite/equations.hpp"
#include "profinite/fo.hpp"
#include "profinite/framework.hpp"
#include "profinite/space.hpp"
#include "profinite/words.hpp"

/**
 * @brief JSON forms of the file formats and reports.
 * @file
 */

namespace profinite::io {

using nlohmann::json;

// --- DFAs -------------------------------------------------------------------
//
// {"alphabet": ["a","b"], "states": n, "initial": 0,
//  "transition": [[...]], "value_of": ["even","odd",...]}
// transition[s][symbol_index] = state; states are 0-based.

inline json dfa_to_json(const words::Dfa& d) {
    json alphabet = json::array();
    for (std::size_t i = 0; i < d.alphabet().size(); ++i)
        alphabet.push_back(std::string(1, d.alphabet().symbol(i)));
    return json{{"alphabet", alphabet},
                {"states", d.state_count()},
                {"initial", d.initial()},
                {"transition", d.transition()},
                {"value_of", d.value_of()}};
}

inline words::Dfa dfa_from_json(const json& j) {
    std::string symbols;
    for (const auto& s : j.at("alphabet")) {
        std::string symbol = s.get<std::string>();
        if (symbol.size() != 1)
            throw std::invalid_argument("alphabet symbols must be single characters");
        symbols += symbol;
    }
    words::Alphabet alphabet(symbols);
    auto transition = j.at("transition").get<std::vector<std::vector<std::size_t>>>();
    auto value_of = j.at("value_of").get<std::vector<Value>>();
    std::size_t states = j.at("states").get<std::size_t>();
    if (transition.size() != states || value_of.size() != states)
        throw std::invalid_argument("state count disagrees with transition/value tables");
    return words::Dfa(std::move(alphabet), j.at("initial").get<std::size_t>(),
                      std::move(transition), std::move(value_of));
}

// --- Languages --------------------------------------------------------------
//
// {"recogniser": <index>, "accepted": [<value-label>, ...]}

inline json language_to_json(const Language& l) {
    return json{{"recogniser", l.recogniser_index}, {"accepted", l.accepted}};
}

template <typename Object>
Language language_from_json(const Framework<Object>& fw, const json& j) {
    return make_language(fw, j.at("recogniser").get<std::size_t>(),
                         j.at("accepted").get<std::vector<Value>>());
}

// --- Spaces -----------------------------------------------------------------
//
// {"level": N, "recognisers": [i1,...], "exact": bool,
//  "points": [["even","yes"],...]}

template <typename Object>
json space_to_json(const ApproximationSpace<Object>& space) {
    return json{{"level", space.level()},
                {"recognisers", space.recogniser_indices},
                {"exact", space.exact},
                {"points", space.points}};
}

// --- Equations and reports ---------------------------------------------------
//
// {"u": ["even","no"], "v": ["odd","no"]}
// {"verdict": "...", "certificate": <equation or null>, "exact": bool}

inline json equation_to_json(const Equation& e) { return json{{"u", e.u}, {"v", e.v}}; }

inline Equation equation_from_json(const json& j) {
    return Equation{j.at("u").get<TruncatedPoint>(), j.at("v").get<TruncatedPoint>()};
}

inline json equation_set_to_json(const EquationSet& es) {
    json pairs = json::array();
    for (const Equation& e : es.pairs) pairs.push_back(equation_to_json(e));
    return pairs;
}

inline json verdict_to_json(const DefinabilityVerdict& v) {
    return json{{"verdict", v.in_lattice ? "IN_LATTICE" : "NOT_IN_LATTICE"},
                {"certificate", v.certificate ? equation_to_json(*v.certificate) : json()},
                {"exact", v.exact}};
}

// --- Signatures and structures ------------------------------------------------
//
// {"relations": [{"name":"E","arity":2}]}
// {"size": n, "relations": {"E": [[0,1],[1,0]]}}

inline json signature_to_json(const fo::Signature& sig) {
    json relations = json::array();
    for (const auto& r : sig.relations) relations.push_back({{"name", r.name}, {"arity", r.arity}});
    return json{{"relations", relations}};
}

inline fo::Signature signature_from_json(const json& j) {
    std::vector<fo::Signature::Relation> relations;
    for (const auto& r : j.at("relations"))
        relations.push_back({r.at("name").get<std::string>(), r.at("arity").get<std::size_t>()});
    return fo::make_signature(std::move(relations));
}

inline json structure_to_json(const fo::FiniteStructure& m) {
    json relations = json::object();
    for (const auto& [name, tuples] : m.relations) {
        json rows = json::array();
        for (const auto& t : tuples) rows.push_back(t);
        relations[name] = rows;
    }
    return json{{"size", m.size}, {"relations", relations}};
}

inline fo::FiniteStructure structure_from_json(const json& j) {
    fo::FiniteStructure m;
    m.size = j.at("size").get<std::size_t>();
    if (j.contains("relations"))
        for (const auto& [name, rows] : j.at("relations").items()) {
            if (rows.empty()) continue;
            auto& tuples = m.relations[name];
            for (const auto& row : rows) tuples.insert(row.get<std::vector<std::size_t>>());
        }
    return m;
}

}  // namespace profinite::io
