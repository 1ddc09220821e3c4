#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "profinite/framework.hpp"

/**
 * @brief Finite relational structures up to isomorphism, recognised by
 *        closed first-order sentences.
 * @file
 */

namespace profinite::fo {

// ---------------------------------------------------------------------------
// Signatures and structures
// ---------------------------------------------------------------------------

struct Signature {
    struct Relation {
        std::string name;
        std::size_t arity = 1;
    };
    std::vector<Relation> relations;

    std::optional<std::size_t> arity_of(const std::string& name) const {
        for (const Relation& r : relations)
            if (r.name == name) return r.arity;
        return std::nullopt;
    }
};

inline Signature make_signature(std::vector<Signature::Relation> relations) {
    for (std::size_t i = 0; i < relations.size(); ++i) {
        if (relations[i].arity < 1) throw std::invalid_argument("relation arity must be at least 1");
        for (std::size_t j = i + 1; j < relations.size(); ++j)
            if (relations[i].name == relations[j].name)
                throw std::invalid_argument("duplicate relation name: " + relations[i].name);
    }
    return Signature{std::move(relations)};
}

/// A finite structure: universe {0,...,size-1} plus one tuple set per
/// relation. Comparison order is (size, interpretation), which is also the
/// canonical enumeration order within a size.
struct FiniteStructure {
    std::size_t size = 0;
    std::map<std::string, std::set<std::vector<std::size_t>>> relations;

    friend auto operator<=>(const FiniteStructure&, const FiniteStructure&) = default;
};

inline void validate_structure(const FiniteStructure& m, const Signature& sig) {
    for (const auto& [name, tuples] : m.relations) {
        auto arity = sig.arity_of(name);
        if (!arity) throw std::invalid_argument("unknown relation: " + name);
        for (const auto& t : tuples) {
            if (t.size() != *arity)
                throw std::invalid_argument("tuple arity mismatch for relation " + name);
            for (std::size_t e : t)
                if (e >= m.size) throw std::invalid_argument("tuple entry outside the universe");
        }
    }
}

/// Drops relation entries with no tuples, so isomorphic inputs compare equal
/// regardless of how they were spelled.
inline FiniteStructure normalized(FiniteStructure m) {
    std::erase_if(m.relations, [](const auto& entry) { return entry.second.empty(); });
    return m;
}

inline FiniteStructure apply_permutation(const FiniteStructure& m,
                                         const std::vector<std::size_t>& perm) {
    if (perm.size() != m.size) throw std::invalid_argument("permutation size mismatch");
    FiniteStructure out;
    out.size = m.size;
    for (const auto& [name, tuples] : m.relations) {
        if (tuples.empty()) continue;
        auto& target = out.relations[name];
        for (const auto& t : tuples) {
            std::vector<std::size_t> mapped(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) mapped[i] = perm[t[i]];
            target.insert(std::move(mapped));
        }
    }
    return out;
}

namespace detail {

/// Interpretation as a flat bit vector: relations in signature order, cells
/// in lexicographic tuple order. Canonical comparisons go through this key.
inline std::vector<bool> interpretation_key(const FiniteStructure& m, const Signature& sig) {
    std::vector<bool> key;
    for (const auto& rel : sig.relations) {
        std::size_t cells = 1;
        for (std::size_t i = 0; i < rel.arity; ++i) cells *= m.size;
        auto it = m.relations.find(rel.name);
        std::vector<std::size_t> tuple(rel.arity, 0);
        for (std::size_t cell = 0; cell < cells; ++cell) {
            std::size_t rest = cell;
            for (std::size_t i = rel.arity; i-- > 0;) {
                tuple[i] = rest % m.size;
                rest /= m.size;
            }
            key.push_back(it != m.relations.end() && it->second.count(tuple) > 0);
        }
    }
    return key;
}

inline std::vector<std::vector<std::size_t>> all_permutations(std::size_t n) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<std::size_t>> perms;
    do perms.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));
    return perms;
}

}  // namespace detail

/// Least isomorphic copy: the relabeling whose interpretation bit vector is
/// lexicographically smallest. Brute force over all permutations, so the
/// universe is capped at 8 elements.
inline FiniteStructure canonical_form(const FiniteStructure& m, const Signature& sig) {
    validate_structure(m, sig);
    if (m.size > 8) throw std::domain_error("canonical labeling limited to 8 elements");
    FiniteStructure base = normalized(m);
    if (base.size < 2) return base;
    FiniteStructure best = base;
    std::vector<bool> best_key = detail::interpretation_key(base, sig);
    for (const auto& perm : detail::all_permutations(base.size)) {
        FiniteStructure candidate = apply_permutation(base, perm);
        std::vector<bool> key = detail::interpretation_key(candidate, sig);
        if (key < best_key) {
            best = std::move(candidate);
            best_key = std::move(key);
        }
    }
    return best;
}

inline bool is_canonical(const FiniteStructure& m, const Signature& sig) {
    return canonical_form(m, sig) == m;
}

// ---------------------------------------------------------------------------
// Sentences
// ---------------------------------------------------------------------------

/// Closed first-order formula over a relational signature. Nodes are
/// immutable and shared; the public builders below are the only way to
/// construct them.
struct Sentence {
    enum class Kind { forall, exists, conj, disj, neg, implies, rel, eq };

    Kind kind = Kind::eq;
    std::string var;                 // bound variable, or left side of an equality
    std::string var2;                // right side of an equality
    std::string relation;            // relation atom name
    std::vector<std::string> args;   // relation atom arguments
    std::shared_ptr<const Sentence> left;
    std::shared_ptr<const Sentence> right;
};

inline Sentence forall(std::string var, Sentence body) {
    Sentence s;
    s.kind = Sentence::Kind::forall;
    s.var = std::move(var);
    s.left = std::make_shared<Sentence>(std::move(body));
    return s;
}

inline Sentence exists(std::string var, Sentence body) {
    Sentence s;
    s.kind = Sentence::Kind::exists;
    s.var = std::move(var);
    s.left = std::make_shared<Sentence>(std::move(body));
    return s;
}

inline Sentence conj(Sentence a, Sentence b) {
    Sentence s;
    s.kind = Sentence::Kind::conj;
    s.left = std::make_shared<Sentence>(std::move(a));
    s.right = std::make_shared<Sentence>(std::move(b));
    return s;
}

inline Sentence disj(Sentence a, Sentence b) {
    Sentence s;
    s.kind = Sentence::Kind::disj;
    s.left = std::make_shared<Sentence>(std::move(a));
    s.right = std::make_shared<Sentence>(std::move(b));
    return s;
}

inline Sentence neg(Sentence a) {
    Sentence s;
    s.kind = Sentence::Kind::neg;
    s.left = std::make_shared<Sentence>(std::move(a));
    return s;
}

inline Sentence implies(Sentence a, Sentence b) {
    Sentence s;
    s.kind = Sentence::Kind::implies;
    s.left = std::make_shared<Sentence>(std::move(a));
    s.right = std::make_shared<Sentence>(std::move(b));
    return s;
}

inline Sentence rel(std::string name, std::vector<std::string> args) {
    if (args.empty()) throw std::invalid_argument("relation atom needs arguments");
    Sentence s;
    s.kind = Sentence::Kind::rel;
    s.relation = std::move(name);
    s.args = std::move(args);
    return s;
}

inline Sentence eq(std::string a, std::string b) {
    Sentence s;
    s.kind = Sentence::Kind::eq;
    s.var = std::move(a);
    s.var2 = std::move(b);
    return s;
}

/// Holds in every structure, including the empty one.
inline Sentence tautology() { return forall("x", eq("x", "x")); }

/// Holds nowhere.
inline Sentence contradiction() { return exists("x", neg(eq("x", "x"))); }

namespace detail {

inline void collect_free_variables(const Sentence& s, std::vector<std::string>& bound,
                                   std::set<std::string>& free) {
    auto is_bound = [&](const std::string& v) {
        return std::find(bound.begin(), bound.end(), v) != bound.end();
    };
    switch (s.kind) {
        case Sentence::Kind::forall:
        case Sentence::Kind::exists:
            bound.push_back(s.var);
            collect_free_variables(*s.left, bound, free);
            bound.pop_back();
            return;
        case Sentence::Kind::conj:
        case Sentence::Kind::disj:
        case Sentence::Kind::implies:
            collect_free_variables(*s.left, bound, free);
            collect_free_variables(*s.right, bound, free);
            return;
        case Sentence::Kind::neg:
            collect_free_variables(*s.left, bound, free);
            return;
        case Sentence::Kind::rel:
            for (const auto& a : s.args)
                if (!is_bound(a)) free.insert(a);
            return;
        case Sentence::Kind::eq:
            if (!is_bound(s.var)) free.insert(s.var);
            if (!is_bound(s.var2)) free.insert(s.var2);
            return;
    }
}

}  // namespace detail

inline std::set<std::string> free_variables(const Sentence& s) {
    std::vector<std::string> bound;
    std::set<std::string> free;
    detail::collect_free_variables(s, bound, free);
    return free;
}

inline bool is_closed(const Sentence& s) { return free_variables(s).empty(); }

namespace detail {

inline void check_relation_atoms(const Sentence& s, const Signature& sig) {
    switch (s.kind) {
        case Sentence::Kind::forall:
        case Sentence::Kind::exists:
        case Sentence::Kind::neg:
            check_relation_atoms(*s.left, sig);
            break;
        case Sentence::Kind::conj:
        case Sentence::Kind::disj:
        case Sentence::Kind::implies:
            check_relation_atoms(*s.left, sig);
            check_relation_atoms(*s.right, sig);
            break;
        case Sentence::Kind::rel: {
            auto arity = sig.arity_of(s.relation);
            if (!arity) throw std::invalid_argument("unknown relation: " + s.relation);
            if (*arity != s.args.size())
                throw std::invalid_argument("relation " + s.relation + " expects " +
                                            std::to_string(*arity) + " arguments");
            break;
        }
        case Sentence::Kind::eq:
            break;
    }
}

}  // namespace detail

/// Checks closedness and that every relation atom matches the signature.
inline void validate_sentence(const Sentence& s, const Signature& sig) {
    detail::check_relation_atoms(s, sig);
    if (auto free = free_variables(s); !free.empty())
        throw std::invalid_argument("sentence has a free variable: " + *free.begin());
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace detail {

using Environment = std::vector<std::pair<std::string, std::size_t>>;

inline std::size_t lookup(const Environment& env, const std::string& var) {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (it->first == var) return it->second;
    throw std::invalid_argument("free variable encountered: " + var);
}

inline bool eval(const Sentence& s, const FiniteStructure& m, Environment& env) {
    switch (s.kind) {
        case Sentence::Kind::forall:
            for (std::size_t e = 0; e < m.size; ++e) {
                env.emplace_back(s.var, e);
                bool ok = eval(*s.left, m, env);
                env.pop_back();
                if (!ok) return false;
            }
            return true;  // vacuously true on the empty universe
        case Sentence::Kind::exists:
            for (std::size_t e = 0; e < m.size; ++e) {
                env.emplace_back(s.var, e);
                bool ok = eval(*s.left, m, env);
                env.pop_back();
                if (ok) return true;
            }
            return false;
        case Sentence::Kind::conj:
            return eval(*s.left, m, env) && eval(*s.right, m, env);
        case Sentence::Kind::disj:
            return eval(*s.left, m, env) || eval(*s.right, m, env);
        case Sentence::Kind::implies:
            return !eval(*s.left, m, env) || eval(*s.right, m, env);
        case Sentence::Kind::neg:
            return !eval(*s.left, m, env);
        case Sentence::Kind::rel: {
            std::vector<std::size_t> tuple;
            tuple.reserve(s.args.size());
            for (const auto& a : s.args) tuple.push_back(lookup(env, a));
            auto it = m.relations.find(s.relation);
            return it != m.relations.end() && it->second.count(tuple) > 0;
        }
        case Sentence::Kind::eq:
            return lookup(env, s.var) == lookup(env, s.var2);
    }
    throw std::logic_error("unreachable sentence kind");
}

}  // namespace detail

/// Standard satisfaction on a finite structure; quantifiers range over the
/// universe, so on the empty structure exists is false and forall is true.
inline bool evaluate_sentence(const Sentence& s, const FiniteStructure& m) {
    detail::Environment env;
    return detail::eval(s, m, env);
}

inline Value truth_label(bool b) { return b ? "true" : "false"; }

inline std::vector<Value> truth_value_set() { return {"false", "true"}; }

// ---------------------------------------------------------------------------
// Textual form
//
// sentence := 'forall' VAR '.' sentence | 'exists' VAR '.' sentence | disj
// disj     := conj ('|' conj)*
// conj     := lit ('&' lit)*
// lit      := '!' lit | '(' sentence ')' | REL '(' VAR (',' VAR)* ')'
//           | VAR '=' VAR
// ---------------------------------------------------------------------------

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Sentence parse() {
        Sentence s = sentence();
        skip_space();
        if (pos_ != text_.size()) fail("trailing input");
        return s;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) {
        throw parse_error(what + " at position " + std::to_string(pos_));
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    std::optional<std::string> peek_identifier() {
        skip_space();
        std::size_t start = pos_;
        if (start >= text_.size()) return std::nullopt;
        auto head = static_cast<unsigned char>(text_[start]);
        if (!std::isalpha(head) && head != '_') return std::nullopt;
        std::size_t end = start;
        while (end < text_.size()) {
            auto c = static_cast<unsigned char>(text_[end]);
            if (!std::isalnum(c) && c != '_') break;
            ++end;
        }
        return std::string(text_.substr(start, end - start));
    }

    std::string identifier() {
        auto id = peek_identifier();
        if (!id) fail("expected an identifier");
        pos_ += id->size();
        return *id;
    }

    Sentence sentence() {
        skip_space();
        if (auto id = peek_identifier(); id && (*id == "forall" || *id == "exists")) {
            pos_ += id->size();
            std::string var = identifier();
            expect('.');
            Sentence body = sentence();
            return *id == "forall" ? forall(std::move(var), std::move(body))
                                   : exists(std::move(var), std::move(body));
        }
        return disjunction();
    }

    Sentence disjunction() {
        Sentence s = conjunction();
        while (eat('|')) s = disj(std::move(s), conjunction());
        return s;
    }

    Sentence conjunction() {
        Sentence s = literal();
        while (eat('&')) s = conj(std::move(s), literal());
        return s;
    }

    Sentence literal() {
        if (eat('!')) return neg(literal());
        if (eat('(')) {
            Sentence s = sentence();
            expect(')');
            return s;
        }
        std::string name = identifier();
        if (eat('(')) {
            std::vector<std::string> args = {identifier()};
            while (eat(',')) args.push_back(identifier());
            expect(')');
            return rel(std::move(name), std::move(args));
        }
        expect('=');
        return eq(std::move(name), identifier());
    }
};

inline int precedence(Sentence::Kind k) {
    switch (k) {
        case Sentence::Kind::forall:
        case Sentence::Kind::exists:
            return 0;
        case Sentence::Kind::implies:
        case Sentence::Kind::disj:
            return 1;
        case Sentence::Kind::conj:
            return 2;
        default:
            return 3;
    }
}

inline void print(const Sentence& s, int context, std::ostream& out) {
    const int mine = precedence(s.kind);
    const bool parens = mine < context;
    if (parens) out << '(';
    switch (s.kind) {
        case Sentence::Kind::forall:
        case Sentence::Kind::exists:
            out << (s.kind == Sentence::Kind::forall ? "forall " : "exists ") << s.var << ". ";
            print(*s.left, 0, out);
            break;
        case Sentence::Kind::disj:
            print(*s.left, 1, out);
            out << " | ";
            print(*s.right, 2, out);
            break;
        case Sentence::Kind::implies:
            // lowered to the grammar's connectives: !lhs | rhs
            print(neg(*s.left), 2, out);
            out << " | ";
            print(*s.right, 2, out);
            break;
        case Sentence::Kind::conj:
            print(*s.left, 2, out);
            out << " & ";
            print(*s.right, 3, out);
            break;
        case Sentence::Kind::neg:
            out << '!';
            print(*s.left, 3, out);
            break;
        case Sentence::Kind::rel: {
            out << s.relation << '(';
            for (std::size_t i = 0; i < s.args.size(); ++i) {
                if (i) out << ',';
                out << s.args[i];
            }
            out << ')';
            break;
        }
        case Sentence::Kind::eq:
            out << s.var << '=' << s.var2;
            break;
    }
    if (parens) out << ')';
}

}  // namespace detail

inline Sentence parse_sentence(std::string_view text) { return detail::Parser(text).parse(); }

inline std::string to_text(const Sentence& s) {
    std::ostringstream out;
    detail::print(s, 0, out);
    return out.str();
}

// ---------------------------------------------------------------------------
// Recogniser constructions
// ---------------------------------------------------------------------------

namespace detail {

/// Signed occurrence of a sentence according to which truth values are
/// accepted: {true} keeps it, {false} negates it, both is trivially true,
/// none trivially false.
inline Sentence signed_literal(const Sentence& s, const std::vector<Value>& accepted) {
    bool wants_true = std::find(accepted.begin(), accepted.end(), "true") != accepted.end();
    bool wants_false = std::find(accepted.begin(), accepted.end(), "false") != accepted.end();
    for (const Value& v : accepted)
        if (v != "true" && v != "false")
            throw std::invalid_argument("truth values must be 'true' or 'false', got " + v);
    if (wants_true && wants_false) return tautology();
    if (wants_true) return s;
    if (wants_false) return neg(s);
    return contradiction();
}

}  // namespace detail

/// Single sentence equivalent to the intersection of two sentence
/// languages: accepted truth values become signed literals joined by a
/// conjunction, accepted set {true}.
inline std::pair<Sentence, std::vector<Value>> conjunction_recogniser(
    const Sentence& s1, const std::vector<Value>& accepted1, const Sentence& s2,
    const std::vector<Value>& accepted2) {
    Sentence combined =
        conj(detail::signed_literal(s1, accepted1), detail::signed_literal(s2, accepted2));
    return {std::move(combined), {"true"}};
}

/// Diagram sentence: pins the structure up to isomorphism by naming every
/// element, stating all present and absent atoms, and closing the universe.
inline Sentence characteristic_sentence(const FiniteStructure& m, const Signature& sig) {
    validate_structure(m, sig);
    if (m.size == 0) return neg(exists("y", eq("y", "y")));

    std::vector<std::string> names;
    names.reserve(m.size);
    for (std::size_t e = 0; e < m.size; ++e) names.push_back("x" + std::to_string(e));

    std::optional<Sentence> body;
    auto add = [&](Sentence clause) {
        body = body ? conj(std::move(*body), std::move(clause)) : std::move(clause);
    };

    for (std::size_t i = 0; i < m.size; ++i)
        for (std::size_t j = i + 1; j < m.size; ++j) add(neg(eq(names[i], names[j])));

    for (const auto& relation : sig.relations) {
        std::size_t cells = 1;
        for (std::size_t i = 0; i < relation.arity; ++i) cells *= m.size;
        auto it = m.relations.find(relation.name);
        std::vector<std::size_t> tuple(relation.arity, 0);
        for (std::size_t cell = 0; cell < cells; ++cell) {
            std::size_t rest = cell;
            for (std::size_t i = relation.arity; i-- > 0;) {
                tuple[i] = rest % m.size;
                rest /= m.size;
            }
            std::vector<std::string> args;
            args.reserve(relation.arity);
            for (std::size_t e : tuple) args.push_back(names[e]);
            Sentence atom = rel(relation.name, args);
            bool present = it != m.relations.end() && it->second.count(tuple) > 0;
            add(present ? std::move(atom) : neg(std::move(atom)));
        }
    }

    std::optional<Sentence> closure;
    for (const auto& name : names) {
        Sentence piece = eq("y", name);
        closure = closure ? disj(std::move(*closure), std::move(piece)) : std::move(piece);
    }
    add(forall("y", std::move(*closure)));

    Sentence out = std::move(*body);
    for (std::size_t e = m.size; e-- > 0;) out = exists(names[e], std::move(out));
    return out;
}

// ---------------------------------------------------------------------------
// Enumeration of structures up to isomorphism
// ---------------------------------------------------------------------------

/// Enumerates canonical structures by increasing size, within a size by
/// interpretation bit vector. Size blocks are produced on demand by walking
/// all interpretations and keeping the ones equal to their canonical form.
class StructureEnumerator {
public:
    explicit StructureEnumerator(Signature sig) : sig_(std::move(sig)) {}

    const Signature& signature() const { return sig_; }

    FiniteStructure at(std::size_t index) {
        std::size_t size = 0;
        while (true) {
            const auto& block = of_size(size);
            if (index < block.size()) return block[index];
            index -= block.size();
            ++size;
        }
    }

    std::size_t count_up_to_size(std::size_t max_size) {
        std::size_t total = 0;
        for (std::size_t s = 0; s <= max_size; ++s) total += of_size(s).size();
        return total;
    }

    /// Canonical structures with exactly `size` elements.
    const std::vector<FiniteStructure>& of_size(std::size_t size) {
        while (by_size_.size() <= size) by_size_.push_back(enumerate_size(by_size_.size()));
        return by_size_[size];
    }

private:
    Signature sig_;
    std::vector<std::vector<FiniteStructure>> by_size_;

    std::size_t total_cells(std::size_t size) const {
        std::size_t cells = 0;
        for (const auto& r : sig_.relations) {
            std::size_t c = 1;
            for (std::size_t i = 0; i < r.arity; ++i) c *= size;
            cells += c;
        }
        return cells;
    }

    FiniteStructure from_mask(std::uint64_t mask, std::size_t size) const {
        FiniteStructure m;
        m.size = size;
        std::size_t offset = 0;
        for (const auto& r : sig_.relations) {
            std::size_t cells = 1;
            for (std::size_t i = 0; i < r.arity; ++i) cells *= size;
            for (std::size_t cell = 0; cell < cells; ++cell) {
                if (!(mask >> (offset + cell) & 1)) continue;
                std::vector<std::size_t> tuple(r.arity);
                std::size_t rest = cell;
                for (std::size_t i = r.arity; i-- > 0;) {
                    tuple[i] = rest % size;
                    rest /= size;
                }
                m.relations[r.name].insert(std::move(tuple));
            }
            offset += cells;
        }
        return m;
    }

    std::vector<FiniteStructure> enumerate_size(std::size_t size) const {
        if (size == 0) return {FiniteStructure{}};
        const std::size_t cells = total_cells(size);
        std::uint64_t perm_count = 1;
        for (std::size_t i = 2; i <= size; ++i) perm_count *= i;
        if (cells > 24 || (std::uint64_t{1} << cells) * perm_count > 200'000'000ull)
            throw std::domain_error("structure enumeration too large at size " +
                                    std::to_string(size));

        // Precompute how each permutation moves interpretation cells.
        auto perms = detail::all_permutations(size);
        std::vector<std::vector<std::size_t>> cell_maps;
        cell_maps.reserve(perms.size());
        for (const auto& perm : perms) {
            std::vector<std::size_t> map(cells);
            std::size_t offset = 0;
            for (const auto& r : sig_.relations) {
                std::size_t rel_cells = 1;
                for (std::size_t i = 0; i < r.arity; ++i) rel_cells *= size;
                std::vector<std::size_t> tuple(r.arity);
                for (std::size_t cell = 0; cell < rel_cells; ++cell) {
                    std::size_t rest = cell;
                    for (std::size_t i = r.arity; i-- > 0;) {
                        tuple[i] = rest % size;
                        rest /= size;
                    }
                    std::size_t target = 0;
                    for (std::size_t i = 0; i < r.arity; ++i) target = target * size + perm[tuple[i]];
                    map[offset + cell] = offset + target;
                }
                offset += rel_cells;
            }
            cell_maps.push_back(std::move(map));
        }

        // Keep exactly the masks that are minimal in their isomorphism orbit.
        std::vector<std::uint64_t> kept;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) {
            bool minimal = true;
            for (const auto& map : cell_maps) {
                std::uint64_t moved = 0;
                for (std::size_t cell = 0; cell < cells; ++cell)
                    if (mask >> cell & 1) moved |= std::uint64_t{1} << map[cell];
                if (key_less(moved, mask, cells)) {
                    minimal = false;
                    break;
                }
            }
            if (minimal) kept.push_back(mask);
        }

        std::sort(kept.begin(), kept.end(), [&](std::uint64_t a, std::uint64_t b) {
            return key_less(a, b, cells);
        });
        std::vector<FiniteStructure> block;
        block.reserve(kept.size());
        for (std::uint64_t mask : kept) block.push_back(from_mask(mask, size));
        return block;
    }

    /// Lexicographic order on bit vectors read from cell 0 upward.
    static bool key_less(std::uint64_t a, std::uint64_t b, std::size_t cells) {
        for (std::size_t cell = 0; cell < cells; ++cell) {
            bool ab = a >> cell & 1, bb = b >> cell & 1;
            if (ab != bb) return !ab;
        }
        return false;
    }
};

/// Truth tuples of the sentences over every canonical structure of size at
/// most `size_bound`; an under-approximation of the full projection.
inline std::vector<TruncatedPoint> realized_truth_tuples(const Signature& sig,
                                                         const std::vector<Sentence>& sentences,
                                                         std::size_t size_bound) {
    StructureEnumerator structures(sig);
    std::set<TruncatedPoint> tuples;
    for (std::size_t size = 0; size <= size_bound; ++size)
        for (const FiniteStructure& m : structures.of_size(size)) {
            TruncatedPoint p;
            p.reserve(sentences.size());
            for (const Sentence& s : sentences) p.push_back(truth_label(evaluate_sentence(s, m)));
            tuples.insert(std::move(p));
        }
    return {tuples.begin(), tuples.end()};
}

inline std::string structure_to_display(const FiniteStructure& m) {
    std::ostringstream out;
    out << "{size=" << m.size;
    for (const auto& [name, tuples] : m.relations) {
        out << ", " << name << "={";
        bool first_tuple = true;
        for (const auto& t : tuples) {
            if (!first_tuple) out << ',';
            first_tuple = false;
            out << '(';
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (i) out << ',';
                out << t[i];
            }
            out << ')';
        }
        out << '}';
    }
    out << '}';
    return out.str();
}

inline Recogniser<FiniteStructure> sentence_recogniser(std::string name, Sentence s,
                                                       const Signature& sig) {
    validate_sentence(s, sig);
    auto shared = std::make_shared<Sentence>(std::move(s));
    return make_recogniser<FiniteStructure>(
        std::move(name), truth_value_set(),
        [shared](const FiniteStructure& m) { return truth_label(evaluate_sentence(*shared, m)); },
        shared);
}

/// Framework over canonical finite structures with sentence recognisers.
/// Separation uses diagram sentences; intersections conjoin signed
/// literals. Projections have no exact computation and stay budgeted.
inline Framework<FiniteStructure> fo_framework(
    Signature sig, std::vector<std::pair<std::string, Sentence>> named_sentences) {
    auto structures = std::make_shared<StructureEnumerator>(sig);
    auto signature = std::make_shared<Signature>(std::move(sig));

    Framework<FiniteStructure> fw(
        [structures](std::size_t n) { return structures->at(n); },
        [](const FiniteStructure& m) { return structure_to_display(m); });
    fw.set_validator([signature](const FiniteStructure& m) {
        try {
            validate_structure(m, *signature);
            return true;
        } catch (const std::invalid_argument&) {
            return false;
        }
    });
    fw.set_characteristic_hook([signature](const FiniteStructure& m) {
        return sentence_recogniser("diagram" + structure_to_display(m),
                                   characteristic_sentence(m, *signature), *signature);
    });
    fw.set_intersection_hook([signature](const Recogniser<FiniteStructure>& r1,
                                         const std::vector<Value>& v1,
                                         const Recogniser<FiniteStructure>& r2,
                                         const std::vector<Value>& v2) {
        const auto* s1 = std::any_cast<std::shared_ptr<Sentence>>(&r1.payload);
        const auto* s2 = std::any_cast<std::shared_ptr<Sentence>>(&r2.payload);
        if (!s1 || !s2)
            throw std::logic_error("sentence intersection needs sentence-backed recognisers");
        auto [combined, accepted] = conjunction_recogniser(**s1, v1, **s2, v2);
        auto name = "and(" + r1.name + "," + r2.name + ")";
        return std::pair{sentence_recogniser(std::move(name), std::move(combined), *signature),
                         std::move(accepted)};
    });

    for (auto& [name, sentence] : named_sentences)
        fw.add_recogniser(sentence_recogniser(name, std::move(sentence), *signature));
    return fw;
}

/// Axioms of a nonempty strict linear order with no greatest element;
/// satisfiable only by infinite models. The nonemptiness conjunct matters:
/// without it every purely universal clause holds vacuously on the empty
/// structure.
inline Sentence unbounded_strict_order(const std::string& relation = "E") {
    Sentence nonempty = exists("x", eq("x", "x"));
    Sentence irreflexive = forall("x", neg(rel(relation, {"x", "x"})));
    Sentence transitive = forall(
        "x", forall("y", forall("z", implies(conj(rel(relation, {"x", "y"}), rel(relation, {"y", "z"})),
                                             rel(relation, {"x", "z"})))));
    Sentence total = forall(
        "x", forall("y", disj(disj(eq("x", "y"), rel(relation, {"x", "y"})), rel(relation, {"y", "x"}))));
    Sentence unbounded = forall("x", exists("y", rel(relation, {"x", "y"})));
    return conj(conj(conj(conj(std::move(nonempty), std::move(irreflexive)), std::move(transitive)),
                     std::move(total)),
                std::move(unbounded));
}

}  // namespace profinite::fo
