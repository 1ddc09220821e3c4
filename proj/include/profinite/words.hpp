#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "profinite/framework.hpp"

/**
 * @brief Words over a finite alphabet recognised by complete DFAs.
 * @file
 */

namespace profinite::words {

/// Ordered finite set of distinct symbols.
class Alphabet {
public:
    explicit Alphabet(std::string symbols) : symbols_(std::move(symbols)) {
        if (symbols_.empty()) throw std::invalid_argument("alphabet must be nonempty");
        for (std::size_t i = 0; i < symbols_.size(); ++i)
            for (std::size_t j = i + 1; j < symbols_.size(); ++j)
                if (symbols_[i] == symbols_[j])
                    throw std::invalid_argument("alphabet symbols must be distinct");
    }

    std::size_t size() const { return symbols_.size(); }
    char symbol(std::size_t i) const { return symbols_.at(i); }
    const std::string& symbols() const { return symbols_; }

    std::size_t index_of(char c) const {
        auto pos = symbols_.find(c);
        if (pos == std::string::npos)
            throw std::invalid_argument(std::string("symbol '") + c + "' not in alphabet " + symbols_);
        return pos;
    }

    bool valid_word(const std::string& w) const {
        for (char c : w)
            if (symbols_.find(c) == std::string::npos) return false;
        return true;
    }

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.symbols_ == b.symbols_; }

private:
    std::string symbols_;
};

/// n-th word in length-lexicographic order: empty word first, then by
/// length, ties broken by symbol order.
inline std::string word_at(const Alphabet& a, std::size_t index) {
    const std::size_t k = a.size();
    std::size_t length = 0;
    std::size_t block = 1;  // number of words of the current length
    while (index >= block) {
        index -= block;
        ++length;
        block *= k;
    }
    std::string w(length, a.symbol(0));
    for (std::size_t pos = length; pos-- > 0;) {
        w[pos] = a.symbol(index % k);
        index /= k;
    }
    return w;
}

/// Number of words of length at most `len`.
inline std::size_t word_count_up_to_length(const Alphabet& a, std::size_t len) {
    std::size_t total = 0, block = 1;
    for (std::size_t l = 0; l <= len; ++l) {
        total += block;
        block *= a.size();
    }
    return total;
}

/// Complete deterministic finite automaton whose output is the value label
/// of the state reached at the end of the word.
class Dfa {
public:
    Dfa(Alphabet alphabet, std::size_t initial, std::vector<std::vector<std::size_t>> transition,
        std::vector<Value> value_of)
        : alphabet_(std::move(alphabet)),
          initial_(initial),
          transition_(std::move(transition)),
          value_of_(std::move(value_of)) {
        const std::size_t n = transition_.size();
        if (n == 0) throw std::invalid_argument("DFA needs at least one state");
        if (initial_ >= n) throw std::invalid_argument("initial state out of range");
        if (value_of_.size() != n)
            throw std::invalid_argument("value_of must label every state");
        for (const auto& row : transition_) {
            if (row.size() != alphabet_.size())
                throw std::invalid_argument("transition row must cover the whole alphabet");
            for (std::size_t target : row)
                if (target >= n) throw std::invalid_argument("transition target out of range");
        }
    }

    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t state_count() const { return transition_.size(); }
    std::size_t initial() const { return initial_; }
    std::size_t step(std::size_t state, std::size_t symbol_index) const {
        return transition_[state][symbol_index];
    }
    const Value& state_value(std::size_t state) const { return value_of_[state]; }
    const std::vector<std::vector<std::size_t>>& transition() const { return transition_; }
    const std::vector<Value>& value_of() const { return value_of_; }

private:
    Alphabet alphabet_;
    std::size_t initial_;
    std::vector<std::vector<std::size_t>> transition_;
    std::vector<Value> value_of_;
};

inline Value run_dfa(const Dfa& d, const std::string& w) {
    std::size_t state = d.initial();
    for (char c : w) state = d.step(state, d.alphabet().index_of(c));
    return d.state_value(state);
}

/// States reachable from the initial state, in breadth-first order.
inline std::vector<std::size_t> reachable_states(const Dfa& d) {
    std::vector<bool> seen(d.state_count(), false);
    std::vector<std::size_t> order;
    std::queue<std::size_t> frontier;
    seen[d.initial()] = true;
    frontier.push(d.initial());
    while (!frontier.empty()) {
        std::size_t s = frontier.front();
        frontier.pop();
        order.push_back(s);
        for (std::size_t a = 0; a < d.alphabet().size(); ++a) {
            std::size_t t = d.step(s, a);
            if (!seen[t]) {
                seen[t] = true;
                frontier.push(t);
            }
        }
    }
    return order;
}

/// Distinct values over reachable states, sorted.
inline std::vector<Value> dfa_value_set(const Dfa& d) {
    std::set<Value> values;
    for (std::size_t s : reachable_states(d)) values.insert(d.state_value(s));
    return {values.begin(), values.end()};
}

inline Value compose_values(const Value& a, const Value& b) { return "(" + a + "," + b + ")"; }

/// Reachable product automaton; the value of a pair state is the pair of
/// component values.
inline Dfa product_dfa(const Dfa& d1, const Dfa& d2) {
    if (!(d1.alphabet() == d2.alphabet()))
        throw std::invalid_argument("product requires a common alphabet");
    const std::size_t k = d1.alphabet().size();

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> id;
    std::vector<std::pair<std::size_t, std::size_t>> states;
    std::queue<std::size_t> frontier;

    auto intern = [&](std::size_t s1, std::size_t s2) {
        auto [it, fresh] = id.try_emplace({s1, s2}, states.size());
        if (fresh) {
            states.emplace_back(s1, s2);
            frontier.push(it->second);
        }
        return it->second;
    };

    intern(d1.initial(), d2.initial());
    std::vector<std::vector<std::size_t>> transition;
    while (!frontier.empty()) {
        std::size_t s = frontier.front();
        frontier.pop();
        auto [s1, s2] = states[s];
        if (transition.size() <= s) transition.resize(s + 1, std::vector<std::size_t>(k, 0));
        for (std::size_t a = 0; a < k; ++a)
            transition[s][a] = intern(d1.step(s1, a), d2.step(s2, a));
    }

    std::vector<Value> value_of;
    value_of.reserve(states.size());
    for (auto [s1, s2] : states)
        value_of.push_back(compose_values(d1.state_value(s1), d2.state_value(s2)));
    return Dfa(d1.alphabet(), 0, std::move(transition), std::move(value_of));
}

/// Minimal complete DFA separating exactly one word: one state per proper
/// prefix of `w`, an accept state reached by `w` alone, and a sink.
inline Dfa singleton_dfa(const Alphabet& a, const std::string& w) {
    if (!a.valid_word(w)) throw std::invalid_argument("word uses symbols outside the alphabet");
    const std::size_t k = a.size();
    const std::size_t accept = w.size();
    const std::size_t sink = w.size() + 1;
    const std::size_t n = w.size() + 2;

    std::vector<std::vector<std::size_t>> transition(n, std::vector<std::size_t>(k, sink));
    for (std::size_t i = 0; i < w.size(); ++i) transition[i][a.index_of(w[i])] = i + 1;
    // accept and sink rows already lead to the sink

    std::vector<Value> value_of(n, "reject");
    value_of[accept] = "accept";
    return Dfa(a, 0, std::move(transition), std::move(value_of));
}

namespace detail {

struct ProductWalk {
    std::vector<std::vector<std::size_t>> states;       // tuples of component states
    std::vector<std::vector<std::size_t>> transition;   // [state][symbol]
    std::vector<TruncatedPoint> values;                 // value tuple per state
    std::vector<std::string> witness;                   // shortest word per state (BFS order)
};

inline ProductWalk explore_product(const std::vector<Dfa>& dfas) {
    if (dfas.empty()) throw std::invalid_argument("need at least one DFA");
    const Alphabet& a = dfas.front().alphabet();
    for (const Dfa& d : dfas)
        if (!(d.alphabet() == a)) throw std::invalid_argument("DFAs must share an alphabet");
    const std::size_t k = a.size();

    ProductWalk walk;
    std::map<std::vector<std::size_t>, std::size_t> id;
    std::queue<std::size_t> frontier;

    auto intern = [&](std::vector<std::size_t> tuple, const std::string& via) {
        auto [it, fresh] = id.try_emplace(tuple, walk.states.size());
        if (fresh) {
            walk.states.push_back(std::move(tuple));
            walk.witness.push_back(via);
            frontier.push(it->second);
        }
        return it->second;
    };

    std::vector<std::size_t> start;
    for (const Dfa& d : dfas) start.push_back(d.initial());
    intern(std::move(start), "");

    while (!frontier.empty()) {
        std::size_t s = frontier.front();
        frontier.pop();
        if (walk.transition.size() <= s) walk.transition.resize(s + 1, std::vector<std::size_t>(k, 0));
        for (std::size_t sym = 0; sym < k; ++sym) {
            std::vector<std::size_t> next(dfas.size());
            for (std::size_t i = 0; i < dfas.size(); ++i)
                next[i] = dfas[i].step(walk.states[s][i], sym);
            walk.transition[s][sym] = intern(std::move(next), walk.witness[s] + a.symbol(sym));
        }
    }

    walk.values.reserve(walk.states.size());
    for (const auto& tuple : walk.states) {
        TruncatedPoint p;
        p.reserve(dfas.size());
        for (std::size_t i = 0; i < dfas.size(); ++i) p.push_back(dfas[i].state_value(tuple[i]));
        walk.values.push_back(std::move(p));
    }
    return walk;
}

}  // namespace detail

/// Exactly the value tuples realized by some word, each with a shortest
/// witness, sorted by tuple. Exact: projecting the closure of the embedded
/// word set onto finitely many coordinates realizes nothing beyond what
/// actual words realize.
inline std::vector<std::pair<TruncatedPoint, std::string>> reachable_value_tuples_with_witnesses(
    const std::vector<Dfa>& dfas) {
    auto walk = detail::explore_product(dfas);
    std::map<TruncatedPoint, std::string> best;
    for (std::size_t s = 0; s < walk.states.size(); ++s)
        best.try_emplace(walk.values[s], walk.witness[s]);  // BFS order keeps the shortest
    return {best.begin(), best.end()};
}

inline std::vector<TruncatedPoint> reachable_value_tuples(const std::vector<Dfa>& dfas) {
    std::vector<TruncatedPoint> tuples;
    for (auto& [p, w] : reachable_value_tuples_with_witnesses(dfas)) tuples.push_back(p);
    return tuples;
}

/// Exact number of words (none / one / many) whose value tuple equals `p`,
/// by path counting on the product automaton: a cycle through useful states
/// means infinitely many, otherwise paths are counted in the DAG.
inline Multiplicity count_words_with_tuple(const std::vector<Dfa>& dfas, const TruncatedPoint& p) {
    auto walk = detail::explore_product(dfas);
    const std::size_t n = walk.states.size();

    std::vector<bool> hits(n, false);
    for (std::size_t s = 0; s < n; ++s) hits[s] = walk.values[s] == p;

    // States from which a hit state is reachable.
    std::vector<std::vector<std::size_t>> reverse(n);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t : walk.transition[s]) reverse[t].push_back(s);
    std::vector<bool> useful(n, false);
    std::deque<std::size_t> queue;
    for (std::size_t s = 0; s < n; ++s)
        if (hits[s]) {
            useful[s] = true;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        std::size_t t = queue.front();
        queue.pop_front();
        for (std::size_t s : reverse[t])
            if (!useful[s]) {
                useful[s] = true;
                queue.push_back(s);
            }
    }
    if (!useful[0]) return Multiplicity::none;  // state 0 is the initial product state

    // Cycle through useful states implies infinitely many realizing words.
    enum class Mark { fresh, open, done };
    std::vector<Mark> mark(n, Mark::fresh);
    std::vector<std::size_t> stack = {0};
    std::vector<std::size_t> next_edge(n, 0);
    mark[0] = Mark::open;
    while (!stack.empty()) {
        std::size_t s = stack.back();
        if (next_edge[s] == walk.transition[s].size()) {
            mark[s] = Mark::done;
            stack.pop_back();
            continue;
        }
        std::size_t t = walk.transition[s][next_edge[s]++];
        if (!useful[t]) continue;
        if (mark[t] == Mark::open) return Multiplicity::many;
        if (mark[t] == Mark::fresh) {
            mark[t] = Mark::open;
            stack.push_back(t);
        }
    }

    // DAG of useful states: count words from the initial state, saturating at 2.
    std::vector<int> count(n, -1);
    auto count_from = [&](auto&& self, std::size_t s) -> int {
        if (count[s] >= 0) return count[s];
        int total = hits[s] ? 1 : 0;
        for (std::size_t t : walk.transition[s])
            if (useful[t]) {
                total += self(self, t);
                if (total >= 2) break;
            }
        return count[s] = std::min(total, 2);
    };
    int total = count_from(count_from, 0);
    return total == 0 ? Multiplicity::none : total == 1 ? Multiplicity::one : Multiplicity::many;
}

inline Recogniser<std::string> dfa_recogniser(std::string name, Dfa d) {
    std::vector<Value> values = dfa_value_set(d);
    auto shared = std::make_shared<Dfa>(std::move(d));
    return make_recogniser<std::string>(
        std::move(name), std::move(values), [shared](const std::string& w) { return run_dfa(*shared, w); },
        shared);
}

namespace detail {

/// Recovers the automata backing the given recogniser indices, if all of
/// them are DFA-backed.
inline std::optional<std::vector<Dfa>> dfas_behind(const Framework<std::string>& fw,
                                                   const std::vector<std::size_t>& indices) {
    std::vector<Dfa> dfas;
    dfas.reserve(indices.size());
    for (std::size_t i : indices) {
        const auto* shared = std::any_cast<std::shared_ptr<Dfa>>(&fw.recogniser(i).payload);
        if (!shared) return std::nullopt;
        dfas.push_back(**shared);
    }
    return dfas;
}

}  // namespace detail

/// Framework over all words of the alphabet, with DFA recognisers.
/// Separation uses single-word automata, intersection the product
/// construction, and projections are computed exactly by reachability.
inline Framework<std::string> word_framework(Alphabet alphabet,
                                             std::vector<std::pair<std::string, Dfa>> named_dfas) {
    Framework<std::string> fw(
        [alphabet](std::size_t n) { return word_at(alphabet, n); },
        [](const std::string& w) { return "\"" + w + "\""; });
    fw.set_validator([alphabet](const std::string& w) { return alphabet.valid_word(w); });
    fw.set_characteristic_hook([alphabet](const std::string& w) {
        return dfa_recogniser("singleton(" + w + ")", singleton_dfa(alphabet, w));
    });
    fw.set_intersection_hook([](const Recogniser<std::string>& r1, const std::vector<Value>& v1,
                                const Recogniser<std::string>& r2, const std::vector<Value>& v2) {
        const auto* d1 = std::any_cast<std::shared_ptr<Dfa>>(&r1.payload);
        const auto* d2 = std::any_cast<std::shared_ptr<Dfa>>(&r2.payload);
        if (!d1 || !d2)
            throw std::logic_error("word intersection needs DFA-backed recognisers");
        Dfa product = product_dfa(**d1, **d2);
        std::vector<Value> realized = dfa_value_set(product);
        std::vector<Value> accepted;
        for (const Value& a : v1)
            for (const Value& b : v2) {
                Value v = compose_values(a, b);
                if (std::binary_search(realized.begin(), realized.end(), v)) accepted.push_back(v);
            }
        auto name = "and(" + r1.name + "," + r2.name + ")";
        return std::pair{dfa_recogniser(std::move(name), std::move(product)), std::move(accepted)};
    });
    fw.set_exact_projector([](const Framework<std::string>& self,
                              const std::vector<std::size_t>& indices)
                               -> std::optional<std::vector<std::pair<TruncatedPoint, std::string>>> {
        auto dfas = detail::dfas_behind(self, indices);
        if (!dfas) return std::nullopt;
        return reachable_value_tuples_with_witnesses(*dfas);
    });
    fw.set_realization_counter(
        [](const Framework<std::string>& self, const std::vector<std::size_t>& indices,
           const TruncatedPoint& p) -> std::optional<Multiplicity> {
            auto dfas = detail::dfas_behind(self, indices);
            if (!dfas) return std::nullopt;
            return count_words_with_tuple(*dfas, p);
        });

    for (auto& [name, dfa] : named_dfas) fw.add_recogniser(dfa_recogniser(name, std::move(dfa)));
    return fw;
}

/// Two-state automaton reporting word length parity as "even"/"odd".
inline Dfa parity_length_dfa(const Alphabet& a) {
    std::vector<std::vector<std::size_t>> transition = {
        std::vector<std::size_t>(a.size(), 1), std::vector<std::size_t>(a.size(), 0)};
    return Dfa(a, 0, std::move(transition), {"even", "odd"});
}

/// Two-state automaton reporting whether a symbol occurs, as "yes"/"no".
inline Dfa contains_symbol_dfa(const Alphabet& a, char c) {
    std::size_t watched = a.index_of(c);
    std::vector<std::vector<std::size_t>> transition(2, std::vector<std::size_t>(a.size(), 0));
    for (std::size_t s = 0; s < a.size(); ++s) transition[0][s] = s == watched ? 1 : 0;
    for (std::size_t s = 0; s < a.size(); ++s) transition[1][s] = 1;
    return Dfa(a, 0, std::move(transition), {"no", "yes"});
}

}  // namespace profinite::words
