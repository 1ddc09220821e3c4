#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "profinite/words.hpp"

using namespace profinite;
using namespace profinite::words;

namespace {

// Independent oracle: every value tuple realized by some word, found by
// running each automaton on every word up to the given length.
std::vector<TruncatedPoint> brute_force_tuples(const std::vector<Dfa>& dfas,
                                               std::size_t max_length) {
    const Alphabet& alphabet = dfas.front().alphabet();
    std::set<TruncatedPoint> tuples;
    std::size_t total = word_count_up_to_length(alphabet, max_length);
    for (std::size_t n = 0; n < total; ++n) {
        std::string w = word_at(alphabet, n);
        TruncatedPoint p;
        for (const Dfa& d : dfas) p.push_back(run_dfa(d, w));
        tuples.insert(std::move(p));
    }
    return {tuples.begin(), tuples.end()};
}

Dfa random_dfa(std::mt19937_64& rng, const Alphabet& alphabet, std::size_t max_states) {
    std::uniform_int_distribution<std::size_t> state_dist(1, max_states);
    std::size_t states = state_dist(rng);
    std::uniform_int_distribution<std::size_t> target(0, states - 1);
    std::vector<std::vector<std::size_t>> transition(states,
                                                     std::vector<std::size_t>(alphabet.size()));
    for (auto& row : transition)
        for (auto& t : row) t = target(rng);
    std::vector<Value> value_of(states);
    std::uniform_int_distribution<std::size_t> label(0, states - 1);
    for (auto& v : value_of) v = "v" + std::to_string(label(rng));
    return Dfa(alphabet, target(rng), std::move(transition), std::move(value_of));
}

}  // namespace

TEST_CASE("length-lexicographic word enumeration") {
    Alphabet ab("ab");

    SECTION("first elements") {
        CHECK(word_at(ab, 0) == "");
        CHECK(word_at(ab, 1) == "a");
        CHECK(word_at(ab, 2) == "b");
        CHECK(word_at(ab, 3) == "aa");
    }

    SECTION("indices 0..6 are exactly the words of length at most 2") {
        std::set<std::string> words;
        for (std::size_t n = 0; n < 7; ++n) {
            std::string w = word_at(ab, n);
            CHECK(w.size() <= 2);
            words.insert(w);
        }
        CHECK(words.size() == 7);
        CHECK(word_count_up_to_length(ab, 2) == 7);
    }

    SECTION("enumeration is injective over a prefix") {
        std::set<std::string> seen;
        for (std::size_t n = 0; n < 200; ++n) CHECK(seen.insert(word_at(ab, n)).second);
    }

    SECTION("unary alphabet") {
        Alphabet a("a");
        CHECK(word_at(a, 0) == "");
        CHECK(word_at(a, 3) == "aaa");
    }
}

TEST_CASE("running automata") {
    Alphabet ab("ab");
    Dfa even = parity_length_dfa(ab);
    Dfa has_a = contains_symbol_dfa(ab, 'a');

    CHECK(run_dfa(even, "abab") == "even");
    CHECK(run_dfa(even, "a") == "odd");
    CHECK(run_dfa(has_a, "") == "no");
    CHECK(run_dfa(has_a, "bbb") == "no");
    CHECK(run_dfa(has_a, "bba") == "yes");
    CHECK_THROWS_AS(run_dfa(even, "abc"), std::invalid_argument);

    SECTION("product runs both components") {
        Dfa product = product_dfa(even, has_a);
        CHECK(run_dfa(product, "aba") == compose_values("odd", "yes"));
        for (std::size_t n = 0; n < word_count_up_to_length(ab, 5); ++n) {
            std::string w = word_at(ab, n);
            CHECK(run_dfa(product, w) == compose_values(run_dfa(even, w), run_dfa(has_a, w)));
        }
    }
}

TEST_CASE("product construction") {
    Alphabet ab("ab");
    Dfa even = parity_length_dfa(ab);
    Dfa has_a = contains_symbol_dfa(ab, 'a');

    SECTION("reachable size and value set") {
        Dfa product = product_dfa(even, has_a);
        CHECK(product.state_count() <= 4);
        auto values = dfa_value_set(product);
        CHECK(values.size() == 4);
        for (const auto& a : {"even", "odd"})
            for (const auto& b : {"no", "yes"})
                CHECK(std::binary_search(values.begin(), values.end(), compose_values(a, b)));
    }

    SECTION("one-state unit behaves as the original") {
        Dfa unit(ab, 0, {std::vector<std::size_t>(2, 0)}, {"all"});
        Dfa product = product_dfa(even, unit);
        CHECK(product.state_count() == reachable_states(even).size());
        for (std::size_t n = 0; n < word_count_up_to_length(ab, 6); ++n) {
            std::string w = word_at(ab, n);
            CHECK(run_dfa(product, w) == compose_values(run_dfa(even, w), "all"));
        }
    }

    SECTION("value-wise symmetric up to swapping") {
        Dfa left = product_dfa(even, has_a);
        Dfa right = product_dfa(has_a, even);
        for (std::size_t n = 0; n < word_count_up_to_length(ab, 5); ++n) {
            std::string w = word_at(ab, n);
            CHECK(run_dfa(left, w) == compose_values(run_dfa(even, w), run_dfa(has_a, w)));
            CHECK(run_dfa(right, w) == compose_values(run_dfa(has_a, w), run_dfa(even, w)));
        }
    }

    SECTION("alphabet mismatch rejected") {
        Alphabet abc("abc");
        CHECK_THROWS_AS(product_dfa(even, parity_length_dfa(abc)), std::invalid_argument);
    }
}

TEST_CASE("single-word automata") {
    Alphabet ab("ab");

    SECTION("accepts its word and nothing nearby") {
        Dfa d = singleton_dfa(ab, "ab");
        CHECK(d.state_count() == 4);
        CHECK(run_dfa(d, "ab") == "accept");
        CHECK(run_dfa(d, "ba") == "reject");
        CHECK(run_dfa(d, "aba") == "reject");
    }

    SECTION("empty word case") {
        Dfa d = singleton_dfa(ab, "");
        CHECK(d.state_count() == 2);
        CHECK(run_dfa(d, "") == "accept");
        CHECK(run_dfa(d, "a") == "reject");
    }

    SECTION("separates the word from everything up to length 4") {
        Dfa d = singleton_dfa(ab, "ab");
        std::size_t accepted = 0;
        for (std::size_t n = 0; n < word_count_up_to_length(ab, 4); ++n) {
            std::string w = word_at(ab, n);
            if (run_dfa(d, w) == "accept") {
                ++accepted;
                CHECK(w == "ab");
            }
        }
        CHECK(accepted == 1);
    }

    SECTION("accept value is hit by exactly one word up to |w|+2") {
        for (const std::string& w : {"", "a", "ba", "abb"}) {
            Dfa d = singleton_dfa(ab, w);
            std::size_t hits = 0;
            for (std::size_t n = 0; n < word_count_up_to_length(ab, w.size() + 2); ++n)
                if (run_dfa(d, word_at(ab, n)) == "accept") ++hits;
            CHECK(hits == 1);
        }
    }
}

TEST_CASE("reachable value tuples") {
    Alphabet ab("ab");
    Dfa even = parity_length_dfa(ab);
    Dfa has_a = contains_symbol_dfa(ab, 'a');

    SECTION("classic pair realizes all four tuples") {
        auto tuples = reachable_value_tuples({even, has_a});
        REQUIRE(tuples.size() == 4);
        CHECK(tuples == brute_force_tuples({even, has_a}, 4));
    }

    SECTION("duplicated coordinate stays diagonal") {
        auto tuples = reachable_value_tuples({even, even});
        CHECK(tuples == std::vector<TruncatedPoint>{{"even", "even"}, {"odd", "odd"}});
    }

    SECTION("single automaton gives its reachable value image") {
        auto tuples = reachable_value_tuples({has_a});
        CHECK(tuples == std::vector<TruncatedPoint>{{"no"}, {"yes"}});
    }

    SECTION("witnesses are shortest") {
        auto rows = reachable_value_tuples_with_witnesses({even, has_a});
        for (const auto& [p, w] : rows) {
            TruncatedPoint check{run_dfa(even, w), run_dfa(has_a, w)};
            CHECK(check == p);
        }
        auto find = [&](const TruncatedPoint& p) {
            for (const auto& [q, w] : rows)
                if (q == p) return w;
            FAIL("tuple not found");
            return std::string();
        };
        CHECK(find({"even", "no"}) == "");
        CHECK(find({"odd", "yes"}) == "a");
        CHECK(find({"odd", "no"}) == "b");
        CHECK(find({"even", "yes"}).size() == 2);
    }

    SECTION("matches brute force at the pumping bound on random instances") {
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 15; ++trial) {
            Alphabet alphabet(trial % 3 == 0 ? "a" : "ab");
            std::uniform_int_distribution<std::size_t> count_dist(1, 2);
            std::vector<Dfa> dfas;
            std::size_t product_states = 1;
            for (std::size_t i = count_dist(rng); i-- > 0;) {
                dfas.push_back(random_dfa(rng, alphabet, 3));
                product_states *= dfas.back().state_count();
            }
            CHECK(reachable_value_tuples(dfas) == brute_force_tuples(dfas, product_states));
        }
    }
}

TEST_CASE("exact realization counting") {
    Alphabet ab("ab");
    Dfa even = parity_length_dfa(ab);
    Dfa has_a = contains_symbol_dfa(ab, 'a');
    Dfa single = singleton_dfa(ab, "ab");

    SECTION("never realized") {
        CHECK(count_words_with_tuple({even, even}, {"even", "odd"}) == Multiplicity::none);
    }

    SECTION("uniquely realized thanks to a separating coordinate") {
        CHECK(count_words_with_tuple({single}, {"accept"}) == Multiplicity::one);
        CHECK(count_words_with_tuple({even, single}, {"even", "accept"}) == Multiplicity::one);
    }

    SECTION("cylinders with many realizations") {
        CHECK(count_words_with_tuple({even}, {"even"}) == Multiplicity::many);
        CHECK(count_words_with_tuple({even, has_a}, {"odd", "yes"}) == Multiplicity::many);
    }

    SECTION("impossible combination with a singleton") {
        // "ab" has even length, so (odd, accept) is never realized.
        CHECK(count_words_with_tuple({even, single}, {"odd", "accept"}) == Multiplicity::none);
    }
}
