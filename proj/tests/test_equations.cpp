#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "profinite/equations.hpp"
#include "profinite/space.hpp"
#include "profinite/words.hpp"

using namespace profinite;

namespace {

Framework<std::string> classic_framework() {
    words::Alphabet ab("ab");
    return words::word_framework(ab, {{"even-length", words::parity_length_dfa(ab)},
                                      {"contains-a", words::contains_symbol_dfa(ab, 'a')}});
}

PointSubset bits(std::initializer_list<int> values) {
    PointSubset s;
    for (int v : values) s.push_back(v != 0);
    return s;
}

std::vector<PointSubset> random_family(std::mt19937_64& rng, std::size_t n, std::size_t count) {
    std::uniform_int_distribution<std::uint64_t> mask_dist(0, (std::uint64_t{1} << n) - 1);
    std::vector<PointSubset> family;
    for (std::size_t g = 0; g < count; ++g) {
        std::uint64_t mask = mask_dist(rng);
        PointSubset s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = mask >> i & 1;
        family.push_back(std::move(s));
    }
    return family;
}

}  // namespace

TEST_CASE("equation satisfaction") {
    auto fw = classic_framework();
    auto space = approximation_space(fw, {0, 1});
    Language even = make_language(fw, 0, {"even"});

    SECTION("language-level checks follow the coordinate") {
        CHECK(satisfies_equation(space, even, {{"even", "no"}, {"even", "yes"}}));
        CHECK_FALSE(satisfies_equation(space, even, {{"even", "no"}, {"odd", "no"}}));
        CHECK(satisfies_equation(space, even, {{"odd", "no"}, {"odd", "yes"}}));
    }

    SECTION("reflexive equations always hold") {
        for (const auto& p : space.points) CHECK(satisfies_equation(space, even, {p, p}));
    }

    SECTION("subset-level checks are literal") {
        std::vector<TruncatedPoint> empty;
        std::vector<TruncatedPoint> all = space.points;
        std::vector<TruncatedPoint> just_u = {{"even", "no"}};
        Equation e{{"even", "no"}, {"odd", "no"}};
        CHECK(subset_satisfies(empty, e));
        CHECK(subset_satisfies(all, e));
        CHECK_FALSE(subset_satisfies(just_u, e));
    }
}

TEST_CASE("lattice and Boolean closures of language families") {
    auto fw = classic_framework();
    auto space = approximation_space(fw, {0, 1});
    Language even = make_language(fw, 0, {"even"});
    Language has_a = make_language(fw, 1, {"yes"});

    SECTION("empty family closes to the two constants") {
        auto closed = lattice_closure(fw, space, LanguageFamily{});
        REQUIRE(closed.members.size() == 2);
    }

    SECTION("single generator gives a three-element chain") {
        auto closed = lattice_closure(fw, space, LanguageFamily{{even}});
        CHECK(closed.members.size() == 3);
    }

    SECTION("the classic pair closes to six distinct images") {
        auto closed = lattice_closure(fw, space, LanguageFamily{{even, has_a}});
        REQUIRE(closed.members.size() == 6);
        std::vector<PointSubset> images;
        for (const auto& l : closed.members) images.push_back(image_of(fw, space, l));
        std::sort(images.begin(), images.end());
        // Points in order: (even,no) (even,yes) (odd,no) (odd,yes).
        std::vector<PointSubset> expected = {
            bits({0, 0, 0, 0}),  // empty
            bits({0, 1, 0, 0}),  // even and contains-a
            bits({0, 1, 0, 1}),  // contains-a
            bits({1, 1, 0, 0}),  // even
            bits({1, 1, 0, 1}),  // union
            bits({1, 1, 1, 1}),  // full
        };
        CHECK(images == expected);
    }

    SECTION("Boolean closure of one generator has four members") {
        auto closed = boolean_closure(fw, space, LanguageFamily{{even}});
        CHECK(closed.members.size() == 4);
    }

    SECTION("Boolean closure of the pair hits all sixteen subsets") {
        auto closed = boolean_closure(fw, space, LanguageFamily{{even, has_a}});
        CHECK(closed.members.size() == 16);
    }

    SECTION("Boolean closure contains the lattice closure") {
        auto lattice = lattice_closure(fw, space, LanguageFamily{{even, has_a}});
        auto algebra = boolean_closure(fw, space, LanguageFamily{{even, has_a}});
        std::vector<PointSubset> lattice_images, algebra_images;
        for (const auto& l : lattice.members) lattice_images.push_back(image_of(fw, space, l));
        for (const auto& l : algebra.members) algebra_images.push_back(image_of(fw, space, l));
        std::sort(lattice_images.begin(), lattice_images.end());
        std::sort(algebra_images.begin(), algebra_images.end());
        CHECK(std::includes(algebra_images.begin(), algebra_images.end(), lattice_images.begin(),
                            lattice_images.end()));
    }
}

TEST_CASE("deriving common equations") {
    auto fw = classic_framework();
    auto space = approximation_space(fw, {0, 1});
    Language even = make_language(fw, 0, {"even"});
    Language has_a = make_language(fw, 1, {"yes"});

    SECTION("constants only allow every pair") {
        LanguageFamily constants{{empty_language(fw, 0), full_language(fw, 0)}};
        auto es = derive_equations(fw, space, constants);
        CHECK(es.pairs.size() == 16);
    }

    SECTION("frozen oracle: the classic closure keeps nine equations") {
        auto closed = lattice_closure(fw, space, LanguageFamily{{even, has_a}});
        auto es = derive_equations(fw, space, closed);
        // Hand-checked against every member: besides the four reflexive
        // pairs, exactly these five survive. In particular the generators
        // do NOT separate every ordered pair: every member containing
        // (even,no) also contains (even,yes).
        std::vector<Equation> expected = {
            {{"even", "no"}, {"even", "no"}},
            {{"even", "no"}, {"even", "yes"}},
            {{"even", "yes"}, {"even", "yes"}},
            {{"odd", "no"}, {"even", "no"}},
            {{"odd", "no"}, {"even", "yes"}},
            {{"odd", "no"}, {"odd", "no"}},
            {{"odd", "no"}, {"odd", "yes"}},
            {{"odd", "yes"}, {"even", "yes"}},
            {{"odd", "yes"}, {"odd", "yes"}},
        };
        CHECK(es.pairs == expected);
    }

    SECTION("deriving from generators or from their closure is the same") {
        auto closed = lattice_closure(fw, space, LanguageFamily{{even, has_a}});
        auto from_closure = derive_equations(fw, space, closed);
        LanguageFamily with_constants{{even, has_a, empty_language(fw, 0), full_language(fw, 0)}};
        auto from_generators = derive_equations(fw, space, with_constants);
        CHECK(from_closure.pairs == from_generators.pairs);
    }

    SECTION("two-point chain keeps three equations") {
        auto sub = approximation_space(fw, {0});
        REQUIRE(sub.points.size() == 2);  // (even), (odd)
        LanguageFamily chain{{make_language(fw, 0, {"even"})}};
        auto closed = lattice_closure(fw, sub, chain);
        auto es = derive_equations(fw, sub, closed);
        std::vector<Equation> expected = {
            {{"even"}, {"even"}},
            {{"odd"}, {"even"}},
            {{"odd"}, {"odd"}},
        };
        CHECK(es.pairs == expected);
    }

    SECTION("reflexive pairs always derived") {
        std::mt19937_64 rng(21);
        for (int round = 0; round < 20; ++round) {
            auto members = random_family(rng, 4, 3);
            auto pairs = derive_equation_pairs(members, 4);
            for (std::size_t u = 0; u < 4; ++u)
                CHECK(std::binary_search(pairs.begin(), pairs.end(), IndexPair{u, u}));
        }
    }
}

TEST_CASE("families defined by equation sets") {
    auto fw = classic_framework();
    auto space = approximation_space(fw, {0, 1});

    SECTION("no equations, no constraints") {
        CHECK(defined_family(space, EquationSet{}).size() == 16);
    }

    SECTION("all pairs force the two extremes") {
        EquationSet all;
        for (const auto& u : space.points)
            for (const auto& v : space.points) all.pairs.push_back({u, v});
        auto family = defined_family(space, all);
        REQUIRE(family.size() == 2);
        CHECK(family.front().empty());
        CHECK(family.back().size() == 4);
    }

    SECTION("reflexive-only constrains nothing") {
        EquationSet reflexive;
        for (const auto& u : space.points) reflexive.pairs.push_back({u, u});
        CHECK(defined_family(space, reflexive).size() == 16);
    }

    SECTION("defined families are always subset lattices") {
        std::mt19937_64 rng(23);
        for (int round = 0; round < 25; ++round) {
            std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
            std::vector<IndexPair> pairs;
            std::uniform_int_distribution<std::size_t> point(0, n - 1);
            for (int e = std::uniform_int_distribution<int>(0, 6)(rng); e-- > 0;)
                pairs.emplace_back(point(rng), point(rng));
            CHECK(is_lattice_of_subsets(defined_subsets(pairs, n), n));
        }
    }

    SECTION("more equations define fewer subsets") {
        std::mt19937_64 rng(29);
        for (int round = 0; round < 25; ++round) {
            std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
            std::uniform_int_distribution<std::size_t> point(0, n - 1);
            std::vector<IndexPair> small, large;
            for (int e = std::uniform_int_distribution<int>(0, 5)(rng); e-- > 0;)
                small.emplace_back(point(rng), point(rng));
            large = small;
            for (int e = std::uniform_int_distribution<int>(0, 5)(rng); e-- > 0;)
                large.emplace_back(point(rng), point(rng));
            auto defined_small = defined_subsets(small, n);
            auto defined_large = defined_subsets(large, n);
            CHECK(std::includes(defined_small.begin(), defined_small.end(), defined_large.begin(),
                                defined_large.end()));
        }
    }

    SECTION("guard rejects oversized spaces") {
        CHECK_THROWS_AS(defined_subsets({}, 21), std::domain_error);
    }
}

TEST_CASE("closure versus defined family") {
    auto fw = classic_framework();
    auto space = approximation_space(fw, {0, 1});
    Language even = make_language(fw, 0, {"even"});
    Language has_a = make_language(fw, 1, {"yes"});

    SECTION("empty family") {
        auto report = verify_lattice_theorem(fw, space, LanguageFamily{});
        CHECK(report.pass);
        CHECK(report.closure_size == 2);
        CHECK(report.defined_size == 2);
        CHECK(report.equation_count == 16);
    }

    SECTION("two-point chain") {
        auto sub = approximation_space(fw, {0});
        auto report = verify_lattice_theorem(fw, sub, LanguageFamily{{even}});
        CHECK(report.pass);
        CHECK(report.closure_size == 3);
        CHECK(report.equation_count == 3);
    }

    SECTION("the four-point worked example settles on six members") {
        auto report = verify_lattice_theorem(fw, space, LanguageFamily{{even, has_a}});
        CHECK(report.pass);
        CHECK(report.exact);
        CHECK(report.closure_size == 6);
        CHECK(report.defined_size == 6);
        CHECK(report.equation_count == 9);
    }

    SECTION("closure soundness: every member satisfies every derived equation") {
        auto closed = lattice_closure(fw, space, LanguageFamily{{even, has_a}});
        auto es = derive_equations(fw, space, closed);
        for (const auto& l : closed.members) {
            PointSubset img = image_of(fw, space, l);
            std::vector<TruncatedPoint> as_points;
            for (std::size_t i = 0; i < img.size(); ++i)
                if (img[i]) as_points.push_back(space.points[i]);
            for (const auto& e : es.pairs) CHECK(subset_satisfies(as_points, e));
        }
    }

    SECTION("randomized trials on synthetic ground sets") {
        std::mt19937_64 rng(31);
        for (int round = 0; round < 100; ++round) {
            std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
            auto gens = random_family(rng, n, std::uniform_int_distribution<std::size_t>(0, 4)(rng));
            auto closure = lattice_closure_subsets(gens, n);
            REQUIRE(is_lattice_of_subsets(closure, n));
            CHECK(defined_subsets(derive_equation_pairs(closure, n), n) == closure);
        }
    }

    SECTION("defined family of raw generators is exactly their closure") {
        std::mt19937_64 rng(37);
        for (int round = 0; round < 100; ++round) {
            std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
            auto gens = random_family(rng, n, std::uniform_int_distribution<std::size_t>(1, 4)(rng));
            auto defined = defined_subsets(derive_equation_pairs(gens, n), n);
            CHECK(defined == lattice_closure_subsets(gens, n));
        }
    }
}

TEST_CASE("Boolean corollary") {
    auto fw = classic_framework();
    Language even = make_language(fw, 0, {"even"});

    SECTION("empty family keeps the extremes") {
        auto space = approximation_space(fw, {0, 1});
        auto report = verify_boolean_corollary(fw, space, LanguageFamily{});
        CHECK(report.pass);
        CHECK(report.closure_size == 2);
    }

    SECTION("two-point space: Boolean closure of one generator is everything") {
        auto sub = approximation_space(fw, {0});
        auto report = verify_boolean_corollary(fw, sub, LanguageFamily{{even}});
        CHECK(report.pass);
        CHECK(report.closure_size == 4);
        CHECK(report.defined_size == 4);
    }

    SECTION("symmetric equations define complement-closed families") {
        std::mt19937_64 rng(41);
        for (int round = 0; round < 50; ++round) {
            std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
            auto gens = random_family(rng, n, std::uniform_int_distribution<std::size_t>(0, 3)(rng));
            auto pairs = derive_symmetric_pairs(boolean_closure_subsets(gens, n), n);
            auto defined = defined_subsets(pairs, n);
            for (const auto& a : defined)
                CHECK(std::find(defined.begin(), defined.end(), subset_complement(a)) !=
                      defined.end());
        }
    }

    SECTION("randomized Boolean trials") {
        std::mt19937_64 rng(43);
        for (int round = 0; round < 100; ++round) {
            std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
            auto gens = random_family(rng, n, std::uniform_int_distribution<std::size_t>(0, 4)(rng));
            auto algebra = boolean_closure_subsets(gens, n);
            CHECK(defined_subsets(derive_symmetric_pairs(algebra, n), n) == algebra);
        }
    }
}

TEST_CASE("lattice membership of candidates") {
    auto fw = classic_framework();
    auto space = approximation_space(fw, {0, 1});
    Language even = make_language(fw, 0, {"even"});
    Language has_a = make_language(fw, 1, {"yes"});
    LanguageFamily fam{{even, has_a}};

    SECTION("generators belong to their own lattice") {
        CHECK(check_definable(fw, space, fam, even).in_lattice);
        CHECK(check_definable(fw, space, fam, has_a).in_lattice);
    }

    SECTION("the full language always belongs") {
        CHECK(check_definable(fw, space, fam, full_language(fw, 0)).in_lattice);
    }

    SECTION("closure members belong") {
        auto closed = lattice_closure(fw, space, fam);
        for (const auto& l : closed.members) CHECK(check_definable(fw, space, fam, l).in_lattice);
    }

    SECTION("complement of a lone generator is cut out by a certificate") {
        LanguageFamily lone{{even}};
        Language odd = complement_language(fw, even);
        auto verdict = check_definable(fw, space, lone, odd);
        REQUIRE_FALSE(verdict.in_lattice);
        REQUIRE(verdict.certificate.has_value());
        // The certificate is a genuine separator: satisfied by every
        // closure member, violated by the candidate.
        auto closed = lattice_closure(fw, space, lone);
        for (const auto& l : closed.members)
            CHECK(satisfies_equation(space, l, *verdict.certificate));
        CHECK_FALSE(satisfies_equation(space, odd, *verdict.certificate));
    }

    SECTION("verdicts carry the space's exactness") {
        CHECK(check_definable(fw, space, fam, even).exact);
        auto scanned = enumerated_space(fw, {0, 1}, 32);
        CHECK_FALSE(check_definable(fw, scanned, fam, even).exact);
    }
}
