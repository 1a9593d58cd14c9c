#include <doctest.h>

#include <cmath>
#include <set>

#include "renyi_ldp/errors.hpp"
#include "renyi_ldp/shift_core.hpp"

using namespace rldp;

TEST_CASE("enumerate_words small cases") {
    const auto w13 = enumerate_words(1, 3);
    REQUIRE(w13.size() == 3);
    CHECK(w13[0] == Word{1});
    CHECK(w13[2] == Word{3});

    const auto w22 = enumerate_words(2, 2);
    REQUIRE(w22.size() == 4);
    CHECK(w22[0] == Word{1, 1});
    CHECK(w22[1] == Word{1, 2});
    CHECK(w22[2] == Word{2, 1});
    CHECK(w22[3] == Word{2, 2});

    const auto w35 = enumerate_words(3, 5);
    REQUIRE(w35.size() == 125);
    CHECK(w35.front() == Word{1, 1, 1});
    CHECK(w35.back() == Word{5, 5, 5});
}

TEST_CASE("enumeration matches a nested-loop count and is sorted and duplicate-free") {
    for (unsigned n = 1; n <= 4; ++n)
        for (Digit M = 1; M <= 5; ++M) {
            const auto ws = enumerate_words(n, M);
            CHECK(ws.size() == static_cast<std::size_t>(std::pow(M, n)));
            CHECK(std::is_sorted(ws.begin(), ws.end()));
            CHECK(std::set<Word>(ws.begin(), ws.end()).size() == ws.size());
            for (const auto& w : ws)
                for (Digit d : w.digits()) CHECK((d >= 1 && d <= M));
        }
}

TEST_CASE("enumeration budget") {
    CHECK_THROWS_AS(enumerate_words(10, 10, 1000), BudgetError);
    CHECK_THROWS_AS(checked_word_count(64, 1000, kDefaultBudget), BudgetError);
    CHECK(checked_word_count(3, 10, 1000) == 1000);
    WordEnumerator en(2, 3);
    Word w;
    unsigned k = 0;
    while (en.next(w)) ++k;
    CHECK(k == 9);
}

TEST_CASE("cyclic rotations") {
    const auto r12 = cyclic_rotations(Word{1, 2});
    CHECK(r12 == std::vector<Word>{Word{1, 2}, Word{2, 1}});
    CHECK(cyclic_rotations(Word{1, 1}) == std::vector<Word>{Word{1, 1}});
    const auto r121 = cyclic_rotations(Word{1, 2, 1});
    CHECK(r121 == std::vector<Word>{Word{1, 1, 2}, Word{1, 2, 1}, Word{2, 1, 1}});
    CHECK(canonical_rotation(Word{3, 1, 2}) == Word{1, 2, 3});
}

TEST_CASE("cyclic rotation sets are closed and their size divides the length") {
    for (const auto& w : enumerate_words(4, 3)) {
        const auto rs = cyclic_rotations(w);
        CHECK(w.size() % rs.size() == 0);
        for (const auto& r : rs) CHECK(cyclic_rotations(r) == rs);
    }
}

TEST_CASE("word distance") {
    auto d = word_distance(Word{1, 2, 3}, Word{1, 2, 4});
    CHECK(d.value == doctest::Approx(std::exp(-3.0)));
    CHECK_FALSE(d.upper_bound_only);
    CHECK(word_distance(Word{5}, Word{7}).value == doctest::Approx(std::exp(-1.0)));
    d = word_distance(Word{2, 2}, Word{2, 2});
    CHECK(d.upper_bound_only);
    CHECK(d.value == doctest::Approx(std::exp(-3.0)));
}

TEST_CASE("word distance is symmetric and ultrametric on equal-length prefixes") {
    const auto ws = enumerate_words(3, 3);
    for (const auto& x : ws)
        for (const auto& y : ws) {
            CHECK(word_distance(x, y).value == word_distance(y, x).value);
            for (const auto& z : ws)
                CHECK(word_distance(x, z).value <=
                      std::max(word_distance(x, y).value, word_distance(y, z).value) * (1 + 1e-15));
        }
}

TEST_CASE("word parsing and display") {
    const Word w = parse_word("2,1,1,3");
    CHECK(w == Word{2, 1, 1, 3});
    CHECK(w.str() == "2,1,1,3");
    CHECK(w.cf_digit(0) == 3);
    CHECK(w.rotated(1) == Word{1, 1, 3, 2});
    CHECK_THROWS_AS(parse_word(""), DomainError);
    CHECK_THROWS_AS(parse_word("1,0"), DomainError);
    CHECK_THROWS_AS(parse_word("1,x"), DomainError);
    CHECK_THROWS_AS(Word(std::vector<Digit>{}), DomainError);
}
