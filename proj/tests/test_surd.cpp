#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "renyi_ldp/errors.hpp"
#include "renyi_ldp/renyi.hpp"
#include "renyi_ldp/surd.hpp"

using namespace rldp;

namespace {

std::vector<std::uint32_t> raw(const Word& w) { return w.digits(); }

}  // namespace

TEST_CASE("matrix products and determinants") {
    const IntMatrix2 M2 = branch_matrix(2), M3 = branch_matrix(3);
    CHECK(M2 * M3 == IntMatrix2{2, 5, 3, 8});
    CHECK((M2 * M3).det() == 1);
    CHECK(IntMatrix2::identity() * M2 == M2);
    for (const auto& w : enumerate_words(4, 5)) CHECK(word_matrix(w).det() == 1);
}

TEST_CASE("squarefree split against trial factorisation") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 2000; ++k) {
        const std::uint64_t n = 1 + rng() % 5000000;
        const SquarefreeSplit sp = squarefree_split(BigInt(n));
        CHECK(sp.certified);
        CHECK(sp.D == BigInt(oracle::squarefree_part(n)));
        CHECK(sp.s * sp.s * sp.D == BigInt(n));
    }
    const SquarefreeSplit big = squarefree_split(BigInt(4) * BigInt(1000003) * BigInt(1000003) * 7);
    CHECK(big.D == 7);
    CHECK(big.s == BigInt(2) * 1000003);
    CHECK(squarefree_split(BigInt(0)).D == 0);
}

TEST_CASE("moebius action") {
    CHECK(moebius_apply(IntMatrix2::identity(), Rational(1, 3)) == Rational(1, 3));
    CHECK(moebius_apply(IntMatrix2{1, 1, 1, 2}, Rational(0)) == Rational(1, 2));
    const QuadraticSurd golden(-1, 1, 2, 5);
    CHECK(moebius_apply(IntMatrix2{1, 1, 1, 2}, golden) == golden);
    CHECK_THROWS_AS(moebius_apply(IntMatrix2{1, 0, 1, -1}, Rational(1)), SingularityError);
}

TEST_CASE("fixed points of small matrices") {
    CHECK(fixed_point_in_unit_interval(IntMatrix2{1, 0, 1, 1}) == QuadraticSurd::from_int(0));
    CHECK(fixed_point_in_unit_interval(IntMatrix2{1, 1, 1, 2}) == QuadraticSurd(-1, 1, 2, 5));
    const QuadraticSurd x23 = fixed_point_in_unit_interval(IntMatrix2{2, 5, 3, 8});
    CHECK(x23 == QuadraticSurd(-3, 2, 3, 6));
    CHECK(static_cast<double>(x23.to_long_double()) == doctest::Approx(0.6329931618).epsilon(1e-10));
    CHECK_THROWS_AS(fixed_point_in_unit_interval(IntMatrix2{1, 1, 0, 1}), DomainError);
}

TEST_CASE("cocycle derivative matches the chain rule") {
    CHECK(static_cast<double>(cocycle_derivative(IntMatrix2{1, 0, 1, 1}, QuadraticSurd::from_int(0))) == 1.0);
    const QuadraticSurd g(-1, 1, 2, 5);
    CHECK(static_cast<double>(cocycle_derivative(IntMatrix2{1, 1, 1, 2}, g)) ==
          doctest::Approx(6.8541019662).epsilon(1e-10));
    const QuadraticSurd x23(-3, 2, 3, 6);
    const double chain = static_cast<double>(oracle::chain_derivative({2, 3}));
    CHECK(static_cast<double>(cocycle_derivative(IntMatrix2{2, 5, 3, 8}, x23)) ==
          doctest::Approx(chain).epsilon(1e-12));
    CHECK(chain == doctest::Approx(49 + 20 * std::sqrt(6.0)).epsilon(1e-12));
}

TEST_CASE("derivative vs chain rule for words up to length 8, digits up to 10") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 3000; ++k) {
        const unsigned n = 1 + rng() % 8;
        std::vector<Digit> d(n);
        for (auto& x : d) x = 1 + rng() % 10;
        const Word w(d);
        if (std::all_of(d.begin(), d.end(), [](Digit x) { return x == 1; })) continue;
        const PeriodicPoint pt = periodic_point(PeriodicWord{w}, 128);
        const long double chain = oracle::chain_derivative(raw(w));
        CHECK(static_cast<double>(pt.derivative / HighFloat(static_cast<double>(chain))) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("surd arithmetic: floor, comparison and rendering") {
    const QuadraticSurd g(-1, 1, 2, 5);  // 0.618...
    CHECK(g.floor() == 0);
    CHECK((g - BigInt(3)).floor() == -3);
    CHECK(QuadraticSurd(1, -1, 2, 5).floor() == -1);  // -0.618
    CHECK(g.compare(Rational(3, 5)) > 0);
    CHECK(g.compare(Rational(2, 3)) < 0);
    CHECK(g.compare(QuadraticSurd(-1, 1, 2, 5)) == 0);
    CHECK(g.str() == "(-1+1*sqrt(5))/2");
    CHECK(g.decimal(30).substr(0, 20) == "0.618033988749894848");
    CHECK(QuadraticSurd(2, 0, 4, 0) == QuadraticSurd::from_rational(Rational(1, 2)));
    CHECK(QuadraticSurd(3, 2, 1, 1) == QuadraticSurd::from_int(5));  // D = 1 folds in
    CHECK(QuadraticSurd(0, 2, 1, 8) == QuadraticSurd(0, 4, 1, 2));    // sqrt 8 = 2 sqrt 2
    CHECK(sign_of(BigInt(-3), BigInt(2), BigInt(2)) < 0);
    CHECK(sign_of(BigInt(-2), BigInt(1), BigInt(5)) > 0);
}

TEST_CASE("quadratic residual vanishes exactly") {
    for (const auto& w : enumerate_words(3, 6)) {
        const IntMatrix2 M = word_matrix(w);
        const QuadraticSurd xi = fixed_point_in_unit_interval(M);
        CHECK(quadratic_residual(M, xi) == QuadraticSurd());
        CHECK(xi.compare(Rational(0)) >= 0);
        CHECK(xi.compare(Rational(1)) < 0);
    }
}
