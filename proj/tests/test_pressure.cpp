#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "renyi_ldp/errors.hpp"
#include "renyi_ldp/pressure.hpp"

using namespace rldp;

TEST_CASE("birkhoff sums") {
    CHECK(static_cast<double>(birkhoff_sum({1.0}, PeriodicWord{Word{1}})) == 0.0);
    CHECK(static_cast<double>(birkhoff_sum({1.0}, PeriodicWord{Word{2}})) ==
          doctest::Approx(-std::log(6.8541019662)).epsilon(1e-9));
    CHECK(static_cast<double>(birkhoff_sum({0.5}, PeriodicWord{Word{2}})) ==
          doctest::Approx(-0.5 * std::log(6.8541019662)).epsilon(1e-9));
}

TEST_CASE("distortion modulus") {
    CHECK(distortion_modulus({0.0}, 3, 4) == 0.0);
    const double d = distortion_modulus({1.0}, 2, 5);
    // Oracle: max over the 25 cylinders of log(sup/inf) of exp(S_2 phi).
    double best = 0;
    for (const auto& w : enumerate_words(2, 5)) {
        const Interval I = cylinder_interval(w);
        const long double lo = static_cast<long double>(I.lo.convert_to<double>());
        const long double hi = static_cast<long double>(I.hi.convert_to<double>());
        const long double at_lo = oracle::renyi_derivative(lo) * oracle::renyi_derivative(oracle::renyi(lo));
        const long double hi_in = hi - 1e-13L;
        const long double at_hi = oracle::renyi_derivative(hi_in) * oracle::renyi_derivative(oracle::renyi(hi_in));
        best = std::max(best, static_cast<double>(std::log(at_hi / at_lo)));
    }
    CHECK(d > 0);
    CHECK(d <= 4 * std::log(2.0) + 1e-12);
    CHECK(d == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("partition sums") {
    const PartitionSum z = partition_sum({1.0}, 1, 3);
    CHECK(static_cast<double>(z.lower) == doctest::Approx(1 + 0.145898 + 0.071797).epsilon(1e-6));
    CHECK(z.upper >= z.lower);
    CHECK(z.tail >= 0);
    CHECK_FALSE(z.divergent);
    // Tail formula with integral comparison.
    const long double S_out = std::pow(3.0L, -1.0L) / 1.0L;
    CHECK(static_cast<double>(z.tail) == doctest::Approx(static_cast<double>(S_out)));

    long double prev_lower = 0, prev_tail = INFINITY;
    for (Digit M : {2u, 4u, 8u, 16u, 64u, 256u}) {
        const PartitionSum s = partition_sum({1.0}, 1, M);
        CHECK(s.lower > prev_lower);
        CHECK(s.tail < prev_tail);
        prev_lower = s.lower;
        prev_tail = s.tail;
    }
}

TEST_CASE("partition sum equals the chain-rule oracle sum") {
    for (unsigned n = 1; n <= 3; ++n) {
        const PartitionSum z = partition_sum({0.9}, n, 6);
        long double acc = 0;
        for (const auto& w : enumerate_words(n, 6)) acc += std::pow(oracle::chain_derivative(w.digits()), -0.9L);
        CHECK(static_cast<double>(z.lower) == doctest::Approx(static_cast<double>(acc)).epsilon(1e-12));
    }
}

TEST_CASE("beta <= 1/2 reports divergence instead of throwing") {
    const PartitionSum a = partition_sum({0.5}, 1, 1000);
    const PartitionSum b = partition_sum({0.5}, 1, 1000000);
    CHECK(a.divergent);
    CHECK(std::isinf(a.tail));
    CHECK(static_cast<double>(b.lower - a.lower) > 0.9 * std::log(1000.0));
    const PressureBracket pb = pressure_bracket({0.4}, 2, 10);
    CHECK(pb.divergent);
    CHECK(std::isinf(pb.hi));
}

TEST_CASE("pressure brackets at beta = 1") {
    const PressureBracket b1 = pressure_bracket({1.0}, 1, 10000);
    CHECK(b1.lo <= 0);
    CHECK(b1.hi >= 0);
    const auto seq = pressure_brackets({1.0}, 3, 60);
    for (std::size_t k = 1; k < seq.size(); ++k) CHECK(seq[k].hi <= seq[k - 1].hi + 1e-12);
    for (const auto& b : seq) {
        CHECK(b.lo <= b.hi);
        CHECK(b.raw_lo <= b.raw_hi);
        CHECK(b.lo >= b.raw_lo - 1e-12);
    }
}

TEST_CASE("pressure brackets at beta = 0.8 nest") {
    const PressureBracket b2 = pressure_bracket({0.8}, 2, 200);
    const PressureBracket b3 = pressure_bracket({0.8}, 3, 200);
    CHECK(b2.width() <= 0.8);
    CHECK(b2.lo <= b3.lo + 1e-12);
    CHECK(b3.hi <= b2.hi + 1e-12);
    CHECK(b3.lo > 0);  // P(beta phi) > 0 below beta = 1
}

TEST_CASE("block Bernoulli measures") {
    const GeometricPotential phi{1.0};
    BlockMeasureStats s = block_bernoulli(phi, {Word{1}}, 0.3);
    CHECK(s.entropy_rate == doctest::Approx(0.0));
    CHECK(s.mean_potential == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(s.F_value == doctest::Approx(-0.3).epsilon(1e-9));

    s = block_bernoulli(phi, {Word{1}, Word{2}}, 0.0);
    CHECK(s.entropy_rate > 0);
    CHECK(s.F_value <= 0);
    double total = 0;
    for (double q : s.probabilities) total += q;
    CHECK(total == doctest::Approx(1.0));
    CHECK(s.mean_potential_lower <= s.mean_potential + 1e-12);
    CHECK(s.mean_potential <= s.mean_potential_upper + 1e-12);

    const GeometricPotential phi8{0.8};
    const PressureBracket br = pressure_bracket(phi8, 3, 200);
    const auto H = enumerate_words(2, 3);
    const BlockMeasureStats t = block_bernoulli(phi8, H, 0.0);
    CHECK(t.F_value <= br.hi + t.distortion / 2);
    CHECK(t.horse_holds);
    CHECK_THROWS_AS(block_bernoulli(phi8, {}, 0.0), DomainError);
}

TEST_CASE("block Bernoulli horse inequality on random word sets") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 20; ++k) {
        const unsigned n = 1 + rng() % 3;
        auto all = enumerate_words(n, 5);
        std::shuffle(all.begin(), all.end(), rng);
        all.resize(1 + rng() % all.size());
        const BlockMeasureStats s = block_bernoulli({1.0}, all, 0.0);
        CHECK(n * (s.entropy_rate + s.mean_potential_lower) >= s.log_sum_sup - s.distortion - 1e-9);
        CHECK(s.horse_holds);
    }
}
