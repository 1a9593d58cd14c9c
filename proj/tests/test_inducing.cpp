#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "renyi_ldp/errors.hpp"
#include "renyi_ldp/inducing.hpp"

using namespace rldp;

namespace {

double to_d(const Rational& r) { return r.convert_to<double>(); }

}  // namespace

TEST_CASE("letter matrices") {
    CHECK(letter_matrix({2, 1}) == IntMatrix2{1, 1, 1, 2});
    CHECK(letter_matrix({2, 2}) == IntMatrix2{2, 1, 3, 2});
    for (Digit p = 2; p <= 30; ++p) {
        CHECK(letter_matrix({p, 1}) == branch_matrix(p));
        for (std::uint32_t m = 1; m <= 30; ++m) {
            IntMatrix2 prod = branch_matrix(p);
            for (std::uint32_t k = 1; k < m; ++k) prod = prod * branch_matrix(1);
            CHECK(letter_matrix({p, m}) == prod);
            CHECK(letter_matrix({p, m}).det() == 1);
        }
    }
    CHECK_THROWS_AS(letter_matrix({1, 1}), DomainError);
    CHECK_THROWS_AS(letter_matrix({2, 0}), DomainError);
}

TEST_CASE("letter intervals") {
    Interval J = letter_interval({2, 1});
    CHECK(J.lo == Rational(3, 5));
    CHECK(J.hi == Rational(2, 3));
    CHECK(J.length() == Rational(1, 15));
    J = letter_interval({2, 2});
    CHECK(J.lo == Rational(4, 7));
    CHECK(J.hi == Rational(3, 5));
    J = letter_interval({3, 1});
    CHECK(J.lo == Rational(5, 7));
    CHECK(J.hi == Rational(3, 4));
    J = letter_interval({2, 3});
    CHECK(partition_interval(2).contains(J));
    CHECK(J.length() >= Rational(1, 12 * 9));
    CHECK(J.length() <= Rational(1, 12 * 4));
    for (Digit p = 2; p <= 40; ++p)
        for (std::uint32_t m = 1; m <= 40; ++m) {
            const Interval I = letter_interval({p, m});
            const Rational len = I.length();
            const Rational mm(m * (m + 1));
            CHECK(partition_interval(p).contains(I));
            CHECK(len >= 1 / (mm * (p + 1) * (p + 1)));
            CHECK(len <= 1 / (mm * p * p));
            // p-normalised form of the interval-constant statement.
            const Rational norm = len * mm * p * p;
            CHECK(norm >= Rational(p * p, (p + 1) * (p + 1)));
            CHECK(norm <= 1);
        }
}

TEST_CASE("return time equals m on letter intervals") {
    std::mt19937_64 rng(17);
    for (Digit p = 2; p <= 30; ++p)
        for (std::uint32_t m = 1; m <= 30; ++m) {
            const Interval I = letter_interval({p, m});
            for (int k = 0; k < 5; ++k) {
                // Exact rational sample inside J(a).
                const Rational t(1 + rng() % 999, 1000);
                Rational x = I.lo + t * I.length();
                CHECK(digit_of(x).p == p);
                for (std::uint32_t j = 1; j < m; ++j) {
                    x = apply_T(x);
                    CHECK(digit_of(x).p == 1);
                }
                x = apply_T(x);
                CHECK(digit_of(x).p >= 2);
            }
        }
}

TEST_CASE("induced potential bounds") {
    const InducedBounds b = induced_potential_bounds(1.0, 0.0, InducedLetter{2, 1});
    // exp Phi = |T'|^-1 = (1 - x)^2 over [3/5, 2/3): sup at 3/5, inf at 2/3.
    CHECK(static_cast<double>(b.sup) == doctest::Approx(4.0 / 25));
    CHECK(static_cast<double>(b.inf) == doctest::Approx(1.0 / 9));
    double prev = INFINITY;
    for (double g : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const double s = static_cast<double>(induced_potential_bounds(1.3, g, InducedLetter{3, 4}).sup);
        CHECK(s < prev);
        prev = s;
    }
    // sup exp Phi is comparable to |J(a)| within e^2 at beta = 1.
    for (Digit p = 2; p <= 25; p += 3)
        for (std::uint32_t m = 1; m <= 25; m += 4) {
            const double s = static_cast<double>(induced_potential_bounds(1.0, 0.0, InducedLetter{p, m}).sup);
            const double len = to_d(letter_interval({p, m}).length());
            CHECK(s / len <= std::exp(2.0));
            CHECK(len / s <= std::exp(2.0));
        }
}

TEST_CASE("induced potential bounds against direct evaluation of the induced map") {
    // Oracle: Phi(x) = -beta log|(T^m)'(x)| - gamma m, evaluated by iterating T.
    const double beta = 0.8, gamma = 0.3;
    for (Digit p = 2; p <= 8; ++p)
        for (std::uint32_t m = 1; m <= 6; ++m) {
            const InducedBounds b = induced_potential_bounds(beta, gamma, InducedLetter{p, m});
            const Interval I = letter_interval({p, m});
            for (int k = 1; k < 20; ++k) {
                long double x = to_d(I.lo) + (to_d(I.hi) - to_d(I.lo)) * k / 20.0L;
                long double logd = 0;
                for (std::uint32_t j = 0; j < m; ++j) {
                    logd += std::log(oracle::renyi_derivative(x));
                    x = oracle::renyi(x);
                }
                const long double v = std::exp(-beta * logd - gamma * m);
                CHECK(v <= b.sup * (1 + 1e-12L));
                CHECK(v >= b.inf * (1 - 1e-12L));
            }
        }
}

TEST_CASE("variation of the induced potential decays geometrically") {
    // Oscillation of Phi over an n-letter cylinder is at most C 4^-(n-2).
    std::mt19937_64 rng(23);
    for (unsigned n = 2; n <= 6; ++n) {
        double worst = 0;
        for (int k = 0; k < 200; ++k) {
            InducedWord w;
            for (unsigned j = 0; j < n; ++j)
                w.letters.push_back({static_cast<Digit>(2 + rng() % 6), static_cast<std::uint32_t>(1 + rng() % 6)});
            InducedWord first{{w.letters[0]}};
            // Oscillation of Phi(first letter) over the n-cylinder.
            const Interval I = induced_word_interval(w);
            const IntMatrix2 H = letter_matrix(w.letters[0]);
            const Interval tail_img{moebius_apply(IntMatrix2{H.d, -H.b, -H.c, H.a}, I.lo),
                                    moebius_apply(IntMatrix2{H.d, -H.b, -H.c, H.a}, I.hi)};
            const double c = H.c.convert_to<double>(), d = H.d.convert_to<double>();
            const double osc = 2.0 * std::log((c * to_d(tail_img.hi) + d) / (c * to_d(tail_img.lo) + d));
            worst = std::max(worst, osc * std::pow(4.0, n - 2));
        }
        CHECK(worst <= 2.0);
    }
}

TEST_CASE("induced words") {
    const InducedWord w{{{2, 1}, {3, 2}, {2, 3}}};
    CHECK(w.total_length() == 6);
    CHECK(w.expand() == Word{2, 3, 1, 2, 1, 1});
    CHECK(induced_word_matrix(w) == word_matrix(w.expand()));
    const Interval I = induced_word_interval(w);
    CHECK(letter_interval({2, 1}).contains(I));
    // The spread of a reference measure to [[a]] is the mass of its interval.
    const double mass = ref_measure_mass(RefMeasure::lebesgue_on_half, I);
    CHECK(mass == doctest::Approx(2 * to_d(I.length())));
}

TEST_CASE("disjointness of equal-length induced words") {
    for (unsigned L = 1; L <= 6; ++L) {
        const DisjointnessReport r = disjointness_check(L, 6, 6);
        CHECK(r.words > 0);
        CHECK(r.overlaps == 0);
    }
}

TEST_CASE("induced pressure brackets") {
    const InducedTruncation t{200, 200};
    const PressureBracket b1 = induced_pressure_bracket(1.0, 0.0, 1, t);
    CHECK(b1.lo <= 0);
    CHECK(b1.hi >= 0);
    const PressureBracket b2 = induced_pressure_bracket(1.0, 0.0, 2, t);
    CHECK(b2.lo <= 0);
    CHECK(b2.hi >= 0);
    CHECK(b2.width() <= 0.2);
    CHECK(induced_pressure_bracket(1.0, 0.5, 2, t).hi < 0);
    const PressureBracket neg = induced_pressure_bracket(1.0, -0.1, 1, t);
    CHECK(neg.divergent);
    CHECK(std::isinf(neg.lo));
    const PressureBracket low_beta = induced_pressure_bracket(0.5, 0.3, 1, t);
    CHECK(low_beta.divergent);
}

TEST_CASE("induced pressure decreases with slope at most -1") {
    InducedPressureSolver solver(0.8, {100, 100});
    double prev_hi = INFINITY, prev_g = 0;
    for (double g : {0.2, 0.4, 0.6, 0.8, 1.2}) {
        const PressureBracket b = solver.bracket(g, 1);
        CHECK(b.lo <= b.hi);
        if (std::isfinite(prev_hi)) CHECK(b.hi <= prev_hi - (g - prev_g) + 1e-9);
        prev_hi = b.hi;
        prev_g = g;
    }
}

TEST_CASE("gamma0") {
    Gamma0Options opt;
    const Gamma0Result r1 = find_gamma0(1.0, {200, 200}, 0.01, opt);
    CHECK(r1.lo <= r1.gamma0);
    CHECK(r1.gamma0 <= r1.hi);
    CHECK(r1.gamma0 >= -0.02);
    CHECK(r1.gamma0 <= 0.02);
    const Gamma0Result r6 = find_gamma0(0.6, {200, 200}, 0.01, opt);
    CHECK(r6.gamma0 > 0);
    opt.scan_lo = 1.5;
    opt.scan_hi = 2.0;
    CHECK_THROWS_AS(find_gamma0(1.0, {50, 50}, 0.01, opt), SearchError);
}

TEST_CASE("local Gibbs ratios") {
    const GibbsRatio r = gibbs_ratio(RefMeasure::lebesgue_on_half, 1.0, 0.0, InducedWord{{{2, 1}}});
    CHECK(r.lo >= 0.83);
    CHECK(r.hi <= 1.20);
    CHECK(r.lo <= r.mid);
    CHECK(r.mid <= r.hi);
    // Oracle: mass 2/15 times |T'| = (1 - x)^-2 at the interval endpoints.
    CHECK(r.lo == doctest::Approx((2.0 / 15) * static_cast<double>(oracle::renyi_derivative(0.6L))));
    CHECK(r.hi == doctest::Approx((2.0 / 15) * static_cast<double>(oracle::renyi_derivative(2.0L / 3))));
    const GibbsStats empty = local_gibbs_check(RefMeasure::lebesgue_on_half, 1.0, 0.0, {});
    CHECK(empty.count == 0);
    const GibbsStats scan = local_gibbs_scan(RefMeasure::log_density_on_half, 1.0, 0.0, 1, 20, 20);
    CHECK(scan.count == 19 * 20);
    CHECK(std::isfinite(scan.C));
    CHECK(scan.C >= 1);
    CHECK(scan.min_ratio <= scan.median_ratio);
    CHECK(scan.median_ratio <= scan.max_ratio);
}

TEST_CASE("induced Gibbs approximation") {
    const InducedGibbsApprox a1 = induced_gibbs_bernoulli(1.0, 0.0, {100, 100});
    CHECK(a1.return_divergent);
    CHECK_THROWS_AS(kac_spread(a1, 100), DomainError);

    const InducedGibbsApprox a = induced_gibbs_bernoulli(0.8, 0.4, {100, 100});
    CHECK_FALSE(a.return_divergent);
    double total = 0;
    for (double q : a.q) {
        CHECK(q > 0);
        total += q;
    }
    CHECK(total + a.defect == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::isfinite(a.mean_return));
    const InducedGibbsApprox b = induced_gibbs_bernoulli(0.8, 0.4, {200, 200});
    CHECK(b.defect < a.defect);
    CHECK_THROWS_AS(induced_gibbs_bernoulli(0.8, -0.1, {10, 10}), DomainError);
}

TEST_CASE("Kac spread") {
    const InducedGibbsApprox a = induced_gibbs_bernoulli(0.8, 0.4, {200, 200});
    const Histogram1D h = kac_spread(a, 100);
    double left = 0, right = 0;
    for (std::size_t i = 0; i < h.bins(); ++i) (h.bin_lo(i) < 0.5 ? left : right) += h.masses()[i];
    CHECK(left > 0);
    CHECK(right > 0);
    CHECK(h.total() <= 1 + 1e-12);
    CHECK(h.total() == doctest::Approx(a.mean_return / (a.mean_return + a.mean_return_tail)).epsilon(1e-9));

    // Concentration near 0 grows as beta approaches 1.
    double prev = 0;
    for (double beta : {0.8, 0.9, 0.95}) {
        const Gamma0Result g = find_gamma0(beta, {200, 200}, 0.01);
        const Histogram1D k = kac_spread(induced_gibbs_bernoulli(beta, std::max(g.gamma0, 1e-6), {200, 200}), 100);
        const double near0 = k.masses()[0] + k.masses()[1] + k.masses()[2];
        CHECK(near0 > prev);
        prev = near0;
    }

    // A single letter puts all of its mass on its interval.
    InducedGibbsApprox one;
    one.beta = 1;
    one.letters = {{2, 1}};
    one.q = {1.0};
    one.mean_return = 1.0;
    const Histogram1D p = kac_spread(one, 30);
    double inside = 0;
    for (std::size_t i = 0; i < p.bins(); ++i)
        if (p.bin_lo(i) >= 0.59 && p.bin_hi(i) <= 0.67 + 1e-12) inside += p.masses()[i];
    CHECK(inside == doctest::Approx(1.0));
}
