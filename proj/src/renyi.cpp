#include "renyi_ldp/renyi.hpp"

#include <cmath>

#include "renyi_ldp/errors.hpp"

namespace rldp {

namespace mp = boost::multiprecision;

namespace {

void check_unit(bool ok) {
    if (!ok) throw DomainError("point outside [0,1)");
}

Digit to_digit(const BigInt& k) {
    if (k < 1 || k > BigInt(std::numeric_limits<Digit>::max()))
        throw DomainError("digit out of representable range");
    return k.convert_to<Digit>();
}

}  // namespace

const char* to_string(RefMeasure m) {
    return m == RefMeasure::lebesgue_on_half ? "lebesgue_on_half" : "log_density_on_half";
}

RefMeasure parse_ref_measure(const std::string& name) {
    if (name == "lebesgue_on_half" || name == "lebesgue") return RefMeasure::lebesgue_on_half;
    if (name == "log_density_on_half" || name == "log_density") return RefMeasure::log_density_on_half;
    throw DomainError("unknown reference measure '" + name + "'");
}

long double apply_T(long double xi) {
    check_unit(xi >= 0 && xi < 1);
    const long double u = 1.0L / (1.0L - xi);
    const long double t = u - std::floor(u);
    return t;
}

HighFloat apply_T(const HighFloat& xi) {
    check_unit(xi >= 0 && xi < 1);
    const HighFloat u = 1 / (1 - xi);
    return u - mp::floor(u);
}

Rational apply_T(const Rational& xi) {
    check_unit(xi >= 0 && xi < 1);
    const Rational u = 1 / (1 - xi);
    const BigInt k = mp::numerator(u) / mp::denominator(u);  // u >= 1
    return u - Rational(k);
}

QuadraticSurd apply_T(const QuadraticSurd& xi) {
    check_unit(xi.compare(Rational(0)) >= 0 && xi.compare(Rational(1)) < 0);
    const IntMatrix2 inv{0, 1, -1, 1};  // eta -> 1/(1 - eta)
    const QuadraticSurd u = moebius_apply(inv, xi);
    return u - u.floor();
}

DigitInfo digit_of(long double xi) {
    check_unit(xi >= 0 && xi < 1);
    const long double u = std::floor(1.0L / (1.0L - xi));
    if (u >= static_cast<long double>(std::numeric_limits<Digit>::max()))
        throw DomainError("digit out of representable range");
    const Digit p = static_cast<Digit>(u);
    return {p, std::uint64_t{p} + 1};
}

DigitInfo digit_of(const Rational& xi) {
    check_unit(xi >= 0 && xi < 1);
    const Rational u = 1 / (1 - xi);
    const Digit p = to_digit(mp::numerator(u) / mp::denominator(u));
    return {p, std::uint64_t{p} + 1};
}

DigitInfo digit_of(const QuadraticSurd& xi) {
    check_unit(xi.compare(Rational(0)) >= 0 && xi.compare(Rational(1)) < 0);
    const Digit p = to_digit(moebius_apply(IntMatrix2{0, 1, -1, 1}, xi).floor());
    return {p, std::uint64_t{p} + 1};
}

IntMatrix2 branch_matrix(Digit p) {
    if (p < 1) throw DomainError("digit must be >= 1");
    return {1, BigInt(p) - 1, 1, BigInt(p)};
}

IntMatrix2 word_matrix(const Word& w) {
    IntMatrix2 M;
    for (Digit p : w.digits()) M = M * branch_matrix(p);
    return M;
}

PeriodicPoint periodic_point(const PeriodicWord& w, unsigned bits) {
    if (w.word.empty()) throw DomainError("periodic word must be non-empty");
    PeriodicPoint out;
    out.matrix = word_matrix(w.word);
    out.xi = fixed_point_in_unit_interval(out.matrix);
    out.derivative = cocycle_derivative(out.matrix, out.xi, bits);
    return out;
}

Interval cylinder_interval(const Word& w) {
    const IntMatrix2 M = word_matrix(w);
    // M(1) - M(0) = det / (d (c + d)) > 0.
    return {Rational(M.b, M.d), Rational(M.a + M.b, M.c + M.d)};
}

Interval partition_interval(Digit p) { return cylinder_interval(Word{p}); }

PotentialBounds potential_bounds(const GeometricPotential& phi, const Word& w) {
    // exp(S_n beta phi)(M eta) = (c eta + d)^(-2 beta) for eta in [0,1).
    const IntMatrix2 M = word_matrix(w);
    const long double two_beta = 2.0L * phi.beta;
    const long double log_d = std::log(M.d.convert_to<long double>());
    const long double log_cd = std::log((M.c + M.d).convert_to<long double>());
    return {std::exp(-two_beta * log_cd), std::exp(-two_beta * log_d)};
}

double ref_measure_mass(RefMeasure m, const Interval& I) {
    if (!(I.lo >= Rational(1, 2) && I.hi <= Rational(1) && I.lo < I.hi))
        throw DomainError("reference measures live on [1/2, 1)");
    if (m == RefMeasure::lebesgue_on_half) return (2 * I.length()).convert_to<double>();
    const long double ratio_minus_one = (I.length() / I.lo).convert_to<long double>();
    return static_cast<double>(std::log1p(ratio_minus_one) / std::log(2.0L));
}

bool Mat64::push(Digit p) {
    const std::int64_t q = p;
    std::int64_t t1, t2, nb, nd;
    // [[a,b],[c,d]] * [[1,q-1],[1,q]]
    std::int64_t na, nc;
    if (__builtin_add_overflow(a, b, &na) || __builtin_add_overflow(c, d, &nc)) return false;
    if (__builtin_mul_overflow(a, q - 1, &t1) || __builtin_mul_overflow(b, q, &t2) ||
        __builtin_add_overflow(t1, t2, &nb))
        return false;
    if (__builtin_mul_overflow(c, q - 1, &t1) || __builtin_mul_overflow(d, q, &t2) ||
        __builtin_add_overflow(t1, t2, &nd))
        return false;
    a = na;
    b = nb;
    c = nc;
    d = nd;
    return true;
}

FastPoint fast_fixed_point(const Mat64& M) {
    const long double a = M.a, b = M.b, c = M.c, d = M.d;
    const __int128 tr = static_cast<__int128>(M.a) + M.d;
    const __int128 disc128 = tr * tr - 4;
    const long double sq = std::sqrt(static_cast<long double>(disc128));
    long double xi;
    if (disc128 == 0) {
        xi = (a - d) / (2 * c);
    } else if (M.d - M.a > 0) {
        xi = 2 * b / ((d - a) + sq);
    } else {
        xi = ((a - d) + sq) / (2 * c);
    }
    return {xi, 2.0L * std::log(c * xi + d)};
}

FastPoint word_fixed_point(const Word& w) {
    Mat64 M;
    bool ok = true;
    for (Digit p : w.digits())
        if (!(ok = M.push(p))) break;
    if (ok) return fast_fixed_point(M);
    const PeriodicPoint pp = periodic_point(PeriodicWord{w}, 128);
    PrecisionScope scope(128);
    return {pp.xi.to_long_double(), mp::log(pp.derivative).convert_to<long double>()};
}

}  // namespace rldp
