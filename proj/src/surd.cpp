#include "renyi_ldp/surd.hpp"

#include <boost/multiprecision/integer.hpp>
#include <cmath>
#include <sstream>
#include <vector>

#include "renyi_ldp/errors.hpp"

namespace rldp {

namespace mp = boost::multiprecision;

namespace {

unsigned bits_to_digits10(unsigned bits) {
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

// Primes below 2^20: trial division certifies the split of every n below 2^60.
const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        const std::uint32_t limit = 1u << 20;
        std::vector<bool> composite(limit + 1, false);
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 2; i <= limit; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (std::uint64_t j = std::uint64_t{i} * i; j <= limit; j += i) composite[j] = true;
        }
        return out;
    }();
    return primes;
}

bool is_perfect_square(const BigInt& n, BigInt& root) {
    if (n < 0) return false;
    root = mp::sqrt(n);
    return root * root == n;
}

SquarefreeSplit split_u64(std::uint64_t n) {
    std::uint64_t s = 1, D = 1;
    for (std::uint32_t p : small_primes()) {
        const std::uint64_t pp = p;
        if (pp * pp * pp > n) break;
        if (n % pp) continue;
        unsigned e = 0;
        while (n % pp == 0) {
            n /= pp;
            ++e;
        }
        for (unsigned k = 0; k < e / 2; ++k) s *= pp;
        if (e % 2) D *= pp;
    }
    // n now has at most two prime factors, all larger than the primes removed.
    std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    SquarefreeSplit out;
    if (n > 1 && r * r == n) {
        out.s = BigInt(s) * r;
        out.D = BigInt(D);
    } else {
        out.s = BigInt(s);
        out.D = BigInt(D) * n;
    }
    return out;
}

}  // namespace

PrecisionScope::PrecisionScope(unsigned bits) : saved_digits10_(HighFloat::default_precision()) {
    HighFloat::default_precision(bits_to_digits10(bits));
}

PrecisionScope::~PrecisionScope() { HighFloat::default_precision(saved_digits10_); }

IntMatrix2 operator*(const IntMatrix2& x, const IntMatrix2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
}

std::string IntMatrix2::str() const {
    std::ostringstream os;
    os << "[[" << a << "," << b << "],[" << c << "," << d << "]]";
    return os.str();
}

SquarefreeSplit squarefree_split(const BigInt& n_in) {
    if (n_in < 0) throw DomainError("squarefree_split needs n >= 0");
    if (n_in == 0) return {0, 0, true};
    if (n_in < BigInt(std::uint64_t{1} << 60))
        return split_u64(n_in.convert_to<std::uint64_t>());
    BigInt n = n_in, s = 1, D = 1;
    std::uint32_t last = 0;
    for (std::uint32_t p : small_primes()) {
        last = p;
        BigInt pp(p);
        if (pp * pp * pp > n) break;
        if (mp::integer_modulus(n, p) != 0) continue;
        unsigned e = 0;
        while (mp::integer_modulus(n, p) == 0) {
            n /= p;
            ++e;
        }
        for (unsigned k = 0; k < e / 2; ++k) s *= p;
        if (e % 2) D *= p;
    }
    SquarefreeSplit out;
    BigInt lp(last);
    out.certified = lp * lp * lp > n;
    BigInt root;
    if (n > 1 && is_perfect_square(n, root)) {
        out.s = s * root;
        out.D = D;
    } else {
        out.s = s;
        out.D = D * n;
    }
    return out;
}

int sign_of(const BigInt& x, const BigInt& y, const BigInt& D) {
    if (y == 0 || D == 0) return x.sign();
    const int sx = x.sign(), sy = y.sign();
    if (sx == 0) return sy;
    if (sx == sy) return sx;
    // Opposite signs: compare x^2 with y^2 D.
    const BigInt lhs = x * x, rhs = y * y * D;
    if (lhs == rhs) return 0;
    return lhs > rhs ? sx : sy;
}

QuadraticSurd::QuadraticSurd(BigInt p, BigInt q, BigInt r, BigInt D)
    : p_(std::move(p)), q_(std::move(q)), r_(std::move(r)), D_(std::move(D)) {
    if (r_ == 0) throw DomainError("surd denominator is zero");
    if (D_ < 0) throw DomainError("surd radicand must be >= 0");
    canonicalize();
}

QuadraticSurd QuadraticSurd::from_rational(const Rational& v) {
    return QuadraticSurd(mp::numerator(v), 0, mp::denominator(v), 0);
}

void QuadraticSurd::canonicalize() {
    if (D_ < 0) throw DomainError("negative radicand");
    if (D_ > 1 && q_ != 0) {
        SquarefreeSplit sp = squarefree_split(D_);
        q_ *= sp.s;
        D_ = sp.D;
    }
    if (D_ == 0 || q_ == 0) {
        q_ = 0;
        D_ = 0;
    } else if (D_ == 1) {
        p_ += q_;
        q_ = 0;
        D_ = 0;
    }
    if (r_ < 0) {
        p_ = -p_;
        q_ = -q_;
        r_ = -r_;
    }
    BigInt g = mp::gcd(mp::gcd(p_, q_), r_);
    if (g > 1) {
        p_ /= g;
        q_ /= g;
        r_ /= g;
    }
}

Rational QuadraticSurd::to_rational() const {
    if (!is_rational()) throw DomainError("surd is irrational");
    return Rational(p_, r_);
}

int QuadraticSurd::compare(const Rational& v) const {
    // sign(p + q sqrt(D) - r v) with r > 0; scale by denominator of v.
    const BigInt num = mp::numerator(v), den = mp::denominator(v);
    return sign_of(p_ * den - r_ * num, q_ * den, D_);
}

int QuadraticSurd::compare(const QuadraticSurd& o) const {
    if (o.is_rational()) return compare(o.to_rational());
    if (is_rational()) return -o.compare(to_rational());
    if (D_ != o.D_) throw DomainError("comparison of surds with different radicands");
    return sign_of(p_ * o.r_ - o.p_ * r_, q_ * o.r_ - o.q_ * r_, D_);
}

BigInt QuadraticSurd::floor() const {
    auto floor_div = [](const BigInt& x, const BigInt& r) {
        BigInt q = x / r;  // truncates toward zero; r > 0
        if (x < 0 && q * r != x) q -= 1;
        return q;
    };
    if (is_rational()) return floor_div(p_, r_);
    const BigInt t = q_ * q_ * D_;
    const BigInt s = mp::sqrt(t);  // floor of |q| sqrt(D); never exact for irrational values
    const BigInt base = q_ > 0 ? BigInt(p_ + s) : BigInt(p_ - s - 1);
    return floor_div(base, r_);
}

QuadraticSurd QuadraticSurd::operator-(const BigInt& k) const {
    return QuadraticSurd(p_ - k * r_, q_, r_, D_);
}

HighFloat QuadraticSurd::to_high() const {
    HighFloat v = HighFloat(p_);
    if (!is_rational()) v += HighFloat(q_) * mp::sqrt(HighFloat(D_));
    return v / HighFloat(r_);
}

long double QuadraticSurd::to_long_double() const {
    PrecisionScope scope(128);
    return to_high().convert_to<long double>();
}

std::string QuadraticSurd::str() const {
    std::ostringstream os;
    if (is_rational()) {
        os << p_;
        if (r_ != 1) os << "/" << r_;
        return os.str();
    }
    os << "(" << p_ << (q_ > 0 ? "+" : "-") << mp::abs(q_) << "*sqrt(" << D_ << "))/" << r_;
    return os.str();
}

std::string QuadraticSurd::decimal(unsigned significant_digits) const {
    PrecisionScope scope(std::max(128u, significant_digits * 4 + 64));
    std::ostringstream os;
    os.precision(significant_digits);
    os << to_high();
    return os.str();
}

Rational moebius_apply(const IntMatrix2& M, const Rational& v) {
    const Rational den = Rational(M.c) * v + Rational(M.d);
    if (den == 0) throw SingularityError("moebius pole: c*v + d = 0");
    return (Rational(M.a) * v + Rational(M.b)) / den;
}

QuadraticSurd moebius_apply(const IntMatrix2& M, const QuadraticSurd& v) {
    // (a(p + q s)/r + b) / (c(p + q s)/r + d) with s = sqrt(D).
    const BigInt n0 = M.a * v.p() + M.b * v.r(), n1 = M.a * v.q();
    const BigInt e0 = M.c * v.p() + M.d * v.r(), e1 = M.c * v.q();
    if (v.is_rational()) {
        if (e0 == 0) throw SingularityError("moebius pole: c*v + d = 0");
        return QuadraticSurd(n0, 0, e0, 0);
    }
    if (e0 == 0 && e1 == 0) throw SingularityError("moebius pole: c*v + d = 0");
    // Multiply through by the conjugate e0 - e1 s.
    const BigInt rr = e0 * e0 - e1 * e1 * v.D();
    return QuadraticSurd(n0 * e0 - n1 * e1 * v.D(), n1 * e0 - n0 * e1, rr, v.D());
}

QuadraticSurd fixed_point_in_unit_interval(const IntMatrix2& M) {
    if (M.c == 0) throw DomainError("matrix " + M.str() + " has no isolated fixed point");
    const BigInt disc = (M.d - M.a) * (M.d - M.a) + 4 * M.b * M.c;
    if (disc < 0) throw DomainError("matrix " + M.str() + " has no real fixed point");
    const SquarefreeSplit sp = squarefree_split(disc);
    const QuadraticSurd plus(M.a - M.d, sp.s, 2 * M.c, sp.D);
    const QuadraticSurd minus(M.a - M.d, -sp.s, 2 * M.c, sp.D);
    auto in_unit = [](const QuadraticSurd& x) { return x.compare(Rational(0)) >= 0 && x.compare(Rational(1)) < 0; };
    const bool ip = in_unit(plus), im = disc != 0 && in_unit(minus);
    if (ip && im) throw std::logic_error("two fixed points in [0,1) for " + M.str());
    if (ip) return plus;
    if (im) return minus;
    throw DomainError("matrix " + M.str() + " has no fixed point in [0,1)");
}

HighFloat cocycle_derivative(const IntMatrix2& M, const QuadraticSurd& xi, unsigned bits) {
    PrecisionScope scope(bits);
    const HighFloat v = HighFloat(M.c) * xi.to_high() + HighFloat(M.d);
    return v * v;
}

QuadraticSurd quadratic_residual(const IntMatrix2& M, const QuadraticSurd& xi) {
    const BigInt &p = xi.p(), &q = xi.q(), &r = xi.r(), &D = xi.D();
    const BigInt dm = M.d - M.a;
    const BigInt rat = M.c * (p * p + q * q * D) + dm * p * r - M.b * r * r;
    const BigInt irr = 2 * M.c * p * q + dm * q * r;
    return QuadraticSurd(rat, irr, r * r, D);
}

}  // namespace rldp
