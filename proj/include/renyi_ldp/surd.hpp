#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <string>

namespace rldp {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
// Variable-precision binary float; precision is set through PrecisionScope.
using HighFloat = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultPrecisionBits = 256;

// Sets the default HighFloat precision (in bits) for its lifetime.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_digits10_;
};

// Moebius map eta -> (a eta + b)/(c eta + d).
struct IntMatrix2 {
    BigInt a{1}, b{0}, c{0}, d{1};

    static IntMatrix2 identity() { return {}; }
    BigInt det() const { return a * d - b * c; }
    friend IntMatrix2 operator*(const IntMatrix2& x, const IntMatrix2& y);
    friend bool operator==(const IntMatrix2&, const IntMatrix2&) = default;
    std::string str() const;
};

// n = s^2 * D with D squarefree (when certified).
struct SquarefreeSplit {
    BigInt s;
    BigInt D;
    // False only when the trial-division bound was too small to rule out a
    // square factor between two large primes.
    bool certified = true;
};

SquarefreeSplit squarefree_split(const BigInt& n);

// (p + q sqrt(D)) / r, canonical: r > 0, gcd(p,q,r) = 1, rational values have q = D = 0.
class QuadraticSurd {
public:
    QuadraticSurd() : p_(0), q_(0), r_(1), D_(0) {}
    QuadraticSurd(BigInt p, BigInt q, BigInt r, BigInt D);
    static QuadraticSurd from_rational(const Rational& v);
    static QuadraticSurd from_int(long long v) { return QuadraticSurd(BigInt(v), 0, 1, 0); }

    const BigInt& p() const { return p_; }
    const BigInt& q() const { return q_; }
    const BigInt& r() const { return r_; }
    const BigInt& D() const { return D_; }
    bool is_rational() const { return q_ == 0; }
    Rational to_rational() const;  // throws DomainError if irrational

    // Sign of (value - v) for rational v, exact.
    int compare(const Rational& v) const;
    int compare(const QuadraticSurd& other) const;  // requires same D or rational operand
    BigInt floor() const;

    QuadraticSurd operator-(const BigInt& k) const;

    HighFloat to_high() const;  // at the current default precision
    long double to_long_double() const;
    std::string str() const;
    std::string decimal(unsigned significant_digits = 30) const;

    friend bool operator==(const QuadraticSurd&, const QuadraticSurd&) = default;

private:
    void canonicalize();
    BigInt p_, q_, r_, D_;
};

// Sign of x + y sqrt(D), D >= 0.
int sign_of(const BigInt& x, const BigInt& y, const BigInt& D);

Rational moebius_apply(const IntMatrix2& M, const Rational& v);
QuadraticSurd moebius_apply(const IntMatrix2& M, const QuadraticSurd& v);

// Root of c x^2 + (d - a) x - b = 0 in [0,1).
QuadraticSurd fixed_point_in_unit_interval(const IntMatrix2& M);

// (c xi + d)^2, i.e. |(T^n)'(xi)| for the branch product M.
HighFloat cocycle_derivative(const IntMatrix2& M, const QuadraticSurd& xi,
                             unsigned bits = kDefaultPrecisionBits);

// c xi^2 + (d - a) xi - b evaluated exactly; zero for a genuine fixed point.
QuadraticSurd quadratic_residual(const IntMatrix2& M, const QuadraticSurd& xi);

}  // namespace rldp
