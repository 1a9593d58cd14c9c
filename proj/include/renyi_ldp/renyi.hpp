#pragma once

#include <cstdint>
#include <optional>

#include "renyi_ldp/shift_core.hpp"
#include "renyi_ldp/surd.hpp"

namespace rldp {

// Half-open [lo, hi) with exact rational endpoints.
struct Interval {
    Rational lo, hi;
    Rational length() const { return hi - lo; }
    bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
};

// beta * phi with phi = -log|T'|.
struct GeometricPotential {
    double beta = 1.0;
    bool finite_pressure() const { return beta > 0.5; }
};

enum class RefMeasure { lebesgue_on_half, log_density_on_half };

const char* to_string(RefMeasure m);
RefMeasure parse_ref_measure(const std::string& name);

// inf over [0,1) minus J_1 of |T'|.
inline constexpr double kExpansionOffJ1 = 4.0;

long double apply_T(long double xi);
HighFloat apply_T(const HighFloat& xi);
Rational apply_T(const Rational& xi);
QuadraticSurd apply_T(const QuadraticSurd& xi);

struct DigitInfo {
    Digit p;          // partition index, xi in J_p
    std::uint64_t d;  // continued-fraction digit p + 1
};

DigitInfo digit_of(long double xi);
DigitInfo digit_of(const Rational& xi);
DigitInfo digit_of(const QuadraticSurd& xi);

// Inverse branch g_p(eta) = (eta + p - 1)/(eta + p).
IntMatrix2 branch_matrix(Digit p);
IntMatrix2 word_matrix(const Word& w);

struct PeriodicPoint {
    IntMatrix2 matrix;
    QuadraticSurd xi;
    HighFloat derivative;  // |(T^n)'(xi)|
};

PeriodicPoint periodic_point(const PeriodicWord& w, unsigned bits = kDefaultPrecisionBits);

Interval cylinder_interval(const Word& w);
Interval partition_interval(Digit p);  // J_p

struct PotentialBounds {
    long double inf;  // not attained on the half-open cylinder
    long double sup;
};

// inf/sup of exp(S_n beta phi) over the cylinder [w].
PotentialBounds potential_bounds(const GeometricPotential& phi, const Word& w);

double ref_measure_mass(RefMeasure m, const Interval& I);

// Overflow-checked 64-bit cocycle used by the bulk enumerations.
struct Mat64 {
    std::int64_t a = 1, b = 0, c = 0, d = 1;
    // Right-multiplies by branch_matrix(p). Returns false on overflow (matrix unchanged).
    bool push(Digit p);
    IntMatrix2 big() const { return {a, b, c, d}; }
};

// Fixed point in [0,1) and log|(T^n)'| for a 64-bit branch product.
struct FastPoint {
    long double xi;
    long double log_derivative;
};

FastPoint fast_fixed_point(const Mat64& M);

// Long-double fixed point with an exact fallback when the product overflows.
FastPoint word_fixed_point(const Word& w);

}  // namespace rldp
