#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "renyi_ldp/envelope.hpp"
#include "renyi_ldp/histogram.hpp"
#include "renyi_ldp/pressure.hpp"
#include "renyi_ldp/renyi.hpp"

namespace rldp {

// X* omits the cylinders [p] with p < p_star; R is the first return time to X*.
struct InducingScheme {
    Digit p_star = 2;
};

// Block p 1^(m-1): entry digit p >= p_star followed by m-1 visits to J_1.
struct InducedLetter {
    Digit p;
    std::uint32_t m;
    friend bool operator==(const InducedLetter&, const InducedLetter&) = default;
};

struct InducedWord {
    std::vector<InducedLetter> letters;
    std::uint64_t total_length() const;  // |a|, the sum of the return times
    Word expand() const;                 // the base-alphabet digits
};

struct InducedTruncation {
    Digit p_max = 200;
    std::uint32_t m_max = 200;
};

// H_{p,m} = M_p M_1^(m-1); maps [1/2, 1) onto J(a).
IntMatrix2 letter_matrix(const InducedLetter& a);
IntMatrix2 induced_word_matrix(const InducedWord& w);

Interval letter_interval(const InducedLetter& a);
Interval induced_word_interval(const InducedWord& w);

struct InducedBounds {
    long double inf;
    long double sup;
};

// Bounds of exp(Phi_{beta,gamma}) = |U'|^(-beta) e^(-gamma |a|) over the cylinder.
InducedBounds induced_potential_bounds(double beta, double gamma, const InducedLetter& a);
InducedBounds induced_potential_bounds(double beta, double gamma, const InducedWord& w);

// Certified bound on the sum over letters outside the truncation of sup exp(Phi).
// +inf when the letter sum diverges (gamma < 0 or beta <= 1/2).
long double induced_tail_sup(double beta, double gamma, const InducedTruncation& t);

struct InducedOptions {
    unsigned grid = 128;
    unsigned threads = 1;
};

// Pressure brackets for Phi_{beta,gamma} at several gamma with one shared operator.
class InducedPressureSolver {
public:
    InducedPressureSolver(double beta, InducedTruncation t, InducedOptions opt = {});

    // Level 1..3 bracket: intersection of raw cylinder sums and envelope ratio bounds
    // over the levels up to `level`.
    PressureBracket bracket(double gamma, unsigned level) const;

    double beta() const { return beta_; }
    const InducedTruncation& truncation() const { return trunc_; }

private:
    double beta_;
    InducedTruncation trunc_;
    std::unique_ptr<EnvelopeOperator> op_;
};

PressureBracket induced_pressure_bracket(double beta, double gamma, unsigned level,
                                         const InducedTruncation& t, const InducedOptions& opt = {});

struct Gamma0Result {
    double gamma0;            // midpoint of the enclosure
    double lo, hi;            // gamma_0 lies in [lo, hi]
    PressureBracket bracket;  // induced pressure bracket at gamma0
    unsigned evaluations = 0;
};

struct Gamma0Options {
    double scan_lo = -1.0;
    double scan_hi = 2.0;
    unsigned scan_points = 13;
    unsigned max_bisections = 64;
    unsigned level = 2;
    InducedOptions induced;
};

// Encloses the root of gamma -> P(Phi_{beta,gamma}). Each end is certified by the sign
// of a bracket: lo(gamma) >= 0 forces gamma_0 >= gamma, hi(gamma) <= 0 forces gamma_0 <= gamma.
Gamma0Result find_gamma0(double beta, const InducedTruncation& t, double tol,
                         const Gamma0Options& opt = {});

struct GibbsRatio {
    double lo, hi, mid;  // ratio range over x in the cylinder; mid at eta = 3/4
};

// lambda[[a]] / exp(S_|a| beta phi(x) - gamma0 |a|) for x = H(eta), eta in [1/2, 1].
GibbsRatio gibbs_ratio(RefMeasure m, double beta, double gamma0, const InducedWord& w);

struct GibbsStats {
    std::uint64_t count = 0;
    double min_ratio = 0, max_ratio = 0, median_ratio = 0;
    double C = 0;  // max(max_ratio, 1/min_ratio)
};

GibbsStats local_gibbs_check(RefMeasure m, double beta, double gamma0,
                             const std::vector<InducedWord>& words);

// All words of exactly `letters` letters with p <= p_max, m <= m_max (streamed).
// The median comes from a fine logarithmic histogram of the midpoint ratios.
GibbsStats local_gibbs_scan(RefMeasure m, double beta, double gamma0, unsigned letters,
                            Digit p_max, std::uint32_t m_max);

struct InducedGibbsApprox {
    double beta = 0, gamma = 0;
    InducedTruncation truncation;
    std::vector<InducedLetter> letters;
    std::vector<double> q;
    double defect = 0;              // certified tail share of the normalizer
    double mean_return = 0;         // sum q(a) m(a) over truncated letters
    double mean_return_tail = 0;    // bound on the omitted part
    bool return_divergent = false;  // the m-weighted tail is not summable
};

InducedGibbsApprox induced_gibbs_bernoulli(double beta, double gamma, const InducedTruncation& t);

// Spreads letter masses over their block orbit segments and normalizes by the mean
// return time; total mass is 1 - (return-time tail share).
Histogram1D kac_spread(const InducedGibbsApprox& approx, std::size_t bins);

struct DisjointnessReport {
    std::uint64_t words = 0;
    std::uint64_t overlaps = 0;
};

// Exhaustive check that induced words of equal total length have disjoint intervals.
DisjointnessReport disjointness_check(unsigned total_length, Digit p_max, std::uint32_t m_max);

}  // namespace rldp
