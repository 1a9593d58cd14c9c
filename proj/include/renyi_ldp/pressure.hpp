#pragma once

#include <functional>
#include <vector>

#include "renyi_ldp/renyi.hpp"
#include "renyi_ldp/shift_core.hpp"

namespace rldp {

// Neumaier-compensated running sum; order-deterministic.
class CompensatedSum {
public:
    void add(long double x) {
        const long double t = sum_ + x;
        comp_ += std::fabs(sum_) >= std::fabs(x) ? (sum_ - t) + x : (x - t) + sum_;
        sum_ = t;
    }
    long double value() const { return sum_ + comp_; }

private:
    long double sum_ = 0, comp_ = 0;
};

// sum_{p > M} p^(-s) <= M^(1-s)/(s-1); +inf for s <= 1.
long double zeta_tail_bound(long double s, long double M);

// Visits every word of {1..max_digit}^n with its 64-bit branch product (depth-first,
// lexicographic). Throws DomainError if an entry leaves 64-bit range.
void for_each_word_matrix(unsigned n, Digit max_digit, std::uint64_t budget,
                          const std::function<void(const std::vector<Digit>&, const Mat64&)>& visit);

struct PartitionSum {
    unsigned n = 0;
    double beta = 0;
    Digit max_digit = 0;
    long double lower = 0;  // sum of exp(S_n beta phi) over truncated periodic points
    long double upper = 0;  // lower + tail
    long double tail = 0;   // bound on the omitted periodic points
    bool divergent = false; // beta <= 1/2: tail is infinite
};

struct PressureBracket {
    unsigned n = 0;
    double lo = 0, hi = 0;          // reported enclosure of P (running intersection over levels <= n)
    double raw_lo = 0, raw_hi = 0;  // (1/n) log of the inf-sum and of the sup-sum plus tail
    double cw_lo = 0, cw_hi = 0;    // envelope ratio bounds at level n
    double variational_lo = 0;      // max over truncated periodic orbits of S_n beta phi / n
    double tail = 0;                // tail bound added to the sup-sum
    bool divergent = false;
    double width() const { return hi - lo; }
};

struct PressureOptions {
    unsigned grid = 2048;
    unsigned threads = 1;
    std::uint64_t budget = kDefaultBudget;
};

// Certified bound on the periodic points of {1..}^n omitted by the truncation to digits <= max_digit.
long double partition_tail(double beta, unsigned n, Digit max_digit);

long double birkhoff_sum(const GeometricPotential& phi, const PeriodicWord& w);

// max over truncated words of log(sup/inf) of exp(S_n beta phi) on the cylinder.
double distortion_modulus(const GeometricPotential& phi, unsigned n, Digit max_digit,
                          std::uint64_t budget = kDefaultBudget);

PartitionSum partition_sum(const GeometricPotential& phi, unsigned n, Digit max_digit,
                           std::uint64_t budget = kDefaultBudget);

// Brackets for levels 1..n_max; element k-1 is the level-k bracket.
std::vector<PressureBracket> pressure_brackets(const GeometricPotential& phi, unsigned n_max,
                                               Digit max_digit, const PressureOptions& opt = {});
PressureBracket pressure_bracket(const GeometricPotential& phi, unsigned n, Digit max_digit,
                                 const PressureOptions& opt = {});

struct BlockMeasureStats {
    unsigned n = 0;
    std::vector<Word> words;
    std::vector<double> probabilities;  // q(w) proportional to sup exp(S_n beta phi) on [w]
    double entropy_rate = 0;            // (-sum q log q)/n, natural log
    double mean_potential = 0;          // integral of beta phi, stationary-IFS estimate
    double mean_potential_lower = 0;    // certified: sum q log inf / n
    double mean_potential_upper = 0;    // sum q log sup / n
    double log_sum_sup = 0;             // log sum_H sup exp(S_n beta phi)
    double distortion = 0;              // max over H of log(sup/inf)
    double p_ref = 0;
    double F_value = 0;                 // h + mean_potential - p_ref
    double F_lower = 0;                 // h + mean_potential_lower - p_ref
    // n (h + integral) >= log sum sup - D_n, checked with the certified lower integral.
    bool horse_holds = false;
    double horse_margin = 0;
};

struct BlockOptions {
    unsigned bins = 1024;
    unsigned max_iterations = 400;
    double tolerance = 1e-12;
};

// Bernoulli block measure over the finite word set H (all words of equal length).
// weights_override, when non-empty, replaces sup exp(S_n beta phi) as the unnormalized q.
BlockMeasureStats block_bernoulli(const GeometricPotential& phi, const std::vector<Word>& H,
                                  double p_ref, const BlockOptions& opt = {},
                                  const std::vector<long double>& weights_override = {});

}  // namespace rldp
