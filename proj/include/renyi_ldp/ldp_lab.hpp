#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "renyi_ldp/histogram.hpp"
#include "renyi_ldp/pressure.hpp"
#include "renyi_ldp/renyi.hpp"
#include "renyi_ldp/shift_core.hpp"

namespace rldp {

// Weighted periodic-orbit ensemble over {1..M}^n. Entry i is the word whose digits are
// the base-M expansion of i (most significant first, digit value r + 1).
class Ensemble {
public:
    Ensemble(double beta, unsigned n, Digit max_digit, std::uint64_t budget = kDefaultBudget);

    unsigned n() const { return n_; }
    double beta() const { return beta_; }
    Digit max_digit() const { return max_digit_; }
    std::size_t size() const { return xi_.size(); }

    Word word(std::size_t i) const;
    std::size_t index_of(const Word& w) const;
    // Index of the k-fold left rotation of entry i.
    std::size_t rotate(std::size_t i, unsigned k) const;

    double xi(std::size_t i) const { return xi_[i]; }
    double weight(std::size_t i) const { return weight_[i]; }  // |(T^n)'(xi)|^(-beta)
    double normalized_weight(std::size_t i) const { return weight_[i] / static_cast<double>(z_lower_); }
    // Atoms of V_n for entry i, each of mass 1/n.
    std::vector<double> orbit(std::size_t i) const;

    long double z_lower() const { return z_lower_; }
    long double tail() const { return tail_; }

private:
    double beta_;
    unsigned n_;
    Digit max_digit_;
    std::size_t total_;
    std::vector<std::size_t> pow_;
    std::vector<double> xi_;
    std::vector<double> weight_;
    long double z_lower_ = 0;
    long double tail_ = 0;
};

Ensemble build_ensemble(double beta, unsigned n, Digit max_digit, std::uint64_t budget = kDefaultBudget);

// Gamma({N_i}): x_i <= N_i for all i. Thresholds beyond the stored prefix repeat the last one.
// Stored as long double so that astronomically large thresholds stay representable.
class CompactSet {
public:
    explicit CompactSet(std::vector<long double> thresholds);
    long double N(std::size_t i) const;  // 1-based
    const std::vector<long double>& thresholds() const { return N_; }
    // max{i <= cap : p > N_i}, 0 if p <= N_1.
    unsigned level(long double p, unsigned cap) const;

private:
    std::vector<long double> N_;
};

struct Itinerary {
    std::vector<unsigned> n_j;
    std::vector<unsigned> r_j;
};

// Escape count m = n V_n(X minus Gamma) of the periodic point coded by w.
unsigned escape_count(const Word& w, const CompactSet& G);
// Itinerary (n_j, r_j) of the periodic point, for all j with n_j <= n - 1.
Itinerary itinerary(const Word& w, const CompactSet& G);

struct EscapeStratification {
    unsigned n = 0;
    std::vector<long double> totals;  // index m = 0..n, unnormalized weights
    std::vector<std::uint64_t> counts;
    long double grand_total() const;
};

EscapeStratification escape_stratify(const Ensemble& e, const CompactSet& G);

// Mass of the union of cylinders [k], k > N, under the reference measure.
long double ref_tail_mass(RefMeasure m, long double N);

// Smallest N_i with ref_tail_mass(N_i) <= delta^(2i), i = 1..count, and N_1 >= p_star - 1.
CompactSet solve_hypothesis(RefMeasure m, double delta, unsigned count, Digit p_star = 2);

struct HypothesisRow {
    unsigned i;
    long double N;
    long double tail_mass;
    long double bound;  // delta^(2i)
    bool ok;
};

struct ExpoRow {
    unsigned m;
    long double lhs_bound;      // certified bound over all of N^n
    long double lhs_truncated;  // exact sum over {1..M}^n, when enumerated
    bool truncated_available;
    long double rhs;
    double margin;  // log(rhs / lhs_bound)
    bool pass;
};

struct ExpoReport {
    unsigned n = 0;
    double beta = 0, delta = 0, gamma0 = 0;
    Digit max_digit = 0;
    std::vector<HypothesisRow> hypothesis;
    bool hypothesis_ok = false;
    std::vector<ExpoRow> rows;  // m = 1..n
    long double stratum0_bound = 0;
    bool all_pass = false;
};

// Bounds, for each m, the sum of exp(S_n beta phi) over period-n points escaping exactly
// m times by the product of single-digit sups, summed with a cyclic dynamic program
// over threshold levels.
std::vector<long double> escape_sum_bounds(double beta, unsigned n, const CompactSet& G);

ExpoReport expo_bound_check(double beta, unsigned n, const CompactSet& G, double delta, double gamma0,
                            Digit max_digit, RefMeasure measure = RefMeasure::lebesgue_on_half,
                            std::uint64_t budget = kDefaultBudget);

// Largest delta in (0, 1/5] with (1/(1-4d)) sum_{m>=1} e^(2 l^2 m) (4d)^m <= 1.
double tightness_delta(unsigned ell);

struct TightnessRow {
    unsigned ell = 0, n = 0;
    double delta = 0;
    long double N1 = 0;
    double outside_truncated = 0;  // normalized mass outside K_L, truncated ensemble
    double outside_bound = 0;      // certified bound on the same mass
    double log_rate = 0;           // (1/n) log outside_bound
};

// Rows over ell in [ell_min, ell_max] and n in [n_min, n_max]; ell plays the role of L
// in K_L, the intersection of the sets {nu : nu(Gamma_l) >= 1 - 1/l} over l >= L.
std::vector<TightnessRow> tightness_table(double beta, unsigned n_min, unsigned n_max, unsigned ell_min,
                                          unsigned ell_max, Digit max_digit,
                                          RefMeasure measure = RefMeasure::lebesgue_on_half,
                                          std::uint64_t budget = kDefaultBudget);

using Observable = std::function<double(double)>;

// (1/Z_n) sum |(T^n)'|^(-beta) (1/n) sum_k f(T^k xi).
double theoremC_functional(const Ensemble& e, const Observable& f);

struct CorollaryValues {
    double a = 0, b = 0, c = 0;
};

// (a) mean of n^-2 S_n phi S_n psi, (b) mean of S_n phi / S_n psi,
// (c) mean of n^-2 sum_{k1,k2} f(pi1(T^k1 xi) + pi2(T^k2 xi)).
// Throws DomainError when psi is not bounded below by a positive constant.
CorollaryValues corollary_functionals(const Ensemble& e, const Observable& phi, const Observable& psi,
                                      const Observable& pi1, const Observable& pi2, const Observable& f);

// Weighted histogram of the ensemble's empirical measures.
Histogram1D ensemble_histogram(const Ensemble& e, std::size_t bins);

struct RatePoint {
    double t = 0;
    double s = 0;        // integral of psi under the tilted block measure
    double F_lower = 0;  // certified lower bound on h + integral(beta phi) - P_ref
    double F_value = 0;  // same with the stationary estimate of the integral
    double entropy = 0;
};

// Tilted block-Bernoulli measures q_t(w) ~ sup exp(S_n beta phi) exp(t S_n psi(x_w)) over {1..M}^n.
std::vector<RatePoint> rate_profile(double beta, const Observable& psi, const std::vector<double>& t_grid,
                                    unsigned n, Digit max_digit, double p_ref,
                                    const BlockOptions& opt = {}, std::uint64_t budget = kDefaultBudget);

}  // namespace rldp
