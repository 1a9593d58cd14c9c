#pragma once

#include <cstdint>
#include <vector>

namespace rldp {

// One inverse branch of a transfer operator L f(eta) = sum_k w_k(eta) f(G_k eta) with
// w_k(eta) = factor(group) * (c eta + d)^(-2 beta) and G_k eta = (a eta + b)/(c eta + d).
// Every weight is decreasing and every G_k increasing, so L preserves decreasing functions.
struct Branch {
    long double a, b, c, d;
    std::uint32_t group;  // index into the per-call factor table
};

struct EnvelopeLevel {
    unsigned n;
    // (1/n) log of certified bounds on L^n 1 at the right/left end of the domain.
    double raw_lo, raw_hi;
    // log of Collatz-Wielandt bounds on the growth rate from L^n 1 / L^(n-1) 1.
    double cw_lo, cw_hi;
};

// Grid envelopes of L^n 1 on [eta0, 1]: U_j >= L^n 1(eta_j) >= Lo_j. Branch weights
// and grid images are computed once, so repeated runs with different factors are cheap.
class EnvelopeOperator {
public:
    EnvelopeOperator(std::vector<Branch> branches, double beta, double eta0, unsigned grid,
                     unsigned threads = 1);

    // tail_sup bounds the total weight of all omitted branches (may be +inf).
    std::vector<EnvelopeLevel> run(const std::vector<double>& group_factor, double tail_sup,
                                   unsigned levels) const;

    unsigned grid() const { return grid_; }
    std::size_t branch_count() const { return nb_; }

private:
    std::size_t nb_;
    unsigned grid_;
    unsigned threads_;
    std::vector<std::uint32_t> group_;
    std::vector<double> weight_;       // [j * nb + k]
    std::vector<std::uint16_t> left_;  // grid cell containing G_k eta_j
};

}  // namespace rldp
