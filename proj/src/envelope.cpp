#include "renyi_ldp/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "renyi_ldp/errors.hpp"

namespace rldp {

namespace {

template <class F>
void parallel_for(unsigned threads, std::size_t count, F&& body) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk, hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

EnvelopeOperator::EnvelopeOperator(std::vector<Branch> branches, double beta, double eta0,
                                   unsigned grid, unsigned threads)
    : nb_(branches.size()), grid_(grid), threads_(std::max(1u, threads)) {
    if (grid < 2 || grid > 65535) throw DomainError("envelope grid must be in [2, 65535]");
    if (!(eta0 >= 0 && eta0 < 1)) throw DomainError("envelope domain must start in [0,1)");
    group_.resize(nb_);
    for (std::size_t k = 0; k < nb_; ++k) group_[k] = branches[k].group;
    weight_.resize((grid_ + 1) * nb_);
    left_.resize((grid_ + 1) * nb_);
    const long double h = (1.0L - eta0) / grid_;
    const long double two_beta = 2.0L * beta;
    parallel_for(threads_, grid_ + 1, [&](std::size_t j) {
        const long double eta = eta0 + h * static_cast<long double>(j);
        for (std::size_t k = 0; k < nb_; ++k) {
            const Branch& br = branches[k];
            const long double den = br.c * eta + br.d;
            weight_[j * nb_ + k] = static_cast<double>(std::exp(-two_beta * std::log(den)));
            const long double x = (br.a * eta + br.b) / den;
            long double cell = std::floor((x - eta0) / h);
            cell = std::clamp(cell, 0.0L, static_cast<long double>(grid_ - 1));
            left_[j * nb_ + k] = static_cast<std::uint16_t>(cell);
        }
    });
}

std::vector<EnvelopeLevel> EnvelopeOperator::run(const std::vector<double>& factor,
                                                 double tail_sup, unsigned levels) const {
    const unsigned K = grid_;
    // Without a finite tail bound U is not an upper envelope: keep only the raw lower bound.
    const bool tail_finite = std::isfinite(tail_sup);
    if (!tail_finite) tail_sup = 0.0;
    std::vector<double> U(K + 1, 1.0), Lo(K + 1, 1.0), U2(K + 1), L2(K + 1);
    // The envelopes are rescaled each level; log_scale tracks the removed factor.
    double log_scale = 0.0;
    std::vector<EnvelopeLevel> out;
    for (unsigned n = 1; n <= levels; ++n) {
        parallel_for(threads_, K + 1, [&](std::size_t j) {
            double su = 0.0, sl = 0.0, cu = 0.0, cl = 0.0;  // Neumaier compensation
            const double* w = &weight_[j * nb_];
            const std::uint16_t* li = &left_[j * nb_];
            for (std::size_t k = 0; k < nb_; ++k) {
                const double wk = factor[group_[k]] * w[k];
                const double tu = wk * U[li[k]];
                const double tl = wk * Lo[li[k] + 1];
                double t = su + tu;
                cu += std::fabs(su) >= std::fabs(tu) ? (su - t) + tu : (tu - t) + su;
                su = t;
                t = sl + tl;
                cl += std::fabs(sl) >= std::fabs(tl) ? (sl - t) + tl : (tl - t) + sl;
                sl = t;
            }
            U2[j] = su + cu + tail_sup * U[0];
            L2[j] = sl + cl;
        });
        EnvelopeLevel lev{n, 0, 0, 0, 0};
        double hi = 0.0, lo = std::numeric_limits<double>::infinity();
        for (unsigned j = 0; j < K; ++j) {
            hi = std::max(hi, U2[j] / Lo[j + 1]);
            lo = std::min(lo, L2[j + 1] / U[j]);
        }
        lev.cw_hi = std::log(hi);
        lev.cw_lo = std::log(lo);
        lev.raw_hi = (log_scale + std::log(U2[0])) / n;
        lev.raw_lo = (log_scale + std::log(L2[K])) / n;
        if (!tail_finite) {
            lev.raw_hi = lev.cw_hi = std::numeric_limits<double>::infinity();
            lev.cw_lo = -std::numeric_limits<double>::infinity();
        }
        out.push_back(lev);
        const double s = U2[0];
        if (std::isfinite(s) && s > 0) {
            for (unsigned j = 0; j <= K; ++j) {
                U2[j] /= s;
                L2[j] /= s;
            }
            log_scale += std::log(s);
        }
        U.swap(U2);
        Lo.swap(L2);
    }
    return out;
}

}  // namespace rldp
