// Independent reference computations used to cross-check the library.
// Nothing here calls into the library's numerical code paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

// T(x) = 1/(1-x) - floor(1/(1-x)).
inline long double renyi(long double x) {
    const long double u = 1.0L / (1.0L - x);
    return u - std::floor(u);
}

inline long double renyi_derivative(long double x) { return 1.0L / ((1.0L - x) * (1.0L - x)); }

// Partition index p with x in [1 - 1/p, 1 - 1/(p+1)).
inline std::uint32_t partition_index(long double x) {
    return static_cast<std::uint32_t>(std::floor(1.0L / (1.0L - x)));
}

// Inverse branch g_p(eta) = 1 - 1/(p + eta).
inline long double inverse_branch(std::uint32_t p, long double eta) { return 1.0L - 1.0L / (p + eta); }

// Fixed point of g_{w0} o ... o g_{w(n-1)} by iterating the contraction from both ends of
// [0,1]; the neutral all-ones word is handled by its known fixed point 0.
inline long double fixed_point(const std::vector<std::uint32_t>& w) {
    if (std::all_of(w.begin(), w.end(), [](std::uint32_t p) { return p == 1; })) return 0.0L;
    long double lo = 0.0L, hi = 1.0L;
    for (int it = 0; it < 20000; ++it) {
        for (std::size_t k = w.size(); k-- > 0;) {
            lo = inverse_branch(w[k], lo);
            hi = inverse_branch(w[k], hi);
        }
        if (hi - lo < 1e-18L) break;
    }
    return 0.5L * (lo + hi);
}

inline std::vector<std::uint32_t> rotate(const std::vector<std::uint32_t>& w, std::size_t k) {
    std::vector<std::uint32_t> r(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) r[i] = w[(i + k) % w.size()];
    return r;
}

// |(T^n)'| at the periodic point as a chain-rule product over its orbit.
inline long double chain_derivative(const std::vector<std::uint32_t>& w) {
    long double prod = 1.0L;
    for (std::size_t k = 0; k < w.size(); ++k) prod *= renyi_derivative(fixed_point(rotate(w, k)));
    return prod;
}

// Naive squarefree part: largest D with n = s^2 D.
inline std::uint64_t squarefree_part(std::uint64_t n) {
    std::uint64_t D = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e % 2) D *= p;
    }
    return D * n;
}

// Escape count straight from the definition: shift j escapes when some i in 1..n has
// x_(j+i) > N_i (digits indexed from 1 along the periodic sequence).
inline unsigned escape_count(const std::vector<std::uint32_t>& w, const std::vector<long double>& N) {
    const std::size_t n = w.size();
    auto Ni = [&](std::size_t i) { return i <= N.size() ? N[i - 1] : N.back(); };
    unsigned m = 0;
    for (std::size_t j = 0; j < n; ++j) {
        bool esc = false;
        for (std::size_t i = 1; i <= n && !esc; ++i) esc = w[(j + i - 1) % n] > Ni(i);
        m += esc;
    }
    return m;
}

// Per-m upper bounds on sum_w prod_k w_k^(-2 beta) by enumerating level patterns:
// level 0 means p <= N_1, level l means N_l < p <= N_(l+1), level n means p > N_n.
inline std::vector<long double> escape_bounds(double beta, unsigned n, const std::vector<long double>& N) {
    const long double s = 2.0L * beta;
    auto Ni = [&](std::size_t i) { return i <= N.size() ? N[i - 1] : N.back(); };
    auto upper = [&](long double A, long double B) -> long double {
        // Direct sum over the first million terms, integral comparison beyond.
        if (!(B > A)) return 0;
        long double acc = 0, p = A + 1;
        if (A < 1e12L)
            for (; p <= B && p <= A + 1e6L; p += 1) acc += std::pow(p, -s);
        if (p > B) return acc;
        const long double hb = std::isfinite(B) ? std::pow(B, 1 - s) : 0.0L;
        return acc + (std::pow(p - 1, 1 - s) - hb) / (s - 1);
    };
    std::vector<long double> W(n + 1);
    W[0] = upper(0, Ni(1));
    for (unsigned l = 1; l <= n; ++l) W[l] = upper(Ni(l), l < n ? Ni(l + 1) : INFINITY);
    std::vector<long double> out(n + 1, 0);
    std::vector<unsigned> lev(n, 0);
    for (;;) {
        // Representative digits: level l -> some p in its range; only the coverage matters.
        std::vector<bool> cover(n, false);
        long double w = 1;
        for (unsigned q = 0; q < n; ++q) {
            w *= W[lev[q]];
            for (unsigned t = 0; t < lev[q]; ++t) cover[(q + n - t) % n] = true;
        }
        out[std::count(cover.begin(), cover.end(), true)] += w;
        unsigned pos = n;
        while (pos > 0 && ++lev[pos - 1] == n + 1) lev[--pos] = 0;
        if (pos == 0) break;
    }
    return out;
}

// W1 between two bin-mass vectors on [0,1), masses spread uniformly within bins,
// by midpoint integration of |F1 - F2| on a fine grid.
inline double w1(const std::vector<double>& a, const std::vector<double>& b, int samples_per_bin = 64) {
    const std::size_t B = a.size();
    double Fa = 0, Fb = 0, acc = 0;
    const double h = 1.0 / (B * samples_per_bin);
    for (std::size_t i = 0; i < B; ++i) {
        for (int k = 0; k < samples_per_bin; ++k) {
            const double frac = (k + 0.5) / samples_per_bin;
            acc += std::fabs((Fa + frac * a[i]) - (Fb + frac * b[i])) * h;
        }
        Fa += a[i];
        Fb += b[i];
    }
    return acc;
}

}  // namespace oracle
