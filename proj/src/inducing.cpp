#include "renyi_ldp/inducing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "renyi_ldp/errors.hpp"

namespace rldp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_letter(const InducedLetter& a) {
    if (a.p < 2 || a.m < 1) throw DomainError("induced letters need p >= 2 and m >= 1");
}

// 64-bit 2x2 product with overflow detection.
struct M64 {
    std::int64_t a = 1, b = 0, c = 0, d = 1;
};

bool mul(const M64& x, const M64& y, M64& out) {
    std::int64_t t1, t2;
    auto dot = [&](std::int64_t u1, std::int64_t v1, std::int64_t u2, std::int64_t v2, std::int64_t& r) {
        return !__builtin_mul_overflow(u1, v1, &t1) && !__builtin_mul_overflow(u2, v2, &t2) &&
               !__builtin_add_overflow(t1, t2, &r);
    };
    return dot(x.a, y.a, x.b, y.c, out.a) && dot(x.a, y.b, x.b, y.d, out.b) &&
           dot(x.c, y.a, x.d, y.c, out.c) && dot(x.c, y.b, x.d, y.d, out.d);
}

M64 letter64(Digit p, std::uint32_t m) {
    const std::int64_t P = p, mm = m;
    return {1 + (P - 1) * (mm - 1), P - 1, 1 + P * (mm - 1), P};
}

// Letters in positional order: p ascending, m descending within one p.
std::vector<InducedLetter> ordered_letters(Digit p_max, std::uint32_t m_max) {
    std::vector<InducedLetter> out;
    for (Digit p = 2; p <= p_max; ++p)
        for (std::uint32_t m = m_max; m >= 1; --m) out.push_back({p, m});
    return out;
}

long double sum_range_pow(long double s, std::uint64_t lo, std::uint64_t hi) {
    CompensatedSum acc;
    for (std::uint64_t k = hi; k >= lo && k >= 1; --k) acc.add(std::pow(static_cast<long double>(k), -s));
    return acc.value();
}

// Bound on sum_{m >= m0} (m+1)^(-s) e^(-gamma m), s > 1, gamma >= 0.
long double m_tail(long double s, long double gamma, std::uint64_t m0) {
    const long double M0 = static_cast<long double>(m0);
    long double b = std::exp(-gamma * M0) * std::pow(M0, 1 - s) / (s - 1);
    if (gamma > 0)
        b = std::min(b, std::pow(M0 + 1, -s) * std::exp(-gamma * M0) / -std::expm1(-gamma));
    return b;
}

// Bound on sum_{m >= m0} (m+1)^(1-s) e^(-gamma m); +inf when it may diverge.
long double m_tail_weighted(long double s, long double gamma, std::uint64_t m0) {
    const long double M0 = static_cast<long double>(m0);
    long double b = std::numeric_limits<long double>::infinity();
    if (s > 2) b = std::exp(-gamma * M0) * std::pow(M0, 2 - s) / (s - 2);
    if (gamma > 0 && s >= 0) {
        const long double x = std::exp(-gamma), one_minus = -std::expm1(-gamma);
        b = std::min(b, std::pow(x, M0) * ((M0 + 1) / one_minus + x / (one_minus * one_minus)));
    }
    return b;
}

}  // namespace

std::uint64_t InducedWord::total_length() const {
    std::uint64_t t = 0;
    for (const auto& a : letters) t += a.m;
    return t;
}

Word InducedWord::expand() const {
    std::vector<Digit> digits;
    for (const auto& a : letters) {
        digits.push_back(a.p);
        for (std::uint32_t k = 1; k < a.m; ++k) digits.push_back(1);
    }
    return Word(std::move(digits));
}

IntMatrix2 letter_matrix(const InducedLetter& a) {
    check_letter(a);
    const BigInt p(a.p), m(a.m);
    return {1 + (p - 1) * (m - 1), p - 1, 1 + p * (m - 1), p};
}

IntMatrix2 induced_word_matrix(const InducedWord& w) {
    if (w.letters.empty()) throw DomainError("induced word must be non-empty");
    IntMatrix2 H;
    for (const auto& a : w.letters) H = H * letter_matrix(a);
    return H;
}

namespace {

Interval image_of_half(const IntMatrix2& H) {
    return {Rational(H.a + 2 * H.b, H.c + 2 * H.d), Rational(H.a + H.b, H.c + H.d)};
}

InducedBounds bounds_of(const IntMatrix2& H, double beta, double gamma, std::uint64_t len) {
    const long double c = H.c.convert_to<long double>(), d = H.d.convert_to<long double>();
    const long double s = 2.0L * beta, g = gamma * static_cast<long double>(len);
    return {std::exp(-s * std::log(c + d) - g), std::exp(-s * std::log(c / 2 + d) - g)};
}

}  // namespace

Interval letter_interval(const InducedLetter& a) { return image_of_half(letter_matrix(a)); }

Interval induced_word_interval(const InducedWord& w) { return image_of_half(induced_word_matrix(w)); }

InducedBounds induced_potential_bounds(double beta, double gamma, const InducedLetter& a) {
    return bounds_of(letter_matrix(a), beta, gamma, a.m);
}

InducedBounds induced_potential_bounds(double beta, double gamma, const InducedWord& w) {
    return bounds_of(induced_word_matrix(w), beta, gamma, w.total_length());
}

long double induced_tail_sup(double beta, double gamma, const InducedTruncation& t) {
    const long double s = 2.0L * beta, g = gamma;
    if (!(s > 1) || g < 0) return std::numeric_limits<long double>::infinity();
    // sup over a letter is (2/(1 + p(m+1)))^s e^(-gamma m) <= 2^s p^(-s) (m+1)^(-s) e^(-gamma m).
    CompensatedSum sm;
    for (std::uint32_t m = t.m_max; m >= 1; --m)
        sm.add(std::pow(static_cast<long double>(m) + 1, -s) * std::exp(-g * m));
    const long double mt = m_tail(s, g, std::uint64_t{t.m_max} + 1);
    const long double m_all = sm.value() + mt;
    const long double p_in = sum_range_pow(s, 2, t.p_max);
    const long double p_out = zeta_tail_bound(s, t.p_max);
    return std::pow(2.0L, s) * (p_out * m_all + p_in * mt);
}

InducedPressureSolver::InducedPressureSolver(double beta, InducedTruncation t, InducedOptions opt)
    : beta_(beta), trunc_(t) {
    if (t.p_max < 2 || t.m_max < 1) throw DomainError("induced truncation needs p_max >= 2, m_max >= 1");
    std::vector<Branch> branches;
    branches.reserve(static_cast<std::size_t>(t.p_max - 1) * t.m_max);
    for (Digit p = 2; p <= t.p_max; ++p)
        for (std::uint32_t m = 1; m <= t.m_max; ++m) {
            const long double P = p, mm = m;
            branches.push_back({1 + (P - 1) * (mm - 1), P - 1, 1 + P * (mm - 1), P, m - 1});
        }
    op_ = std::make_unique<EnvelopeOperator>(std::move(branches), beta, 0.5, opt.grid, opt.threads);
}

PressureBracket InducedPressureSolver::bracket(double gamma, unsigned level) const {
    if (level < 1 || level > 3) throw DomainError("induced bracket level must be 1, 2 or 3");
    PressureBracket b;
    b.n = level;
    const long double tail = induced_tail_sup(beta_, gamma, trunc_);
    if (!std::isfinite(tail)) {
        // The level-1 inf-sum already diverges, so the pressure is +inf.
        b.divergent = true;
        b.lo = b.hi = b.raw_lo = b.raw_hi = b.cw_lo = b.cw_hi = kInf;
        b.tail = kInf;
        b.variational_lo = -kInf;
        return b;
    }
    std::vector<double> factor(trunc_.m_max);
    for (std::uint32_t m = 1; m <= trunc_.m_max; ++m) factor[m - 1] = std::exp(-gamma * m);
    const auto levels = op_->run(factor, static_cast<double>(tail), level);
    double lo = -kInf, hi = kInf;
    for (const auto& lv : levels) {
        lo = std::max({lo, lv.raw_lo, lv.cw_lo});
        hi = std::min({hi, lv.raw_hi, lv.cw_hi});
    }
    const auto& last = levels.back();
    b.lo = lo;
    b.hi = hi;
    b.raw_lo = last.raw_lo;
    b.raw_hi = last.raw_hi;
    b.cw_lo = last.cw_lo;
    b.cw_hi = last.cw_hi;
    b.variational_lo = -kInf;
    b.tail = static_cast<double>(tail);
    return b;
}

PressureBracket induced_pressure_bracket(double beta, double gamma, unsigned level,
                                         const InducedTruncation& t, const InducedOptions& opt) {
    return InducedPressureSolver(beta, t, opt).bracket(gamma, level);
}

Gamma0Result find_gamma0(double beta, const InducedTruncation& t, double tol, const Gamma0Options& opt) {
    if (!(tol > 0)) throw DomainError("tolerance must be positive");
    if (opt.scan_points < 2 || !(opt.scan_lo < opt.scan_hi)) throw DomainError("bad gamma scan range");
    InducedPressureSolver solver(beta, t, opt.induced);
    Gamma0Result res{};
    auto eval = [&](double g) {
        ++res.evaluations;
        return solver.bracket(g, opt.level);
    };
    std::vector<double> grid(opt.scan_points);
    std::vector<PressureBracket> br;
    for (unsigned i = 0; i < opt.scan_points; ++i) {
        grid[i] = opt.scan_lo + (opt.scan_hi - opt.scan_lo) * i / (opt.scan_points - 1);
        br.push_back(eval(grid[i]));
    }
    // Largest scan point with certified positive pressure, smallest one after it with
    // certified non-positive pressure.
    int ia = -1, ib = -1;
    for (unsigned i = 0; i < grid.size(); ++i)
        if (br[i].lo >= 0) ia = static_cast<int>(i);
    for (unsigned i = ia < 0 ? 0 : ia + 1; i < grid.size(); ++i)
        if (br[i].hi <= 0) {
            ib = static_cast<int>(i);
            break;
        }
    if (ia < 0 || ib < 0)
        throw SearchError("no certified sign change of the induced pressure on [" +
                          std::to_string(opt.scan_lo) + ", " + std::to_string(opt.scan_hi) + "]");
    // Lower end: lo(a) >= 0 and lo(a_out) < 0.
    double a = grid[ia], a_out = grid[ia + 1];
    for (unsigned k = 0; k < opt.max_bisections && a_out - a > tol / 4; ++k) {
        const double mid = 0.5 * (a + a_out);
        (eval(mid).lo >= 0 ? a : a_out) = mid;
    }
    // Upper end: hi(b) <= 0 and hi(b_out) > 0.
    double b = grid[ib], b_out = grid[ib - 1];
    b_out = std::max(b_out, a);
    for (unsigned k = 0; k < opt.max_bisections && b - b_out > tol / 4; ++k) {
        const double mid = 0.5 * (b + b_out);
        (eval(mid).hi <= 0 ? b : b_out) = mid;
    }
    res.lo = a;
    res.hi = b;
    res.gamma0 = 0.5 * (a + b);
    res.bracket = eval(res.gamma0);
    return res;
}

namespace {

GibbsRatio ratio_from_matrix(RefMeasure meas, long double s, long double gamma0, long double a,
                             long double b, long double c, long double d, long double len) {
    const long double J = 0.5L / ((c + d) * (c / 2 + d));
    const long double x_lo = (a + 2 * b) / (c + 2 * d);
    const long double mass = meas == RefMeasure::lebesgue_on_half
                                 ? 2 * J
                                 : std::log1p(J / x_lo) / std::log(2.0L);
    const long double lm = std::log(mass) + gamma0 * len;
    return {static_cast<double>(std::exp(lm + s * std::log(c / 2 + d))),
            static_cast<double>(std::exp(lm + s * std::log(c + d))),
            static_cast<double>(std::exp(lm + s * std::log(0.75L * c + d)))};
}

class LogMedian {
public:
    void add(double r) {
        const double x = std::clamp((std::log(r) - kLo) / (kHi - kLo), 0.0, 1.0);
        ++counts_[std::min<std::size_t>(kBins - 1, static_cast<std::size_t>(x * kBins))];
        ++n_;
    }
    double median() const {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < kBins; ++i) {
            acc += counts_[i];
            if (2 * acc >= n_) return std::exp(kLo + (kHi - kLo) * (i + 0.5) / kBins);
        }
        return 0;
    }

private:
    static constexpr double kLo = -12, kHi = 12;
    static constexpr std::size_t kBins = 1u << 21;
    std::vector<std::uint64_t> counts_ = std::vector<std::uint64_t>(kBins, 0);
    std::uint64_t n_ = 0;
};

void finish(GibbsStats& st) {
    if (st.count == 0) return;
    st.C = std::max(st.max_ratio, 1.0 / st.min_ratio);
}

}  // namespace

GibbsRatio gibbs_ratio(RefMeasure m, double beta, double gamma0, const InducedWord& w) {
    const IntMatrix2 H = induced_word_matrix(w);
    return ratio_from_matrix(m, 2.0L * beta, gamma0, H.a.convert_to<long double>(),
                             H.b.convert_to<long double>(), H.c.convert_to<long double>(),
                             H.d.convert_to<long double>(), static_cast<long double>(w.total_length()));
}

GibbsStats local_gibbs_check(RefMeasure m, double beta, double gamma0, const std::vector<InducedWord>& words) {
    GibbsStats st;
    if (words.empty()) return st;
    st.min_ratio = kInf;
    st.max_ratio = 0;
    std::vector<double> mids;
    for (const auto& w : words) {
        const GibbsRatio r = gibbs_ratio(m, beta, gamma0, w);
        if (!(r.lo > 0)) throw DegenerateInputError("zero-mass induced word");
        st.min_ratio = std::min(st.min_ratio, r.lo);
        st.max_ratio = std::max(st.max_ratio, r.hi);
        mids.push_back(r.mid);
        ++st.count;
    }
    std::nth_element(mids.begin(), mids.begin() + mids.size() / 2, mids.end());
    st.median_ratio = mids[mids.size() / 2];
    finish(st);
    return st;
}

GibbsStats local_gibbs_scan(RefMeasure meas, double beta, double gamma0, unsigned letters,
                            Digit p_max, std::uint32_t m_max) {
    if (letters < 1) throw DomainError("word length must be >= 1");
    const auto alphabet = ordered_letters(p_max, m_max);
    std::vector<M64> mats;
    for (const auto& a : alphabet) mats.push_back(letter64(a.p, a.m));
    GibbsStats st;
    st.min_ratio = kInf;
    LogMedian med;
    const long double s = 2.0L * beta;
    std::vector<M64> stack(letters + 1);
    std::vector<std::uint64_t> len(letters + 1, 0);
    std::function<void(unsigned)> rec = [&](unsigned depth) {
        if (depth == letters) {
            const M64& H = stack[depth];
            const GibbsRatio r = ratio_from_matrix(meas, s, gamma0, H.a, H.b, H.c, H.d, len[depth]);
            if (!(r.lo > 0)) throw DegenerateInputError("zero-mass induced word");
            st.min_ratio = std::min(st.min_ratio, r.lo);
            st.max_ratio = std::max(st.max_ratio, r.hi);
            med.add(r.mid);
            ++st.count;
            return;
        }
        for (std::size_t k = 0; k < alphabet.size(); ++k) {
            if (!mul(stack[depth], mats[k], stack[depth + 1]))
                throw DomainError("induced word matrix leaves 64-bit range");
            len[depth + 1] = len[depth] + alphabet[k].m;
            rec(depth + 1);
        }
    };
    rec(0);
    st.median_ratio = med.median();
    finish(st);
    return st;
}

InducedGibbsApprox induced_gibbs_bernoulli(double beta, double gamma, const InducedTruncation& t) {
    const long double s = 2.0L * beta, g = gamma;
    const long double tail = induced_tail_sup(beta, gamma, t);
    if (!std::isfinite(tail))
        throw DomainError("induced normalizer diverges (needs beta > 1/2 and gamma >= 0)");
    InducedGibbsApprox ap;
    ap.beta = beta;
    ap.gamma = gamma;
    ap.truncation = t;
    std::vector<long double> w;
    CompensatedSum S;
    for (Digit p = 2; p <= t.p_max; ++p)
        for (std::uint32_t m = 1; m <= t.m_max; ++m) {
            const long double P = p, mm = m;
            const long double c = 1 + P * (mm - 1), d = P;
            const long double wi = std::exp(-s * std::log(0.75L * c + d) - g * mm);
            ap.letters.push_back({p, m});
            w.push_back(wi);
            S.add(wi);
        }
    const long double norm = S.value() + tail;
    ap.defect = static_cast<double>(tail / norm);
    CompensatedSum R;
    ap.q.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        ap.q[i] = static_cast<double>(w[i] / norm);
        R.add(w[i] / norm * ap.letters[i].m);
    }
    ap.mean_return = static_cast<double>(R.value());
    ap.return_divergent = g < 0 || (g == 0 && !(s > 2));
    if (ap.return_divergent) {
        ap.mean_return_tail = kInf;
    } else {
        // sum_out m sup <= 2^s [p_out sum_{m>=1} (m+1)^(1-s) e^(-gm) + p_in sum_{m>M} ...].
        CompensatedSum in_m;
        for (std::uint32_t m = t.m_max; m >= 1; --m)
            in_m.add(std::pow(static_cast<long double>(m) + 1, 1 - s) * std::exp(-g * m));
        const long double mt = m_tail_weighted(s, g, std::uint64_t{t.m_max} + 1);
        const long double p_in = sum_range_pow(s, 2, t.p_max);
        const long double p_out = zeta_tail_bound(s, t.p_max);
        ap.mean_return_tail =
            static_cast<double>(std::pow(2.0L, s) * (p_out * (in_m.value() + mt) + p_in * mt) / norm);
    }
    return ap;
}

Histogram1D kac_spread(const InducedGibbsApprox& ap, std::size_t bins) {
    if (ap.return_divergent || !std::isfinite(ap.mean_return_tail))
        throw DomainError("mean return time diverges: the spread measure is not normalizable "
                          "(the equilibrium state degenerates to the point mass at 0)");
    if (bins < 1) throw DomainError("need at least one bin");
    Histogram1D h(bins);
    const long double B = static_cast<long double>(bins);
    for (std::size_t i = 0; i < ap.letters.size(); ++i) {
        const InducedLetter& l = ap.letters[i];
        const long double q = ap.q[i];
        if (q == 0) continue;
        const long double P = l.p, mm = l.m;
        const long double a = 1 + (P - 1) * (mm - 1), b = P - 1, c = 1 + P * (mm - 1), d = P;
        const long double x_lo = (a + 2 * b) / (c + 2 * d), x_hi = (a + b) / (c + d);
        const long double lenJ = 0.5L / ((c + d) * (c / 2 + d));
        h.add_uniform(static_cast<double>(x_lo), static_cast<double>(x_hi), static_cast<double>(q));
        // T^k maps J(a) onto [1/(j+2), 1/(j+1)) with j = m - k, via eta -> eta/(j eta + 1).
        for (std::uint32_t j = 1; j < l.m; ++j) {
            const long double J = j;
            const long double y0 = 1 / (J + 2), y1 = 1 / (J + 1);
            auto eta_of = [&](long double y) { return y / (1 - J * y); };
            std::size_t k0 = static_cast<std::size_t>(y0 * B);
            std::size_t k1 = std::min<std::size_t>(bins - 1, static_cast<std::size_t>(y1 * B));
            for (std::size_t k = k0; k <= k1; ++k) {
                const long double u = std::max(y0, k / B), v = std::min(y1, (k + 1) / B);
                if (v <= u) continue;
                const long double e1 = eta_of(u), e2 = eta_of(v);
                // H(e2) - H(e1) without cancellation (det H = 1).
                const long double piece = (e2 - e1) / ((c * e1 + d) * (c * e2 + d)) / lenJ;
                h.add_to_bin(k, static_cast<double>(q * piece));
            }
        }
    }
    h.scale(1.0 / (ap.mean_return + ap.mean_return_tail));
    return h;
}

DisjointnessReport disjointness_check(unsigned total_length, Digit p_max, std::uint32_t m_max) {
    if (total_length < 1) throw DomainError("total length must be >= 1");
    const auto alphabet = ordered_letters(p_max, m_max);
    std::vector<M64> mats;
    for (const auto& a : alphabet) mats.push_back(letter64(a.p, a.m));
    DisjointnessReport rep;
    bool have_prev = false;
    __int128 prev_num = 0, prev_den = 1;
    std::vector<M64> stack(total_length + 1);
    std::function<void(unsigned, unsigned)> rec = [&](unsigned depth, unsigned remaining) {
        if (remaining == 0) {
            const M64& H = stack[depth];
            const __int128 lo_num = static_cast<__int128>(H.a) + 2 * static_cast<__int128>(H.b);
            const __int128 lo_den = static_cast<__int128>(H.c) + 2 * static_cast<__int128>(H.d);
            const __int128 hi_num = static_cast<__int128>(H.a) + H.b;
            const __int128 hi_den = static_cast<__int128>(H.c) + H.d;
            ++rep.words;
            if (have_prev && lo_num * prev_den < prev_num * lo_den) ++rep.overlaps;
            if (!(lo_num * hi_den < hi_num * lo_den)) ++rep.overlaps;  // empty interval
            prev_num = hi_num;
            prev_den = hi_den;
            have_prev = true;
            return;
        }
        for (std::size_t k = 0; k < alphabet.size(); ++k) {
            if (alphabet[k].m > remaining) continue;
            if (!mul(stack[depth], mats[k], stack[depth + 1]))
                throw DomainError("induced word matrix leaves 64-bit range");
            rec(depth + 1, remaining - alphabet[k].m);
        }
    };
    rec(0, total_length);
    return rep;
}

}  // namespace rldp
