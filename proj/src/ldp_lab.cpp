#include "renyi_ldp/ldp_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "renyi_ldp/errors.hpp"

namespace rldp {

namespace {

constexpr long double kLInf = std::numeric_limits<long double>::infinity();

// Upper bound on sum_{p = A+1}^{B} p^(-s) for integers A < B; B may be +inf.
long double power_sum_upper(long double s, long double A, long double B) {
    if (!(B > A)) return 0;
    constexpr long double kExact = 2e5L;
    long double stop = A;
    CompensatedSum acc;
    if (A < 1e15L) {
        stop = std::min(B, A + kExact);
        for (long double p = stop; p >= A + 1; p -= 1) acc.add(std::pow(p, -s));
    }
    if (!(B > stop)) return acc.value();
    if (!(s > 1) && !std::isfinite(B)) return kLInf;
    // sum_{p = stop+1}^{B} p^(-s) <= integral of x^(-s) over [stop, B].
    long double rest;
    if (s == 1) {
        rest = std::log(B / stop);
    } else {
        const long double hi_term = std::isfinite(B) ? std::pow(B, 1 - s) : 0.0L;
        rest = (std::pow(stop, 1 - s) - hi_term) / (s - 1);
    }
    return acc.value() + rest;
}

unsigned escape_count_digits(const Digit* x, unsigned n, const CompactSet& G, std::vector<char>& cover) {
    cover.assign(n, 0);
    unsigned m = 0;
    for (unsigned q = 0; q < n; ++q) {
        const unsigned l = G.level(x[q], n);
        for (unsigned t = 0; t < l; ++t) {
            const unsigned j = (q + n - t) % n;
            if (!cover[j]) {
                cover[j] = 1;
                ++m;
            }
        }
    }
    return m;
}

}  // namespace

Ensemble::Ensemble(double beta, unsigned n, Digit max_digit, std::uint64_t budget)
    : beta_(beta), n_(n), max_digit_(max_digit) {
    if (!(beta > 0.5)) throw DomainError("ensembles need beta > 1/2");
    total_ = checked_word_count(n, max_digit, budget);
    pow_.assign(n + 1, 1);
    for (unsigned j = 1; j <= n; ++j) pow_[j] = pow_[j - 1] * max_digit;
    xi_.reserve(total_);
    weight_.reserve(total_);
    CompensatedSum z;
    const long double b = beta;
    for_each_word_matrix(n, max_digit, budget, [&](const std::vector<Digit>&, const Mat64& m) {
        const FastPoint fp = fast_fixed_point(m);
        const long double w = std::exp(-b * fp.log_derivative);
        xi_.push_back(static_cast<double>(fp.xi));
        weight_.push_back(static_cast<double>(w));
        z.add(w);
    });
    z_lower_ = z.value();
    tail_ = partition_tail(beta, n, max_digit);
}

Word Ensemble::word(std::size_t i) const {
    std::vector<Digit> d(n_);
    for (unsigned k = n_; k-- > 0;) {
        d[k] = static_cast<Digit>(i % max_digit_) + 1;
        i /= max_digit_;
    }
    return Word(std::move(d));
}

std::size_t Ensemble::index_of(const Word& w) const {
    if (w.size() != n_) throw DomainError("word length does not match the ensemble period");
    std::size_t i = 0;
    for (std::size_t k = 0; k < n_; ++k) {
        if (w[k] > max_digit_) throw DomainError("word digit exceeds the ensemble truncation");
        i = i * max_digit_ + (w[k] - 1);
    }
    return i;
}

std::size_t Ensemble::rotate(std::size_t i, unsigned k) const {
    k %= n_;
    if (k == 0) return i;
    const std::size_t tail = pow_[n_ - k];
    return (i % tail) * pow_[k] + i / tail;
}

std::vector<double> Ensemble::orbit(std::size_t i) const {
    std::vector<double> out(n_);
    for (unsigned k = 0; k < n_; ++k) out[k] = xi_[rotate(i, k)];
    return out;
}

Ensemble build_ensemble(double beta, unsigned n, Digit max_digit, std::uint64_t budget) {
    return Ensemble(beta, n, max_digit, budget);
}

CompactSet::CompactSet(std::vector<long double> thresholds) : N_(std::move(thresholds)) {
    if (N_.empty()) throw DomainError("compact set needs at least one threshold");
    if (N_.front() < 1) throw DomainError("thresholds must be >= 1");
    for (std::size_t i = 1; i < N_.size(); ++i)
        if (N_[i] < N_[i - 1]) throw DomainError("thresholds must be non-decreasing");
}

long double CompactSet::N(std::size_t i) const {
    if (i < 1) throw DomainError("thresholds are 1-based");
    return i <= N_.size() ? N_[i - 1] : N_.back();
}

unsigned CompactSet::level(long double p, unsigned cap) const {
    if (p > N_.back()) return cap;
    const auto it = std::lower_bound(N_.begin(), N_.end(), p);  // first N_i >= p
    return std::min<unsigned>(cap, static_cast<unsigned>(it - N_.begin()));
}

unsigned escape_count(const Word& w, const CompactSet& G) {
    std::vector<char> cover;
    return escape_count_digits(w.digits().data(), static_cast<unsigned>(w.size()), G, cover);
}

Itinerary itinerary(const Word& w, const CompactSet& G) {
    const unsigned n = static_cast<unsigned>(w.size());
    std::vector<char> cover;
    escape_count_digits(w.digits().data(), n, G, cover);
    Itinerary it;
    auto escapes = [&](unsigned i) { return cover[i % n] != 0; };
    auto r_of = [&](unsigned i) {
        for (unsigned k = 1; k <= 2 * n; ++k)
            if (static_cast<long double>(w[(i + k - 1) % n]) > G.N(k)) return k;
        throw std::logic_error("escaping shift without a finite escape time");
    };
    unsigned i = 0;
    while (i < n && !escapes(i)) ++i;
    while (i < n) {
        const unsigned r = r_of(i);
        it.n_j.push_back(i);
        it.r_j.push_back(r);
        i += r;
        while (i < 2 * n && !escapes(i)) ++i;
        if (i >= 2 * n) break;
    }
    return it;
}

long double EscapeStratification::grand_total() const {
    CompensatedSum s;
    for (long double t : totals) s.add(t);
    return s.value();
}

EscapeStratification escape_stratify(const Ensemble& e, const CompactSet& G) {
    EscapeStratification st;
    st.n = e.n();
    std::vector<CompensatedSum> acc(e.n() + 1);
    st.counts.assign(e.n() + 1, 0);
    std::vector<Digit> digits(e.n());
    std::vector<char> cover;
    for (std::size_t i = 0; i < e.size(); ++i) {
        std::size_t idx = i;
        for (unsigned k = e.n(); k-- > 0;) {
            digits[k] = static_cast<Digit>(idx % e.max_digit()) + 1;
            idx /= e.max_digit();
        }
        const unsigned m = escape_count_digits(digits.data(), e.n(), G, cover);
        acc[m].add(e.weight(i));
        ++st.counts[m];
    }
    for (auto& a : acc) st.totals.push_back(a.value());
    return st;
}

long double ref_tail_mass(RefMeasure m, long double N) {
    if (N < 1) throw DomainError("tail threshold must be >= 1");
    if (m == RefMeasure::lebesgue_on_half) return 2 / (N + 1);
    return std::log1p(1 / N) / std::log(2.0L);
}

CompactSet solve_hypothesis(RefMeasure meas, double delta, unsigned count, Digit p_star) {
    if (!(delta > 0 && delta < 1)) throw DomainError("delta must lie in (0,1)");
    if (count < 1) throw DomainError("need at least one threshold");
    std::vector<long double> N;
    long double prev = std::max<long double>(1, static_cast<long double>(p_star) - 1);
    for (unsigned i = 1; i <= count; ++i) {
        const long double t = std::exp(2.0L * i * std::log(static_cast<long double>(delta)));
        long double cand = meas == RefMeasure::lebesgue_on_half ? std::ceil(2 / t - 1)
                                                                 : std::ceil(1 / std::expm1(t * std::log(2.0L)));
        cand = std::max(cand, prev);
        // Settle the rounding of the closed forms.
        if (cand < 1e15L) {
            while (cand > prev && ref_tail_mass(meas, cand - 1) <= t) cand -= 1;
            while (ref_tail_mass(meas, cand) > t) cand += 1;
        } else {
            while (ref_tail_mass(meas, cand) > t) cand *= 1 + 8 * std::numeric_limits<long double>::epsilon();
        }
        N.push_back(cand);
        prev = cand;
    }
    return CompactSet(std::move(N));
}

std::vector<long double> escape_sum_bounds(double beta, unsigned n, const CompactSet& G) {
    if (n < 1) throw DomainError("n must be >= 1");
    const long double s = 2.0L * beta;
    // W[l]: sum of p^(-s) over digits of level l (p in (N_l, N_(l+1)], level n open above).
    std::vector<long double> W(n + 1);
    W[0] = power_sum_upper(s, 0, G.N(1));
    for (unsigned l = 1; l <= n; ++l)
        W[l] = power_sum_upper(s, G.N(l), l < n ? G.N(l + 1) : kLInf);
    std::vector<long double> out(n + 1, 0);
    // The word is read right to left so that a level-l digit covers itself and the
    // next l-1 positions; carry = positions still to cover.
    using Table = std::vector<std::vector<long double>>;
    for (unsigned c0 = 0; c0 < n; ++c0) {
        Table dp(n + 1, std::vector<long double>(n + 1, 0));
        dp[c0][0] = 1;
        for (unsigned q = 0; q < n; ++q) {
            Table nx(n + 1, std::vector<long double>(n + 1, 0));
            for (unsigned c = 0; c <= n; ++c)
                for (unsigned m = 0; m <= q; ++m) {
                    const long double v = dp[c][m];
                    if (v == 0) continue;
                    for (unsigned l = 0; l <= n; ++l) {
                        if (W[l] == 0) continue;
                        const unsigned cc = std::max(c, l);
                        const unsigned covered = cc >= 1 ? 1 : 0;
                        nx[cc >= 1 ? cc - 1 : 0][m + covered] += v * W[l];
                    }
                }
            dp.swap(nx);
        }
        for (unsigned m = 0; m <= n; ++m) out[m] += dp[c0][m];
    }
    return out;
}

ExpoReport expo_bound_check(double beta, unsigned n, const CompactSet& G, double delta, double gamma0,
                            Digit max_digit, RefMeasure measure, std::uint64_t budget) {
    if (!(delta > 0 && delta <= 0.2)) throw DomainError("delta must lie in (0, 1/5]");
    if (n < 1) throw DomainError("n must be >= 1");
    ExpoReport rep;
    rep.n = n;
    rep.beta = beta;
    rep.delta = delta;
    rep.gamma0 = gamma0;
    rep.max_digit = max_digit;
    rep.hypothesis_ok = G.N(1) >= 1;
    // Only N_1..N_n influence escape counts of period-n points.
    for (unsigned i = 1; i <= n; ++i) {
        HypothesisRow h;
        h.i = i;
        h.N = G.N(i);
        h.tail_mass = ref_tail_mass(measure, h.N);
        h.bound = std::exp(2.0L * i * std::log(static_cast<long double>(delta)));
        h.ok = h.tail_mass <= h.bound;
        rep.hypothesis_ok = rep.hypothesis_ok && h.ok;
        rep.hypothesis.push_back(h);
    }
    const auto bounds = escape_sum_bounds(beta, n, G);
    rep.stratum0_bound = bounds[0];

    std::vector<long double> trunc(n + 1, 0);
    bool have_trunc = true;
    if (static_cast<long double>(max_digit) <= G.N(1)) {
        // Every truncated digit has level 0, so no truncated point escapes.
    } else {
        try {
            Ensemble e(beta, n, max_digit, budget);
            const auto st = escape_stratify(e, G);
            trunc = st.totals;
        } catch (const BudgetError&) {
            have_trunc = false;
        }
    }
    const long double base = std::pow(2.0L, n) * n * std::exp(static_cast<long double>(gamma0) * n) /
                             (1 - 4.0L * delta);
    rep.all_pass = rep.hypothesis_ok;
    for (unsigned m = 1; m <= n; ++m) {
        ExpoRow r;
        r.m = m;
        r.lhs_bound = bounds[m];
        r.lhs_truncated = trunc[m];
        r.truncated_available = have_trunc;
        r.rhs = base * std::pow(4.0L * delta, static_cast<long double>(m));
        r.margin = r.lhs_bound > 0 ? static_cast<double>(std::log(r.rhs / r.lhs_bound))
                                   : std::numeric_limits<double>::infinity();
        r.pass = r.lhs_bound < r.rhs && (!have_trunc || r.lhs_truncated <= r.lhs_bound);
        rep.all_pass = rep.all_pass && r.pass;
        rep.rows.push_back(r);
    }
    return rep;
}

double tightness_delta(unsigned ell) {
    if (ell < 1) throw DomainError("ell must be >= 1");
    const long double E = std::exp(2.0L * ell * ell);
    auto ok = [&](long double d) {
        const long double x = 4 * d * E;
        if (x >= 1) return false;
        return x / ((1 - x) * (1 - 4 * d)) <= 1;
    };
    if (ok(0.2L)) return 0.2;
    // x = 0.4 always satisfies the condition; x = 1 never does.
    long double lo = 0.1L / E, hi = std::min(0.2L, 0.25L / E);
    for (int k = 0; k < 200; ++k) {
        const long double mid = 0.5L * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return static_cast<double>(lo);
}

std::vector<TightnessRow> tightness_table(double beta, unsigned n_min, unsigned n_max, unsigned ell_min,
                                          unsigned ell_max, Digit max_digit,
                                          RefMeasure measure, std::uint64_t budget) {
    if (n_min < 1 || n_max < n_min || ell_min < 1 || ell_max < ell_min)
        throw DomainError("bad tightness ranges");
    if (ell_max > 12) throw DomainError("ell_max above 12 overflows the thresholds");
    const long double s = 2.0L * beta;
    std::vector<TightnessRow> rows;
    for (unsigned n = n_min; n <= n_max; ++n) {
        Ensemble e(beta, n, max_digit, budget);
        // Per-ell sets, bounds and truncated outside masks for ell in [ell_min, ell_stop].
        const unsigned ell_stop = std::max(ell_max, 12u);
        std::vector<long double> bound(ell_stop + 1, 0);
        std::vector<std::vector<char>> outside(ell_stop + 1);
        std::vector<CompactSet> sets;
        std::vector<double> deltas(ell_stop + 1);
        std::vector<char> cover;
        std::vector<Digit> digits(n);
        for (unsigned l = ell_min; l <= ell_stop; ++l) {
            deltas[l] = tightness_delta(l);
            const CompactSet G = solve_hypothesis(measure, deltas[l], n);
            sets.push_back(G);
            const auto eb = escape_sum_bounds(beta, n, G);
            CompensatedSum acc;
            for (unsigned m = 1; m <= n; ++m)
                if (static_cast<long double>(m) * l > n) acc.add(eb[m]);
            bound[l] = acc.value();
            outside[l].assign(e.size(), 0);
            if (static_cast<long double>(max_digit) <= G.N(1)) continue;
            for (std::size_t i = 0; i < e.size(); ++i) {
                std::size_t idx = i;
                for (unsigned k = n; k-- > 0;) {
                    digits[k] = static_cast<Digit>(idx % max_digit) + 1;
                    idx /= max_digit;
                }
                const unsigned m = escape_count_digits(digits.data(), n, G, cover);
                outside[l][i] = static_cast<long double>(m) * l > n;
            }
        }
        // Beyond ell_stop an escape needs a digit above N_1(ell): union bound over positions.
        long double far = 0;
        {
            const long double all = power_sum_upper(s, 0, kLInf);
            for (unsigned l = ell_stop + 1; l < ell_stop + 64; ++l) {
                const long double N1 = 2 / std::exp(2.0L * std::log(static_cast<long double>(tightness_delta(l))));
                if (!std::isfinite(N1)) break;
                const long double term = n * power_sum_upper(s, N1, kLInf) * std::pow(all, n - 1.0L);
                far += term;
                if (term == 0) break;
            }
        }
        for (unsigned L = ell_min; L <= ell_max; ++L) {
            TightnessRow row;
            row.ell = L;
            row.n = n;
            row.delta = deltas[L];
            row.N1 = sets[L - ell_min].N(1);
            CompensatedSum out_mass;
            for (std::size_t i = 0; i < e.size(); ++i) {
                bool out = false;
                for (unsigned l = L; l <= ell_stop && !out; ++l) out = outside[l][i];
                if (out) out_mass.add(e.weight(i));
            }
            CompensatedSum b;
            for (unsigned l = L; l <= ell_stop; ++l) b.add(bound[l]);
            b.add(far);
            row.outside_truncated = static_cast<double>(out_mass.value() / e.z_lower());
            row.outside_bound = static_cast<double>(std::min<long double>(1, b.value() / e.z_lower()));
            row.log_rate = std::log(row.outside_bound) / n;
            rows.push_back(row);
        }
    }
    return rows;
}

double theoremC_functional(const Ensemble& e, const Observable& f) {
    CompensatedSum acc;
    const unsigned n = e.n();
    for (std::size_t i = 0; i < e.size(); ++i) {
        long double avg = 0;
        for (unsigned k = 0; k < n; ++k) avg += f(e.xi(e.rotate(i, k)));
        acc.add(e.weight(i) * avg / n);
    }
    return static_cast<double>(acc.value() / e.z_lower());
}

CorollaryValues corollary_functionals(const Ensemble& e, const Observable& phi, const Observable& psi,
                                      const Observable& pi1, const Observable& pi2, const Observable& f) {
    double psi_min = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 4096; ++k) psi_min = std::min(psi_min, psi((k + 0.5) / 4096));
    for (std::size_t i = 0; i < e.size(); ++i) psi_min = std::min(psi_min, psi(e.xi(i)));
    if (!(psi_min > 0)) throw DomainError("corollary (b) needs inf psi > 0");
    const unsigned n = e.n();
    CompensatedSum A, B, C;
    std::vector<double> u(n), v(n);
    for (std::size_t i = 0; i < e.size(); ++i) {
        long double sphi = 0, spsi = 0;
        for (unsigned k = 0; k < n; ++k) {
            const double x = e.xi(e.rotate(i, k));
            sphi += phi(x);
            spsi += psi(x);
            u[k] = pi1(x);
            v[k] = pi2(x);
        }
        long double conv = 0;
        for (unsigned k1 = 0; k1 < n; ++k1)
            for (unsigned k2 = 0; k2 < n; ++k2) conv += f(u[k1] + v[k2]);
        const long double w = e.weight(i);
        A.add(w * sphi * spsi / (static_cast<long double>(n) * n));
        B.add(w * sphi / spsi);
        C.add(w * conv / (static_cast<long double>(n) * n));
    }
    const long double z = e.z_lower();
    return {static_cast<double>(A.value() / z), static_cast<double>(B.value() / z),
            static_cast<double>(C.value() / z)};
}

Histogram1D ensemble_histogram(const Ensemble& e, std::size_t bins) {
    Histogram1D h(bins);
    const double z = static_cast<double>(e.z_lower());
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double w = e.weight(i) / z / e.n();
        for (unsigned k = 0; k < e.n(); ++k) h.add_point(e.xi(e.rotate(i, k)), w);
    }
    return h;
}

std::vector<RatePoint> rate_profile(double beta, const Observable& psi, const std::vector<double>& t_grid,
                                    unsigned n, Digit max_digit, double p_ref, const BlockOptions& opt,
                                    std::uint64_t budget) {
    const GeometricPotential phi{beta};
    const std::vector<Word> H = enumerate_words(n, max_digit, budget);
    std::vector<long double> spsi(H.size()), log_sup(H.size());
    for (std::size_t i = 0; i < H.size(); ++i) {
        long double acc = 0;
        for (unsigned k = 0; k < n; ++k) acc += psi(static_cast<double>(word_fixed_point(H[i].rotated(k)).xi));
        spsi[i] = acc;
        log_sup[i] = std::log(potential_bounds(phi, H[i]).sup);
    }
    std::vector<RatePoint> out;
    for (double t : t_grid) {
        std::vector<long double> lw(H.size());
        for (std::size_t i = 0; i < H.size(); ++i) lw[i] = log_sup[i] + t * spsi[i];
        const long double mx = *std::max_element(lw.begin(), lw.end());
        std::vector<long double> w(H.size());
        for (std::size_t i = 0; i < H.size(); ++i) w[i] = std::exp(lw[i] - mx);
        const BlockMeasureStats st = block_bernoulli(phi, H, p_ref, opt, w);
        RatePoint rp;
        rp.t = t;
        CompensatedSum sv;
        for (std::size_t i = 0; i < H.size(); ++i) sv.add(st.probabilities[i] * spsi[i] / n);
        rp.s = static_cast<double>(sv.value());
        rp.F_lower = st.F_lower;
        rp.F_value = st.F_value;
        rp.entropy = st.entropy_rate;
        out.push_back(rp);
    }
    return out;
}

}  // namespace rldp
