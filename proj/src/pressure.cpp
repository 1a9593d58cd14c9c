#include "renyi_ldp/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "renyi_ldp/envelope.hpp"
#include "renyi_ldp/errors.hpp"

namespace rldp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void dfs(unsigned depth, unsigned n, Digit M, std::vector<Digit>& digits, const Mat64& m,
         const std::function<void(const std::vector<Digit>&, const Mat64&)>& visit) {
    if (depth == n) {
        visit(digits, m);
        return;
    }
    for (Digit p = 1; p <= M; ++p) {
        Mat64 next = m;
        if (!next.push(p)) throw DomainError("branch product leaves 64-bit range");
        digits[depth] = p;
        dfs(depth + 1, n, M, digits, next, visit);
    }
}

long double sum_inverse_powers(long double s, Digit M) {
    CompensatedSum acc;
    for (Digit p = M; p >= 1; --p) acc.add(std::pow(static_cast<long double>(p), -s));
    return acc.value();
}

// n * S_out * (S_in + S_out)^(n-1): union over the position of an out-of-range digit.
long double union_tail(unsigned n, long double s_in, long double s_out) {
    if (!std::isfinite(s_out)) return std::numeric_limits<long double>::infinity();
    return n * s_out * std::pow(s_in + s_out, static_cast<long double>(n - 1));
}

}  // namespace

long double zeta_tail_bound(long double s, long double M) {
    if (s <= 1) return std::numeric_limits<long double>::infinity();
    return std::pow(M, 1 - s) / (s - 1);
}

void for_each_word_matrix(unsigned n, Digit max_digit, std::uint64_t budget,
                          const std::function<void(const std::vector<Digit>&, const Mat64&)>& visit) {
    checked_word_count(n, max_digit, budget);
    std::vector<Digit> digits(n);
    dfs(0, n, max_digit, digits, Mat64{}, visit);
}

long double partition_tail(double beta, unsigned n, Digit max_digit) {
    const long double s = 2.0L * beta;
    return union_tail(n, sum_inverse_powers(s, max_digit), zeta_tail_bound(s, max_digit));
}

long double birkhoff_sum(const GeometricPotential& phi, const PeriodicWord& w) {
    return -static_cast<long double>(phi.beta) * word_fixed_point(w.word).log_derivative;
}

double distortion_modulus(const GeometricPotential& phi, unsigned n, Digit max_digit,
                          std::uint64_t budget) {
    long double best = 0;
    for_each_word_matrix(n, max_digit, budget, [&](const std::vector<Digit>&, const Mat64& m) {
        const long double v = std::log(static_cast<long double>(m.c + m.d) / m.d);
        best = std::max(best, v);
    });
    return static_cast<double>(2.0L * phi.beta * best);
}

PartitionSum partition_sum(const GeometricPotential& phi, unsigned n, Digit max_digit,
                           std::uint64_t budget) {
    PartitionSum out;
    out.n = n;
    out.beta = phi.beta;
    out.max_digit = max_digit;
    CompensatedSum acc;
    const long double beta = phi.beta;
    for_each_word_matrix(n, max_digit, budget, [&](const std::vector<Digit>&, const Mat64& m) {
        acc.add(std::exp(-beta * fast_fixed_point(m).log_derivative));
    });
    out.lower = acc.value();
    const long double s = 2.0L * beta;
    out.divergent = !(s > 1);
    out.tail = partition_tail(phi.beta, n, max_digit);
    out.upper = out.lower + out.tail;
    return out;
}

std::vector<PressureBracket> pressure_brackets(const GeometricPotential& phi, unsigned n_max,
                                               Digit max_digit, const PressureOptions& opt) {
    if (n_max < 1) throw DomainError("pressure bracket needs n >= 1");
    const long double beta = phi.beta, s = 2.0L * beta;
    const bool divergent = !(s > 1);
    const long double s_in = sum_inverse_powers(s, max_digit);
    const long double s_out = zeta_tail_bound(s, max_digit);

    std::vector<EnvelopeLevel> env;
    if (!divergent) {
        std::vector<Branch> branches;
        for (Digit p = 1; p <= max_digit; ++p)
            branches.push_back({1.0L, static_cast<long double>(p) - 1, 1.0L, static_cast<long double>(p), 0});
        EnvelopeOperator op(std::move(branches), phi.beta, 0.0, opt.grid, opt.threads);
        env = op.run({1.0}, static_cast<double>(s_out), n_max);
    }

    std::vector<PressureBracket> out;
    double lo_run = -kInf, hi_run = kInf;
    for (unsigned n = 1; n <= n_max; ++n) {
        CompensatedSum sup_sum, inf_sum;
        long double best_orbit = -std::numeric_limits<long double>::infinity();
        for_each_word_matrix(n, max_digit, opt.budget, [&](const std::vector<Digit>&, const Mat64& m) {
            sup_sum.add(std::exp(-s * std::log(static_cast<long double>(m.d))));
            inf_sum.add(std::exp(-s * std::log(static_cast<long double>(m.c + m.d))));
            best_orbit = std::max(best_orbit, -beta * fast_fixed_point(m).log_derivative / n);
        });
        PressureBracket b;
        b.n = n;
        b.divergent = divergent;
        b.tail = static_cast<double>(union_tail(n, s_in, s_out));
        b.raw_lo = static_cast<double>(std::log(inf_sum.value()) / n);
        b.raw_hi = divergent ? kInf : static_cast<double>(std::log(sup_sum.value() + b.tail) / n);
        b.variational_lo = static_cast<double>(best_orbit);
        if (divergent) {
            b.cw_lo = -kInf;
            b.cw_hi = kInf;
        } else {
            b.cw_lo = env[n - 1].cw_lo;
            b.cw_hi = env[n - 1].cw_hi;
        }
        lo_run = std::max({lo_run, b.raw_lo, b.cw_lo, b.variational_lo});
        hi_run = std::min({hi_run, b.raw_hi, b.cw_hi});
        b.lo = lo_run;
        b.hi = hi_run;
        out.push_back(b);
    }
    return out;
}

PressureBracket pressure_bracket(const GeometricPotential& phi, unsigned n, Digit max_digit,
                                 const PressureOptions& opt) {
    return pressure_brackets(phi, n, max_digit, opt).back();
}

BlockMeasureStats block_bernoulli(const GeometricPotential& phi, const std::vector<Word>& H,
                                  double p_ref, const BlockOptions& opt,
                                  const std::vector<long double>& weights_override) {
    if (H.empty()) throw DomainError("block_bernoulli needs a non-empty word set");
    if (!weights_override.empty() && weights_override.size() != H.size())
        throw DomainError("weight override size mismatch");
    const std::size_t n = H.front().size();
    for (const Word& w : H)
        if (w.size() != n) throw DomainError("block words must share one length");

    BlockMeasureStats st;
    st.n = static_cast<unsigned>(n);
    st.words = H;
    st.p_ref = p_ref;
    const long double s = 2.0L * phi.beta;
    const std::size_t k = H.size();
    std::vector<long double> log_sup(k), log_inf(k), a(k), b(k), c(k), d(k);
    for (std::size_t i = 0; i < k; ++i) {
        const IntMatrix2 M = word_matrix(H[i]);
        a[i] = M.a.convert_to<long double>();
        b[i] = M.b.convert_to<long double>();
        c[i] = M.c.convert_to<long double>();
        d[i] = M.d.convert_to<long double>();
        log_sup[i] = -s * std::log(d[i]);
        log_inf[i] = -s * std::log(c[i] + d[i]);
    }
    // Unnormalized weights in log form, then q by log-sum-exp.
    std::vector<long double> lw(k);
    for (std::size_t i = 0; i < k; ++i)
        lw[i] = weights_override.empty() ? log_sup[i] : std::log(weights_override[i]);
    const long double mx = *std::max_element(lw.begin(), lw.end());
    CompensatedSum z;
    for (std::size_t i = 0; i < k; ++i) z.add(std::exp(lw[i] - mx));
    const long double log_z = mx + std::log(z.value());
    st.probabilities.resize(k);
    CompensatedSum ent, lower, upper, sup_all;
    long double dn = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const long double q = std::exp(lw[i] - log_z);
        st.probabilities[i] = static_cast<double>(q);
        if (q > 0) ent.add(-q * (lw[i] - log_z));
        lower.add(q * log_inf[i]);
        upper.add(q * log_sup[i]);
        dn = std::max(dn, log_sup[i] - log_inf[i]);
    }
    const long double mxs = *std::max_element(log_sup.begin(), log_sup.end());
    for (std::size_t i = 0; i < k; ++i) sup_all.add(std::exp(log_sup[i] - mxs));
    st.log_sum_sup = static_cast<double>(mxs + std::log(sup_all.value()));
    st.entropy_rate = static_cast<double>(ent.value() / n);
    st.mean_potential_lower = static_cast<double>(lower.value() / n);
    st.mean_potential_upper = static_cast<double>(upper.value() / n);
    st.distortion = static_cast<double>(dn);

    // Mean of g = sum_w q_w (-s log(c_w eta + d_w)) under the stationary law nu of the IFS
    // {G_w, q_w}: iterate P f = sum_w q_w f o G_w on a grid function with linear
    // interpolation. nu(g) = nu(P^L g) lies in [min P^L g, max P^L g]; the estimate is
    // P^L g at the fixed point of the heaviest word.
    const unsigned bins = std::max(2u, opt.bins);
    const unsigned nodes = bins + 1;
    std::vector<long double> f(nodes), next(nodes);
    std::vector<std::uint32_t> cell(k * nodes);
    std::vector<double> frac(k * nodes);
    for (unsigned j = 0; j < nodes; ++j) {
        const long double eta = static_cast<long double>(j) / bins;
        CompensatedSum g;
        for (std::size_t i = 0; i < k; ++i) {
            g.add(st.probabilities[i] * (-s * std::log(c[i] * eta + d[i])));
            const long double x = (a[i] * eta + b[i]) / (c[i] * eta + d[i]) * bins;
            const auto cl = std::min<std::uint32_t>(bins - 1, static_cast<std::uint32_t>(x));
            cell[i * nodes + j] = cl;
            frac[i * nodes + j] = static_cast<double>(x - cl);
        }
        f[j] = g.value();
    }
    const std::size_t top = static_cast<std::size_t>(
        std::max_element(st.probabilities.begin(), st.probabilities.end()) - st.probabilities.begin());
    const long double x0 = word_fixed_point(H[top]).xi * bins;
    auto eval = [&](const std::vector<long double>& v) {
        const auto cl = std::min<std::uint32_t>(bins - 1, static_cast<std::uint32_t>(x0));
        const long double t = x0 - cl;
        return v[cl] + t * (v[cl + 1] - v[cl]);
    };
    for (unsigned it = 0; it < opt.max_iterations; ++it) {
        const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
        if (*hi - *lo < opt.tolerance) break;
        for (unsigned j = 0; j < nodes; ++j) {
            long double acc = 0;
            for (std::size_t i = 0; i < k; ++i) {
                const double q = st.probabilities[i];
                if (q == 0) continue;
                const std::uint32_t cl = cell[i * nodes + j];
                const double t = frac[i * nodes + j];
                acc += q * (f[cl] + t * (f[cl + 1] - f[cl]));
            }
            next[j] = acc;
        }
        f.swap(next);
    }
    const long double mean_value = eval(f);
    st.mean_potential = static_cast<double>(std::clamp(mean_value / n, lower.value() / n, upper.value() / n));
    st.F_value = st.entropy_rate + st.mean_potential - p_ref;
    st.F_lower = st.entropy_rate + st.mean_potential_lower - p_ref;
    const double lhs = static_cast<double>(n) * (st.entropy_rate + st.mean_potential_lower);
    const double rhs = st.log_sum_sup - st.distortion;
    st.horse_margin = lhs - rhs;
    st.horse_holds = st.horse_margin >= -1e-12 * std::max(1.0, std::fabs(rhs));
    return st;
}

}  // namespace rldp
