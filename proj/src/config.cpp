#include "renyi_ldp/config.hpp"

#include <charconv>
#include <sstream>

#include "renyi_ldp/errors.hpp"
#include "renyi_ldp/renyi.hpp"

namespace rldp {

namespace {

// Shortest round-trip decimal form.
std::string num(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

void require(bool ok, const char* what) {
    if (!ok) throw UsageError(std::string("invalid configuration: ") + what);
}

}  // namespace

void validate(const RunConfig& c) {
    require(c.beta > 0, "beta > 0");
    require(c.n >= 1, "n >= 1");
    require(c.n_min >= 1 && c.n_min <= c.n_max, "1 <= n_min <= n_max");
    require(c.max_digit >= 1, "max_digit >= 1");
    require(c.p_max >= 2 && c.m_max >= 1, "p_max >= 2 and m_max >= 1");
    require(c.level >= 1 && c.level <= 3, "level in {1,2,3}");
    require(c.tol > 0, "tol > 0");
    require(c.precision_bits >= 64 && c.precision_bits <= 4096, "precision_bits in [64, 4096]");
    require(c.format.empty() || c.format == "csv" || c.format == "json", "format in {csv, json}");
    require(c.budget >= 1, "budget >= 1");
    require(c.threads >= 1, "threads >= 1");
    require(c.grid >= 2 && c.grid <= 65535, "grid in [2, 65535]");
    require(c.delta > 0 && c.delta <= 0.2, "delta in (0, 1/5]");
    require(c.eps > 0 && c.eps < 1, "eps in (0, 1)");
    require(c.bins >= 1, "bins >= 1");
    require(c.t_steps >= 1 && c.t_min <= c.t_max, "t_steps >= 1 and t_min <= t_max");
    require(c.ell_min >= 1 && c.ell_min <= c.ell_max, "1 <= ell_min <= ell_max");
    try {
        parse_ref_measure(c.measure);
    } catch (const std::exception&) {
        require(false, "measure in {lebesgue, log_density}");
    }
}

std::string config_echo(const RunConfig& c) {
    std::ostringstream o;
    o << "beta=" << num(c.beta) << ";n=" << c.n << ";n_min=" << c.n_min << ";n_max=" << c.n_max
      << ";max_digit=" << c.max_digit << ";p_max=" << c.p_max << ";m_max=" << c.m_max << ";gamma=";
    if (c.gamma) o << num(*c.gamma);
    else o << "auto";
    o << ";level=" << c.level << ";tol=" << num(c.tol) << ";precision_bits=" << c.precision_bits
      << ";format=" << c.format << ";budget=" << c.budget << ";threads=" << c.threads << ";grid=" << c.grid
      << ";measure=" << c.measure << ";delta=" << num(c.delta) << ";eps=" << num(c.eps) << ";bins=" << c.bins
      << ";p_ref=" << num(c.p_ref) << ";t_min=" << num(c.t_min) << ";t_max=" << num(c.t_max) << ";t_steps=" << c.t_steps
      << ";ell_min=" << c.ell_min << ";ell_max=" << c.ell_max << ";word=" << c.word;
    return o.str();
}

}  // namespace rldp
