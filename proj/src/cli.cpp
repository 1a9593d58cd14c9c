#include "renyi_ldp/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "renyi_ldp/config.hpp"
#include "renyi_ldp/errors.hpp"
#include "renyi_ldp/inducing.hpp"
#include "renyi_ldp/ldp_lab.hpp"
#include "renyi_ldp/pressure.hpp"
#include "renyi_ldp/renyi.hpp"

namespace rldp {

namespace {

using nlohmann::ordered_json;

// Header plus rows of scalar JSON cells; rendered as CSV or as one flat JSON object per row.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<ordered_json>> rows;

    void add(std::vector<ordered_json> row) {
        if (row.size() != columns.size()) throw std::logic_error("row width does not match the header");
        rows.push_back(std::move(row));
    }
};

std::string csv_cell(const ordered_json& v) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) {
            if (ch == '"') q += '"';
            q += ch;
        }
        return q + "\"";
    }
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return v.dump();
    if (v.is_number_float()) {
        const double x = v.get<double>();
        if (std::isnan(x)) return "nan";
        if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
        char buf[64];
        const auto r = std::to_chars(buf, buf + sizeof buf, x);
        return std::string(buf, r.ptr);
    }
    return "";
}

void emit(const Table& t, const std::string& format, const RunConfig& cfg, std::ostream& out) {
    if (format == "json") {
        for (const auto& row : t.rows) {
            ordered_json obj;
            obj["config"] = config_echo(cfg);
            for (std::size_t k = 0; k < row.size(); ++k) obj[t.columns[k]] = row[k];
            out << obj.dump() << '\n';
        }
        return;
    }
    out << "# " << config_echo(cfg) << '\n';
    for (std::size_t k = 0; k < t.columns.size(); ++k) out << (k ? "," : "") << t.columns[k];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << csv_cell(row[k]);
        out << '\n';
    }
}

double ld(long double x) { return static_cast<double>(x); }

RefMeasure measure_of(const RunConfig& c) { return parse_ref_measure(c.measure); }

InducedTruncation truncation_of(const RunConfig& c) { return {c.p_max, c.m_max}; }

// gamma from the configuration, or the midpoint of a solved enclosure.
double gamma_of(const RunConfig& c) {
    if (c.gamma) return *c.gamma;
    Gamma0Options opt;
    opt.level = c.level;
    opt.induced.threads = c.threads;
    return find_gamma0(c.beta, truncation_of(c), c.tol, opt).gamma0;
}

// 1 on [0, 0.9 eps], linear down to 0 at eps.
Observable smoothed_indicator(double eps) {
    return [eps](double x) {
        const double knee = 0.9 * eps;
        if (x <= knee) return 1.0;
        if (x >= eps) return 0.0;
        return (eps - x) / (eps - knee);
    };
}

std::string letters_str(const InducedWord& w) {
    std::string s;
    for (std::size_t k = 0; k < w.letters.size(); ++k) {
        if (k) s += ' ';
        s += std::to_string(w.letters[k].p) + ":" + std::to_string(w.letters[k].m);
    }
    return s;
}

Table cmd_periodic(const RunConfig& c) {
    Table t{{"word", "surd", "xi", "derivative", "weight", "rel_err"}, {}};
    std::vector<Word> words;
    if (!c.word.empty()) words.push_back(parse_word(c.word));
    else words = enumerate_words(c.n, c.max_digit, c.budget);
    PrecisionScope scope(c.precision_bits);
    const HighFloat beta = c.beta;
    const double rel_err = std::ldexp(1.0, -static_cast<int>(c.precision_bits) + 8);
    for (const auto& w : words) {
        const PeriodicPoint pt = periodic_point(PeriodicWord{w}, c.precision_bits);
        const HighFloat weight = boost::multiprecision::pow(pt.derivative, -beta);
        t.add({w.str(), pt.xi.str(), pt.xi.decimal(20), static_cast<double>(pt.derivative),
               static_cast<double>(weight), rel_err});
    }
    return t;
}

Table cmd_pressure(const RunConfig& c) {
    const GeometricPotential phi{c.beta};
    PressureOptions opt;
    opt.grid = c.grid;
    opt.threads = c.threads;
    opt.budget = c.budget;
    const PressureBracket b = pressure_bracket(phi, c.n, c.max_digit, opt);
    const PartitionSum z = partition_sum(phi, c.n, c.max_digit, c.budget);
    const double dn = distortion_modulus(phi, c.n, c.max_digit, c.budget);
    Table t{{"beta", "n", "max_digit", "lo", "hi", "width", "tail", "Dn", "Zn_lower", "divergent"}, {}};
    t.add({c.beta, c.n, c.max_digit, b.lo, b.hi, b.width(), ld(z.tail), dn, ld(z.lower), b.divergent});
    return t;
}

Table cmd_gamma0(const RunConfig& c) {
    Gamma0Options opt;
    opt.level = c.level;
    opt.induced.threads = c.threads;
    const Gamma0Result g = find_gamma0(c.beta, truncation_of(c), c.tol, opt);
    double defect = std::numeric_limits<double>::infinity();
    try {
        defect = induced_gibbs_bernoulli(c.beta, g.gamma0, truncation_of(c)).defect;
    } catch (const DomainError&) {
    }
    Table t{{"beta", "p_max", "m_max", "gamma0", "lo", "hi", "width", "defect", "pressure_lo", "pressure_hi",
             "evaluations"},
            {}};
    t.add({c.beta, c.p_max, c.m_max, g.gamma0, g.lo, g.hi, g.hi - g.lo, defect, g.bracket.lo, g.bracket.hi,
           g.evaluations});
    return t;
}

Table cmd_gibbs_check(const RunConfig& c) {
    const double gamma = gamma_of(c);
    const RefMeasure meas = measure_of(c);
    const std::uint64_t alphabet = static_cast<std::uint64_t>(c.p_max - 1) * c.m_max;
    checked_word_count(c.n, alphabet, c.budget);
    Table t{{"word", "length", "ratio_lo", "ratio_hi", "ratio_mid", "gamma0"}, {}};
    std::vector<InducedLetter> letters;
    for (Digit p = 2; p <= c.p_max; ++p)
        for (std::uint32_t m = 1; m <= c.m_max; ++m) letters.push_back({p, m});
    std::vector<std::size_t> idx(c.n, 0);
    for (;;) {
        InducedWord w;
        for (auto k : idx) w.letters.push_back(letters[k]);
        const GibbsRatio r = gibbs_ratio(meas, c.beta, gamma, w);
        t.add({letters_str(w), w.total_length(), r.lo, r.hi, r.mid, gamma});
        std::size_t pos = c.n;
        while (pos > 0 && ++idx[pos - 1] == letters.size()) idx[--pos] = 0;
        if (pos == 0) break;
    }
    return t;
}

Table cmd_ensemble(const RunConfig& c) {
    const Ensemble e(c.beta, c.n, c.max_digit, c.budget);
    Table t{{"index", "word", "xi", "weight", "normalized_weight", "z_lower", "tail"}, {}};
    for (std::size_t i = 0; i < e.size(); ++i)
        t.add({i, e.word(i).str(), e.xi(i), e.weight(i), e.normalized_weight(i), ld(e.z_lower()), ld(e.tail())});
    return t;
}

Table cmd_equidist(const RunConfig& c) {
    Table t{{"n", "A_n", "Z_n_lower", "tail"}, {}};
    const Observable f = smoothed_indicator(c.eps);
    for (unsigned n = c.n_min; n <= c.n_max; ++n) {
        const Ensemble e(c.beta, n, c.max_digit, c.budget);
        t.add({n, theoremC_functional(e, f), ld(e.z_lower()), ld(e.tail())});
    }
    return t;
}

Table cmd_corollary(const RunConfig& c) {
    // phi(x) = x, psi(x) = 1 + x, pi1(x) = x, pi2(x) = x^2, f(u) = exp(-u).
    const Observable phi = [](double x) { return x; };
    const Observable psi = [](double x) { return 1.0 + x; };
    const Observable pi1 = [](double x) { return x; };
    const Observable pi2 = [](double x) { return x * x; };
    const Observable f = [](double u) { return std::exp(-u); };
    Table t{{"n", "a", "b", "c", "Z_n_lower", "tail"}, {}};
    for (unsigned n = c.n_min; n <= c.n_max; ++n) {
        const Ensemble e(c.beta, n, c.max_digit, c.budget);
        const CorollaryValues v = corollary_functionals(e, phi, psi, pi1, pi2, f);
        t.add({n, v.a, v.b, v.c, ld(e.z_lower()), ld(e.tail())});
    }
    return t;
}

Table cmd_expo_check(const RunConfig& c) {
    const double gamma = gamma_of(c);
    const RefMeasure meas = measure_of(c);
    const CompactSet G = solve_hypothesis(meas, c.delta, c.n_max);
    Table t{{"n", "m", "lhs_bound", "lhs_truncated", "truncated_available", "rhs", "margin", "pass",
             "hypothesis_ok", "stratum0_bound"},
            {}};
    for (unsigned n = c.n_min; n <= c.n_max; ++n) {
        const ExpoReport r = expo_bound_check(c.beta, n, G, c.delta, gamma, c.max_digit, meas, c.budget);
        for (const auto& row : r.rows)
            t.add({n, row.m, ld(row.lhs_bound), ld(row.lhs_truncated), row.truncated_available, ld(row.rhs),
                   row.margin, row.pass, r.hypothesis_ok, ld(r.stratum0_bound)});
    }
    return t;
}

Table cmd_tightness(const RunConfig& c) {
    const auto rows = tightness_table(c.beta, c.n_min, c.n_max, c.ell_min, c.ell_max, c.max_digit,
                                      measure_of(c), c.budget);
    Table t{{"n", "ell", "delta", "N1", "outside_truncated", "outside_bound", "log_rate", "pass"}, {}};
    for (const auto& r : rows)
        t.add({r.n, r.ell, r.delta, ld(r.N1), r.outside_truncated, r.outside_bound, r.log_rate,
               r.outside_truncated <= r.outside_bound});
    return t;
}

Table cmd_rate_profile(const RunConfig& c) {
    std::vector<double> grid;
    for (unsigned k = 0; k < c.t_steps; ++k)
        grid.push_back(c.t_steps == 1 ? c.t_min : c.t_min + (c.t_max - c.t_min) * k / (c.t_steps - 1));
    const Observable psi = [](double x) { return x; };
    BlockOptions opt;
    const auto pts = rate_profile(c.beta, psi, grid, c.n, c.max_digit, c.p_ref, opt, c.budget);
    Table t{{"t", "s", "F_lower", "F_value", "gap", "entropy"}, {}};
    for (const auto& p : pts) t.add({p.t, p.s, p.F_lower, p.F_value, p.F_value - p.F_lower, p.entropy});
    return t;
}

Table cmd_kac_spread(const RunConfig& c) {
    const double gamma = gamma_of(c);
    const InducedGibbsApprox approx = induced_gibbs_bernoulli(c.beta, gamma, truncation_of(c));
    const Histogram1D h = kac_spread(approx, c.bins);
    Table t{{"bin_lo", "bin_hi", "mass", "defect", "gamma"}, {}};
    for (std::size_t i = 0; i < h.bins(); ++i) t.add({h.bin_lo(i), h.bin_hi(i), h.masses()[i], approx.defect, gamma});
    return t;
}

struct Command {
    const char* name;
    const char* help;
    Table (*fn)(const RunConfig&);
    const char* default_format;
};

const Command kCommands[] = {
    {"periodic", "Periodic points of period n with exact surds", cmd_periodic, "csv"},
    {"pressure", "Pressure bracket for beta*phi", cmd_pressure, "json"},
    {"gamma0", "Zero of the induced pressure in gamma", cmd_gamma0, "json"},
    {"gibbs-check", "Local Gibbs ratios of induced words", cmd_gibbs_check, "csv"},
    {"ensemble", "Weighted periodic-orbit ensemble", cmd_ensemble, "csv"},
    {"equidist", "Ensemble averages of a smoothed indicator of [0, eps)", cmd_equidist, "csv"},
    {"corollary", "Product, ratio and convolution functionals", cmd_corollary, "csv"},
    {"expo-check", "Escape-stratified exponential bound", cmd_expo_check, "csv"},
    {"tightness", "Mass outside the compact sets K_L", cmd_tightness, "csv"},
    {"rate-profile", "Tilted block measures along a t grid", cmd_rate_profile, "csv"},
    {"kac-spread", "Base measure spread from the induced approximation", cmd_kac_spread, "csv"},
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    std::string gamma_text;
    CLI::App app{"Periodic-orbit pressure and large-deviation experiments for the Renyi map"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.add_option("--beta", cfg.beta, "Inverse temperature");
    app.add_option("--n", cfg.n, "Period or word length");
    app.add_option("--nmin,--n-min", cfg.n_min, "Smallest period of a sweep");
    app.add_option("--nmax,--n-max", cfg.n_max, "Largest period of a sweep");
    app.add_option("--max-digit,-M", cfg.max_digit, "Digit truncation M");
    app.add_option("--pmax,--p-max", cfg.p_max, "Induced entry-digit truncation");
    app.add_option("--mmax,--m-max", cfg.m_max, "Induced return-time truncation");
    app.add_option("--gamma", gamma_text, "Induced shift gamma; solved for when absent");
    app.add_option("--level", cfg.level, "Induced word level of the envelope bounds");
    app.add_option("--tol", cfg.tol, "Target width of the gamma0 enclosure");
    app.add_option("--precision-bits", cfg.precision_bits, "Float precision for exact evaluation");
    app.add_option("--format", cfg.format, "csv or json");
    app.add_option("--budget", cfg.budget, "Maximum number of enumerated words");
    app.add_option("--threads", cfg.threads, "Worker threads");
    app.add_option("--grid", cfg.grid, "Envelope grid size");
    app.add_option("--measure", cfg.measure, "Reference measure: lebesgue or log_density");
    app.add_option("--delta", cfg.delta, "delta of the escape hypothesis");
    app.add_option("--eps", cfg.eps, "Indicator width");
    app.add_option("--bins", cfg.bins, "Histogram bins");
    app.add_option("--p-ref", cfg.p_ref, "Reference pressure subtracted in rate profiles");
    app.add_option("--t-min", cfg.t_min, "Smallest tilt");
    app.add_option("--t-max", cfg.t_max, "Largest tilt");
    app.add_option("--t-steps", cfg.t_steps, "Number of tilts");
    app.add_option("--ell-min", cfg.ell_min, "Smallest L");
    app.add_option("--ell-max", cfg.ell_max, "Largest L");
    app.add_option("--word", cfg.word, "Single word for periodic, digits separated by commas");
    app.add_option("--output,-o", cfg.output, "Write the table to this file");

    const Command* chosen = nullptr;
    for (const auto& cmd : kCommands) {
        auto* sub = app.add_subcommand(cmd.name, cmd.help);
        sub->fallthrough();
        sub->callback([&chosen, &cmd] { chosen = &cmd; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (!gamma_text.empty() && gamma_text != "auto") {
            std::size_t used = 0;
            const double g = std::stod(gamma_text, &used);
            if (used != gamma_text.size()) throw std::invalid_argument("gamma");
            cfg.gamma = g;
        }
    } catch (const std::exception&) {
        err << "invalid configuration: gamma must be a number or 'auto'\n";
        return kExitUsage;
    }

    try {
        validate(cfg);
        if (cfg.format.empty()) cfg.format = chosen->default_format;
        const Table table = chosen->fn(cfg);
        if (cfg.output.empty()) {
            emit(table, cfg.format, cfg, out);
        } else {
            std::ofstream file(cfg.output);
            if (!file) throw UsageError("cannot open output file " + cfg.output);
            emit(table, cfg.format, cfg, file);
        }
        return kExitOk;
    } catch (const UsageError& e) {
        err << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitUsage;
    } catch (const BudgetError& e) {
        err << "budget exceeded: " << e.what() << '\n';
        return kExitBudget;
    } catch (const SearchError& e) {
        err << "search failed: " << e.what() << '\n';
        return kExitSearch;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace rldp
