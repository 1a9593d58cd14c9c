#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "renyi_ldp/shift_core.hpp"

namespace rldp {

// Every knob of every subcommand. Unused keys are ignored by commands that do not read them.
struct RunConfig {
    double beta = 1.0;
    unsigned n = 1;
    unsigned n_min = 2;
    unsigned n_max = 6;
    Digit max_digit = 4;
    Digit p_max = 200;
    std::uint32_t m_max = 200;
    std::optional<double> gamma;  // solved for when absent
    unsigned level = 2;
    double tol = 1e-3;
    unsigned precision_bits = 256;
    std::string format;  // csv or json; empty selects the command default
    std::uint64_t budget = kDefaultBudget;
    unsigned threads = 1;
    unsigned grid = 2048;
    std::string measure = "lebesgue";
    double delta = 0.1;
    double eps = 0.1;
    unsigned bins = 1000;
    double p_ref = 0.0;
    double t_min = -1.0;
    double t_max = 1.0;
    unsigned t_steps = 11;
    unsigned ell_min = 1;
    unsigned ell_max = 4;
    std::string word;
    std::string output;
};

// Throws UsageError naming the first violated invariant.
void validate(const RunConfig& cfg);

// One-line "key=value;key=value" echo of the whole configuration, stable across runs.
std::string config_echo(const RunConfig& cfg);

}  // namespace rldp
