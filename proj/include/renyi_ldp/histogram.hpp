#pragma once

#include <cstddef>
#include <vector>

namespace rldp {

// Bin masses of a measure on [0,1) with equal-width bins.
class Histogram1D {
public:
    explicit Histogram1D(std::size_t bins = 100);

    std::size_t bins() const { return mass_.size(); }
    const std::vector<double>& masses() const { return mass_; }
    double total() const;

    void add_point(double x, double weight);
    // Spreads weight uniformly over [lo, hi).
    void add_uniform(double lo, double hi, double weight);
    void add_to_bin(std::size_t bin, double weight) { mass_[bin] += weight; }
    void scale(double factor);

    double bin_lo(std::size_t i) const { return static_cast<double>(i) / mass_.size(); }
    double bin_hi(std::size_t i) const { return static_cast<double>(i + 1) / mass_.size(); }

private:
    std::vector<double> mass_;
};

// W1 distance of two histograms, masses placed uniformly within bins.
double w1_distance(const Histogram1D& h1, const Histogram1D& h2);

}  // namespace rldp
