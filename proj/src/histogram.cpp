#include "renyi_ldp/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "renyi_ldp/errors.hpp"

namespace rldp {

Histogram1D::Histogram1D(std::size_t bins) : mass_(bins, 0.0) {
    if (bins < 1) throw DomainError("histogram needs at least one bin");
}

double Histogram1D::total() const {
    double s = 0, c = 0;
    for (double m : mass_) {
        const double t = s + m;
        c += std::fabs(s) >= std::fabs(m) ? (s - t) + m : (m - t) + s;
        s = t;
    }
    return s + c;
}

void Histogram1D::add_point(double x, double weight) {
    if (!(x >= 0 && x < 1)) throw DomainError("histogram point outside [0,1)");
    const std::size_t k = std::min(mass_.size() - 1, static_cast<std::size_t>(x * mass_.size()));
    mass_[k] += weight;
}

void Histogram1D::add_uniform(double lo, double hi, double weight) {
    if (!(lo >= 0 && hi <= 1 && lo < hi)) throw DomainError("bad interval for histogram");
    const double B = static_cast<double>(mass_.size());
    const std::size_t k0 = static_cast<std::size_t>(lo * B);
    const std::size_t k1 = std::min(mass_.size() - 1, static_cast<std::size_t>(hi * B));
    for (std::size_t k = k0; k <= k1; ++k) {
        const double u = std::max(lo, k / B), v = std::min(hi, (k + 1) / B);
        if (v > u) mass_[k] += weight * (v - u) / (hi - lo);
    }
}

void Histogram1D::scale(double factor) {
    for (double& m : mass_) m *= factor;
}

double w1_distance(const Histogram1D& h1, const Histogram1D& h2) {
    if (h1.bins() != h2.bins()) throw DomainError("w1_distance needs equal bin counts");
    // Within a bin both CDFs are linear, so |F1 - F2| is integrated exactly per bin.
    const double width = 1.0 / h1.bins();
    double f = 0, total = 0;
    for (std::size_t i = 0; i < h1.bins(); ++i) {
        const double g = f + h1.masses()[i] - h2.masses()[i];
        if ((f >= 0) == (g >= 0)) {
            total += width * std::fabs(f + g) / 2;
        } else {
            const double af = std::fabs(f), ag = std::fabs(g);
            total += width * (af * af + ag * ag) / (2 * (af + ag));
        }
        f = g;
    }
    return total;
}

}  // namespace rldp
