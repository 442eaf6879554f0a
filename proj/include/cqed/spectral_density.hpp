#pragma once
// Noise spectral densities: sharp lines plus an optional tabulated part,
// and the conversion to the inhomogeneous dephasing time.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cqed/filter_functions.hpp"

namespace cqed {

// Classical spectrum S_c(w) = sum_i 2 pi c_i delta(w - w_i) + table(w),
// with lines listed once at w >= 0 carrying the combined weight of the
// +-w pair (see attenuation_from_lines). The tabulated parts are linear
// interpolants on a strictly increasing grid and zero outside it; the
// quantum table is optional and shares the grid.
struct SpectralDensity {
    std::vector<SpectralLine> lines;
    std::vector<double> omega;
    std::vector<double> classical;
    std::vector<double> quantum;

    bool has_table() const { return !omega.empty(); }

    void validate() const {
        for (const auto& ln : lines) {
            if (ln.omega < 0.0)
                throw std::invalid_argument(
                    "spectral line frequency must be >= 0");
            if (ln.weight < 0.0)
                throw std::invalid_argument("spectral line weight must be >= 0");
        }
        if (classical.size() != omega.size())
            throw std::invalid_argument("classical table size mismatch");
        if (!quantum.empty() && quantum.size() != omega.size())
            throw std::invalid_argument("quantum table size mismatch");
        for (std::size_t i = 0; i + 1 < omega.size(); ++i)
            if (!(omega[i] < omega[i + 1]))
                throw std::invalid_argument(
                    "tabulated grid must be strictly increasing");
        for (double v : classical)
            if (v < 0.0)
                throw std::invalid_argument("classical density must be >= 0");
    }
};

namespace detail {

// Trapezoid integral of f(w_i) * values_i over the tabulated grid.
template <class F>
double table_integral(const std::vector<double>& omega,
                      const std::vector<double>& values, F&& weight) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < omega.size(); ++i) {
        double f0 = weight(omega[i]) * values[i];
        double f1 = weight(omega[i + 1]) * values[i + 1];
        acc += 0.5 * (f0 + f1) * (omega[i + 1] - omega[i]);
    }
    return acc;
}

}  // namespace detail

// (2 pi)^-1 integral of S_c over all frequencies: line weights count once
// (they already combine the +-w pair), plus the tabulated part.
inline double classical_spectrum_integral(const SpectralDensity& sd) {
    double acc = 0.0;
    for (const auto& ln : sd.lines) acc += ln.weight;
    if (sd.has_table())
        acc += detail::table_integral(sd.omega, sd.classical,
                                      [](double) { return 1.0; }) /
               (2.0 * M_PI);
    return acc;
}

// T2* from 2/(T2*)^2 = (2 pi)^-1 integral S_c dw.
inline double t2star_from_spectrum(const SpectralDensity& sd) {
    sd.validate();
    double total = classical_spectrum_integral(sd);
    if (!(total > 0.0) || !std::isfinite(total))
        throw std::invalid_argument(
            "t2star_from_spectrum: spectrum integral must be positive and "
            "finite");
    return std::sqrt(2.0 / total);
}

}  // namespace cqed
