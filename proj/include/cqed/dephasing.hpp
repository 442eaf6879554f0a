#pragma once
// Sequence dephasing from a noise spectrum: the attenuation exponent, the
// quantum phase, and the cavity-free echo envelope they compose into.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "cqed/filter_functions.hpp"
#include "cqed/pulse_sequence.hpp"
#include "cqed/spectral_density.hpp"

namespace cqed {

// Restriction of a sequence to [0, t].
inline PulseSequence truncate_sequence(const PulseSequence& seq, double t) {
    if (t <= 0.0 || t > seq.duration)
        throw std::invalid_argument("truncate_sequence: t outside (0, duration]");
    std::vector<double> pulses;
    for (double p : seq.pulse_times)
        if (p < t) pulses.push_back(p);
    return PulseSequence(t, std::move(pulses));
}

namespace detail {

inline PulseSequence echo_restriction(const PulseSequence& seq, double t) {
    auto sub = truncate_sequence(seq, t);
    if (std::abs(dc_moment(sub)) > 1e-9 * t)
        throw std::invalid_argument(
            "attenuation requires an echo time (the sign function must "
            "integrate to zero)");
    return sub;
}

}  // namespace detail

// chi(t) = integral dw/2pi [F_c(w,t)/w^2] S_c(w), t an echo time. Lines
// contribute in closed form; the tabulated part integrates on its own grid
// (the grid defines the support).
inline double chi_attenuation(const PulseSequence& seq,
                              const SpectralDensity& sd, double t) {
    sd.validate();
    auto sub = detail::echo_restriction(seq, t);
    double chi = attenuation_from_lines(sd.lines, sub);
    if (sd.has_table())
        chi += detail::table_integral(sd.omega, sd.classical,
                                      [&](double w) {
                                          return classical_filter_normalized(
                                              w, sub);
                                      }) /
               (2.0 * M_PI);
    return chi;
}

// Phi_q(t) = integral dw/2pi [F_q(w,t)/w^2] S_q(w) for the tabulated
// quantum part; principal-value line spectra go through quantum_phase.
inline double quantum_phase_from_spectrum(const PulseSequence& seq,
                                          const SpectralDensity& sd,
                                          double t) {
    sd.validate();
    auto sub = detail::echo_restriction(seq, t);
    if (!sd.has_table() || sd.quantum.empty()) return 0.0;
    return detail::table_integral(sd.omega, sd.quantum,
                                  [&](double w) {
                                      return quantum_filter_normalized(w, sub);
                                  }) /
           (2.0 * M_PI);
}

// Slow validation path for the attenuation: the double time integral
// (1/2) int_0^t int_0^t s(t1) s(t2) C(t1 - t2) with C the autocovariance
// of the classical spectrum. Valid at any t, not just echo times.
inline double chi_attenuation_slow(const PulseSequence& seq,
                                   const SpectralDensity& sd, double t,
                                   std::size_t grid = 2001) {
    sd.validate();
    auto sub = truncate_sequence(seq, t);
    auto autocov = [&](double lag) {
        double c = 0.0;
        for (const auto& ln : sd.lines) c += ln.weight * std::cos(ln.omega * lag);
        if (sd.has_table())
            c += detail::table_integral(sd.omega, sd.classical,
                                        [&](double w) {
                                            return std::cos(w * lag);
                                        }) /
                 (2.0 * M_PI);
        return c;
    };
    double h = t / static_cast<double>(grid - 1);
    // the lag grid is uniform and the autocovariance even, so tabulate once
    std::vector<double> cov(grid);
    for (std::size_t k = 0; k < grid; ++k)
        cov[k] = autocov(static_cast<double>(k) * h);
    double acc = 0.0;
    for (std::size_t i = 0; i < grid; ++i) {
        double wi = (i == 0 || i + 1 == grid) ? 0.5 : 1.0;
        double si = sub.sign_at(std::min(static_cast<double>(i) * h, t));
        double row = 0.0;
        for (std::size_t j = 0; j < grid; ++j) {
            double wj = (j == 0 || j + 1 == grid) ? 0.5 : 1.0;
            double sj = sub.sign_at(std::min(static_cast<double>(j) * h, t));
            row += wj * sj * cov[i > j ? i - j : j - i];
        }
        acc += wi * si * row;
    }
    return 0.5 * acc * h * h;
}

// Cavity-free echo envelope: per echo time, C0(t) = e^{-gp t - chi(t)}
// e^{-i Phi_q(t)} with the pieces kept alongside the product.
struct EnvelopeC0 {
    std::vector<double> times;
    std::vector<std::complex<double>> values;
    std::vector<double> chi;
    std::vector<double> quantum_phase;
    std::vector<double> markovian_exponent;  // gamma_phi * t
};

inline EnvelopeC0 envelope_c0(const PulseSequence& seq,
                              const SpectralDensity& sd, double gamma_phi,
                              const std::vector<double>& echo_times) {
    EnvelopeC0 env;
    env.times = echo_times;
    env.values.reserve(echo_times.size());
    env.chi.reserve(echo_times.size());
    env.quantum_phase.reserve(echo_times.size());
    env.markovian_exponent.reserve(echo_times.size());
    for (double t : echo_times) {
        double x = chi_attenuation(seq, sd, t);
        double phi = quantum_phase_from_spectrum(seq, sd, t);
        double gt = gamma_phi * t;
        env.chi.push_back(x);
        env.quantum_phase.push_back(phi);
        env.markovian_exponent.push_back(gt);
        env.values.push_back(std::exp(-gt - x) *
                             std::exp(std::complex<double>(0.0, -phi)));
    }
    return env;
}

}  // namespace cqed
