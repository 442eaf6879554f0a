#pragma once
// Deterministic Gaussian noise sources: static detuning draws, spectral
// trajectory synthesis, and quadrature averages over the inhomogeneous
// distribution.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "cqed/model.hpp"
#include "cqed/quadrature.hpp"
#include "cqed/spectral_density.hpp"

namespace cqed {

// Standard-normal generator: mt19937_64 with a hand-rolled Box-Muller so
// the stream is identical across standard library implementations.
class GaussianSampler {
  public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    double uniform() {  // [0, 1) with 53 random bits
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// One static qubit detuning drawn from the inhomogeneous distribution,
// variance 2/(T2*)^2.
inline double sample_static_eta(const EnsembleParams& ep,
                                std::uint64_t seed) {
    GaussianSampler rng(seed);
    return std::sqrt(2.0) / ep.t2star * rng.normal();
}

inline std::vector<double> sample_static_ensemble(const EnsembleParams& ep,
                                                  std::size_t count,
                                                  std::uint64_t seed) {
    GaussianSampler rng(seed);
    std::vector<double> out(count);
    double sigma = std::sqrt(2.0) / ep.t2star;
    for (auto& v : out) v = sigma * rng.normal();
    return out;
}

// Deterministic Gauss-Hermite average of f over the static detuning
// distribution; throws if doubling the order never settles.
template <class F>
auto gaussian_average(F&& f, const EnsembleParams& ep, double tol = 1e-9) {
    auto res = hermite_average(
        [&](double x) { return f(hermite_node_to_detuning(x, ep)); }, tol);
    if (!res.converged)
        throw std::runtime_error("gaussian_average: quadrature did not settle");
    return res.value;
}

// Stationary Gaussian trajectory realizing the spectrum: each line and
// each tabulated grid point becomes an independent cosine/sine mode pair,
// so the ensemble autocovariance is exactly (2 pi)^-1 integral of the
// discretized S_c times cos(w dt). Draw order: lines in listed order, then
// grid points ascending, one Gaussian pair per mode.
inline std::vector<double> sample_trajectory(const SpectralDensity& sd,
                                             double dt, std::size_t n_steps,
                                             std::uint64_t seed) {
    sd.validate();
    if (dt <= 0.0 || n_steps == 0)
        throw std::invalid_argument("sample_trajectory: need dt > 0, steps > 0");

    struct Mode {
        double omega, amp_c, amp_s;
    };
    std::vector<Mode> modes;
    modes.reserve(sd.lines.size() + sd.omega.size());
    GaussianSampler rng(seed);

    double nyquist = M_PI / dt;
    auto add_mode = [&](double w, double variance) {
        if (variance <= 0.0) return;
        if (std::abs(w) > nyquist)
            throw std::invalid_argument(
                "sample_trajectory: spectrum extends past the Nyquist "
                "frequency for this dt");
        double s = std::sqrt(variance);
        double a = s * rng.normal();
        // A zero-frequency mode is a single static Gaussian; finite
        // frequencies need the quadrature partner for stationarity.
        double b = w == 0.0 ? 0.0 : s * rng.normal();
        modes.push_back({w, a, b});
    };

    for (const auto& ln : sd.lines) add_mode(ln.omega, ln.weight);
    if (sd.has_table()) {
        auto n = sd.omega.size();
        for (std::size_t i = 0; i < n; ++i) {
            double left = i > 0 ? sd.omega[i] - sd.omega[i - 1] : 0.0;
            double right = i + 1 < n ? sd.omega[i + 1] - sd.omega[i] : 0.0;
            double cell = 0.5 * (left + right);
            add_mode(sd.omega[i],
                     sd.classical[i] * cell / (2.0 * M_PI));
        }
    }

    std::vector<double> eta(n_steps, 0.0);
    for (std::size_t k = 0; k < n_steps; ++k) {
        double t = static_cast<double>(k) * dt;
        double v = 0.0;
        for (const auto& m : modes)
            v += m.amp_c * std::cos(m.omega * t) +
                 m.amp_s * std::sin(m.omega * t);
        eta[k] = v;
    }
    return eta;
}

}  // namespace cqed
