#pragma once
// Thin RAII wrappers around FFTW3 for complex transforms, plus the
// one-sided spectrum helper used when locating precession lines.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cqed {

using cplx = std::complex<double>;

namespace detail {

inline std::vector<cplx> fftw_transform(const std::vector<cplx>& in,
                                        int direction) {
    if (in.empty()) throw std::invalid_argument("fft: empty input");
    std::vector<cplx> out(in.size());
    auto n = static_cast<int>(in.size());
    // FFTW's complex layout is bit-compatible with std::complex<double>.
    auto* src = reinterpret_cast<fftw_complex*>(
        const_cast<cplx*>(in.data()));
    auto* dst = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan =
        fftw_plan_dft_1d(n, src, dst, direction, FFTW_ESTIMATE);
    if (!plan) throw std::runtime_error("fft: planner failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    return out;
}

}  // namespace detail

inline std::vector<cplx> fft_forward(const std::vector<cplx>& in) {
    return detail::fftw_transform(in, FFTW_FORWARD);
}

inline std::vector<cplx> fft_inverse(const std::vector<cplx>& in) {
    auto out = detail::fftw_transform(in, FFTW_BACKWARD);
    double scale = 1.0 / static_cast<double>(out.size());
    for (auto& v : out) v *= scale;
    return out;
}

// Magnitudes over the non-negative frequency half, for samples spaced dt
// apart. Frequencies are angular.
struct Spectrum {
    std::vector<double> omega;
    std::vector<double> magnitude;
    double bin_width = 0.0;
};

inline Spectrum one_sided_spectrum(const std::vector<cplx>& samples,
                                   double dt) {
    if (samples.size() < 4)
        throw std::invalid_argument("one_sided_spectrum: too few samples");
    if (dt <= 0.0)
        throw std::invalid_argument("one_sided_spectrum: dt must be > 0");
    auto coeffs = fft_forward(samples);
    auto n = samples.size();
    Spectrum sp;
    sp.bin_width = 2.0 * M_PI / (static_cast<double>(n) * dt);
    auto half = n / 2 + 1;
    sp.omega.reserve(half);
    sp.magnitude.reserve(half);
    for (std::size_t k = 0; k < half; ++k) {
        sp.omega.push_back(static_cast<double>(k) * sp.bin_width);
        sp.magnitude.push_back(std::abs(coeffs[k]));
    }
    return sp;
}

// Indices of strict interior local maxima above `floor` times the global
// maximum, sorted by descending magnitude.
inline std::vector<std::size_t> spectrum_peaks(const Spectrum& sp,
                                               double floor = 0.05) {
    double top = 0.0;
    for (double m : sp.magnitude) top = std::max(top, m);
    std::vector<std::size_t> idx;
    for (std::size_t k = 1; k + 1 < sp.magnitude.size(); ++k) {
        if (sp.magnitude[k] > sp.magnitude[k - 1] &&
            sp.magnitude[k] > sp.magnitude[k + 1] &&
            sp.magnitude[k] >= floor * top)
            idx.push_back(k);
    }
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return sp.magnitude[a] > sp.magnitude[b];
    });
    return idx;
}

}  // namespace cqed
