#pragma once
// Qubit coherence to transient cavity field: causal convolution against the
// cavity response, the echo wavepacket train, the comb-peak value, and the
// discrete Fourier transform of the echo envelope with its inversion.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "cqed/backaction.hpp"
#include "cqed/model.hpp"

namespace cqed {

using cplx = std::complex<double>;

struct FieldTrace {
    enum class Frame { rotating, lab };
    std::vector<double> times;
    std::vector<cplx> values;
    Frame frame = Frame::rotating;
    double frame_detuning = 0.0;
};

inline FieldTrace to_lab_frame(const FieldTrace& in) {
    if (in.frame == FieldTrace::Frame::lab) return in;
    FieldTrace out = in;
    out.frame = FieldTrace::Frame::lab;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] *= std::polar(1.0, -in.frame_detuning * in.times[i]);
    return out;
}

// <a~>(t) = -i g int chi_c(t - t') c(t') dt' for a sampled coherence trace.
// The kernel is a pure exponential, so the running integral updates exactly
// for piecewise-linear input; no quadrature grid beyond the samples.
inline FieldTrace field_from_coherence(const std::vector<double>& times,
                                       const std::vector<cplx>& coherence,
                                       const CavityParams& cp,
                                       double frame_detuning = 0.0) {
    if (times.size() != coherence.size() || times.size() < 2)
        throw std::invalid_argument(
            "field_from_coherence: need matching grids with >= 2 samples");
    const cplx decay{-0.5 * cp.kappa, -cp.delta};
    FieldTrace out;
    out.times = times;
    out.values.resize(times.size());
    out.frame_detuning = frame_detuning;
    cplx running{0.0, 0.0};
    out.values[0] = cplx{0.0, 0.0};
    for (std::size_t i = 1; i < times.size(); ++i) {
        double dt = times[i] - times[i - 1];
        if (!(dt > 0.0))
            throw std::invalid_argument(
                "field_from_coherence: times must strictly increase");
        if (dt * std::max(cp.kappa, std::abs(cp.delta)) > 0.5)
            throw std::invalid_argument(
                "field_from_coherence: input undersampled vs cavity response");
        cplx d = std::exp(decay * dt);
        running = d * running +
                  0.5 * dt * (d * coherence[i - 1] + coherence[i]);
        out.values[i] = cplx{0.0, -cp.g} * running;
    }
    return out;
}

// Narrow-ensemble echo wavepacket f_n(t) = -i sqrt(pi) g T2* Gbar_n chi_c(t).
inline cplx simplified_wavepacket(double t, cplx gbar_n,
                                  const CavityParams& cp,
                                  const EnsembleParams& ep) {
    return cplx{0.0, -1.0} * std::sqrt(M_PI) * cp.g * ep.t2star * gbar_n *
           cavity_response_time(t, cp);
}

// Exact wavepacket by direct convolution of the sampled revival profile with
// the cavity response; t is measured from the echo center like shape.times.
inline cplx exact_wavepacket(double t, const RevivalShape& shape,
                             const CavityParams& cp) {
    const auto& ts = shape.times;
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j + 1 < ts.size(); ++j) {
        double h = ts[j + 1] - ts[j];
        acc += 0.5 * h *
               (cavity_response_time(t - ts[j], cp) * shape.values[j] +
                cavity_response_time(t - ts[j + 1], cp) * shape.values[j + 1]);
    }
    return cplx{0.0, -cp.g} * acc;
}

// Conjugation operator attached to odd echoes.
inline cplx conjugate_if_odd(int n, cplx value) {
    return n % 2 == 0 ? value : std::conj(value);
}

// Time-domain field train: the n = 0 free-induction burst at half weight
// plus one wavepacket per echo, each carrying the frame phase and the
// alternating conjugation of its envelope value.
inline FieldTrace revival_train(const EchoEnvelope& env, double sigma_x0,
                                const CavityParams& cp,
                                const EnsembleParams& ep,
                                const std::vector<double>& times) {
    FieldTrace out;
    out.times = times;
    out.values.assign(times.size(), cplx{0.0, 0.0});
    out.frame_detuning = env.frame_detuning;
    for (std::size_t i = 0; i < times.size(); ++i) {
        double t = times[i];
        cplx acc = 0.5 * simplified_wavepacket(t, env.weights[0], cp, ep) *
                   env.values[0];
        for (int n = 1; n <= env.n_echoes; ++n) {
            double ts = t - n * env.tau;
            if (ts < 0.0) continue;
            cplx phase = std::polar(1.0, env.frame_detuning * n * env.tau);
            acc += simplified_wavepacket(ts, env.weights[n], cp, ep) * phase *
                   conjugate_if_odd(n, env.values[n]);
        }
        out.values[i] = 0.5 * sigma_x0 * acc;
    }
    return out;
}

// C~_{N,tau}(omega) = sum_n e^{i n omega tau} e^{i n delta_mod tau}
//                     Gbar_n K^n C~(n tau).
inline cplx dft_envelope(const EchoEnvelope& env, double omega) {
    cplx acc{0.0, 0.0};
    for (int n = 0; n <= env.n_echoes; ++n) {
        cplx term = env.weights[n] * conjugate_if_odd(n, env.values[n]);
        acc += std::polar(1.0, n * (omega + env.delta_mod) * env.tau) * term;
    }
    return acc;
}

// Comb-peak field value at omega = delta for the configured cavity
// detuning, including the -C(0)/2 free-induction offset (C(0) = 1).
inline cplx field_spectrum_peak(const EchoEnvelope& env, double sigma_x0,
                                const CavityParams& cp,
                                const EnsembleParams& ep) {
    cplx amp = cplx{0.0, -1.0} * sigma_x0 * std::sqrt(M_PI) * cp.g *
               ep.t2star / cp.kappa;
    return amp * (dft_envelope(env, cp.delta) - 0.5);
}

struct ReconstructionResult {
    EchoEnvelope envelope;
    std::vector<bool> recovered;
};

// Inverts a sweep of comb-peak samples over one full detuning period back
// into the echo envelope: subtract the free-induction offset, invert the
// DFT, divide out the known weights, strip the frame phase, and undo the
// odd-echo conjugation. Indices whose weight is below the threshold are
// flagged instead of amplified.
inline ReconstructionResult invert_dft(
    const std::vector<cplx>& peaks, const std::vector<double>& deltas,
    double tau, double frame_detuning, const std::vector<cplx>& weights,
    double sigma_x0, const CavityParams& cp, const EnsembleParams& ep,
    double weight_threshold = 1e-6) {
    const std::size_t j_count = peaks.size();
    const int n_echoes = static_cast<int>(weights.size()) - 1;
    if (j_count != deltas.size() || n_echoes < 0)
        throw std::invalid_argument("invert_dft: inconsistent inputs");
    if (j_count < weights.size())
        throw std::invalid_argument(
            "invert_dft: need at least N+1 detuning samples");
    const double period = 2.0 * M_PI / tau;
    const double spacing = period / static_cast<double>(j_count);
    for (std::size_t j = 1; j < j_count; ++j)
        if (std::abs(deltas[j] - deltas[j - 1] - spacing) > 1e-9 * period)
            throw std::invalid_argument(
                "invert_dft: detuning grid must be uniform over one period");

    cplx amp = cplx{0.0, -1.0} * sigma_x0 * std::sqrt(M_PI) * cp.g *
               ep.t2star / cp.kappa;
    std::vector<cplx> comb(j_count);
    for (std::size_t j = 0; j < j_count; ++j)
        comb[j] = peaks[j] / amp + 0.5;

    ReconstructionResult res;
    res.envelope.n_echoes = n_echoes;
    res.envelope.tau = tau;
    res.envelope.frame_detuning = frame_detuning;
    res.envelope.delta_mod = fold_frame_detuning(frame_detuning, tau);
    res.envelope.values.assign(n_echoes + 1, cplx{0.0, 0.0});
    res.envelope.weights = weights;
    res.recovered.assign(n_echoes + 1, true);
    for (int n = 0; n <= n_echoes; ++n) {
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < j_count; ++j)
            acc += comb[j] * std::polar(1.0, -n * deltas[j] * tau);
        acc /= static_cast<double>(j_count);
        if (std::abs(weights[n]) < weight_threshold) {
            res.recovered[n] = false;
            continue;
        }
        cplx value = acc * std::polar(1.0, -n * res.envelope.delta_mod * tau) /
                     weights[n];
        res.envelope.values[n] = conjugate_if_odd(n, value);
    }
    return res;
}

// r_out2(t) = -i sqrt(kappa2) e^{-i Delta t} <a~>_t for an undriven input.
inline FieldTrace output_field(const FieldTrace& field,
                               const CavityParams& cp) {
    FieldTrace out = field;
    out.frame = FieldTrace::Frame::lab;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = cplx{0.0, -std::sqrt(cp.kappa2)} *
                        std::polar(1.0, -field.frame_detuning *
                                            field.times[i]) *
                        field.values[i];
    return out;
}

}  // namespace cqed
