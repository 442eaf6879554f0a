// Pulse sequences and the toggling-frame sign function s(t).
#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace cqed {

// Ideal instantaneous pi_x pulse train on [0, duration]. The sign function
// s(t) starts at +1 and flips at each pulse; it is right-continuous, so
// s(pulse time) already carries the flipped value.
struct PulseSequence {
    double duration = 0.0;
    std::vector<double> pulse_times;  // strictly increasing, inside (0, duration)

    PulseSequence() = default;
    PulseSequence(double total, std::vector<double> pulses)
        : duration(total), pulse_times(std::move(pulses)) {
        std::sort(pulse_times.begin(), pulse_times.end());
        for (double p : pulse_times)
            if (p <= 0.0 || p >= duration)
                throw std::invalid_argument("pulse time outside (0, duration)");
    }

    // CPMG: n pulses at (k - 1/2) tau, echoes at k tau, duration n tau.
    static PulseSequence cpmg(int n_pulses, double tau) {
        if (n_pulses < 0 || tau <= 0.0)
            throw std::invalid_argument("cpmg: need n >= 0 and tau > 0");
        std::vector<double> pulses;
        pulses.reserve(n_pulses);
        for (int k = 1; k <= n_pulses; ++k) pulses.push_back((k - 0.5) * tau);
        PulseSequence seq;
        seq.duration = n_pulses > 0 ? n_pulses * tau : tau;
        seq.pulse_times = std::move(pulses);
        return seq;
    }

    // Free induction decay: no pulses.
    static PulseSequence fid(double total) {
        PulseSequence seq;
        seq.duration = total;
        return seq;
    }

    int parity_at(double t) const {
        return static_cast<int>(std::upper_bound(pulse_times.begin(),
                                                 pulse_times.end(), t) -
                                pulse_times.begin());
    }

    double sign_at(double t) const { return parity_at(t) % 2 == 0 ? 1.0 : -1.0; }

    struct Interval {
        double t0, t1, sign;
    };

    std::vector<Interval> intervals() const {
        std::vector<Interval> out;
        out.reserve(pulse_times.size() + 1);
        double t0 = 0.0, sign = 1.0;
        for (double p : pulse_times) {
            out.push_back({t0, p, sign});
            t0 = p;
            sign = -sign;
        }
        out.push_back({t0, duration, sign});
        return out;
    }

    std::vector<double> echo_times() const {
        std::vector<double> out;
        if (pulse_times.empty()) return out;
        // echoes where the accumulated sign-weighted time returns to zero:
        // for CPMG these are k tau; general sequences are handled by the
        // same running-moment rule.
        double m = 0.0, t0 = 0.0, sign = 1.0;
        for (std::size_t j = 0; j <= pulse_times.size(); ++j) {
            double t1 = j < pulse_times.size() ? pulse_times[j] : duration;
            // zero of m + sign*(t - t0) inside (t0, t1]
            double tz = t0 - m / sign;
            if (tz > t0 && tz <= t1 + 1e-15 * duration) out.push_back(tz);
            m += sign * (t1 - t0);
            t0 = t1;
            sign = -sign;
        }
        return out;
    }
};

}  // namespace cqed
