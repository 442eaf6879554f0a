#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "cqed/backaction.hpp"
#include "cqed/model.hpp"
#include "support/frozen.hpp"

using cqed::CavityParams;
using cqed::EnsembleParams;
using cplx = std::complex<double>;

namespace {

// Defaults are the benchmark regime; make that explicit once.
CavityParams bench_cavity() {
    CavityParams cp;
    cp.kappa = frozen::kKappa;
    cp.g = frozen::kG;
    cp.kappa2 = frozen::kKappa;
    return cp;
}

EnsembleParams bench_ensemble() {
    EnsembleParams ep;
    ep.t2star = frozen::kT2s;
    return ep;
}

}  // namespace

TEST_CASE("ensemble Purcell factor matches frozen quadrature values") {
    auto cp = bench_cavity();
    auto ep = bench_ensemble();
    const std::pair<double, double> probes[] = {
        {10.0, frozen::kPurcellAvg_n1},
        {5000.0, frozen::kPurcellAvg_n500},
        {20000.0, frozen::kPurcellAvg_n2000},
        {80000.0, frozen::kPurcellAvg_n8000},
    };
    for (auto [big_t, expected] : probes) {
        auto res = cqed::purcell_envelope_factor_exact(big_t, cp, ep, 1e-12);
        CHECK(res.converged);
        CHECK(std::abs(res.value - expected) < 1e-10);
    }
}

TEST_CASE("fixed-order Hermite route agrees at moderate order") {
    auto cp = bench_cavity();
    auto ep = bench_ensemble();
    double v = cqed::purcell_envelope_factor_fixed(20000.0, cp, ep, 200);
    CHECK(std::abs(v - frozen::kPurcellAvg200_n2000) < 1e-8);
}

TEST_CASE("stretched-exponential asymptote and its prefactor") {
    auto cp = bench_cavity();
    auto ep = bench_ensemble();
    double gamma_p = cqed::purcell_rate_scale(cp, ep);
    CHECK(std::abs(gamma_p - frozen::kGammaP) < 1e-18);

    for (double big_t : {10.0, 5000.0, 80000.0}) {
        double asym = cqed::purcell_envelope_factor_asymptotic(big_t, cp, ep);
        CHECK(std::abs(asym - std::exp(-std::sqrt(gamma_p * big_t))) < 1e-15);
    }

    double stretch = cqed::stretch_prefactor(cp, ep);
    CHECK(std::abs(stretch - std::exp(std::pow(0.25 * cp.kappa * ep.t2star, 2))) <
          1e-15);

    double big_t = 4.0 / gamma_p;
    double ratio = cqed::purcell_envelope_factor_exact(big_t, cp, ep).value /
                   (stretch * cqed::purcell_envelope_factor_asymptotic(big_t, cp, ep));
    CHECK(std::abs(ratio - frozen::kAsymptoteRatioG4) < 1e-5);
}

TEST_CASE("ensemble Purcell factor decays monotonically from 1") {
    auto cp = bench_cavity();
    auto ep = bench_ensemble();
    CHECK(std::abs(cqed::purcell_envelope_factor_exact(0.0, cp, ep).value - 1.0) <
          1e-12);
    double prev = 1.0;
    for (double big_t : {5.0, 50.0, 500.0, 5000.0, 50000.0, 500000.0}) {
        double v = cqed::purcell_envelope_factor_exact(big_t, cp, ep).value;
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("log-log regression confirms the half-power decay law") {
    auto cp = bench_cavity();
    auto ep = bench_ensemble();
    double gamma_p = cqed::purcell_rate_scale(cp, ep);
    std::vector<double> lx, ly;
    for (double gt : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        double big_t = gt / gamma_p;
        double v = cqed::purcell_envelope_factor_exact(big_t, cp, ep).value;
        lx.push_back(std::log(big_t));
        ly.push_back(std::log(-std::log(v)));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = static_cast<int>(lx.size());
    for (int i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(std::abs(slope - frozen::kStretchSlope) < 1e-4);
}

TEST_CASE("window-averaged revival weights reproduce both frozen tables") {
    auto cp = bench_cavity();
    auto ep = bench_ensemble();
    for (int n = 1; n <= 20; ++n) {
        double g10 = cqed::gbar_average(n, 10.0, cp, ep).value;
        double g3 = cqed::gbar_average(n, 3.0, cp, ep).value;
        CHECK(std::abs(g10 - frozen::kGbarTau10[n - 1]) < frozen::kGbarTol);
        CHECK(std::abs(g3 - frozen::kGbarTau3[n - 1]) < frozen::kGbarTol);
    }
}

TEST_CASE("gridded shape weight agrees with the closed-form average") {
    auto cp = bench_cavity();
    auto ep = bench_ensemble();
    for (auto [n, tau] : {std::pair{1, 10.0}, std::pair{10, 10.0},
                          std::pair{20, 10.0}, std::pair{20, 3.0}}) {
        auto shape = cqed::revival_shape(n, tau, cp, ep);
        double direct = cqed::gbar_average(n, tau, cp, ep).value;
        CHECK(std::abs(shape.weight.real() - direct) < 5e-6);
        CHECK(std::abs(shape.weight.imag()) < 1e-10);
    }
}

TEST_CASE("zeroth revival is the bare inhomogeneous Gaussian") {
    auto cp = bench_cavity();
    auto ep = bench_ensemble();
    auto shape = cqed::revival_shape(0, 10.0, cp, ep);
    for (std::size_t i = 0; i < shape.times.size(); ++i) {
        double t = shape.times[i];
        cplx expected = std::exp(-(t / ep.t2star) * (t / ep.t2star));
        CHECK(std::abs(shape.values[i] - expected) < 1e-12);
    }
    CHECK(std::abs(shape.weight.real() - std::erf(5.0)) < 1e-9);
}

TEST_CASE("revival profile is real and even on resonance") {
    auto cp = bench_cavity();
    auto ep = bench_ensemble();
    auto shape = cqed::revival_shape(3, 10.0, cp, ep);
    std::size_t m = shape.values.size();
    for (std::size_t i = 0; i < m; ++i) {
        CHECK(std::abs(shape.values[i].imag()) < 1e-10);
        CHECK(std::abs(shape.values[i].real() - shape.values[m - 1 - i].real()) <
              1e-10);
    }
}

TEST_CASE("early echoes overshoot unity with a fixed maximum") {
    auto cp = bench_cavity();
    auto ep = bench_ensemble();
    double best = -1.0;
    int best_n = 0;
    for (int n = 1; n <= 8; ++n) {
        auto shape = cqed::revival_shape(n, 10.0, cp, ep);
        double center = shape.values[shape.values.size() / 2].real();
        if (center - 1.0 > best) {
            best = center - 1.0;
            best_n = n;
        }
    }
    CHECK(best_n == 3);
    CHECK(std::abs(best - frozen::kWavepacketMaxExcess) < 5e-6);
}

TEST_CASE("first zero of the late-time profile and its prediction") {
    auto cp = bench_cavity();
    auto ep = bench_ensemble();
    auto shape = cqed::revival_shape(2000, 10.0, cp, ep);
    double zero = cqed::first_zero_crossing(shape);
    CHECK(std::abs(zero / ep.t2star - frozen::kFirstZeroOverT2s_g1) < 1e-4);
    double pred = cqed::revival_zero_prediction(20000.0, cp, ep);
    CHECK(std::abs(pred / ep.t2star - frozen::kFirstZeroPred_g1) < 1e-5);
}

TEST_CASE("zero-position deviation from the asymptote shrinks with depth") {
    auto cp = bench_cavity();
    auto ep = bench_ensemble();
    double gamma_p = cqed::purcell_rate_scale(cp, ep);
    std::vector<double> devs;
    for (double gt : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        double big_t = gt / gamma_p;
        int n = static_cast<int>(std::lround(big_t / 10.0));
        auto shape = cqed::revival_shape(n, 10.0, cp, ep);
        double zero = cqed::first_zero_crossing(shape);
        double pred = cqed::revival_zero_prediction(big_t, cp, ep);
        devs.push_back(std::abs(zero - pred) / pred);
    }
    for (std::size_t i = 0; i < devs.size(); ++i) {
        CHECK(std::abs(devs[i] - frozen::kZeroDevTrend[i]) < 2e-4);
        if (i > 0) CHECK(devs[i] < devs[i - 1]);
    }
}

TEST_CASE("damped-cosine fit recovers the broadened width") {
    auto cp = bench_cavity();
    auto ep = bench_ensemble();
    auto shape = cqed::revival_shape(2000, 10.0, cp, ep);
    auto fit = cqed::fit_revival_profile(shape, cp, ep);
    CHECK(fit.converged);
    CHECK(std::abs(fit.width / ep.t2star - frozen::kFittedWidthOverT2s_g1) <
          1e-3);
}

TEST_CASE("averaged weight sits below its asymptote at finite depth") {
    auto cp = bench_cavity();
    auto ep = bench_ensemble();
    double gbar = cqed::gbar_average(8000, 10.0, cp, ep).value;
    double asym = cqed::gbar_asymptotic(80000.0, cp, ep);
    CHECK(std::abs(gbar - frozen::kGbarAtG4) < 1e-6);
    CHECK(std::abs(asym - frozen::kGbarAsymG4) < 1e-6);
    double gap = std::abs(gbar - asym) / asym;
    CHECK(gap > 0.18);
    CHECK(gap < 0.20);
}

TEST_CASE("full envelope composes Purcell decay with the cavity-free part") {
    auto cp = bench_cavity();
    auto ep = bench_ensemble();
    auto free_env = [](double t) {
        return std::exp(cplx(-0.01 * t, -0.3 * t));
    };
    double tau = 10.0;
    auto env = cqed::full_envelope(6, tau, cp, ep, free_env);
    CHECK(env.n_echoes == 6);
    CHECK(std::abs(env.values[0] - cplx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(env.weights[0] - cplx{1.0, 0.0}) < 1e-15);
    for (int n = 1; n <= 6; ++n) {
        double big_t = n * tau;
        cplx expected =
            cqed::purcell_envelope_factor_exact(big_t, cp, ep).value *
            free_env(big_t);
        CHECK(std::abs(env.values[n] - expected) < 1e-12);
        double weight = cqed::gbar_average(n, tau, cp, ep).value;
        CHECK(std::abs(env.weights[n] - cplx{weight, 0.0}) < 1e-12);
    }

    auto fast = cqed::full_envelope(3, tau, cp, ep, free_env,
                                    cqed::PurcellMode::asymptotic);
    for (int n = 1; n <= 3; ++n) {
        double big_t = n * tau;
        cplx expected =
            cqed::purcell_envelope_factor_asymptotic(big_t, cp, ep) *
            free_env(big_t);
        CHECK(std::abs(fast.values[n] - expected) < 1e-12);
    }

    auto detuned = cqed::full_envelope(2, tau, cp, ep, nullptr,
                                       cqed::PurcellMode::exact, 0.9);
    CHECK(detuned.frame_detuning == 0.9);
    CHECK(std::abs(detuned.delta_mod -
                   cqed::fold_frame_detuning(0.9, tau)) < 1e-15);
    CHECK(std::abs(detuned.values[1] -
                   cplx{cqed::purcell_envelope_factor_exact(tau, cp, ep).value,
                        0.0}) < 1e-12);

    CHECK_THROWS_WITH_AS(cqed::full_envelope(-1, tau, cp, ep, nullptr),
                         "full_envelope: need n_echoes >= 0, tau > 0",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(cqed::full_envelope(2, 0.0, cp, ep, nullptr),
                         "full_envelope: need n_echoes >= 0, tau > 0",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(cqed::revival_shape(-1, tau, cp, ep),
                         "revival_shape: need n >= 0, tau > 0",
                         std::invalid_argument);
}

TEST_CASE("frame detuning folds into the comb period") {
    double tau = 10.0;
    double period = 2.0 * M_PI / tau;
    CHECK(std::abs(cqed::fold_frame_detuning(0.3, tau) - 0.3) < 1e-15);
    double folded = cqed::fold_frame_detuning(-0.1, tau);
    CHECK(folded >= 0.0);
    CHECK(folded < period);
    CHECK(std::abs(folded - (period - 0.1)) < 1e-12);
    CHECK(std::abs(cqed::fold_frame_detuning(0.3 + 3.0 * period, tau) - 0.3) <
          1e-12);
}

TEST_CASE("detuning span resolves from the hole depth unless overridden") {
    auto cp = bench_cavity();
    auto ep = bench_ensemble();
    cqed::RevivalGrid grid;
    grid.eta_span = 33.0;
    CHECK(cqed::resolve_eta_span(20000.0, cp, ep, grid) == 33.0);
    grid.eta_span = 0.0;
    CHECK(std::abs(cqed::resolve_eta_span(0.0, cp, ep, grid) - 20.0 * cp.kappa) <
          1e-12);
    CHECK(std::abs(cqed::resolve_eta_span(20000.0, cp, ep, grid) -
                   10.0 / ep.t2star) < 1e-12);
}
