// Gaussian quadrature rules (Golub-Welsch) and adaptive panel integration.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace cqed {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

// Nodes/weights from the symmetric tridiagonal Jacobi matrix. mu0 is the
// zeroth moment of the weight function.
inline QuadratureRule golub_welsch(const Eigen::VectorXd& diag,
                                   const Eigen::VectorXd& sub, double mu0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("quadrature: tridiagonal eigensolve failed");
    const auto n = diag.size();
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        rule.nodes[i] = es.eigenvalues()(i);
        double v0 = es.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

// Orthonormal Hermite recurrence at a point, rescaled by powers of 1e140 so
// that high orders neither overflow nor lose the tail weights. Returns
// log|h_{n-1}(x)| (for the closed-form weight) and the Newton correction
// h_n / h_n' = h_n / (sqrt(2n) h_{n-1}) in which the rescaling cancels.
struct HermitePoint {
    double log_abs_prev = 0.0;
    double newton_step = 0.0;
};

inline HermitePoint hermite_point(int order, double x) {
    double prev = 0.0;
    double cur = std::pow(M_PI, -0.25);
    double log_scale = 0.0;
    static const double kRescale = 1e140;
    static const double kLogRescale = std::log(kRescale);
    for (int k = 0; k < order; ++k) {
        double next =
            (x * cur - std::sqrt(0.5 * k) * prev) / std::sqrt(0.5 * (k + 1));
        prev = cur;
        cur = next;
        if (std::abs(cur) > kRescale) {
            cur /= kRescale;
            prev /= kRescale;
            log_scale += kLogRescale;
        }
    }
    HermitePoint out;
    out.log_abs_prev = std::log(std::abs(prev)) + log_scale;
    out.newton_step = cur / (std::sqrt(2.0 * order) * prev);
    return out;
}

}  // namespace detail

// Gauss-Hermite rule for weight e^{-x^2} on (-inf, inf). Weights are
// normalised to sum to 1, i.e. they implement the Gaussian *average*
// (1/sqrt(pi)) integral e^{-x^2} f(x) dx.
//
// Nodes are Jacobi-matrix eigenvalues (values only; accumulating the
// eigenvector matrix is cubic in the order and dominates at the high orders
// the doubling average reaches), polished by one Newton step. Weights use
// the closed form 1/(n h_{n-1}(x_i)^2) in log space.
inline const QuadratureRule& gauss_hermite(int order) {
    static std::map<int, QuadratureRule> cache;
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;
    if (order < 1) throw std::invalid_argument("gauss_hermite: order < 1");
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd sub(order > 1 ? order - 1 : 0);
    for (int k = 1; k < order; ++k) sub(k - 1) = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("quadrature: tridiagonal eigensolve failed");
    QuadratureRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const double log_norm =
        std::log(static_cast<double>(order)) + 0.5 * std::log(M_PI);
    for (int i = 0; i < order; ++i) {
        double x = es.eigenvalues()(i);
        double step = detail::hermite_point(order, x).newton_step;
        if (std::isfinite(step)) x -= step;
        auto ref = detail::hermite_point(order, x);
        rule.nodes[i] = x;
        rule.weights[i] = std::exp(-2.0 * ref.log_abs_prev - log_norm);
    }
    return cache.emplace(order, std::move(rule)).first->second;
}

// Gauss-Legendre rule on [-1, 1].
inline const QuadratureRule& gauss_legendre(int order) {
    static std::map<int, QuadratureRule> cache;
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;
    if (order < 1) throw std::invalid_argument("gauss_legendre: order < 1");
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd sub(order > 1 ? order - 1 : 0);
    for (int k = 1; k < order; ++k)
        sub(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
    QuadratureRule rule = detail::golub_welsch(diag, sub, 2.0);
    return cache.emplace(order, std::move(rule)).first->second;
}

template <typename T>
struct AverageResult {
    T value{};
    double error_estimate = 0.0;
    int order_used = 0;
    bool converged = false;
    bool stalled = false;
};

// <<f>> = (1/sqrt(pi)) integral e^{-x^2} f(x) dx by Gauss-Hermite with order
// doubling until the increment drops below tol (relative to max(1, |value|)).
// Stall detection: two consecutive doublings failing to shrink the increment
// by at least 2x abort the loop with stalled = true.
template <typename F>
auto hermite_average(F&& f, double tol = 1e-9, int start_order = 200,
                     int max_order = 6400)
    -> AverageResult<decltype(f(0.0))> {
    using T = decltype(f(0.0));
    AverageResult<T> res;
    T prev{};
    double prev_delta = -1.0;
    int stall_count = 0;
    bool have_prev = false;
    for (int order = start_order; order <= max_order; order *= 2) {
        const auto& rule = gauss_hermite(order);
        T acc{};
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            acc += rule.weights[i] * f(rule.nodes[i]);
        res.order_used = order;
        if (have_prev) {
            double delta = std::abs(acc - prev);
            res.error_estimate = delta;
            double scale = std::max(1.0, std::abs(acc));
            if (delta <= tol * scale) {
                res.value = acc;
                res.converged = true;
                return res;
            }
            if (prev_delta >= 0.0 && delta > 0.5 * prev_delta) {
                if (++stall_count >= 2) {
                    res.value = acc;
                    res.stalled = true;
                    return res;
                }
            } else {
                stall_count = 0;
            }
            prev_delta = delta;
        }
        prev = acc;
        have_prev = true;
        res.value = acc;
    }
    return res;
}

namespace detail {

template <typename F, typename T>
T panel_recurse(F& f, double a, double b, double tol, int depth) {
    const auto& hi = gauss_legendre(15);
    const auto& lo = gauss_legendre(7);
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    T acc_hi{}, acc_lo{};
    for (std::size_t i = 0; i < hi.nodes.size(); ++i)
        acc_hi += hi.weights[i] * f(mid + half * hi.nodes[i]);
    for (std::size_t i = 0; i < lo.nodes.size(); ++i)
        acc_lo += lo.weights[i] * f(mid + half * lo.nodes[i]);
    acc_hi *= half;
    acc_lo *= half;
    double err = std::abs(acc_hi - acc_lo);
    if (err <= tol || depth <= 0) return acc_hi;
    return panel_recurse<F, T>(f, a, mid, 0.5 * tol, depth - 1) +
           panel_recurse<F, T>(f, mid, b, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Gauss-Legendre over [a, b], pre-split at the supplied breakpoints
// (integrable structure the caller knows about: resonance poles, pulse
// times). Tolerance is absolute.
template <typename F>
auto panel_integrate(F&& f, double a, double b,
                     const std::vector<double>& breakpoints, double tol = 1e-10,
                     int max_depth = 30) -> decltype(f(0.0)) {
    using T = decltype(f(0.0));
    if (!(b > a)) return T{};
    std::vector<double> edges{a};
    for (double x : breakpoints)
        if (x > a && x < b) edges.push_back(x);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    T total{};
    double tol_per = tol / static_cast<double>(edges.size() - 1);
    for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
        if (edges[j + 1] - edges[j] < 1e-300) continue;
        total += detail::panel_recurse<std::decay_t<F>, T>(
            f, edges[j], edges[j + 1], tol_per, max_depth);
    }
    return total;
}

}  // namespace cqed
