#pragma once
// Chebyshev expansion of e^{-iHh} for Hermitian operators given as
// matrix-free matvecs with known spectral bounds. Coefficients are Bessel
// functions of the scaled step; the series truncates super-exponentially
// once the order passes the scaled bandwidth.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace cqed {

using VecC = Eigen::VectorXcd;

namespace detail {

// (2 - delta_k0) (-i)^k J_k(x), trimmed where the tail is below tol.
inline std::vector<std::complex<double>> chebyshev_coeffs(double x,
                                                          double tol = 1e-15) {
    if (x < 0.0) throw std::invalid_argument("chebyshev_coeffs: x must be >= 0");
    int n_max = static_cast<int>(
        std::ceil(x + 16.0 + 10.0 * std::cbrt(x + 1.0)));
    const std::complex<double> mi{0.0, -1.0};
    std::vector<std::complex<double>> c(n_max + 1);
    std::complex<double> rot{1.0, 0.0};
    for (int k = 0; k <= n_max; ++k) {
        double jk = std::cyl_bessel_j(static_cast<double>(k), x);
        c[k] = (k == 0 ? 1.0 : 2.0) * rot * jk;
        rot *= mi;
    }
    while (c.size() > 2 && std::abs(c.back()) < tol &&
           std::abs(c[c.size() - 2]) < tol)
        c.pop_back();
    return c;
}

}  // namespace detail

class ChebyshevPropagator {
  public:
    using MatVec = std::function<void(const VecC&, VecC&)>;

    ChebyshevPropagator(MatVec matvec, double spectrum_lo, double spectrum_hi)
        : matvec_(std::move(matvec)),
          center_(0.5 * (spectrum_hi + spectrum_lo)),
          radius_(0.5 * (spectrum_hi - spectrum_lo)) {
        if (!(radius_ > 0.0))
            throw std::invalid_argument(
                "ChebyshevPropagator: empty spectral interval");
    }

    // psi <- e^{-iHh} psi
    void apply(double h, VecC& psi) const {
        if (h == 0.0) return;
        if (h < 0.0)
            throw std::invalid_argument("ChebyshevPropagator: h must be >= 0");
        const auto& coeff = coeffs_for(radius_ * h);
        const auto n = psi.size();
        VecC t_prev = psi;
        VecC tmp(n), t_cur(n), t_next(n);
        matvec_(psi, tmp);
        t_cur = (tmp - center_ * psi) / radius_;
        VecC acc = coeff[0] * t_prev;
        if (coeff.size() > 1) acc += coeff[1] * t_cur;
        for (std::size_t k = 2; k < coeff.size(); ++k) {
            matvec_(t_cur, tmp);
            t_next = 2.0 * (tmp - center_ * t_cur) / radius_ - t_prev;
            acc += coeff[k] * t_next;
            t_prev.swap(t_cur);
            t_cur.swap(t_next);
        }
        psi = std::polar(1.0, -center_ * h) * acc;
    }

  private:
    const std::vector<std::complex<double>>& coeffs_for(double x) const {
        auto it = cache_.find(x);
        if (it == cache_.end())
            it = cache_.emplace(x, detail::chebyshev_coeffs(x)).first;
        return it->second;
    }

    MatVec matvec_;
    double center_;
    double radius_;
    mutable std::unordered_map<double, std::vector<std::complex<double>>>
        cache_;
};

}  // namespace cqed
