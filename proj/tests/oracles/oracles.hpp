#pragma once
// Reference computations used only by the tests. Nothing here calls into the
// library's numerics: Hermite values, quadratures and harmonics are recomputed
// from their textbook definitions.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "bmsfield/chaos_basis.hpp"
#include "bmsfield/dynamics.hpp"
#include "bmsfield/metric.hpp"

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

template <class T>
T hermite(int n, T x) {
    T prev(1.0), cur = x;
    if (n == 0) return prev;
    for (int k = 1; k < n; ++k) {
        T next = x * cur - static_cast<double>(k) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

struct Quadrature {
    std::vector<double> x, w;
};

/// Golub-Welsch for the probabilists' weight; weights sum to one.
inline Quadrature gauss_hermite(int n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Quadrature q;
    for (int i = 0; i < n; ++i) {
        q.x.push_back(es.eigenvalues()[i]);
        q.w.push_back(es.eigenvectors()(0, i) * es.eigenvectors()(0, i));
    }
    return q;
}

/// Real orthonormal harmonic from std::sph_legendre (which carries the
/// Condon-Shortley phase; it is removed here).
inline double ylm(int l, int m, double theta, double phi) {
    const int am = std::abs(m);
    const double sign = am % 2 ? -1.0 : 1.0;
    const double base = sign * std::sph_legendre(static_cast<unsigned>(l), static_cast<unsigned>(am), theta);
    if (m == 0) return base;
    return std::sqrt(2.0) * base * (m > 0 ? std::cos(am * phi) : std::sin(am * phi));
}

/// Closed forms for l <= 2.
inline double ylm_closed(int l, int m, double th, double ph) {
    const double c = std::cos(th), s = std::sin(th);
    switch (l * 10 + m) {
    case 0: return 0.5 / std::sqrt(pi);
    case 9: return std::sqrt(3.0 / (4 * pi)) * s * std::sin(ph);
    case 10: return std::sqrt(3.0 / (4 * pi)) * c;
    case 11: return std::sqrt(3.0 / (4 * pi)) * s * std::cos(ph);
    case 18: return std::sqrt(15.0 / (16 * pi)) * s * s * std::sin(2 * ph);
    case 19: return std::sqrt(15.0 / (4 * pi)) * s * c * std::sin(ph);
    case 20: return std::sqrt(5.0 / (16 * pi)) * (3 * c * c - 1);
    case 21: return std::sqrt(15.0 / (4 * pi)) * s * c * std::cos(ph);
    case 22: return std::sqrt(15.0 / (16 * pi)) * s * s * std::cos(2 * ph);
    default: return NAN;
    }
}

/// (1+|z|^2)/(|a z + b|^2 + |c z + d|^2) straight from the matrix entries.
inline double conformal(const Eigen::Matrix2cd& m, cplx z) {
    return (1.0 + std::norm(z)) / (std::norm(m(0, 0) * z + m(0, 1)) + std::norm(m(1, 0) * z + m(1, 1)));
}

inline cplx mobius(const Eigen::Matrix2cd& m, cplx z) { return (m(0, 0) * z + m(0, 1)) / (m(1, 0) * z + m(1, 1)); }

/// Value and gradient of a Hermite series at the coordinates x.
struct PointValue {
    cplx value;
    std::vector<cplx> grad;
};

inline PointValue evaluate(const bms::HermiteSeries& psi, const std::vector<double>& x) {
    const int K = psi.K(), cap = psi.cap();
    std::vector<std::vector<double>> he(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i)
        for (int n = 0; n <= cap; ++n) he[static_cast<std::size_t>(i)].push_back(hermite(n, x[static_cast<std::size_t>(i)]));
    PointValue out{0.0, std::vector<cplx>(static_cast<std::size_t>(K), 0.0)};
    const bms::ChaosBasis& basis = psi.basis();
    for (int r = 0; r < basis.size(); ++r) {
        const cplx c = psi.coeffs()[r];
        if (c == cplx(0.0)) continue;
        const auto n = basis.index(r);
        double prod = 1.0;
        for (int i = 0; i < K; ++i) prod *= he[static_cast<std::size_t>(i)][n[static_cast<std::size_t>(i)]];
        out.value += c * prod;
        for (int j = 0; j < K; ++j) {
            const int nj = n[static_cast<std::size_t>(j)];
            if (nj == 0) continue;
            double d = nj * he[static_cast<std::size_t>(j)][static_cast<std::size_t>(nj - 1)];
            for (int i = 0; i < K; ++i)
                if (i != j) d *= he[static_cast<std::size_t>(i)][n[static_cast<std::size_t>(i)]];
            out.grad[static_cast<std::size_t>(j)] += c * d;
        }
    }
    return out;
}

/// Tensor Gauss-Hermite integral of f over K Gaussian coordinates.
template <class F>
double integrate(int K, int points, F&& f) {
    const Quadrature q = gauss_hermite(points);
    std::vector<int> idx(static_cast<std::size_t>(K), 0);
    std::vector<double> x(static_cast<std::size_t>(K));
    double total = 0.0;
    while (true) {
        double w = 1.0;
        for (int i = 0; i < K; ++i) {
            x[static_cast<std::size_t>(i)] = q.x[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
            w *= q.w[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        }
        total += w * f(x);
        int i = 0;
        while (i < K && ++idx[static_cast<std::size_t>(i)] == points) idx[static_cast<std::size_t>(i++)] = 0;
        if (i == K) break;
    }
    return total;
}

/// The constrained Lagrangian written as a Gaussian integral:
///   1/2 m2 psi^2 - 1/2 eta_0 (x_0 psi - 2 v)^2 - 1/2 sum_k eta_k (x_k psi - 2 d_k psi)^2
///   + 1/2 sum_i lambda_i (x_i psi - 2 d_i psi)^2.
inline double lagrangian_by_quadrature(const bms::FieldState& s, double m2, const bms::Metric& eta, int points) {
    const std::vector<int> mult = bms::multiplier_slots(s.psi.directions());
    return integrate(s.psi.K(), points, [&](const std::vector<double>& x) {
        const PointValue p = evaluate(s.psi, x);
        const double psi = p.value.real();
        auto qd = [&](int i) { return x[static_cast<std::size_t>(i)] * psi - 2.0 * p.grad[static_cast<std::size_t>(i)].real(); };
        const double q0 = x[0] * psi - 2.0 * evaluate(s.v, x).value.real();
        double val = 0.5 * m2 * psi * psi - 0.5 * eta(0) * q0 * q0;
        for (int k = 1; k < 4; ++k) val -= 0.5 * eta(k) * qd(k) * qd(k);
        for (std::size_t j = 0; j < mult.size(); ++j) {
            const double q = qd(mult[j]);
            val += 0.5 * evaluate(s.lambdas[j], x).value.real() * q * q;
        }
        return val;
    });
}

}  // namespace oracle
