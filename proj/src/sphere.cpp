#include "bmsfield/sphere.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bmsfield/errors.hpp"

namespace bms {

namespace {

constexpr double kPi = std::numbers::pi;

void require_k(double k) {
    if (!(k > 1.0)) throw DomainError("A = L^2 + k requires k > 1, got k = " + std::to_string(k));
}

} // namespace

std::pair<int, int> harmonic_lm(int index) {
    int l = static_cast<int>(std::sqrt(static_cast<double>(index)));
    while (l * l > index) --l;
    while ((l + 1) * (l + 1) <= index) ++l;
    return {l, index - l * l - l};
}

template <class Derived>
HarmonicCoefficients<Derived>::HarmonicCoefficients(int lmax, std::vector<double> coeffs)
    : lmax_(lmax), c_(std::move(coeffs)) {
    if (lmax < 0) throw InputShapeError("negative truncation order");
    if (c_.size() != static_cast<std::size_t>(harmonic_count(lmax)))
        throw InputShapeError("coefficient array has length " + std::to_string(c_.size()) + ", expected " +
                              std::to_string(harmonic_count(lmax)) + " for L_max = " + std::to_string(lmax));
}

template <class Derived>
double HarmonicCoefficients<Derived>::l2_norm() const {
    double s = 0.0;
    for (double x : c_) s += x * x;
    return std::sqrt(s);
}

template <class Derived>
Derived HarmonicCoefficients<Derived>::resized(int lmax) const {
    Derived out(lmax);
    const std::size_t n = std::min(out.size(), c_.size());
    for (std::size_t i = 0; i < n; ++i) out[i] = c_[i];
    return out;
}

template <class Derived>
void HarmonicCoefficients<Derived>::require_same_order(const Derived& o) const {
    if (o.lmax() != lmax_)
        throw InputShapeError("truncation mismatch: L_max " + std::to_string(lmax_) + " vs " +
                              std::to_string(o.lmax()));
}

template <class Derived>
Derived& HarmonicCoefficients<Derived>::operator+=(const Derived& o) {
    require_same_order(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o[i];
    return self();
}

template <class Derived>
Derived& HarmonicCoefficients<Derived>::operator-=(const Derived& o) {
    require_same_order(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o[i];
    return self();
}

template <class Derived>
Derived& HarmonicCoefficients<Derived>::operator*=(double s) {
    for (double& x : c_) x *= s;
    return self();
}

template class HarmonicCoefficients<SphereFunction>;
template class HarmonicCoefficients<Supermomentum>;

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(static_cast<std::size_t>(n), 0.0);
    w.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // recompute derivative at the converged root
        double p0 = 1.0, p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        x[lo] = -z;
        x[hi] = z;
        w[lo] = w[hi] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

SphereGrid SphereGrid::gauss(int order) {
    if (order < 0) throw InputShapeError("grid order must be non-negative");
    SphereGrid g;
    g.order = order;
    std::vector<double> x, w;
    gauss_legendre(order + 1, x, w);
    const int nphi = 2 * order + 1;
    const double dphi = 2.0 * kPi / nphi;
    g.nodes.reserve(x.size() * static_cast<std::size_t>(nphi));
    g.weights.reserve(g.nodes.capacity());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double theta = std::acos(x[i]);
        for (int j = 0; j < nphi; ++j) {
            g.nodes.push_back({theta, j * dphi});
            g.weights.push_back(w[i] * dphi);
        }
    }
    return g;
}

void real_harmonics(int lmax, SpherePoint p, std::span<double> out) {
    if (out.size() < static_cast<std::size_t>(harmonic_count(lmax)))
        throw InputShapeError("output span too short for real_harmonics");
    const double ct = std::cos(p.theta);
    const double st = std::sin(p.theta);
    // Normalized associated Legendre functions without the Condon-Shortley phase.
    std::vector<double> plm(static_cast<std::size_t>(harmonic_count(lmax)), 0.0);
    auto P = [&](int l, int m) -> double& { return plm[static_cast<std::size_t>(harmonic_index(l, m))]; };
    P(0, 0) = 1.0 / std::sqrt(4.0 * kPi);
    for (int m = 1; m <= lmax; ++m) P(m, m) = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st * P(m - 1, m - 1);
    for (int m = 0; m < lmax; ++m) P(m + 1, m) = std::sqrt(2.0 * m + 3.0) * ct * P(m, m);
    for (int m = 0; m <= lmax; ++m) {
        for (int l = m + 2; l <= lmax; ++l) {
            const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
            const double b = std::sqrt(((l - 1.0) * (l - 1.0) - static_cast<double>(m) * m) /
                                       (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
            P(l, m) = a * (ct * P(l - 1, m) - b * P(l - 2, m));
        }
    }
    for (int l = 0; l <= lmax; ++l) {
        out[static_cast<std::size_t>(harmonic_index(l, 0))] = P(l, 0);
        for (int m = 1; m <= l; ++m) {
            const double base = std::sqrt(2.0) * P(l, m);
            out[static_cast<std::size_t>(harmonic_index(l, m))] = base * std::cos(m * p.phi);
            out[static_cast<std::size_t>(harmonic_index(l, -m))] = base * std::sin(m * p.phi);
        }
    }
}

double real_harmonic(int l, int m, SpherePoint p) {
    std::vector<double> all(static_cast<std::size_t>(harmonic_count(l)));
    real_harmonics(l, p, all);
    return all[static_cast<std::size_t>(harmonic_index(l, m))];
}

Eigen::MatrixXd harmonic_matrix(std::span<const SpherePoint> points, int lmax) {
    const auto n = static_cast<Eigen::Index>(points.size());
    const int nc = harmonic_count(lmax);
    Eigen::MatrixXd h(n, nc);
    std::vector<double> row(static_cast<std::size_t>(nc));
    for (Eigen::Index i = 0; i < n; ++i) {
        real_harmonics(lmax, points[static_cast<std::size_t>(i)], row);
        for (int j = 0; j < nc; ++j) h(i, j) = row[static_cast<std::size_t>(j)];
    }
    return h;
}

SphereFunction analyze(std::span<const double> values, const SphereGrid& grid, int lmax) {
    if (values.size() != grid.size())
        throw InputShapeError("analyze: " + std::to_string(values.size()) + " values for a grid of " +
                              std::to_string(grid.size()) + " nodes");
    SphereFunction f(lmax);
    std::vector<double> row(static_cast<std::size_t>(harmonic_count(lmax)));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        real_harmonics(lmax, grid.nodes[i], row);
        const double wv = grid.weights[i] * values[i];
        for (std::size_t j = 0; j < row.size(); ++j) f[j] += wv * row[j];
    }
    return f;
}

std::vector<double> synthesize(const SphereFunction& f, std::span<const SpherePoint> points) {
    std::vector<double> out(points.size(), 0.0);
    std::vector<double> row(f.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        real_harmonics(f.lmax(), points[i], row);
        double s = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) s += f[j] * row[j];
        out[i] = s;
    }
    return out;
}

double evaluate(const SphereFunction& f, SpherePoint p) {
    const SpherePoint pts[1] = {p};
    return synthesize(f, pts)[0];
}

SphereFunction apply_A(const SphereFunction& f, double k, int power) {
    require_k(k);
    SphereFunction out = f;
    for (int l = 0; l <= f.lmax(); ++l) {
        const double s = std::pow(a_eigenvalue(l, k), power);
        for (int m = -l; m <= l; ++m) out.at(l, m) *= s;
    }
    return out;
}

double nuclear_norm(const SphereFunction& f, int p, double k) {
    require_k(k);
    double s = 0.0;
    for (int l = 0; l <= f.lmax(); ++l) {
        const double lam = std::pow(a_eigenvalue(l, k), 2.0 * p);
        for (int m = -l; m <= l; ++m) s += lam * f.at(l, m) * f.at(l, m);
    }
    return std::sqrt(s);
}

double hs_norm_partial(double k, double alpha, int L_cut) {
    double s = 0.0;
    for (int l = 0; l <= L_cut; ++l) s += (2.0 * l + 1.0) * std::pow(a_eigenvalue(l, k), -alpha);
    return s;
}

std::pair<SphereFunction, SphereFunction> split_T4_ST(const SphereFunction& f) {
    SphereFunction t4(f.lmax()), st(f.lmax());
    for (std::size_t i = 0; i < f.size(); ++i) (i < 4 ? t4[i] : st[i]) = f[i];
    return {t4, st};
}

double pair(const Supermomentum& beta, const SphereFunction& alpha) {
    if (beta.lmax() != alpha.lmax())
        throw InputShapeError("pair: supermomentum L_max " + std::to_string(beta.lmax()) +
                              " does not match supertranslation L_max " + std::to_string(alpha.lmax()));
    double s = 0.0;
    for (std::size_t i = 0; i < beta.size(); ++i) s += beta[i] * alpha[i];
    return s;
}

Supermomentum dual_of(const SphereFunction& f) {
    return Supermomentum(f.lmax(), std::vector<double>(f.coeffs().begin(), f.coeffs().end()));
}

} // namespace bms
