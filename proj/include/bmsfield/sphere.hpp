#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace bms {

constexpr int harmonic_count(int lmax) { return (lmax + 1) * (lmax + 1); }
constexpr int harmonic_index(int l, int m) { return l * l + l + m; }

/// (l, m) for a flat coefficient index.
std::pair<int, int> harmonic_lm(int index);

/// Eigenvalue of A = L^2 + k on Y_lm.
constexpr double a_eigenvalue(int l, double k) { return l * (l + 1.0) + k; }

/// Coefficient vector over real orthonormal harmonics Y_lm, 0 <= l <= lmax.
///
/// Shared storage for supertranslations and supermomenta; the two are kept as
/// distinct types so a dual vector cannot be passed where a function is expected.
template <class Derived>
class HarmonicCoefficients {
public:
    HarmonicCoefficients() = default;
    explicit HarmonicCoefficients(int lmax) : lmax_(lmax), c_(static_cast<std::size_t>(harmonic_count(lmax)), 0.0) {}
    HarmonicCoefficients(int lmax, std::vector<double> coeffs);

    static Derived unit(int lmax, int l, int m) {
        Derived d(lmax);
        d.at(l, m) = 1.0;
        return d;
    }

    int lmax() const { return lmax_; }
    std::size_t size() const { return c_.size(); }

    double& at(int l, int m) { return c_[static_cast<std::size_t>(harmonic_index(l, m))]; }
    double at(int l, int m) const { return c_[static_cast<std::size_t>(harmonic_index(l, m))]; }
    double& operator[](std::size_t i) { return c_[i]; }
    double operator[](std::size_t i) const { return c_[i]; }

    std::span<const double> coeffs() const { return c_; }
    std::span<double> coeffs() { return c_; }
    Eigen::Map<const Eigen::VectorXd> vec() const { return {c_.data(), static_cast<Eigen::Index>(c_.size())}; }

    /// Euclidean norm of the coefficient vector (the L2 norm on the sphere).
    double l2_norm() const;

    /// Copy truncated or zero-padded to a different order.
    Derived resized(int lmax) const;

    Derived& operator+=(const Derived& o);
    Derived& operator-=(const Derived& o);
    Derived& operator*=(double s);

    friend Derived operator+(Derived a, const Derived& b) { return a += b; }
    friend Derived operator-(Derived a, const Derived& b) { return a -= b; }
    friend Derived operator*(double s, Derived a) { return a *= s; }
    friend Derived operator*(Derived a, double s) { return a *= s; }
    friend bool operator==(const HarmonicCoefficients& a, const HarmonicCoefficients& b) {
        return a.lmax_ == b.lmax_ && a.c_ == b.c_;
    }

private:
    Derived& self() { return static_cast<Derived&>(*this); }
    void require_same_order(const Derived& o) const;

    int lmax_ = 0;
    std::vector<double> c_ = std::vector<double>(1, 0.0);
};

/// A supertranslation alpha in C^inf(S^2), band-limited to lmax.
class SphereFunction : public HarmonicCoefficients<SphereFunction> {
public:
    using HarmonicCoefficients::HarmonicCoefficients;
};

/// A real distribution on S^2 restricted to the truncation; pairs with
/// SphereFunction by the coefficient dot product.
class Supermomentum : public HarmonicCoefficients<Supermomentum> {
public:
    using HarmonicCoefficients::HarmonicCoefficients;
};

struct SpherePoint {
    double theta = 0.0; // colatitude
    double phi = 0.0;   // longitude
};

/// Product quadrature: Gauss-Legendre in cos(theta) (order+1 nodes) times a
/// uniform longitude grid (2*order+1 nodes). Integrates Y_lm Y_l'm' exactly
/// for l + l' <= 2*order.
struct SphereGrid {
    int order = 0;
    std::vector<SpherePoint> nodes;
    std::vector<double> weights;

    static SphereGrid gauss(int order);
    std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

/// All real harmonics Y_lm(theta, phi) for l <= lmax, written in flat order.
void real_harmonics(int lmax, SpherePoint p, std::span<double> out);
double real_harmonic(int l, int m, SpherePoint p);

/// Rows: points; columns: flat harmonic index.
Eigen::MatrixXd harmonic_matrix(std::span<const SpherePoint> points, int lmax);

SphereFunction analyze(std::span<const double> values, const SphereGrid& grid, int lmax);
std::vector<double> synthesize(const SphereFunction& f, std::span<const SpherePoint> points);
double evaluate(const SphereFunction& f, SpherePoint p);

/// Coefficientwise scaling by (l(l+1)+k)^power. Requires k > 1.
SphereFunction apply_A(const SphereFunction& f, double k, int power);

/// ||A^p f||_{L2}.
double nuclear_norm(const SphereFunction& f, int p, double k);

/// sum_{l=0}^{L_cut} (2l+1) (l(l+1)+k)^(-alpha); zero for L_cut < 0.
double hs_norm_partial(double k, double alpha, int L_cut);

/// (l <= 1 part, l > 1 part).
std::pair<SphereFunction, SphereFunction> split_T4_ST(const SphereFunction& f);

double pair(const Supermomentum& beta, const SphereFunction& alpha);

/// The dual vector with the same coefficients (Y*_lm has the coefficients of Y_lm).
Supermomentum dual_of(const SphereFunction& f);

} // namespace bms
