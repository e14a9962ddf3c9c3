#pragma once

#include <array>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "bmsfield/sphere.hpp"

namespace bms {

using cplx = std::complex<double>;

/// Unimodular complex 2x2 matrix [[a, b], [c, d]].
///
/// Construction divides by a square root of the determinant, so any
/// invertible input is accepted and the stored matrix has det = 1.
class SL2C {
public:
    SL2C() = default;
    SL2C(cplx a, cplx b, cplx c, cplx d);

    static SL2C identity() { return {}; }
    /// Entries stored as given; throws DomainError unless |det - 1| <= 1e-10.
    static SL2C exact(cplx a, cplx b, cplx c, cplx d);
    /// Rotation by `angle` about the Cartesian axis `axis` (acts on the sphere of
    /// directions as that rotation).
    static SL2C rotation(std::array<double, 3> axis, double angle);
    /// Pure boost with the given rapidity along a Cartesian direction.
    static SL2C boost(std::array<double, 3> direction, double rapidity);
    /// Gaussian entries projected to det 1.
    static SL2C random(std::mt19937_64& rng);
    static SL2C random_rotation(std::mt19937_64& rng);
    /// Random rotation times a boost of rapidity uniform in [0, max_rapidity].
    static SL2C random_lorentz(std::mt19937_64& rng, double max_rapidity);

    cplx a() const { return a_; }
    cplx b() const { return b_; }
    cplx c() const { return c_; }
    cplx d() const { return d_; }
    cplx det() const { return a_ * d_ - b_ * c_; }
    Eigen::Matrix2cd matrix() const;

    SL2C inverse() const { return raw(d_, -b_, -c_, a_); }
    SL2C operator-() const { return raw(-a_, -b_, -c_, -d_); }
    /// The one of +-lam whose first nonzero entry has positive real part (or is
    /// positive imaginary). lam and -lam give bitwise identical results.
    SL2C canonical() const;
    friend SL2C operator*(const SL2C& x, const SL2C& y);

private:
    static SL2C raw(cplx a, cplx b, cplx c, cplx d);

    cplx a_{1.0}, b_{0.0}, c_{0.0}, d_{1.0};
};

/// Point of the extended complex plane in homogeneous coordinates zeta = z1/z2.
class RiemannPoint {
public:
    RiemannPoint() = default;
    RiemannPoint(cplx z1, cplx z2);

    static RiemannPoint finite(cplx zeta) { return {zeta, 1.0}; }
    static RiemannPoint infinity() { return {1.0, 0.0}; }
    /// zeta = e^{i phi} cot(theta/2).
    static RiemannPoint from_angles(SpherePoint p);

    bool is_infinity() const { return z2_ == cplx(0.0); }
    cplx value() const; // throws DomainError at infinity
    cplx z1() const { return z1_; }
    cplx z2() const { return z2_; }
    SpherePoint angles() const;

private:
    cplx z1_{0.0}, z2_{1.0};
};

/// (a zeta + b)/(c zeta + d); infinity maps to a/c and -d/c to infinity.
RiemannPoint mobius(const SL2C& lam, const RiemannPoint& zeta);

/// K_Lambda(zeta) = (1+|zeta|^2)/(|a zeta + b|^2 + |c zeta + d|^2), finite at infinity by homogeneity.
double conformal_factor(const SL2C& lam, const RiemannPoint& zeta);

/// Lambda_{mu nu} = (1/2) tr(sigma_mu lam sigma_nu lam^dagger), basis (t, x, y, z) with Pauli sigmas.
Eigen::Matrix4d covering_map(const SL2C& lam);

/// The same Lorentz transformation written in the Cartesian frame of the
/// sphere coordinates (theta, phi): P covering_map(lam) P with P = diag(1,1,-1,1).
/// The stereographic convention zeta = e^{i phi}cot(theta/2) attaches the Pauli
/// vector (sin theta cos phi, -sin theta sin phi, cos theta) to zeta.
Eigen::Matrix4d cartesian_lorentz(const SL2C& lam);

/// (Lambda, f): Lorentz part and supertranslation.
struct BMSElement {
    SL2C lambda;
    SphereFunction f;

    static BMSElement identity(int lmax) { return {SL2C::identity(), SphereFunction(lmax)}; }
};

/// Truncated matrix of f -> (K_{Lambda^-1} o Lambda) (f o Lambda), entries <Y_i, T Y_j>.
/// Evaluated on a quadrature grid of order 2*lmax and projected back to lmax.
Eigen::MatrixXd lorentz_action_matrix(const SL2C& lam, int lmax);

SphereFunction lorentz_act_function(const SL2C& lam, const SphereFunction& f);

/// (L', f') . (L, f) = (L' L, f + lorentz_act_function(L, f')).
BMSElement compose(const BMSElement& g1, const BMSElement& g2);
BMSElement inverse(const BMSElement& g);

struct ScriPoint {
    double u = 0.0;
    RiemannPoint zeta;
};

/// (u, zeta) -> (K_Lambda(zeta)(u + f(zeta)), Lambda zeta).
ScriPoint act_on_scri(const BMSElement& g, const ScriPoint& x);

/// Transpose of lorentz_action_matrix: <dual_act(lam, beta), alpha> = <beta, lorentz_act_function(lam, alpha)>.
Supermomentum dual_act(const SL2C& lam, const Supermomentum& beta);

} // namespace bms
