#pragma once

#include <array>

#include "bmsfield/bmsgroup.hpp"
#include "bmsfield/metric.hpp"
#include "bmsfield/sphere.hpp"

namespace bms {

/// Four-momentum read off the l <= 1 block of a supermomentum.
///
/// Components are stored in harmonic order (Y_00, Y_1-1, Y_10, Y_11), the same
/// order as the translation directions e_0..e_3. cartesian() reorders to (t, x, y, z):
/// Y_11 ~ x, Y_1-1 ~ y, Y_10 ~ z.
struct FourMomentum {
    std::array<double, 4> p{};

    double operator[](int mu) const { return p[static_cast<std::size_t>(mu)]; }
    std::array<double, 4> cartesian() const { return {p[0], p[3], p[1], p[2]}; }
    static FourMomentum from_cartesian(const std::array<double, 4>& c) { return {{c[0], c[2], c[3], c[1]}}; }

    friend FourMomentum operator+(const FourMomentum& a, const FourMomentum& b) {
        return {{a.p[0] + b.p[0], a.p[1] + b.p[1], a.p[2] + b.p[2], a.p[3] + b.p[3]}};
    }
    friend bool operator==(const FourMomentum&, const FourMomentum&) = default;
};

/// p_0 = -sqrt(3/4pi) b_00 and p_i = -b_1m / sqrt(4pi).
///
/// The spatial factor differs from the time factor by 1/sqrt(3): with
/// orthonormal harmonics, Y_1m = sqrt(3/4pi) x_i while Y_00 = 1/sqrt(4pi), and only
/// this scaling makes the extracted vector transform under covering_map.
FourMomentum project_T4(const Supermomentum& beta);

/// Inverse of project_T4 on the l <= 1 block (l > 1 coefficients zero).
Supermomentum beta_from_four_momentum(const FourMomentum& p, int lmax);

/// Lorentz transformation of a four-momentum by the image of lam under the covering map.
FourMomentum lorentz_transform(const SL2C& lam, const FourMomentum& p);

double casimir_B(const Supermomentum& beta1, const Supermomentum& beta2, const Metric& eta = Metric{});
double mass_squared(const Supermomentum& beta, const Metric& eta = Metric{});

enum class OrbitKind { massive, massless };

/// Massive: sqrt(4pi/3) m Y*_00. Massless: the l <= 1 representative whose
/// four-momentum is the forward null vector (E, 0, 0, E) in Cartesian order.
/// m = 0 on the massive branch gives the zero supermomentum.
Supermomentum orbit_fixed_point(OrbitKind kind, double param, int lmax);

/// True iff every l > 1 coefficient is at most tol in absolute value.
bool annihilator_check(const Supermomentum& beta, double tol);

} // namespace bms
