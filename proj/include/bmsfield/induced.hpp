#pragma once

#include <array>
#include <functional>
#include <vector>

#include "bmsfield/bmsgroup.hpp"
#include "bmsfield/chaos_basis.hpp"
#include "bmsfield/metric.hpp"
#include "bmsfield/supermomenta.hpp"

namespace bms {

/// Product midpoint quadrature on an orbit of the Lorentz group.
///
/// Massive: p = m (cosh chi, sinh chi n), chi in (0, chi_max), weight m^2 sinh^2 chi dchi dOmega.
/// Massless: p = E (1, n) with E = scale e^s, s in (-chi_max, chi_max), weight E^2 ds dOmega.
/// Both are the invariant measure d^3p / p^0. Nodes are ordered (chi, theta, phi), phi fastest.
struct OrbitQuadrature {
    OrbitKind kind = OrbitKind::massive;
    double param = 1.0;
    double chi_max = 0.0;
    int n_chi = 1;
    int n_theta = 1;
    int n_phi = 1;
    std::vector<std::array<double, 4>> nodes; // Cartesian (t, x, y, z)
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
    std::size_t flat(int a, int b, int c) const {
        return (static_cast<std::size_t>(a) * static_cast<std::size_t>(n_theta) + static_cast<std::size_t>(b)) *
                   static_cast<std::size_t>(n_phi) +
               static_cast<std::size_t>(c);
    }
    /// Orbit coordinates (chi or s, theta, phi) of node i.
    std::array<double, 3> coords(std::size_t i) const;
};

/// n_sphere colatitude cells and 2 n_sphere longitude cells. chi_max = 0 on the
/// massive branch gives the single rest-frame node.
OrbitQuadrature build_orbit(OrbitKind kind, double param, double chi_max, int n_chi, int n_sphere);

struct InducedField {
    std::vector<cplx> values;
};

enum class EscapePolicy { error, zero_extension };

/// Value at an arbitrary orbit momentum by trilinear interpolation in (chi, theta, phi),
/// continuing through the poles and through chi = 0 by the antipodal reflection.
/// Returns false when the point lies outside the sampled window.
bool interpolate(const InducedField& phi, const OrbitQuadrature& orbit, const std::array<double, 4>& p, cplx& out);

/// (g Phi)(p) = exp(i (beta_p, alpha)) Phi(Lambda^{-1} p), beta_p the supermomentum of p.
InducedField induced_act(const BMSElement& g, const InducedField& phi, const OrbitQuadrature& orbit,
                         EscapePolicy policy = EscapePolicy::error);

double orbit_norm(const InducedField& phi, const OrbitQuadrature& orbit);

InducedField sample_field(const OrbitQuadrature& orbit, const std::function<cplx(const std::array<double, 3>&)>& f);

/// Momentum-space image of a covariant field depending only on the translation slots.
class CovariantReduction {
public:
    /// Throws ConstraintError when psi depends on a supertranslation slot.
    CovariantReduction(HermiteSeries psi, double weight_exponent = 0.25);

    /// F(p) = sum_n c_n prod_mu He_{n_mu}(p_mu), p in harmonic order.
    cplx polynomial(const FourMomentum& p) const;
    /// exp(-w |p|^2) F(p) with the Euclidean |p|^2.
    cplx weighted(const FourMomentum& p) const;
    InducedField on_orbit(const OrbitQuadrature& orbit) const;

    double weight_exponent() const { return w_; }

private:
    HermiteSeries psi_;
    double w_;
};

struct UnitarityReport {
    double phase_drift = 0.0;  // relative norm change under a translation
    double st_drift = 0.0;     // max |change| under a pure supertranslation
    double boost_drift = 0.0;  // relative norm change under the boost at base resolution
    double refined_drift = 0.0;
    double improvement = 0.0;  // boost_drift / refined_drift
};

/// Smooth bump supported in chi in (0.2, 1.4); boosted along z by `rapidity`,
/// base grid (n_chi, n_sphere) and one refinement by `refine`.
UnitarityReport unitarity_check(double rapidity, int n_chi, int n_sphere, int refine);

} // namespace bms
