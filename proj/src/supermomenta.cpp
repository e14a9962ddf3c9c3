#include "bmsfield/supermomenta.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bmsfield/errors.hpp"

namespace bms {

namespace {

const double kTimeScale = std::sqrt(3.0 / (4.0 * std::numbers::pi));
const double kSpaceScale = 1.0 / std::sqrt(4.0 * std::numbers::pi);

void require_dipole(int lmax) {
    if (lmax < 1) throw InputShapeError("four-momentum needs L_max >= 1, got " + std::to_string(lmax));
}

} // namespace

FourMomentum project_T4(const Supermomentum& beta) {
    FourMomentum out;
    out.p[0] = -kTimeScale * beta[0];
    if (beta.lmax() >= 1)
        for (std::size_t i = 1; i < 4; ++i) out.p[i] = -kSpaceScale * beta[i];
    return out;
}

Supermomentum beta_from_four_momentum(const FourMomentum& p, int lmax) {
    require_dipole(lmax);
    Supermomentum b(lmax);
    b[0] = -p.p[0] / kTimeScale;
    for (std::size_t i = 1; i < 4; ++i) b[i] = -p.p[i] / kSpaceScale;
    return b;
}

FourMomentum lorentz_transform(const SL2C& lam, const FourMomentum& p) {
    const auto c = p.cartesian();
    const Eigen::Vector4d v = cartesian_lorentz(lam) * Eigen::Vector4d(c[0], c[1], c[2], c[3]);
    return FourMomentum::from_cartesian({v[0], v[1], v[2], v[3]});
}

double casimir_B(const Supermomentum& beta1, const Supermomentum& beta2, const Metric& eta) {
    return eta.contract(project_T4(beta1).p, project_T4(beta2).p);
}

double mass_squared(const Supermomentum& beta, const Metric& eta) { return casimir_B(beta, beta, eta); }

Supermomentum orbit_fixed_point(OrbitKind kind, double param, int lmax) {
    if (kind == OrbitKind::massive) {
        if (param < 0.0) throw DomainError("massive fixed point needs m >= 0, got " + std::to_string(param));
        Supermomentum b(lmax);
        b[0] = param / kTimeScale;
        return b;
    }
    if (!(param > 0.0)) throw DomainError("massless fixed point needs E > 0, got " + std::to_string(param));
    return beta_from_four_momentum(FourMomentum::from_cartesian({param, 0.0, 0.0, param}), lmax);
}

bool annihilator_check(const Supermomentum& beta, double tol) {
    for (std::size_t i = 4; i < beta.size(); ++i)
        if (std::abs(beta[i]) > tol) return false;
    return true;
}

} // namespace bms
