#include "bmsfield/induced.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bmsfield/dynamics.hpp"
#include "bmsfield/errors.hpp"
#include "bmsfield/whitenoise.hpp"

namespace bms {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_phi(double phi) {
    phi = std::fmod(phi, 2.0 * kPi);
    return phi < 0.0 ? phi + 2.0 * kPi : phi;
}

// First orbit coordinate and direction angles of a Cartesian momentum.
std::array<double, 3> orbit_coords(const OrbitQuadrature& o, const std::array<double, 4>& p) {
    const double r = std::sqrt(p[1] * p[1] + p[2] * p[2] + p[3] * p[3]);
    const double theta = r > 0.0 ? std::acos(std::clamp(p[3] / r, -1.0, 1.0)) : 0.0;
    const double phi = r > 0.0 ? wrap_phi(std::atan2(p[2], p[1])) : 0.0;
    const double first = o.kind == OrbitKind::massive ? std::asinh(r / o.param) : std::log(r / o.param);
    return {first, theta, phi};
}

struct Interp {
    const InducedField& f;
    const OrbitQuadrature& o;
    double dth, dph;

    cplx ring(int a, int b, double phi) const {
        const double x = wrap_phi(phi) / dph - 0.5;
        const int c0 = static_cast<int>(std::floor(x));
        const double t = x - c0;
        const int n = o.n_phi;
        const int i0 = ((c0 % n) + n) % n;
        const int i1 = (i0 + 1) % n;
        return (1.0 - t) * f.values[o.flat(a, b, i0)] + t * f.values[o.flat(a, b, i1)];
    }

    // Bilinear on the direction sphere of shell a, continued over the poles.
    cplx shell(int a, double theta, double phi) const {
        const double y = theta / dth - 0.5;
        const int b0 = static_cast<int>(std::floor(y));
        const double t = y - b0;
        cplx s = 0.0;
        for (int k = 0; k < 2; ++k) {
            const int b = b0 + k;
            const double w = k == 0 ? 1.0 - t : t;
            if (w == 0.0) continue;
            if (b < 0) s += w * ring(a, 0, phi + kPi);
            else if (b >= o.n_theta) s += w * ring(a, o.n_theta - 1, phi + kPi);
            else s += w * ring(a, b, phi);
        }
        return s;
    }
};

} // namespace

std::array<double, 3> OrbitQuadrature::coords(std::size_t i) const { return orbit_coords(*this, nodes[i]); }

OrbitQuadrature build_orbit(OrbitKind kind, double param, double chi_max, int n_chi, int n_sphere) {
    if (!(param > 0.0)) throw DomainError("orbit parameter must be positive, got " + std::to_string(param));
    if (chi_max < 0.0) throw DomainError("chi_max must be non-negative");
    if (n_chi < 1 || n_sphere < 1) throw DomainError("orbit resolution must be positive");
    OrbitQuadrature o;
    o.kind = kind;
    o.param = param;
    o.chi_max = chi_max;
    if (chi_max == 0.0) {
        if (kind == OrbitKind::massless) throw DomainError("massless orbit needs chi_max > 0");
        o.nodes.push_back({param, 0.0, 0.0, 0.0});
        o.weights.push_back(1.0);
        return o;
    }
    o.n_chi = n_chi;
    o.n_theta = n_sphere;
    o.n_phi = 2 * n_sphere;
    const double lo = kind == OrbitKind::massive ? 0.0 : -chi_max;
    const double dchi = (chi_max - lo) / n_chi;
    const double dth = kPi / o.n_theta;
    const double dph = 2.0 * kPi / o.n_phi;
    o.nodes.reserve(static_cast<std::size_t>(n_chi) * static_cast<std::size_t>(o.n_theta * o.n_phi));
    for (int a = 0; a < n_chi; ++a) {
        const double chi = lo + (a + 0.5) * dchi;
        double e, r, radial;
        if (kind == OrbitKind::massive) {
            e = param * std::cosh(chi);
            r = param * std::sinh(chi);
            radial = r * r;
        } else {
            e = r = param * std::exp(chi);
            radial = e * e;
        }
        for (int b = 0; b < o.n_theta; ++b) {
            const double th = (b + 0.5) * dth;
            for (int c = 0; c < o.n_phi; ++c) {
                const double ph = (c + 0.5) * dph;
                o.nodes.push_back({e, r * std::sin(th) * std::cos(ph), r * std::sin(th) * std::sin(ph), r * std::cos(th)});
                o.weights.push_back(radial * dchi * std::sin(th) * dth * dph);
            }
        }
    }
    return o;
}

bool interpolate(const InducedField& phi, const OrbitQuadrature& o, const std::array<double, 4>& p, cplx& out) {
    if (phi.values.size() != o.size()) throw InputShapeError("field size does not match orbit quadrature");
    const auto [first, theta, ph] = orbit_coords(o, p);
    if (o.size() == 1) {
        if (std::abs(first) > 1e-12) return false;
        out = phi.values[0];
        return true;
    }
    const double lo = o.kind == OrbitKind::massive ? 0.0 : -o.chi_max;
    const double dchi = (o.chi_max - lo) / o.n_chi;
    const double x = (first - lo) / dchi - 0.5;
    const bool below = o.kind == OrbitKind::massive ? x < -0.5 : x < -1e-12;
    if (below || x > o.n_chi - 1 + 1e-12 || !std::isfinite(x)) return false;
    const Interp in{phi, o, kPi / o.n_theta, 2.0 * kPi / o.n_phi};
    const int a0 = static_cast<int>(std::floor(x));
    const double t = x - a0;
    cplx s = 0.0;
    for (int k = 0; k < 2; ++k) {
        const int a = a0 + k;
        const double w = k == 0 ? 1.0 - t : t;
        if (w == 0.0) continue;
        // chi < 0 is the antipodal point at |chi|.
        if (a < 0) s += w * in.shell(0, kPi - theta, ph + kPi);
        else s += w * in.shell(std::min(a, o.n_chi - 1), theta, ph);
    }
    out = s;
    return true;
}

InducedField induced_act(const BMSElement& g, const InducedField& phi, const OrbitQuadrature& orbit,
                         EscapePolicy policy) {
    if (phi.values.size() != orbit.size()) throw InputShapeError("field size does not match orbit quadrature");
    const Eigen::Matrix4d inv = cartesian_lorentz(g.lambda.inverse());
    const int lmax = std::max(1, g.f.lmax());
    const SphereFunction alpha = g.f.resized(lmax);
    InducedField out;
    out.values.resize(orbit.size());
    std::vector<std::size_t> escaped;
    const SL2C lam = g.lambda.canonical();
    const bool pure_translation = lam.a() == 1.0 && lam.b() == 0.0 && lam.c() == 0.0 && lam.d() == 1.0;
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        const auto& p = orbit.nodes[i];
        const Eigen::Vector4d q = inv * Eigen::Vector4d(p[0], p[1], p[2], p[3]);
        cplx val = phi.values[i];
        if (!pure_translation && !interpolate(phi, orbit, {q[0], q[1], q[2], q[3]}, val)) {
            escaped.push_back(i);
            val = 0.0;
        }
        const double phase = pair(beta_from_four_momentum(FourMomentum::from_cartesian(p), lmax), alpha);
        out.values[i] = std::polar(1.0, phase) * val;
    }
    if (!escaped.empty() && policy == EscapePolicy::error) {
        std::string list;
        for (std::size_t k = 0; k < std::min<std::size_t>(escaped.size(), 8); ++k)
            list += (k ? ", " : "") + std::to_string(escaped[k]);
        throw CoverageError(std::to_string(escaped.size()) + " orbit nodes leave the sampled window under the inverse "
                            "Lorentz map (first: " + list + ")");
    }
    return out;
}

double orbit_norm(const InducedField& phi, const OrbitQuadrature& orbit) {
    if (phi.values.size() != orbit.size()) throw InputShapeError("field size does not match orbit quadrature");
    double s = 0.0;
    for (std::size_t i = 0; i < orbit.size(); ++i) s += std::norm(phi.values[i]) * orbit.weights[i];
    return std::sqrt(s);
}

InducedField sample_field(const OrbitQuadrature& orbit, const std::function<cplx(const std::array<double, 3>&)>& f) {
    InducedField out;
    out.values.reserve(orbit.size());
    for (std::size_t i = 0; i < orbit.size(); ++i) out.values.push_back(f(orbit.coords(i)));
    return out;
}

CovariantReduction::CovariantReduction(HermiteSeries psi, double weight_exponent)
    : psi_(std::move(psi)), w_(weight_exponent) {
    const double defect = constraint_pairing_defect(psi_);
    if (defect > 1e-12 * std::max(1.0, gaussian_norm(psi_)))
        throw ConstraintError("covariant field depends on supertranslation slots (residual norm " +
                              std::to_string(defect) + ")");
}

cplx CovariantReduction::polynomial(const FourMomentum& p) const {
    std::vector<double> x(static_cast<std::size_t>(psi_.K()), 0.0);
    for (std::size_t mu = 0; mu < 4; ++mu) x[mu] = p.p[mu];
    return eval_at_coords(psi_, x);
}

cplx CovariantReduction::weighted(const FourMomentum& p) const {
    double r2 = 0.0;
    for (double v : p.p) r2 += v * v;
    return std::exp(-w_ * r2) * polynomial(p);
}

InducedField CovariantReduction::on_orbit(const OrbitQuadrature& orbit) const {
    InducedField out;
    out.values.reserve(orbit.size());
    for (const auto& p : orbit.nodes) out.values.push_back(weighted(FourMomentum::from_cartesian(p)));
    return out;
}

namespace {

cplx bump(const std::array<double, 3>& c) {
    const double r = (c[0] - 0.8) / 0.6;
    if (std::abs(r) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - r * r)) * (1.0 + 0.3 * std::cos(c[1]) + 0.2 * std::sin(c[1]) * std::cos(c[2]));
}

double boost_drift(double rapidity, int n_chi, int n_sphere) {
    const OrbitQuadrature o = build_orbit(OrbitKind::massive, 1.0, 2.0, n_chi, n_sphere);
    const InducedField f = sample_field(o, bump);
    // The bump lives in chi < 1.4 and the boost moves it by at most `rapidity`, so
    // momenta pulled back from beyond the window see a vanishing field.
    const BMSElement g{SL2C::boost({0.0, 0.0, 1.0}, rapidity), SphereFunction(1)};
    const double before = orbit_norm(f, o);
    const double after = orbit_norm(induced_act(g, f, o, EscapePolicy::zero_extension), o);
    return std::abs(after - before) / before;
}

} // namespace

UnitarityReport unitarity_check(double rapidity, int n_chi, int n_sphere, int refine) {
    if (rapidity < 0.0 || rapidity > 0.6) throw DomainError("unitarity check rapidity must lie in [0, 0.6]");
    if (refine < 2) throw DomainError("refinement factor must be at least 2");
    UnitarityReport rep;
    const OrbitQuadrature o = build_orbit(OrbitKind::massive, 1.0, 2.0, n_chi, n_sphere);
    const InducedField f = sample_field(o, bump);
    const double n0 = orbit_norm(f, o);

    SphereFunction translation(2);
    translation.at(0, 0) = 0.7;
    translation.at(1, 1) = -1.3;
    translation.at(1, -1) = 0.4;
    const InducedField ft = induced_act({SL2C::identity(), translation}, f, o);
    rep.phase_drift = std::abs(orbit_norm(ft, o) - n0) / n0;

    SphereFunction st(2);
    st.at(2, 0) = 1.5;
    st.at(2, -2) = -0.8;
    const InducedField fs = induced_act({SL2C::identity(), st}, f, o);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        rep.st_drift = std::max(rep.st_drift, std::abs(fs.values[i] - f.values[i]));

    rep.boost_drift = boost_drift(rapidity, n_chi, n_sphere);
    rep.refined_drift = boost_drift(rapidity, n_chi * refine, n_sphere * refine);
    rep.improvement = rep.refined_drift > 0.0 ? rep.boost_drift / rep.refined_drift : INFINITY;
    return rep;
}

} // namespace bms
