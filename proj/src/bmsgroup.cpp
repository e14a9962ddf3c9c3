#include "bmsfield/bmsgroup.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "bmsfield/errors.hpp"

namespace bms {

namespace {

// Pauli-frame axis for a Cartesian axis (the y flip of the stereographic convention).
std::array<double, 3> pauli_axis(std::array<double, 3> n) {
    const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    if (len == 0.0) throw DomainError("axis must be non-zero");
    return {n[0] / len, -n[1] / len, n[2] / len};
}

struct GridCache {
    SphereGrid grid;
    Eigen::MatrixXd weighted_harmonics; // diag(w) H
};

std::shared_ptr<const GridCache> oversampled_grid(int lmax) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const GridCache>> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(lmax);
    if (it != cache.end()) return it->second;
    auto gc = std::make_shared<GridCache>();
    gc->grid = SphereGrid::gauss(2 * lmax);
    Eigen::MatrixXd h = harmonic_matrix(gc->grid.nodes, lmax);
    for (Eigen::Index i = 0; i < h.rows(); ++i) h.row(i) *= gc->grid.weights[static_cast<std::size_t>(i)];
    gc->weighted_harmonics = std::move(h);
    cache.emplace(lmax, gc);
    return gc;
}

// Points Lambda zeta and weights K_{Lambda^-1}(Lambda zeta) over the oversampled grid.
void mapped_nodes(const SL2C& lam, const SphereGrid& grid, std::vector<SpherePoint>& pts, std::vector<double>& weight) {
    const SL2C inv = lam.inverse();
    pts.resize(grid.size());
    weight.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const RiemannPoint w = mobius(lam, RiemannPoint::from_angles(grid.nodes[i]));
        pts[i] = w.angles();
        weight[i] = conformal_factor(inv, w);
    }
}

} // namespace

SL2C::SL2C(cplx a, cplx b, cplx c, cplx d) {
    const cplx det = a * d - b * c;
    if (std::abs(det) < 1e-300) throw DomainError("SL2C: matrix is singular");
    const cplx s = std::sqrt(det);
    a_ = a / s;
    b_ = b / s;
    c_ = c / s;
    d_ = d / s;
}

SL2C SL2C::exact(cplx a, cplx b, cplx c, cplx d) {
    if (std::abs(a * d - b * c - 1.0) > 1e-10) throw DomainError("SL2C::exact: determinant is not 1");
    return raw(a, b, c, d);
}

SL2C SL2C::raw(cplx a, cplx b, cplx c, cplx d) {
    SL2C m;
    m.a_ = a;
    m.b_ = b;
    m.c_ = c;
    m.d_ = d;
    return m;
}

SL2C operator*(const SL2C& x, const SL2C& y) {
    return SL2C(x.a_ * y.a_ + x.b_ * y.c_, x.a_ * y.b_ + x.b_ * y.d_, x.c_ * y.a_ + x.d_ * y.c_,
                x.c_ * y.b_ + x.d_ * y.d_);
}

Eigen::Matrix2cd SL2C::matrix() const {
    Eigen::Matrix2cd m;
    m << a_, b_, c_, d_;
    return m;
}

SL2C SL2C::rotation(std::array<double, 3> axis, double angle) {
    const auto m = pauli_axis(axis);
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    const cplx i(0.0, 1.0);
    // exp(+i angle/2 m.sigma): the y flip reverses the orientation of rotations.
    return SL2C(c + i * s * m[2], i * s * cplx(m[0], -m[1]), i * s * cplx(m[0], m[1]), c - i * s * m[2]);
}

SL2C SL2C::boost(std::array<double, 3> direction, double rapidity) {
    const auto m = pauli_axis(direction);
    const double c = std::cosh(rapidity / 2.0);
    const double s = std::sinh(rapidity / 2.0);
    return SL2C(c + s * m[2], s * cplx(m[0], -m[1]), s * cplx(m[0], m[1]), c - s * m[2]);
}

SL2C SL2C::random(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    const cplx a(g(rng), g(rng)), b(g(rng), g(rng)), c(g(rng), g(rng)), d(g(rng), g(rng));
    return SL2C(a, b, c, d);
}

SL2C SL2C::random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    double q[4];
    double n2 = 0.0;
    for (double& x : q) {
        x = g(rng);
        n2 += x * x;
    }
    const double n = std::sqrt(n2);
    const cplx alpha(q[0] / n, q[1] / n), beta(q[2] / n, q[3] / n);
    return SL2C(alpha, -std::conj(beta), beta, std::conj(alpha));
}

SL2C SL2C::random_lorentz(std::mt19937_64& rng, double max_rapidity) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, max_rapidity);
    const std::array<double, 3> dir{g(rng), g(rng), g(rng)};
    const double chi = u(rng);
    return random_rotation(rng) * boost(dir, chi);
}

RiemannPoint::RiemannPoint(cplx z1, cplx z2) {
    const double s = std::max(std::abs(z1), std::abs(z2));
    if (s == 0.0) throw DomainError("RiemannPoint: (0, 0) is not a point of the projective line");
    z1_ = z1 / s;
    z2_ = z2 / s;
}

RiemannPoint RiemannPoint::from_angles(SpherePoint p) {
    return {std::polar(std::cos(p.theta / 2.0), p.phi), std::sin(p.theta / 2.0)};
}

cplx RiemannPoint::value() const {
    if (is_infinity()) throw DomainError("RiemannPoint::value at infinity");
    return z1_ / z2_;
}

SpherePoint RiemannPoint::angles() const {
    const double theta = 2.0 * std::atan2(std::abs(z2_), std::abs(z1_));
    double phi = std::arg(z1_) - std::arg(z2_);
    if (phi < 0.0) phi += 2.0 * std::numbers::pi;
    return {theta, phi};
}

SL2C SL2C::canonical() const {
    for (const cplx e : {a_, b_, c_, d_}) {
        if (e.real() != 0.0) return e.real() > 0.0 ? *this : -*this;
        if (e.imag() != 0.0) return e.imag() > 0.0 ? *this : -*this;
    }
    return *this;
}

RiemannPoint mobius(const SL2C& sl, const RiemannPoint& z) {
    const SL2C lam = sl.canonical();
    return {lam.a() * z.z1() + lam.b() * z.z2(), lam.c() * z.z1() + lam.d() * z.z2()};
}

double conformal_factor(const SL2C& lam, const RiemannPoint& z) {
    const cplx v1 = lam.a() * z.z1() + lam.b() * z.z2();
    const cplx v2 = lam.c() * z.z1() + lam.d() * z.z2();
    return (std::norm(z.z1()) + std::norm(z.z2())) / (std::norm(v1) + std::norm(v2));
}

Eigen::Matrix4d covering_map(const SL2C& lam) {
    const cplx i(0.0, 1.0);
    std::array<Eigen::Matrix2cd, 4> sigma;
    sigma[0] << 1.0, 0.0, 0.0, 1.0;
    sigma[1] << 0.0, 1.0, 1.0, 0.0;
    sigma[2] << 0.0, -i, i, 0.0;
    sigma[3] << 1.0, 0.0, 0.0, -1.0;
    const Eigen::Matrix2cd m = lam.matrix();
    const Eigen::Matrix2cd md = m.adjoint();
    Eigen::Matrix4d out;
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) out(mu, nu) = 0.5 * (sigma[mu] * m * sigma[nu] * md).trace().real();
    return out;
}

Eigen::Matrix4d cartesian_lorentz(const SL2C& lam) {
    Eigen::Matrix4d p = Eigen::Matrix4d::Identity();
    p(2, 2) = -1.0;
    return p * covering_map(lam) * p;
}

Eigen::MatrixXd lorentz_action_matrix(const SL2C& lam, int lmax) {
    const auto gc = oversampled_grid(lmax);
    std::vector<SpherePoint> pts;
    std::vector<double> weight;
    mapped_nodes(lam, gc->grid, pts, weight);
    Eigen::MatrixXd hm = harmonic_matrix(pts, lmax);
    for (Eigen::Index i = 0; i < hm.rows(); ++i) hm.row(i) *= weight[static_cast<std::size_t>(i)];
    return gc->weighted_harmonics.transpose() * hm;
}

SphereFunction lorentz_act_function(const SL2C& lam, const SphereFunction& f) {
    const auto gc = oversampled_grid(f.lmax());
    std::vector<SpherePoint> pts;
    std::vector<double> weight;
    mapped_nodes(lam, gc->grid, pts, weight);
    const std::vector<double> vals = synthesize(f, pts);
    Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) v[static_cast<Eigen::Index>(i)] = vals[i] * weight[i];
    const Eigen::VectorXd c = gc->weighted_harmonics.transpose() * v;
    return SphereFunction(f.lmax(), std::vector<double>(c.data(), c.data() + c.size()));
}

BMSElement compose(const BMSElement& g1, const BMSElement& g2) {
    if (g1.f.lmax() != g2.f.lmax())
        throw InputShapeError("compose: supertranslation truncations differ (" + std::to_string(g1.f.lmax()) +
                              " vs " + std::to_string(g2.f.lmax()) + ")");
    return {g1.lambda * g2.lambda, g2.f + lorentz_act_function(g2.lambda, g1.f)};
}

BMSElement inverse(const BMSElement& g) {
    const SL2C inv = g.lambda.inverse();
    return {inv, -1.0 * lorentz_act_function(inv, g.f)};
}

ScriPoint act_on_scri(const BMSElement& g, const ScriPoint& x) {
    const double fz = evaluate(g.f, x.zeta.angles());
    return {conformal_factor(g.lambda, x.zeta) * (x.u + fz), mobius(g.lambda, x.zeta)};
}

Supermomentum dual_act(const SL2C& lam, const Supermomentum& beta) {
    const Eigen::MatrixXd m = lorentz_action_matrix(lam, beta.lmax());
    const Eigen::VectorXd out = m.transpose() * beta.vec();
    return Supermomentum(beta.lmax(), std::vector<double>(out.data(), out.data() + out.size()));
}

} // namespace bms
