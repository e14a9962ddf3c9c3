#include <doctest.h>

#include <cmath>
#include <random>

#include "bmsfield/bmsgroup.hpp"
#include "bmsfield/errors.hpp"
#include "bmsfield/supermomenta.hpp"
#include "bmsfield/verify.hpp"
#include "oracles/oracles.hpp"

using namespace bms;

namespace {

bool same_point(const RiemannPoint& p, const RiemannPoint& q, double tol = 1e-12) {
    const double scale = std::hypot(std::abs(p.z1()), std::abs(p.z2())) * std::hypot(std::abs(q.z1()), std::abs(q.z2()));
    return std::abs(p.z1() * q.z2() - p.z2() * q.z1()) <= tol * scale;
}

double gap(const SphereFunction& a, const SphereFunction& b) { return (a.vec() - b.vec()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("SL2C normalizes the determinant") {
    const SL2C m(2.0, 1.0, 0.5, 3.0);
    CHECK(std::abs(m.det() - 1.0) < 1e-14);
    CHECK_THROWS_AS(SL2C(1.0, 2.0, 2.0, 4.0), DomainError);
    CHECK_THROWS_AS(SL2C::exact(2.0, 0.0, 0.0, 2.0), DomainError);
    CHECK_NOTHROW(SL2C::exact(0.0, 1.0, -1.0, 0.0));
}

TEST_CASE("mobius examples") {
    const cplx z(1.0, 2.0);
    CHECK(std::abs(mobius(SL2C::identity(), RiemannPoint::finite(z)).value() - z) < 1e-15);
    const SL2C s = SL2C::exact(0.0, 1.0, -1.0, 0.0);
    CHECK(std::abs(mobius(s, RiemannPoint::finite(1.0)).value() - cplx(-1.0)) < 1e-15);
    CHECK(std::abs(mobius(s, mobius(s, RiemannPoint::finite(z))).value() - z) < 1e-14);
    const SL2C boost = SL2C::exact(std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0));
    CHECK(std::abs(mobius(boost, RiemannPoint::finite(1.0)).value() - cplx(2.0)) < 1e-14);

    // Poles and infinity.
    const SL2C g(1.0, 2.0, 3.0, 7.0);
    CHECK(mobius(g, RiemannPoint::finite(-g.d() / g.c())).is_infinity());
    CHECK(std::abs(mobius(g, RiemannPoint::infinity()).value() - g.a() / g.c()) < 1e-14);
}

TEST_CASE("conformal factor examples") {
    CHECK(conformal_factor(SL2C::identity(), RiemannPoint::finite({0.3, -0.8})) == doctest::Approx(1.0));
    const double t = std::log(2.0);
    const SL2C boost = SL2C::exact(std::exp(t / 2), 0.0, 0.0, std::exp(-t / 2));
    CHECK(conformal_factor(boost, RiemannPoint::finite(0.0)) == doctest::Approx(2.0).epsilon(1e-14));

    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
        const SL2C g = SL2C::random(rng);
        const RiemannPoint z = RiemannPoint::finite({0.4 * i - 3.0, 0.1 * i});
        const double k = conformal_factor(g, z);
        CHECK(k > 0.0);
        CHECK(k == doctest::Approx(oracle::conformal(g.matrix(), z.value())).epsilon(1e-13));
        CHECK(conformal_factor(-g, z) == k);
        // Finite limit at infinity.
        CHECK(conformal_factor(g, RiemannPoint::infinity()) ==
              doctest::Approx(conformal_factor(g, RiemannPoint::finite(1e7))).epsilon(1e-6));
    }
}

TEST_CASE("Lorentz action on functions") {
    const int L = 6;
    std::mt19937_64 rng(12);
    const SphereFunction f = random_sphere_function(L, rng), g = random_sphere_function(L, rng);
    CHECK(gap(lorentz_act_function(SL2C::identity(), f), f) < 1e-12);
    const SL2C rot = SL2C::random_rotation(rng);
    CHECK(gap(lorentz_act_function(rot, SphereFunction::unit(L, 0, 0)), SphereFunction::unit(L, 0, 0)) < 1e-12);
    const SL2C lam = SL2C::random_lorentz(rng, 1.0);
    CHECK(gap(lorentz_act_function(lam, f + g), lorentz_act_function(lam, f) + lorentz_act_function(lam, g)) < 1e-12);
    // T4 is invariant.
    const SphereFunction t4 = split_T4_ST(f).first;
    CHECK(split_T4_ST(lorentz_act_function(lam, t4)).second.vec().cwiseAbs().maxCoeff() < 1e-9);

    // Pointwise oracle on a rotation, where the band limit is preserved.
    const SphereFunction out = lorentz_act_function(rot, f);
    for (int i = 0; i < 5; ++i) {
        const RiemannPoint z = RiemannPoint::finite({0.3 * i - 0.5, 0.2 * i});
        const double expect = evaluate(f, mobius(rot, z).angles());
        CHECK(evaluate(out, z.angles()) == doctest::Approx(expect).epsilon(1e-11));
    }
}

TEST_CASE("composition law") {
    const int L = 6;
    std::mt19937_64 rng(13);
    const BMSElement e = BMSElement::identity(L);
    const BMSElement g{SL2C::random_rotation(rng), random_sphere_function(L, rng)};
    const BMSElement ge = compose(e, g);
    CHECK(gap(ge.f, g.f) < 1e-12);
    const SL2C lam = SL2C::random_lorentz(rng, 1.0);
    const BMSElement pi = compose({lam, SphereFunction(L)}, {lam.inverse(), SphereFunction(L)});
    CHECK((pi.lambda.matrix() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(pi.f.vec().cwiseAbs().maxCoeff() == 0.0);

    // (L', f') . (L, f) = (L' L, f + T_L f').
    const BMSElement a{SL2C::random_lorentz(rng, 0.5), random_sphere_function(L, rng)};
    const BMSElement b{SL2C::random_lorentz(rng, 0.5), random_sphere_function(L, rng)};
    const BMSElement ab = compose(a, b);
    CHECK((ab.lambda.matrix() - a.lambda.matrix() * b.lambda.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(gap(ab.f, b.f + lorentz_act_function(b.lambda, a.f)) < 1e-12);
    CHECK_THROWS_AS(compose(a, BMSElement::identity(L + 1)), InputShapeError);
}

TEST_CASE("action on null infinity") {
    const int L = 6;
    std::mt19937_64 rng(14);
    const ScriPoint x{0.7, RiemannPoint::finite({0.2, 1.1})};
    const ScriPoint same = act_on_scri(BMSElement::identity(L), x);
    CHECK(same.u == doctest::Approx(x.u));
    CHECK(same_point(same.zeta, x.zeta));

    const BMSElement shift{SL2C::identity(), SphereFunction::unit(L, 0, 0)};
    CHECK(act_on_scri(shift, x).u == doctest::Approx(0.7 + 0.5 / std::sqrt(oracle::pi)).epsilon(1e-14));

    for (int i = 0; i < 10; ++i) {
        const BMSElement a{SL2C::random_rotation(rng), random_sphere_function(L, rng)};
        const BMSElement b{SL2C::random_rotation(rng), random_sphere_function(L, rng)};
        const ScriPoint lhs = act_on_scri(compose(a, b), x), rhs = act_on_scri(a, act_on_scri(b, x));
        CHECK(lhs.u == doctest::Approx(rhs.u).epsilon(1e-9));
        CHECK(same_point(lhs.zeta, rhs.zeta, 1e-12));
    }
}

TEST_CASE("covering map") {
    CHECK((covering_map(SL2C::identity()) - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    std::mt19937_64 rng(15);
    const SL2C g = SL2C::random(rng);
    CHECK((covering_map(g) - covering_map(-g)).cwiseAbs().maxCoeff() == 0.0);

    const double t = 0.8;
    const Eigen::Matrix4d B = covering_map(SL2C::exact(std::exp(t / 2), 0.0, 0.0, std::exp(-t / 2)));
    Eigen::Matrix4d expect = Eigen::Matrix4d::Identity();
    expect(0, 0) = expect(3, 3) = std::cosh(t);
    expect(0, 3) = expect(3, 0) = std::sinh(t);
    CHECK((B - expect).cwiseAbs().maxCoeff() < 1e-14);

    const Eigen::Matrix4d eta = Eigen::Vector4d(1, -1, -1, -1).asDiagonal();
    for (int i = 0; i < 10; ++i) {
        const SL2C a = SL2C::random_lorentz(rng, 1.0), b = SL2C::random_lorentz(rng, 1.0);
        const Eigen::Matrix4d P = covering_map(a);
        CHECK((P.transpose() * eta * P - eta).cwiseAbs().maxCoeff() < 1e-12 * P.squaredNorm());
        CHECK(P(0, 0) > 0.0);
        CHECK((covering_map(a * b) - covering_map(a) * covering_map(b)).cwiseAbs().maxCoeff() < 1e-12 * P.squaredNorm());
    }
}

TEST_CASE("dual action") {
    const int L = 5;
    std::mt19937_64 rng(16);
    const Supermomentum beta = dual_of(random_sphere_function(L, rng));
    CHECK((dual_act(SL2C::identity(), beta).vec() - beta.vec()).cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 0; i < 5; ++i) {
        const SL2C lam = SL2C::random_lorentz(rng, 1.0);
        const SphereFunction alpha = random_sphere_function(L, rng);
        CHECK(pair(dual_act(lam, beta), alpha) == doctest::Approx(pair(beta, lorentz_act_function(lam, alpha))).epsilon(1e-9));
        // On T4 the dual action is the covering map in Cartesian form.
        const Supermomentum t4 = dual_of(split_T4_ST(alpha).first);
        const FourMomentum lhs = project_T4(dual_act(lam, t4)), rhs = lorentz_transform(lam, project_T4(t4));
        for (int mu = 0; mu < 4; ++mu) CHECK(lhs[mu] == doctest::Approx(rhs[mu]).epsilon(1e-8));
    }
}
