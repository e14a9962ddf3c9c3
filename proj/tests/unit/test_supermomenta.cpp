#include <doctest.h>

#include <cmath>
#include <random>

#include "bmsfield/errors.hpp"
#include "bmsfield/supermomenta.hpp"
#include "bmsfield/verify.hpp"
#include "oracles/oracles.hpp"

using namespace bms;

TEST_CASE("project_T4 examples") {
    const int L = 4;
    const double m = 1.7;
    const FourMomentum p = project_T4(std::sqrt(4 * oracle::pi / 3) * m * Supermomentum::unit(L, 0, 0));
    CHECK(p[0] == doctest::Approx(-m).epsilon(1e-15));
    CHECK(p[1] == 0.0);
    CHECK(p[2] == 0.0);
    CHECK(p[3] == 0.0);
    CHECK(project_T4(Supermomentum::unit(L, 3, -2) + Supermomentum::unit(L, 2, 0)) == FourMomentum{});

    std::mt19937_64 rng(21);
    const Supermomentum a = dual_of(random_sphere_function(L, rng)), b = dual_of(random_sphere_function(L, rng));
    const FourMomentum s = project_T4(a + b), t = project_T4(a) + project_T4(b);
    for (int mu = 0; mu < 4; ++mu) CHECK(s[mu] == doctest::Approx(t[mu]));
    const FourMomentum back = project_T4(beta_from_four_momentum(s, L));
    for (int mu = 0; mu < 4; ++mu) CHECK(back[mu] == doctest::Approx(s[mu]));
}

TEST_CASE("Casimir form and mass") {
    const int L = 4;
    const Supermomentum m2 = orbit_fixed_point(OrbitKind::massive, 2.0, L);
    CHECK(casimir_B(m2, m2) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(mass_squared(m2) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(mass_squared(m2, Metric::mostly_plus()) == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK(mass_squared(Supermomentum(L)) == 0.0);
    const Supermomentum null = beta_from_four_momentum(FourMomentum::from_cartesian({3.0, 0.0, 0.0, 3.0}), L);
    CHECK(std::abs(casimir_B(null, null)) < 1e-14);

    std::mt19937_64 rng(22);
    for (int i = 0; i < 20; ++i) {
        const SL2C lam = SL2C::random_lorentz(rng, 1.5);
        const Supermomentum b = dual_act(lam, m2);
        CHECK(mass_squared(b) == doctest::Approx(4.0).epsilon(1e-8));
        // Rotations keep the rest frame inside (ST)^0; a boosted rest frame picks up l > 1 components.
        CHECK(annihilator_check(dual_act(SL2C::random_rotation(rng), m2), 1e-12));
    }
}

TEST_CASE("orbit fixed points") {
    const int L = 3;
    const Supermomentum m1 = orbit_fixed_point(OrbitKind::massive, 1.0, L);
    CHECK(m1.at(0, 0) == doctest::Approx(std::sqrt(4 * oracle::pi / 3)));
    for (std::size_t i = 1; i < m1.size(); ++i) CHECK(m1[i] == 0.0);
    CHECK(orbit_fixed_point(OrbitKind::massive, 0.0, L) == Supermomentum(L));
    CHECK_THROWS_AS(orbit_fixed_point(OrbitKind::massive, -1.0, L), DomainError);
    CHECK_THROWS_AS(orbit_fixed_point(OrbitKind::massless, 0.0, L), DomainError);

    const Supermomentum z = orbit_fixed_point(OrbitKind::massless, 1.0, L);
    const auto p = project_T4(z).cartesian();
    CHECK(p[0] > 0.0);
    CHECK(std::abs(casimir_B(z, z)) < 1e-14);
    CHECK(p[0] == doctest::Approx(1.0));
    CHECK(p[3] == doctest::Approx(1.0));
}

TEST_CASE("annihilator check") {
    const int L = 4;
    CHECK(annihilator_check(orbit_fixed_point(OrbitKind::massive, 1.0, L), 0.0));
    CHECK_FALSE(annihilator_check(Supermomentum::unit(L, 2, 0), 1e-8));
    std::mt19937_64 rng(23);
    for (int i = 0; i < 20; ++i) {
        SphereFunction f = random_sphere_function(L, rng);
        if (i % 2) f = split_T4_ST(f).first;
        const bool st_part_zero = split_T4_ST(f).second.vec().isZero(0.0);
        CHECK(annihilator_check(dual_of(f), 0.0) == st_part_zero);
    }
}
