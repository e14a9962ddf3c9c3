#include <doctest.h>

#include <cmath>
#include <random>

#include "bmsfield/dynamics.hpp"
#include "bmsfield/errors.hpp"
#include "bmsfield/verify.hpp"
#include "oracles/oracles.hpp"

using namespace bms;

namespace {

const DirectionSet& t4() {
    static const DirectionSet d = DirectionSet::translations_only();
    return d;
}

const DirectionSet& probe() {
    static const DirectionSet d({{2, -2}}, 2.0);
    return d;
}

HermiteSeries he(int n, int cap, int slot = 0, const DirectionSet& dirs = t4()) {
    return HermiteSeries::single(dirs, cap, slot, n);
}

double gap(const HermiteSeries& a, const HermiteSeries& b) { return (a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff(); }

FieldState state(const HermiteSeries& psi, const HermiteSeries& v) {
    FieldState s{psi, v, {}, {}};
    for (std::size_t i = 0; i < multiplier_slots(psi.directions()).size(); ++i) {
        s.lambdas.emplace_back(psi.directions(), 2);
        s.lambda_vs.emplace_back(psi.directions(), 2);
    }
    return s;
}

const Metric e0_only{{1.0, 0.0, 0.0, 0.0}};

}  // namespace

TEST_CASE("constraint residuals") {
    const DirectionSet dirs = DirectionSet::standard();
    for (const auto& [slot, r] : constraint_residuals(HermiteSeries(dirs, 3))) CHECK(r.degree() == -1);
    CHECK(constraint_residuals(HermiteSeries(dirs, 3)).size() == 5);
    const auto res = constraint_residuals(he(1, 3, 5, dirs));
    bool nonzero = false;
    for (const auto& [slot, r] : res)
        if (slot == 5) nonzero = r.degree() >= 0;
    CHECK(nonzero);
    CHECK(constraint_pairing_defect(he(2, 3, 1, dirs)) == 0.0);
    CHECK(constraint_pairing_defect(he(2, 3, 6, dirs)) > 0.0);
}

TEST_CASE("Klein-Gordon operator") {
    const Metric eta;
    const HermiteSeries kg = kg_apply(HermiteSeries::constant(t4(), 2), 0.0, eta);
    HermiteSeries expect(t4(), 2);
    for (int mu = 0; mu < 4; ++mu) expect += eta(mu) * (he(2, 2, mu) + HermiteSeries::constant(t4(), 2));
    CHECK(gap(kg, expect) == 0.0);
    CHECK(kg_apply(HermiteSeries(t4(), 2), 1.0, eta).degree() == -1);
    CHECK_THROWS_AS(kg_apply(he(1, 2), 0.0, eta), DegreeCapError);

    std::mt19937_64 rng(41);
    const HermiteSeries psi = random_series(t4(), 5, 3, rng);
    const HermiteSeries out = kg_apply(psi, 0.7, eta);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        const std::vector<double> x{g(rng), g(rng), g(rng), g(rng)};
        double pp = 0.0;
        for (int mu = 0; mu < 4; ++mu) pp += eta(mu) * x[static_cast<std::size_t>(mu)] * x[static_cast<std::size_t>(mu)];
        const double lhs = oracle::evaluate(out, x).value.real();
        const double rhs = (pp - 0.7) * oracle::evaluate(psi, x).value.real();
        CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("qd building block") {
    CHECK(gap(qd_apply(0, HermiteSeries::constant(t4(), 3)), he(1, 3)) == 0.0);
    CHECK(gap(qd_apply(0, he(1, 3)), he(2, 3) - he(0, 3)) == 0.0);
    // Pointwise x psi - 2 psi'.
    const HermiteSeries r = qd_apply(0, he(3, 4));
    for (double x : {-0.7, 0.2, 1.5}) {
        const double expect = x * oracle::hermite(3, x) - 2.0 * 3.0 * oracle::hermite(2, x);
        CHECK(oracle::evaluate(r, {x, 0.0, 0.0, 0.0}).value.real() == doctest::Approx(expect).epsilon(1e-13));
    }
    // eom_dyn2 is the composition of qd's.
    std::mt19937_64 rng(42);
    const HermiteSeries psi = random_series(t4(), 5, 3, rng);
    HermiteSeries manual = -0.3 * psi;
    for (int mu = 0; mu < 4; ++mu) manual += Metric{}(mu) * qd_apply(mu, qd_apply(mu, psi));
    CHECK(gap(eom_dyn2(psi, 0.3, Metric{}), manual) < 1e-12);
}

TEST_CASE("Klein-Gordon Lagrangian") {
    const HermiteSeries one = HermiteSeries::constant(t4(), 2);
    CHECK(lagrangian_KG(HermiteSeries(t4(), 2), 1.0, Metric{}) == 0.0);
    CHECK(lagrangian_KG(one, 0.0, e0_only) == doctest::Approx(-0.5).epsilon(1e-15));
    // Same value from the defining integral.
    const double quad = oracle::integrate(1, 6, [](const std::vector<double>& x) {
        const double q = x[0];
        return -0.5 * q * q;
    });
    CHECK(quad == doctest::Approx(-0.5).epsilon(1e-14));
    std::mt19937_64 rng(43);
    const HermiteSeries psi = random_series(t4(), 4, 4, rng);
    CHECK(lagrangian_KG(2.5 * psi, 0.8, Metric{}) == doctest::Approx(6.25 * lagrangian_KG(psi, 0.8, Metric{})).epsilon(1e-13));
}

TEST_CASE("full Lagrangian") {
    std::mt19937_64 rng(44);
    const HermiteSeries psi = random_series(probe(), 4, 4, rng);
    FieldState s = state(psi, d_slot(0, psi));
    CHECK(lagrangian_full(s, 0.5, Metric{}) == doctest::Approx(lagrangian_KG(psi, 0.5, Metric{})).epsilon(1e-13));
    s.lambdas[0] = random_series(probe(), 2, 2, rng);
    CHECK(multiplier_term(HermiteSeries(probe(), 4), s.lambdas) == 0.0);

    for (int i = 0; i < 2; ++i) {
        const FieldState r = random_state(probe(), 3, rng);
        CHECK(lagrangian_full(r, 1.3, Metric{}) ==
              doctest::Approx(oracle::lagrangian_by_quadrature(r, 1.3, Metric{}, 7)).epsilon(1e-11));
    }
    FieldState bad = s;
    bad.lambdas.clear();
    CHECK_THROWS_AS(lagrangian_full(bad, 1.0, Metric{}), InputShapeError);
}

TEST_CASE("Euler-Lagrange gradient") {
    const FieldState zero = state(HermiteSeries(probe(), 4), HermiteSeries(probe(), 4));
    CHECK(euler_lagrange_gradient(zero, 1.0, Metric{}).coeffs().cwiseAbs().maxCoeff() == 0.0);

    // Directional derivative of psi -> L(psi, D_0 psi) against the gradient.
    std::mt19937_64 rng(45);
    const FieldState s = random_state(probe(), 4, rng);
    const HermiteSeries grad = euler_lagrange_gradient(s, 1.0, Metric{});
    for (int t = 0; t < 3; ++t) {
        const HermiteSeries dir = random_series(probe(), 4, 4, rng);
        const double h = 1e-5;
        FieldState p = s, q = s;
        p.psi += h * dir;
        p.v += h * d_slot(0, dir);
        q.psi -= h * dir;
        q.v -= h * d_slot(0, dir);
        const double fd = (lagrangian_full(p, 1.0, Metric{}) - lagrangian_full(q, 1.0, Metric{})) / (2 * h);
        CHECK(fd == doctest::Approx(gaussian_inner(grad, dir)).epsilon(1e-7));
    }
}

TEST_CASE("Vainberg symmetry") {
    const int K = 5, N = 4;
    const auto basis = ChaosBasis::get(K, N);
    CHECK(vainberg_symmetry_defect(wave_matrix_qd(Metric{}, K, N), *basis) <= 1e-12);
    CHECK(vainberg_symmetry_defect(wave_matrix_DD(Metric{}, K, N), *basis) >= 0.5);
    CHECK(vainberg_symmetry_defect(Eigen::MatrixXd::Zero(basis->size(), basis->size()), *basis) == 0.0);
    CHECK_THROWS_AS(vainberg_symmetry_defect(Eigen::MatrixXd::Zero(2, 3), *basis), InputShapeError);
}

TEST_CASE("fiber derivative and energy") {
    const int N = 3;
    const CotangentPoint a = fiber_derivative(state(he(1, N), HermiteSeries(t4(), N)));
    CHECK(gap(a.pi, -2.0 * (he(2, N) + he(0, N))) == 0.0);
    const CotangentPoint b = fiber_derivative(state(HermiteSeries(t4(), N), he(0, N)));
    CHECK(gap(b.pi, 4.0 * he(0, N)) == 0.0);

    std::mt19937_64 rng(46);
    FieldState s = random_state(probe(), N, rng);
    FieldState t = s;
    t.lambda_vs[0] = random_series(probe(), 2, 2, rng);
    const CotangentPoint ps = fiber_derivative(s), pt = fiber_derivative(t);
    CHECK(gap(ps.psi, pt.psi) == 0.0);
    CHECK(gap(ps.pi, pt.pi) == 0.0);
    CHECK(energy(s, 1.0, Metric{}) == energy(t, 1.0, Metric{}));

    CHECK(energy(state(HermiteSeries(t4(), N), HermiteSeries(t4(), N)), 1.0, Metric{}) == 0.0);
    FieldState scaled = s;
    scaled.psi *= 3.0;
    scaled.v *= 3.0;
    CHECK(energy(scaled, 1.0, Metric{}) == doctest::Approx(9.0 * energy(s, 1.0, Metric{})).epsilon(1e-12));
}

TEST_CASE("Hamiltonian") {
    const int N = 3;
    const CotangentPoint p{HermiteSeries(t4(), N), he(1, N), {}};
    // (1/4 + eta_0/8) ||Pi||^2, the energy at v = Pi/4 + Q_0 psi/2.
    CHECK(hamiltonian(p, 0.0, Metric{}) == doctest::Approx(0.375).epsilon(1e-15));
    const CotangentPoint q{he(0, N), HermiteSeries(t4(), N), {}};
    CHECK(hamiltonian(q, 0.0, Metric{}) == doctest::Approx(-1.5).epsilon(1e-15));

    std::mt19937_64 rng(47);
    for (int i = 0; i < 5; ++i) {
        const FieldState s = random_state(probe(), 4, rng);
        const double e = energy(s, 0.9, Metric{});
        CHECK(hamiltonian(fiber_derivative(s), 0.9, Metric{}) == doctest::Approx(e).epsilon(1e-10));
    }
}

TEST_CASE("symplectic form") {
    const int N = 3;
    std::mt19937_64 rng(48);
    const HermiteSeries a = random_series(t4(), N, N, rng), b = random_series(t4(), N, N, rng);
    CHECK(symplectic_form(a, b, a, b) == 0.0);
    const HermiteSeries z(t4(), N);
    CHECK(symplectic_form(he(1, N), z, z, he(1, N)) == 1.0);
    const HermiteSeries c = random_series(t4(), N, N, rng), d = random_series(t4(), N, N, rng);
    CHECK(symplectic_form(a, b, c, d) == doctest::Approx(-symplectic_form(c, d, a, b)));
    CHECK(symplectic_form(a + c, b + d, c, d) == doctest::Approx(symplectic_form(a, b, c, d) + symplectic_form(c, d, c, d)));
    for (int cap = 1; cap <= 3; ++cap) {
        const auto [rank, dim] = symplectic_rank(probe(), cap);
        CHECK(rank == dim);
    }
}
