#include <doctest.h>

#include <cmath>
#include <random>

#include "bmsfield/errors.hpp"
#include "bmsfield/verify.hpp"
#include "bmsfield/whitenoise.hpp"
#include "oracles/oracles.hpp"

using namespace bms;

namespace {

const DirectionSet& t4() {
    static const DirectionSet d = DirectionSet::translations_only();
    return d;
}

HermiteSeries he(int n, int cap = 6, int slot = 0, const DirectionSet& dirs = t4()) {
    return HermiteSeries::single(dirs, cap, slot, n);
}

double gap(const HermiteSeries& a, const HermiteSeries& b) { return (a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff(); }

// One-dimensional Hermite coefficients of f by Gauss-Hermite projection.
template <class F>
std::vector<double> project_1d(F&& f, int cap) {
    const oracle::Quadrature q = oracle::gauss_hermite(40);
    std::vector<double> c(static_cast<std::size_t>(cap + 1), 0.0);
    for (int n = 0; n <= cap; ++n) {
        for (std::size_t i = 0; i < q.x.size(); ++i) c[static_cast<std::size_t>(n)] += q.w[i] * f(q.x[i]) * oracle::hermite(n, q.x[i]);
        c[static_cast<std::size_t>(n)] /= std::tgamma(n + 1.0);
    }
    return c;
}

}  // namespace

TEST_CASE("Gauss-Hermite oracle for the Gaussian inner product") {
    const auto q = oracle::gauss_hermite(10);
    auto integral = [&](int a, int b) {
        double s = 0.0;
        for (std::size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * oracle::hermite(a, q.x[i]) * oracle::hermite(b, q.x[i]);
        return s;
    };
    CHECK(gaussian_inner(he(2), he(2)) == doctest::Approx(integral(2, 2)).epsilon(1e-13));
    CHECK(gaussian_inner(he(2), he(2)) == 2.0);
    CHECK(std::abs(integral(1, 2)) < 1e-13);
    CHECK(gaussian_inner(he(1), he(2)) == 0.0);
    CHECK(gaussian_inner(he(0), he(0)) == 1.0);
    CHECK_THROWS_AS(gaussian_inner(he(1), he(1, 6, 0, DirectionSet::standard())), InputShapeError);
}

TEST_CASE("evaluation at a sample") {
    const int L = 3;
    CHECK(eval_at_sample(he(1), Supermomentum::unit(L, 0, 0)) == cplx(1.0));
    CHECK(eval_at_sample(he(2), 2.0 * Supermomentum::unit(L, 0, 0)) == cplx(3.0));
    CHECK(eval_at_sample(HermiteSeries::constant(t4(), 4), Supermomentum::unit(L, 1, 1)) == cplx(1.0));

    std::mt19937_64 rng(31);
    const DirectionSet dirs = DirectionSet::standard();
    const HermiteSeries psi = random_series(dirs, 4, 4, rng);
    const Supermomentum beta = dual_of(random_sphere_function(L, rng));
    const std::vector<double> x = direction_coords(dirs, beta);
    CHECK(std::abs(eval_at_sample(psi, beta) - oracle::evaluate(psi, x).value) < 1e-12);
}

TEST_CASE("multiplication, derivative and creation") {
    const SphereFunction e0 = SphereFunction::unit(3, 0, 0);
    CHECK(gap(multiply_Q(e0, he(2)), he(3) + 2.0 * he(1)) == 0.0);
    CHECK(gap(multiply_Q(e0, he(0)), he(1)) == 0.0);
    const HermiteSeries psi = he(2) + 0.5 * he(1, 6, 2);
    CHECK(gap(multiply_Q(2.0 * e0, psi), 2.0 * multiply_Q(e0, psi)) == 0.0);

    // Pointwise product x He_2(x), projected back by quadrature.
    const auto c = project_1d([](double x) { return x * oracle::hermite(2, x); }, 6);
    const HermiteSeries q = multiply_Q(e0, he(2));
    for (int n = 0; n <= 6; ++n) CHECK(std::abs(q.coeffs()[q.basis().rank(std::vector<int>{n, 0, 0, 0})].real() - c[static_cast<std::size_t>(n)]) < 1e-12);

    CHECK(gap(gateaux_D(e0, he(3)), 3.0 * he(2)) == 0.0);
    CHECK(gateaux_D(e0, he(0)).degree() == -1);
    CHECK(gap(gateaux_D(e0, he(3) + he(1)), gateaux_D(e0, he(3)) + gateaux_D(e0, he(1))) == 0.0);

    // Finite-difference oracle for D along e_0 at a few coordinates.
    const HermiteSeries f = he(3) + 0.3 * he(2, 6, 1);
    const HermiteSeries df = gateaux_D(e0, f);
    for (double x0 : {-1.2, 0.1, 0.9}) {
        std::vector<double> x{x0, 0.4, -0.3, 0.2}, xe = x;
        const double eps = 1e-6;
        xe[0] += eps;
        const double fd = (oracle::evaluate(f, xe).value.real() - oracle::evaluate(f, x).value.real()) / eps;
        CHECK(std::abs(fd - oracle::evaluate(df, x).value.real()) < 1e-5);
    }

    CHECK(gap(adjoint_Dstar(e0, he(2)), he(3)) == 0.0);
    CHECK(adjoint_Dstar(e0, HermiteSeries(t4(), 6)).degree() == -1);

    // Adjointness over all basis pairs up to degree 4.
    const auto basis = ChaosBasis::get(4, 4);
    for (int r = 0; r < basis->size(); ++r)
        for (int s = 0; s < basis->size(); ++s) {
            HermiteSeries a(t4(), 4), b(t4(), 4);
            a.coeffs()[r] = 1.0;
            b.coeffs()[s] = 1.0;
            const HermiteSeries lhs = adjoint_Dstar(e0, a, DegreePolicy::grow);
            CHECK(gaussian_inner(lhs, b.recapped(lhs.cap())) == gaussian_inner(a, gateaux_D(e0, b)));
        }
}

TEST_CASE("span and degree-cap errors") {
    CHECK_THROWS_AS(multiply_Q(SphereFunction::unit(3, 3, 0), he(1)), UnsupportedDirectionError);
    CHECK_THROWS_AS(gateaux_D(SphereFunction::unit(3, 2, 0), he(1)), UnsupportedDirectionError);
    CHECK_THROWS_AS(multiply_Q(SphereFunction::unit(3, 0, 0), he(6)), DegreeCapError);
    CHECK_THROWS_AS(adjoint_Dstar(SphereFunction::unit(3, 0, 0), he(6)), DegreeCapError);
    const HermiteSeries grown = multiply_Q(SphereFunction::unit(3, 0, 0), he(6), DegreePolicy::grow);
    CHECK(grown.cap() == 7);
    CHECK(grown.coeffs()[grown.basis().rank(std::vector<int>{7, 0, 0, 0})] == cplx(1.0));
}

TEST_CASE("Gamma(A) norms") {
    const HermiteSeries h = he(1);
    CHECK(gamma_A_norm(h, 1) == doctest::Approx(2.0));
    CHECK(gamma_A_norm(h, 0) == doctest::Approx(gaussian_norm(h)));
    std::mt19937_64 rng(32);
    const DirectionSet dirs = DirectionSet::standard();
    for (int i = 0; i < 10; ++i) {
        const HermiteSeries psi = random_series(dirs, 4, 4, rng);
        CHECK(gamma_A_norm(psi, 1) <= gamma_A_norm(psi, 2));
        CHECK(gamma_A_norm(psi, -1) <= gamma_A_norm(psi, 0));
        CHECK(gamma_A_norm(psi, 0) <= gamma_A_norm(psi, 1));
    }
}

TEST_CASE("projection onto a subset of directions") {
    const DirectionSet dirs = DirectionSet::standard();
    const HermiteSeries psi = he(1, 4, 0, dirs) + he(1, 4, 4, dirs);
    const std::vector<int> v = translation_slots();
    CHECK(gap(project_Pi_V(psi, v), he(1, 4, 0, dirs)) == 0.0);
    CHECK(gap(project_Pi_V(project_Pi_V(psi, v), v), project_Pi_V(psi, v)) == 0.0);
    std::vector<int> all(static_cast<std::size_t>(dirs.size()));
    for (int i = 0; i < dirs.size(); ++i) all[static_cast<std::size_t>(i)] = i;
    CHECK(gap(project_Pi_V(psi, all), psi) == 0.0);
}

TEST_CASE("S-transform against Wick exponentials") {
    // <<He_2, :exp((.,alpha)):>> = xi^2 for a single direction, by quadrature.
    const MonomialSeries s = s_transform(he(2));
    const auto q = oracle::gauss_hermite(30);
    for (double xi : {-0.8, 0.3, 1.4}) {
        double val = 0.0;
        for (std::size_t i = 0; i < q.x.size(); ++i)
            val += q.w[i] * oracle::hermite(2, q.x[i]) * std::exp(q.x[i] * xi - 0.5 * xi * xi);
        const std::vector<double> x{xi, 0.0, 0.0, 0.0};
        CHECK(s(x).real() == doctest::Approx(val).epsilon(1e-12));
        CHECK(val == doctest::Approx(xi * xi).epsilon(1e-12));
    }
    CHECK(s_transform(HermiteSeries::constant(t4(), 3)).coeffs[0] == cplx(1.0));
    std::mt19937_64 rng(33);
    const HermiteSeries psi = random_series(DirectionSet::standard(), 4, 4, rng);
    CHECK(gap(s_inverse(s_transform(psi)), psi) == 0.0);
}

TEST_CASE("Fourier and Fourier-Gauss transforms") {
    const FourierResult f = fourier_F(HermiteSeries::constant(t4(), 4), 4);
    // exp(-xi^2/2) per slot: 1 - xi^2/2 + xi^4/8 - ...
    CHECK(f.series.coeffs()[0] == cplx(1.0));
    CHECK(f.series.coeffs()[f.series.basis().rank(std::vector<int>{2, 0, 0, 0})] == cplx(-0.5));
    CHECK(f.series.coeffs()[f.series.basis().rank(std::vector<int>{4, 0, 0, 0})] == cplx(0.125));
    CHECK(f.series.coeffs()[f.series.basis().rank(std::vector<int>{2, 2, 0, 0})] == cplx(0.25));
    CHECK(f.tail_norm > 0.0);

    const cplx s2(std::sqrt(2.0)), i1(0.0, 1.0);
    CHECK(gap(fourier_gauss(s2, i1, he(3)), -i1 * he(3)) < 1e-14);
    CHECK(gap(fourier_gauss(1.3, 0.4, HermiteSeries::constant(t4(), 3)), HermiteSeries::constant(t4(), 3)) == 0.0);
    std::mt19937_64 rng(34);
    const HermiteSeries psi = random_series(DirectionSet::standard(), 4, 4, rng);
    CHECK(gap(fourier_gauss(s2, i1, fourier_gauss(s2, -i1, psi)), psi) < 1e-13);
    CHECK_THROWS_AS(fourier_gauss(0.0, i1, psi), DomainError);

    // The defining formula on one slot for generic (a, b).
    const cplx a(1.1, 0.2), b(0.6, -0.3), c = (a * a + b * b - 1.0) / 2.0;
    const HermiteSeries g4 = fourier_gauss(a, b, he(4));
    auto at = [&](int n) { return g4.coeffs()[g4.basis().rank(std::vector<int>{n, 0, 0, 0})]; };
    CHECK(std::abs(at(4) - std::pow(b, 4)) < 1e-14);
    CHECK(std::abs(at(2) - 12.0 * c * b * b) < 1e-14);
    CHECK(std::abs(at(0) - 12.0 * c * c) < 1e-14);
}

TEST_CASE("characteristic functional") {
    const CharacteristicEstimate zero = characteristic_functional(SphereFunction(3), 1000, 5);
    CHECK(zero.exact == 1.0);
    CHECK(std::abs(zero.mc - cplx(1.0)) < 1e-15);
    const std::int64_t n = 200000;
    const CharacteristicEstimate one = characteristic_functional(SphereFunction::unit(3, 0, 0), n, 6);
    CHECK(one.exact == doctest::Approx(std::exp(-0.5)));
    CHECK(std::abs(one.mc - one.exact) <= 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(characteristic_functional(2.0 * SphereFunction::unit(3, 0, 0), 10, 6).exact == doctest::Approx(std::exp(-2.0)));
    // Deterministic under a fixed seed.
    CHECK(characteristic_functional(SphereFunction::unit(3, 1, 0), 5000, 9).mc ==
          characteristic_functional(SphereFunction::unit(3, 1, 0), 5000, 9).mc);
}
