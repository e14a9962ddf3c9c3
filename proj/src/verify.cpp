#include "bmsfield/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "bmsfield/bmsgroup.hpp"
#include "bmsfield/errors.hpp"
#include "bmsfield/induced.hpp"
#include "bmsfield/supermomenta.hpp"
#include "bmsfield/whitenoise.hpp"

namespace bms {

namespace {

using Clock = std::chrono::steady_clock;

// A battery returns one or more checks; the runner fills suite and runtime.
using Task = std::function<std::vector<CheckResult>(std::mt19937_64&)>;

struct NamedTask {
    std::string suite;
    std::string name;
    Task run;
};

CheckResult make_check(const Config& cfg, std::string name, double defect, const std::string& key,
                       Comparison cmp = Comparison::at_most, std::string detail = {}) {
    CheckResult c;
    c.name = std::move(name);
    c.defect = defect;
    c.tolerance_key = key;
    c.tolerance = cfg.tol(key);
    c.comparison = cmp;
    c.detail = std::move(detail);
    c.passed = std::isfinite(defect) && (cmp == Comparison::at_most ? defect <= c.tolerance : defect >= c.tolerance);
    return c;
}

template <class M>
double max_abs(const M& m) {
    double mx = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (typename M::InnerIterator it(m, k); it; ++it) mx = std::max(mx, std::abs(it.value()));
    return mx;
}

SpherePoint random_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {std::acos(1.0 - 2.0 * u(rng)), 2.0 * std::numbers::pi * u(rng)};
}

SphereFunction t4_part(const SphereFunction& f) { return split_T4_ST(f).first; }

double coeff_distance(const SphereFunction& a, const SphereFunction& b) { return (a.vec() - b.vec()).cwiseAbs().maxCoeff(); }

// SL(2,C) elements are defined up to sign in their action.
double lambda_distance(const SL2C& a, const SL2C& b) {
    return std::min((a.matrix() - b.matrix()).cwiseAbs().maxCoeff(), (a.matrix() + b.matrix()).cwiseAbs().maxCoeff());
}

double group_defect(const BMSElement& a, const BMSElement& b) {
    return std::max(lambda_distance(a.lambda, b.lambda), coeff_distance(a.f, b.f));
}

// He_n at a complex argument by the three-term recurrence.
cplx hermite_he(int n, cplx x) {
    cplx h0 = 1.0, h1 = x;
    if (n == 0) return h0;
    for (int k = 1; k < n; ++k) {
        const cplx h2 = x * h1 - static_cast<double>(k) * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

// Translations plus the first configured supertranslation: the small direction
// set used by the batteries whose cost grows with the full basis size.
DirectionSet probe_directions(const Config& cfg) {
    std::vector<std::pair<int, int>> extra;
    if (!cfg.st_directions.empty()) extra.push_back(cfg.st_directions.front());
    return DirectionSet(extra, cfg.k);
}

// ---- cocycle: sphere and BMS group ----

std::vector<NamedTask> cocycle_tasks(const Config& cfg) {
    std::vector<NamedTask> t;
    const int L = cfg.L_max;
    t.push_back({"cocycle", "cocycle_K", [&cfg](std::mt19937_64& rng) {
                     double worst = 0.0;
                     for (int i = 0; i < 200; ++i) {
                         const SL2C a = SL2C::random(rng), b = SL2C::random(rng);
                         const RiemannPoint z = RiemannPoint::from_angles(random_point(rng));
                         const double lhs = conformal_factor(b, mobius(a, z)) * conformal_factor(a, z);
                         const double rhs = conformal_factor(b * a, z);
                         worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
                     }
                     return std::vector{make_check(cfg, "cocycle_K", worst, "cocycle", Comparison::at_most,
                                                   "200 random (Lambda, Lambda', zeta), relative")};
                 }});
    t.push_back({"cocycle", "covering_homomorphism", [&cfg](std::mt19937_64& rng) {
                     const Eigen::Matrix4d eta = Eigen::Vector4d(1.0, -1.0, -1.0, -1.0).asDiagonal();
                     double hom = 0.0, iso = 0.0;
                     for (int i = 0; i < 100; ++i) {
                         const SL2C a = SL2C::random_lorentz(rng, 1.5), b = SL2C::random_lorentz(rng, 1.5);
                         const Eigen::Matrix4d pa = covering_map(a), pb = covering_map(b), pab = covering_map(a * b);
                         hom = std::max(hom, (pab - pa * pb).cwiseAbs().maxCoeff() / pab.cwiseAbs().maxCoeff());
                         iso = std::max(iso, (pa.transpose() * eta * pa - eta).cwiseAbs().maxCoeff() /
                                                 pa.cwiseAbs().maxCoeff() / pa.cwiseAbs().maxCoeff());
                     }
                     return std::vector{
                         make_check(cfg, "covering_homomorphism", hom, "covering", Comparison::at_most,
                                    "Pi(ab) = Pi(a) Pi(b), relative"),
                         make_check(cfg, "covering_isometry", iso, "covering", Comparison::at_most,
                                    "Pi^T eta Pi = eta, relative"),
                     };
                 }});
    t.push_back({"cocycle", "group_identity_inverse", [&cfg, L](std::mt19937_64& rng) {
                     double id = 0.0, inv = 0.0;
                     const BMSElement e = BMSElement::identity(L);
                     for (int i = 0; i < 50; ++i) {
                         // Rotations keep the band limit, so both inverse orders are exact up to quadrature.
                         const BMSElement g{SL2C::random_rotation(rng), random_sphere_function(L, rng)};
                         id = std::max({id, group_defect(compose(e, g), g), group_defect(compose(g, e), g)});
                         const BMSElement gi = inverse(g);
                         inv = std::max({inv, group_defect(compose(g, gi), e), group_defect(compose(gi, g), e)});
                         const BMSElement h{SL2C::random_lorentz(rng, 1.0), t4_part(random_sphere_function(L, rng))};
                         const BMSElement hi = inverse(h);
                         inv = std::max({inv, group_defect(compose(h, hi), e), group_defect(compose(hi, h), e)});
                     }
                     return std::vector{make_check(cfg, "group_identity", id, "group_laws"),
                                        make_check(cfg, "group_inverse", inv, "group_laws", Comparison::at_most,
                                                   "rotations with general f; Lorentz with f in T4")};
                 }});
    t.push_back({"cocycle", "group_associativity", [&cfg, L](std::mt19937_64& rng) {
                     double rot = 0.0, lor = 0.0;
                     for (int i = 0; i < 50; ++i) {
                         const BMSElement a{SL2C::random_rotation(rng), random_sphere_function(L, rng)};
                         const BMSElement b{SL2C::random_rotation(rng), random_sphere_function(L, rng)};
                         const BMSElement c{SL2C::random_rotation(rng), random_sphere_function(L, rng)};
                         rot = std::max(rot, group_defect(compose(compose(a, b), c), compose(a, compose(b, c))));
                         const BMSElement x{SL2C::random_lorentz(rng, 1.0), t4_part(random_sphere_function(L, rng))};
                         const BMSElement y{SL2C::random_lorentz(rng, 1.0), t4_part(random_sphere_function(L, rng))};
                         const BMSElement z{SL2C::random_lorentz(rng, 1.0), t4_part(random_sphere_function(L, rng))};
                         lor = std::max(lor, group_defect(compose(compose(x, y), z), compose(x, compose(y, z))));
                     }
                     return std::vector{make_check(cfg, "associativity_rotations", rot, "group_laws"),
                                        make_check(cfg, "associativity_lorentz_t4", lor, "group_laws",
                                                   Comparison::at_most, "supertranslations supported on l <= 1")};
                 }});
    t.push_back({"cocycle", "scri_action", [&cfg, L](std::mt19937_64& rng) {
                     std::normal_distribution<double> g(0.0, 1.0);
                     double worst = 0.0;
                     for (int i = 0; i < 50; ++i) {
                         const BMSElement a{SL2C::random_rotation(rng), random_sphere_function(L, rng)};
                         const BMSElement b{SL2C::random_rotation(rng), random_sphere_function(L, rng)};
                         const ScriPoint x{g(rng), RiemannPoint::from_angles(random_point(rng))};
                         const ScriPoint lhs = act_on_scri(compose(a, b), x);
                         const ScriPoint rhs = act_on_scri(a, act_on_scri(b, x));
                         // Projective equality of (z1 : z2).
                         const RiemannPoint &p = lhs.zeta, &q = rhs.zeta;
                         const double zl = std::abs(p.z1() * q.z2() - p.z2() * q.z1()) /
                                           (std::hypot(std::abs(p.z1()), std::abs(p.z2())) *
                                            std::hypot(std::abs(q.z1()), std::abs(q.z2())));
                         worst = std::max({worst, std::abs(lhs.u - rhs.u) / (1.0 + std::abs(rhs.u)), zl});
                     }
                     return std::vector{make_check(cfg, "scri_action_law", worst, "group_laws", Comparison::at_most,
                                                   "act(g1 g2) = act(g1) act(g2) on (u, zeta)")};
                 }});
    t.push_back({"cocycle", "nuclear_chain", [&cfg, L](std::mt19937_64& rng) {
                     double worst = 0.0;
                     for (int i = 0; i < 100; ++i) {
                         const SphereFunction f = random_sphere_function(L, rng);
                         for (int p = 0; p <= 3; ++p)
                             worst = std::max(worst, nuclear_norm(f, p, cfg.k) - nuclear_norm(f, p + 1, cfg.k));
                     }
                     return std::vector{make_check(cfg, "nuclear_chain", std::max(worst, 0.0), "nuclear_chain",
                                                   Comparison::at_most, "max(||f||_p - ||f||_{p+1}, 0)")};
                 }});
    t.push_back({"cocycle", "hilbert_schmidt", [&cfg](std::mt19937_64&) {
                     // Independent summation in long double for the oracle.
                     double worst = 0.0;
                     long double direct = 0.0L;
                     for (int l = 0; l <= 2000; ++l) {
                         direct += (2.0L * l + 1.0L) / std::pow(l * (l + 1.0L) + 2.0L, 2.0L);
                         if (l % 97 == 0 || l == 2000)
                             worst = std::max(worst, static_cast<double>(std::abs(hs_norm_partial(2.0, 2.0, l) - direct) / direct));
                     }
                     const double step = hs_norm_partial(2.0, 2.0, 2000) - hs_norm_partial(2.0, 2.0, 1999);
                     return std::vector{make_check(cfg, "hs_partial_sums", worst, "hs_oracle", Comparison::at_most,
                                                   "alpha = 2, k = 2 against long-double summation"),
                                        make_check(cfg, "hs_cauchy", step, "hs_cauchy", Comparison::at_most,
                                                   "S(2000) - S(1999)")};
                 }});
    t.push_back({"cocycle", "split_T4_ST", [&cfg, L](std::mt19937_64& rng) {
                     double orth = 0.0, resum = 0.0;
                     for (int i = 0; i < 100; ++i) {
                         const SphereFunction f = random_sphere_function(L, rng);
                         const auto [a, b] = split_T4_ST(f);
                         orth = std::max(orth, std::abs(a.vec().dot(b.vec())));
                         resum = std::max(resum, coeff_distance(a + b, f));
                     }
                     return std::vector{make_check(cfg, "split_orthogonal", orth, "split"),
                                        make_check(cfg, "split_resum", resum, "split")};
                 }});
    return t;
}

// ---- casimir: supermomenta ----

std::vector<NamedTask> casimir_tasks(const Config& cfg) {
    std::vector<NamedTask> t;
    const int L = cfg.L_max;
    t.push_back({"casimir", "casimir_invariance", [&cfg, L](std::mt19937_64& rng) {
                     double massive = 0.0, massless = 0.0;
                     const Supermomentum m1 = orbit_fixed_point(OrbitKind::massive, 1.0, L);
                     const Supermomentum m2 = orbit_fixed_point(OrbitKind::massive, 2.0, L);
                     const Supermomentum z = orbit_fixed_point(OrbitKind::massless, 1.0, L);
                     for (int i = 0; i < 500; ++i) {
                         const SL2C lam = i % 2 ? SL2C::random_rotation(rng) : SL2C::random_lorentz(rng, 2.0);
                         massive = std::max(massive, std::abs(mass_squared(dual_act(lam, m1), cfg.signature) - 1.0));
                         massive = std::max(massive, std::abs(mass_squared(dual_act(lam, m2), cfg.signature) - 4.0));
                         massless = std::max(massless, std::abs(casimir_B(dual_act(lam, z), dual_act(lam, z), cfg.signature)));
                     }
                     return std::vector{make_check(cfg, "casimir_massive", massive, "casimir_mass", Comparison::at_most,
                                                   "500 transformations, m = 1 and 2"),
                                        make_check(cfg, "casimir_massless", massless, "massless_B")};
                 }});
    t.push_back({"casimir", "t4_covariance", [&cfg, L](std::mt19937_64& rng) {
                     double worst = 0.0;
                     for (int i = 0; i < 100; ++i) {
                         const SL2C lam = SL2C::random_lorentz(rng, 1.5);
                         const Supermomentum beta = dual_of(random_sphere_function(L, rng));
                         const FourMomentum a = project_T4(dual_act(lam, beta));
                         const FourMomentum b = lorentz_transform(lam, project_T4(beta));
                         double scale = 0.0, d = 0.0;
                         for (int mu = 0; mu < 4; ++mu) {
                             scale = std::max(scale, std::abs(b[mu]));
                             d = std::max(d, std::abs(a[mu] - b[mu]));
                         }
                         worst = std::max(worst, d / scale);
                     }
                     return std::vector{make_check(cfg, "t4_covariance", worst, "t4_covariance", Comparison::at_most,
                                                   "project_T4 o dual_act = covering map o project_T4, relative")};
                 }});
    t.push_back({"casimir", "stabilizer", [&cfg, L](std::mt19937_64& rng) {
                     const Supermomentum m = orbit_fixed_point(OrbitKind::massive, 1.0, L);
                     double fixed = 0.0, failures = 0.0;
                     for (int i = 0; i < 50; ++i) {
                         const Supermomentum r = dual_act(SL2C::random_rotation(rng), m);
                         fixed = std::max(fixed, (r.vec() - m.vec()).cwiseAbs().maxCoeff());
                         if (!annihilator_check(r, cfg.tol("t4_covariance"))) failures += 1.0;
                     }
                     return std::vector{
                         make_check(cfg, "massive_stabilizer", fixed, "t4_covariance", Comparison::at_most,
                                    "rotations fix the rest-frame supermomentum"),
                         make_check(cfg, "annihilator_rotations", failures, "counterexamples", Comparison::at_most,
                                    "rotated fixed point has no l > 1 part"),
                     };
                 }});
    return t;
}

// ---- operators: white noise calculus ----

std::vector<NamedTask> operator_tasks(const Config& cfg) {
    std::vector<NamedTask> t;
    const int K = cfg.directions().size();
    const int N = cfg.N;
    t.push_back({"operators", "q_identity", [&cfg, K, N](std::mt19937_64&) {
                     const auto basis = ChaosBasis::get(K, N);
                     double worst = 0.0;
                     for (int i = 0; i < K; ++i) {
                         const SparseReal q = elementary_matrix(Elementary::Q, i, K, N);
                         const SparseReal d = elementary_matrix(Elementary::D, i, K, N);
                         const SparseReal ds = elementary_matrix(Elementary::Dstar, i, K, N);
                         const SparseReal diff = q - d - ds;
                         worst = std::max(worst, max_abs(SparseReal(restrict_degree(diff, *basis, N - 1))));
                     }
                     return std::vector{make_check(cfg, "q_equals_d_plus_dstar", worst, "q_identity",
                                                   Comparison::at_most, "every slot, degree <= N - 1")};
                 }});
    t.push_back({"operators", "fourier_gauss", [&cfg, K, N](std::mt19937_64& rng) {
                     const auto basis = ChaosBasis::get(K, N);
                     const cplx s2(std::sqrt(2.0)), i1(0.0, 1.0);
                     const SparseComplex gp = fourier_gauss_matrix(s2, i1, K, N);
                     const SparseComplex gm = fourier_gauss_matrix(s2, -i1, K, N);
                     SparseComplex id(basis->size(), basis->size());
                     id.setIdentity();
                     const double inv = std::max(max_abs(SparseComplex(gp * gm - id)), max_abs(SparseComplex(gm * gp - id)));

                     double eig = 0.0;
                     const DirectionSet dirs = cfg.directions();
                     for (int slot = 0; slot < K; ++slot)
                         for (int n = 0; n <= std::min(4, N); ++n) {
                             const HermiteSeries h = HermiteSeries::single(dirs, N, slot, n);
                             const HermiteSeries gh = fourier_gauss(s2, i1, h);
                             eig = std::max(eig, (gh.coeffs() - std::pow(i1, n) * h.coeffs()).cwiseAbs().maxCoeff());
                         }

                     double norm = 0.0;
                     for (int trial = 0; trial < 10; ++trial) {
                         HermiteSeries psi = random_series(dirs, N, N, rng);
                         psi += cplx(0.0, 1.0) * random_series(dirs, N, N, rng);
                         const HermiteSeries g = fourier_gauss(s2, i1, psi);
                         for (int p = 0; p <= 1; ++p) {
                             const double a = gamma_A_norm(psi, p), b = gamma_A_norm(g, p);
                             norm = std::max(norm, std::abs(a - b) / a);
                         }
                     }
                     return std::vector{make_check(cfg, "fg_inverse_pair", inv, "fg_identity"),
                                        make_check(cfg, "fg_eigenvalues", eig, "fg_identity", Comparison::at_most,
                                                   "G He_n = i^n He_n, n <= 4"),
                                        make_check(cfg, "fg_norm_preservation", norm, "fg_identity", Comparison::at_most,
                                                   "Gamma(A)^p norms, p = 0, 1, relative")};
                 }});
    t.push_back({"operators", "fg_monte_carlo", [&cfg](std::mt19937_64& rng) {
                     // (G_{a,b} psi)(x) = E_y psi(a y + b x) for a standard Gaussian y.
                     const double x = 0.7;
                     const cplx a(std::sqrt(2.0)), b(0.0, 1.0);
                     std::normal_distribution<double> g(0.0, 1.0);
                     const std::int64_t n = cfg.mc_samples;
                     std::array<cplx, 5> sum{}, sum2{};
                     for (std::int64_t s = 0; s < n; ++s) {
                         const cplx arg = a * g(rng) + b * x;
                         for (int k = 0; k <= 4; ++k) {
                             const cplx v = hermite_he(k, arg);
                             sum[static_cast<std::size_t>(k)] += v;
                             sum2[static_cast<std::size_t>(k)] += cplx(v.real() * v.real(), v.imag() * v.imag());
                         }
                     }
                     double worst = 0.0;
                     for (int k = 0; k <= 4; ++k) {
                         const cplx mean = sum[static_cast<std::size_t>(k)] / static_cast<double>(n);
                         const cplx m2 = sum2[static_cast<std::size_t>(k)] / static_cast<double>(n);
                         const cplx exact = std::pow(cplx(0.0, 1.0), k) * hermite_he(k, x);
                         const double se_re = std::sqrt(std::max(m2.real() - mean.real() * mean.real(), 0.0) / n);
                         const double se_im = std::sqrt(std::max(m2.imag() - mean.imag() * mean.imag(), 0.0) / n);
                         const double dr = std::abs(mean.real() - exact.real()), di = std::abs(mean.imag() - exact.imag());
                         // Zero-variance components are deterministic up to summation rounding.
                         const double floor = 1e-9 * (1.0 + std::abs(exact));
                         worst = std::max(worst, se_re > floor ? dr / se_re : (dr > floor ? INFINITY : 0.0));
                         worst = std::max(worst, se_im > floor ? di / se_im : (di > floor ? INFINITY : 0.0));
                     }
                     return std::vector{make_check(cfg, "fg_monte_carlo", worst, "mc_sigmas", Comparison::at_most,
                                                   "standard errors, n <= 4 at x = 0.7")};
                 }});
    t.push_back({"operators", "fg_intertwining", [&cfg, K, N](std::mt19937_64&) {
                     const auto basis = ChaosBasis::get(K, N);
                     double uno = 0.0, due = 0.0;
                     for (const auto& [a, b] : {std::pair<cplx, cplx>{std::sqrt(2.0), {0.0, 1.0}},
                                                std::pair<cplx, cplx>{1.3, 0.7}}) {
                         const SparseComplex g = fourier_gauss_matrix(a, b, K, N);
                         for (int i = 0; i < K; ++i) {
                             const SparseComplex d = elementary_matrix(Elementary::D, i, K, N).cast<cplx>();
                             const SparseComplex q = elementary_matrix(Elementary::Q, i, K, N).cast<cplx>();
                             const SparseComplex e1 = g * d - (1.0 / b) * SparseComplex(d * g);
                             const SparseComplex e2 = g * q - (a * a / b) * SparseComplex(d * g) - b * SparseComplex(q * g);
                             uno = std::max(uno, max_abs(SparseComplex(restrict_degree(e1, *basis, N - 1))));
                             due = std::max(due, max_abs(SparseComplex(restrict_degree(e2, *basis, N - 1))));
                         }
                     }
                     return std::vector{make_check(cfg, "fg_intertwining_D", uno, "fg_intertwining", Comparison::at_most,
                                                   "G D = b^-1 D G, degree <= N - 1"),
                                        make_check(cfg, "fg_intertwining_Q", due, "fg_intertwining", Comparison::at_most,
                                                   "G Q = a^2 b^-1 D G + b Q G, degree <= N - 1")};
                 }});
    t.push_back({"operators", "wave_operators", [&cfg, K, N](std::mt19937_64&) {
                     const auto basis = ChaosBasis::get(K, N);
                     const SparseComplex g = fourier_gauss_matrix(std::sqrt(2.0), cplx(0.0, 1.0), K, N);
                     const SparseReal qq = wave_matrix_QQ(cfg.signature, K, N);
                     const SparseReal qd = wave_matrix_qd(cfg.signature, K, N);
                     const SparseReal dd = wave_matrix_DD(cfg.signature, K, N);
                     const SparseComplex lhs = g * SparseComplex(qq.cast<cplx>());
                     const SparseComplex rhs = SparseComplex(qd.cast<cplx>()) * g;
                     // The identity holds with prefactor -1 on the real truncation.
                     const SparseComplex diff = lhs + rhs;
                     const double propfg = max_abs(SparseComplex(restrict_degree(diff, *basis, N - 2)));
                     return std::vector{
                         make_check(cfg, "propfg_identity", propfg, "propfg", Comparison::at_most,
                                    "G (eta QQ) = -(eta qd qd) G, degree <= N - 2"),
                         make_check(cfg, "vainberg_qd_symmetric", vainberg_symmetry_defect(qd, *basis),
                                    "vainberg_symmetric"),
                         make_check(cfg, "vainberg_dd_obstruction", vainberg_symmetry_defect(dd, *basis),
                                    "vainberg_obstruction", Comparison::at_least, "eta D D is not symmetric"),
                     };
                 }});
    t.push_back({"operators", "constraint_equivalence", [&cfg](std::mt19937_64&) {
                     const DirectionSet dirs = cfg.directions();
                     const int cap = std::min(4, cfg.N);
                     const auto basis = ChaosBasis::get(dirs.size(), cap);
                     const std::vector<int> t4 = translation_slots();
                     double bad = 0.0;
                     for (int r = 0; r < basis->size(); ++r) {
                         HermiteSeries psi(dirs, cap);
                         psi.coeffs()[r] = 1.0;
                         const bool in_t4 = project_Pi_V(psi, t4).coeffs() == psi.coeffs();
                         const bool paired = constraint_pairing_defect(psi) == 0.0;
                         if (in_t4 != paired) bad += 1.0;
                     }
                     return std::vector{make_check(cfg, "constraint_equivalence", bad, "counterexamples",
                                                   Comparison::at_most,
                                                   std::to_string(basis->size()) + " monomials of degree <= " +
                                                       std::to_string(cap))};
                 }});
    return t;
}

// ---- transforms: S, F, Minlos ----

std::vector<NamedTask> transform_tasks(const Config& cfg) {
    std::vector<NamedTask> t;
    t.push_back({"transforms", "fourier_intertwining", [&cfg](std::mt19937_64&) {
                     const DirectionSet dirs = probe_directions(cfg);
                     const int K = dirs.size(), out_cap = cfg.N;
                     const auto basis = ChaosBasis::get(K, out_cap);
                     const int n_in = basis->size_up_to(out_cap - 2);
                     // Outputs are compared on degree <= out_cap - 1, where Q F keeps every term.
                     const int n_out = basis->size_up_to(out_cap - 1);
                     const cplx i1(0.0, 1.0);
                     double fd = 0.0, fq = 0.0;
                     for (int r = 0; r < n_in; ++r) {
                         HermiteSeries e(dirs, out_cap);
                         e.coeffs()[r] = 1.0;
                         const HermiteSeries fe = fourier_F(e, out_cap).series;
                         for (int i = 0; i < K; ++i) {
                             const HermiteSeries a = fourier_F(d_slot(i, e), out_cap).series;
                             const HermiteSeries b = i1 * q_slot(i, fe, DegreePolicy::grow).truncated(out_cap);
                             fd = std::max(fd, (a.coeffs() - b.coeffs()).head(n_out).cwiseAbs().maxCoeff());
                             const HermiteSeries c = fourier_F(q_slot(i, e), out_cap).series;
                             const HermiteSeries d = i1 * d_slot(i, fe);
                             fq = std::max(fq, (c.coeffs() - d.coeffs()).head(n_out).cwiseAbs().maxCoeff());
                         }
                     }
                     return std::vector{make_check(cfg, "fourier_FD_iQF", fd, "fourier_intertwining"),
                                        make_check(cfg, "fourier_FQ_iDF", fq, "fourier_intertwining")};
                 }});
    t.push_back({"transforms", "s_transform", [&cfg](std::mt19937_64& rng) {
                     const DirectionSet dirs = cfg.directions();
                     double worst = 0.0;
                     for (int i = 0; i < 10; ++i) {
                         const HermiteSeries psi = random_series(dirs, cfg.N, cfg.N, rng);
                         worst = std::max(worst, (s_inverse(s_transform(psi)).coeffs() - psi.coeffs()).cwiseAbs().maxCoeff());
                     }
                     return std::vector{make_check(cfg, "s_transform_roundtrip", worst, "transform_roundtrip")};
                 }});
    t.push_back({"transforms", "minlos", [&cfg](std::mt19937_64& rng) {
                     double worst = 0.0;
                     std::uniform_int_distribution<std::uint64_t> seeds;
                     for (int i = 0; i < 10; ++i) {
                         SphereFunction alpha = random_sphere_function(std::min(cfg.L_max, 3), rng);
                         alpha *= 1.5 / alpha.l2_norm() * (0.2 + 0.1 * i);
                         const CharacteristicEstimate est = characteristic_functional(alpha, cfg.mc_samples, seeds(rng));
                         worst = std::max(worst, std::abs(est.mc - est.exact) * std::sqrt(static_cast<double>(cfg.mc_samples)));
                     }
                     return std::vector{make_check(cfg, "minlos_characteristic", worst, "mc_sigmas", Comparison::at_most,
                                                   "sqrt(n) |MC - exp(-|alpha|^2/2)| over 10 alpha")};
                 }});
    return t;
}

// ---- variational: Lagrangian, Legendre map ----

std::vector<NamedTask> variational_tasks(const Config& cfg) {
    std::vector<NamedTask> t;
    const double m2 = 1.0;
    t.push_back({"variational", "euler_lagrange", [&cfg, m2](std::mt19937_64& rng) {
                     const DirectionSet dirs = probe_directions(cfg);
                     const int N = cfg.N;
                     double worst = 0.0;
                     for (int s = 0; s < cfg.fd_states; ++s) {
                         const FieldState st = random_state(dirs, N, rng);
                         const HermiteSeries grad = euler_lagrange_gradient(st, m2, cfg.signature);
                         const ChaosBasis& basis = st.psi.basis();
                         Eigen::VectorXd fd(basis.size()), an(basis.size());
                         // L is quadratic in (psi, v), so the central difference is exact up to rounding.
                         const double h = 1e-5;
                         for (int r = 0; r < basis.size(); ++r) {
                             HermiteSeries e(dirs, N);
                             e.coeffs()[r] = 1.0;
                             const HermiteSeries de = d_slot(0, e);
                             FieldState p = st, q = st;
                             p.psi += h * e;
                             p.v += h * de;
                             q.psi -= h * e;
                             q.v -= h * de;
                             fd[r] = (lagrangian_full(p, m2, cfg.signature) - lagrangian_full(q, m2, cfg.signature)) /
                                     (2.0 * h) / basis.weight(r);
                             an[r] = grad.coeffs()[r].real();
                         }
                         worst = std::max(worst, (fd - an).norm() / an.norm());
                     }
                     return std::vector{make_check(cfg, "el_gradient", worst, "el_gradient", Comparison::at_most,
                                                   std::to_string(cfg.fd_states) + " states, K = " +
                                                       std::to_string(dirs.size()) + ", relative")};
                 }});
    t.push_back({"variational", "legendre", [&cfg, m2](std::mt19937_64& rng) {
                     const DirectionSet dirs = probe_directions(cfg);
                     double leg = 0.0, fib = 0.0;
                     for (int s = 0; s < 50; ++s) {
                         const FieldState st = random_state(dirs, cfg.N, rng);
                         const double e = energy(st, m2, cfg.signature);
                         const double h = hamiltonian(fiber_derivative(st), m2, cfg.signature);
                         leg = std::max(leg, std::abs(h - e) / std::max(1.0, std::abs(e)));
                         // The fiber of the Legendre map: multiplier velocities are free.
                         FieldState other = st;
                         for (auto& lv : other.lambda_vs) lv = random_series(dirs, lv.cap(), 2, rng);
                         fib = std::max(fib, std::abs(energy(other, m2, cfg.signature) - e) / std::max(1.0, std::abs(e)));
                     }
                     return std::vector{make_check(cfg, "legendre_consistency", leg, "legendre", Comparison::at_most,
                                                   "H o FL = E, relative"),
                                        make_check(cfg, "energy_fiber_invariance", fib, "fiber_invariance")};
                 }});
    t.push_back({"variational", "symplectic_rank", [&cfg](std::mt19937_64&) {
                     double deficit = 0.0;
                     std::string detail;
                     const DirectionSet full = cfg.directions(), probe = probe_directions(cfg);
                     std::vector<std::pair<const DirectionSet*, int>> cases;
                     for (int cap = 1; cap <= std::min(cfg.N, 2); ++cap) cases.emplace_back(&full, cap);
                     for (int cap = 1; cap <= std::min(cfg.N, 4); ++cap) cases.emplace_back(&probe, cap);
                     for (const auto& [dirs, cap] : cases) {
                         const auto [rank, dim] = symplectic_rank(*dirs, cap);
                         deficit = std::max(deficit, static_cast<double>(dim - rank));
                         detail += (detail.empty() ? "" : ", ") + std::to_string(rank) + "/" + std::to_string(dim);
                     }
                     return std::vector{make_check(cfg, "symplectic_full_rank", deficit, "counterexamples",
                                                   Comparison::at_most, "rank/dim: " + detail)};
                 }});
    t.push_back({"variational", "kg_example", [&cfg](std::mt19937_64&) {
                     // psi = 1 on the single direction e_0, m2 = 0: -1/2 ||He_1||^2.
                     const DirectionSet dirs = DirectionSet::translations_only(cfg.k);
                     const HermiteSeries one = HermiteSeries::constant(dirs, 2);
                     const Metric e0{{1.0, 0.0, 0.0, 0.0}};
                     const double l = lagrangian_KG(one, 0.0, e0);
                     return std::vector{make_check(cfg, "kg_single_direction", std::abs(l + 0.5), "legendre",
                                                   Comparison::at_most, "L_KG(1) = -1/2 on e_0 with m2 = 0")};
                 }});
    return t;
}

// ---- induced: orbits and the induced action ----

std::vector<NamedTask> induced_tasks(const Config& cfg) {
    std::vector<NamedTask> t;
    t.push_back({"induced", "unitarity", [&cfg](std::mt19937_64&) {
                     const UnitarityReport r =
                         unitarity_check(cfg.boost_rapidity, cfg.induced_n_chi, cfg.induced_n_sphere, cfg.induced_refine);
                     return std::vector{
                         make_check(cfg, "translation_phase_norm", r.phase_drift, "induced_phase"),
                         make_check(cfg, "supertranslation_trivial", r.st_drift, "induced_phase", Comparison::at_most,
                                    "pure l > 1 supertranslation acts trivially on the massive orbit"),
                         make_check(cfg, "boost_norm_drift", r.boost_drift, "boost_norm"),
                         make_check(cfg, "boost_refinement_gain", r.improvement, "refinement_gain",
                                    Comparison::at_least, "drift ratio under one refinement"),
                     };
                 }});
    t.push_back({"induced", "reduction", [&cfg](std::mt19937_64& rng) {
                     const DirectionSet dirs = cfg.directions();
                     const std::vector<int> t4 = translation_slots();
                     const HermiteSeries psi = project_Pi_V(random_series(dirs, 4, 3, rng), t4);
                     const CovariantReduction red(psi, cfg.weight_exponent);
                     double worst = 0.0;
                     const OrbitQuadrature orbit = build_orbit(OrbitKind::massive, 1.0, 1.0, 4, 4);
                     for (int mu = 0; mu < 4; ++mu) {
                         const CovariantReduction shifted(q_slot(mu, psi, DegreePolicy::grow), cfg.weight_exponent);
                         for (std::size_t i = 0; i < orbit.size(); ++i) {
                             const FourMomentum p = FourMomentum::from_cartesian(orbit.nodes[i]);
                             const cplx lhs = shifted.polynomial(p), rhs = p[mu] * red.polynomial(p);
                             worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
                         }
                     }
                     double rejected = 0.0;
                     try {
                         CovariantReduction bad(HermiteSeries::single(dirs, 2, dirs.size() - 1, 1), cfg.weight_exponent);
                     } catch (const ConstraintError&) {
                         rejected = 1.0;
                     }
                     return std::vector{make_check(cfg, "reduction_multiplication", worst, "reduction",
                                                   Comparison::at_most, "Q_mu becomes multiplication by p_mu"),
                                        make_check(cfg, "reduction_rejects_st", 1.0 - rejected, "counterexamples",
                                                   Comparison::at_most, "supertranslation-dependent field refused")};
                 }});
    t.push_back({"induced", "coverage", [&cfg](std::mt19937_64&) {
                     const OrbitQuadrature orbit = build_orbit(OrbitKind::massless, 1.0, 1.0, 8, 6);
                     const InducedField phi = sample_field(orbit, [](const std::array<double, 3>&) { return cplx(1.0); });
                     const BMSElement g{SL2C::boost({0.0, 0.0, 1.0}, 0.8), SphereFunction(cfg.L_max)};
                     double missed = 1.0;
                     try {
                         induced_act(g, phi, orbit, EscapePolicy::error);
                     } catch (const CoverageError&) {
                         missed = 0.0;
                     }
                     return std::vector{make_check(cfg, "escape_is_reported", missed, "counterexamples",
                                                   Comparison::at_most, "boost beyond the massless window")};
                 }});
    return t;
}

std::vector<NamedTask> tasks_for(const std::string& name, const Config& cfg) {
    std::vector<NamedTask> all;
    auto add = [&](std::vector<NamedTask> v) {
        for (auto& x : v) all.push_back(std::move(x));
    };
    if (name == "cocycle" || name == "all") add(cocycle_tasks(cfg));
    if (name == "casimir" || name == "all") add(casimir_tasks(cfg));
    if (name == "operators" || name == "all") add(operator_tasks(cfg));
    if (name == "transforms" || name == "all") add(transform_tasks(cfg));
    if (name == "variational" || name == "all") add(variational_tasks(cfg));
    if (name == "induced" || name == "all") add(induced_tasks(cfg));
    return all;
}

std::string format_double(double x) {
    std::ostringstream os;
    os << std::setprecision(3) << std::scientific << x;
    return os.str();
}

} // namespace

std::uint64_t derived_seed(std::uint64_t seed, const std::string& name) {
    std::uint64_t h = 1469598103934665603ULL; // FNV-1a
    for (unsigned char c : name) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

SphereFunction random_sphere_function(int lmax, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    SphereFunction f(lmax);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = g(rng);
    return f;
}

HermiteSeries random_series(const DirectionSet& dirs, int cap, int degree, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    HermiteSeries psi(dirs, cap);
    const ChaosBasis& basis = psi.basis();
    const int n = basis.size_up_to(std::min(degree, cap));
    for (int r = 0; r < n; ++r) psi.coeffs()[r] = g(rng) / std::sqrt(basis.weight(r));
    return psi;
}

FieldState random_state(const DirectionSet& dirs, int N, std::mt19937_64& rng) {
    FieldState s{random_series(dirs, N, N, rng), random_series(dirs, N, N, rng), {}, {}};
    for (std::size_t i = 0; i < multiplier_slots(dirs).size(); ++i) {
        s.lambdas.push_back(random_series(dirs, 2, 2, rng));
        s.lambda_vs.push_back(random_series(dirs, 2, 2, rng));
    }
    return s;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"cocycle",     "casimir", "operators", "transforms",
                                                "variational", "induced", "all"};
    return names;
}

bool VerificationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerificationReport::to_json(bool include_runtime) const {
    nlohmann::ordered_json j;
    j["suite"] = suite;
    j["passed"] = passed();
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json e;
        e["suite"] = c.suite;
        e["name"] = c.name;
        e["status"] = c.passed ? "pass" : "fail";
        e["defect"] = std::isfinite(c.defect) ? nlohmann::ordered_json(c.defect) : nlohmann::ordered_json("inf");
        e["comparison"] = c.comparison == Comparison::at_most ? "<=" : ">=";
        e["tolerance"] = c.tolerance;
        e["tolerance_key"] = c.tolerance_key;
        if (!c.detail.empty()) e["detail"] = c.detail;
        if (include_runtime) e["runtime_s"] = c.runtime_s;
        j["checks"].push_back(e);
    }
    if (include_runtime) j["runtime_s"] = runtime_s;
    return j.dump(2);
}

std::string VerificationReport::table() const {
    std::size_t w = 5;
    for (const auto& c : checks) w = std::max(w, c.suite.size() + c.name.size() + 1);
    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(w)) << "check" << "  status  defect      tol          runtime\n";
    for (const auto& c : checks) {
        os << std::left << std::setw(static_cast<int>(w)) << (c.suite + "/" + c.name) << "  "
           << (c.passed ? "PASS  " : "FAIL  ") << "  " << std::setw(10) << format_double(c.defect) << "  "
           << (c.comparison == Comparison::at_most ? "<= " : ">= ") << std::setw(10) << format_double(c.tolerance)
           << "  " << std::fixed << std::setprecision(2) << c.runtime_s << "s" << std::defaultfloat << "\n";
    }
    const auto n_pass = std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    os << n_pass << "/" << checks.size() << " checks passed in " << std::fixed << std::setprecision(2) << runtime_s
       << "s\n";
    return os.str();
}

VerificationReport run_suite(const std::string& name, const Config& config) {
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw std::invalid_argument("unknown suite \"" + name + "\"");
    config.validate();
    const auto t0 = Clock::now();
    const std::vector<NamedTask> tasks = tasks_for(name, config);
    std::vector<std::vector<CheckResult>> results(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const auto s = Clock::now();
            try {
                std::mt19937_64 rng(derived_seed(config.seed, tasks[i].suite + "/" + tasks[i].name));
                results[i] = tasks[i].run(rng);
            } catch (...) {
                errors[i] = std::current_exception();
            }
            const double dt = std::chrono::duration<double>(Clock::now() - s).count();
            for (auto& c : results[i]) {
                c.suite = tasks[i].suite;
                c.runtime_s = dt / static_cast<double>(results[i].size());
            }
        }
    };
    const unsigned n_threads = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 4u));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    VerificationReport rep;
    rep.suite = name;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (errors[i]) {
            CheckResult c;
            c.suite = tasks[i].suite;
            c.name = tasks[i].name;
            c.defect = INFINITY;
            try {
                std::rethrow_exception(errors[i]);
            } catch (const std::exception& e) {
                c.detail = std::string("error: ") + e.what();
            }
            rep.checks.push_back(std::move(c));
            continue;
        }
        for (auto& c : results[i]) rep.checks.push_back(std::move(c));
    }
    rep.runtime_s = std::chrono::duration<double>(Clock::now() - t0).count();
    return rep;
}

} // namespace bms
