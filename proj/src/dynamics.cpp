#include "bmsfield/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "bmsfield/errors.hpp"

namespace bms {

namespace {

constexpr auto kGrow = DegreePolicy::grow;

HermiteSeries at_cap(const HermiteSeries& s, int cap) { return s.truncated(cap); }

// Gaussian inner product of series with different caps.
double dot(const HermiteSeries& a, const HermiteSeries& b) {
    const int cap = std::max(a.cap(), b.cap());
    return gaussian_inner(at_cap(a, cap), at_cap(b, cap));
}

double norm2(const HermiteSeries& a) { return gaussian_inner(a, a); }

void require_real(const HermiteSeries& s, const char* what) {
    if (!s.is_real()) throw InputShapeError(std::string(what) + " must have real coefficients");
}

void require_multipliers(const HermiteSeries& psi, const std::vector<HermiteSeries>& lambdas) {
    const auto slots = multiplier_slots(psi.directions());
    if (lambdas.size() != slots.size())
        throw InputShapeError("expected " + std::to_string(slots.size()) + " multipliers (one per l = 2 direction), got " +
                              std::to_string(lambdas.size()));
    for (const auto& l : lambdas)
        if (!(l.directions() == psi.directions())) throw InputShapeError("multiplier uses a different direction set");
}

void require_state(const FieldState& s) {
    require_real(s.psi, "psi");
    require_real(s.v, "v");
    s.psi.require_compatible(s.v);
    require_multipliers(s.psi, s.lambdas);
}

// Multiplication matrices are reused across the many evaluations that share a
// multiplier (finite differences, energy and Hamiltonian on one state).
std::shared_ptr<const SparseReal> multiplier_matrix(const HermiteSeries& lambda, int in_cap) {
    struct Entry {
        std::vector<std::pair<int, int>> dirs;
        int lambda_cap;
        int in_cap;
        Eigen::VectorXd coeffs;
        std::shared_ptr<const SparseReal> m;
    };
    thread_local std::vector<Entry> cache;
    const Eigen::VectorXd c = lambda.coeffs().real();
    for (const auto& e : cache)
        if (e.in_cap == in_cap && e.lambda_cap == lambda.cap() && e.dirs == lambda.directions().all() &&
            e.coeffs.size() == c.size() && e.coeffs == c)
            return e.m;
    auto m = std::make_shared<const SparseReal>(multiplication_matrix(lambda, in_cap));
    if (cache.size() >= 16) cache.erase(cache.begin());
    cache.push_back({lambda.directions().all(), lambda.cap(), in_cap, c, m});
    return m;
}

// lambda u, with u real.
HermiteSeries times_multiplier(const HermiteSeries& lambda, const HermiteSeries& u) {
    const auto m = multiplier_matrix(lambda, u.cap());
    const int out_cap = u.cap() + std::max(0, lambda.degree());
    const Eigen::VectorXd y = (*m) * u.coeffs().real();
    return HermiteSeries(u.directions(), out_cap, y.cast<cplx>());
}

// Q_0 psi - 2 v, at cap N + 1.
HermiteSeries velocity_residual(const FieldState& s) {
    const HermiteSeries q0 = q_slot(0, s.psi, kGrow);
    return q0 - 2.0 * at_cap(s.v, q0.cap());
}

} // namespace

std::vector<int> multiplier_slots(const DirectionSet& dirs) {
    std::vector<int> out;
    for (int i = 0; i < dirs.size(); ++i)
        if (dirs.lm(i).first == 2) out.push_back(i);
    return out;
}

std::vector<int> st_slots(const DirectionSet& dirs) {
    std::vector<int> out;
    for (int i = 4; i < dirs.size(); ++i) out.push_back(i);
    return out;
}

std::vector<std::pair<int, HermiteSeries>> constraint_residuals(const HermiteSeries& psi) {
    std::vector<std::pair<int, HermiteSeries>> out;
    for (int i : st_slots(psi.directions())) out.emplace_back(i, q_slot(i, psi, kGrow));
    return out;
}

double constraint_pairing_defect(const HermiteSeries& psi) {
    double worst = 0.0;
    for (int i : st_slots(psi.directions())) worst = std::max(worst, gaussian_norm(d_slot(i, psi)));
    return worst;
}

HermiteSeries kg_apply(const HermiteSeries& psi, double m2, const Metric& eta, DegreePolicy policy) {
    if (policy == DegreePolicy::strict && psi.degree() > psi.cap() - 2)
        throw DegreeCapError("kg_apply raises degree by 2 above the cap N = " + std::to_string(psi.cap()));
    const int cap = policy == DegreePolicy::grow ? psi.cap() + 2 : psi.cap();
    HermiteSeries out = -m2 * at_cap(psi, cap);
    for (int mu = 0; mu < 4; ++mu) {
        if (eta(mu) == 0.0) continue;
        out += eta(mu) * at_cap(q_slot(mu, q_slot(mu, psi, kGrow), kGrow), cap);
    }
    return out;
}

HermiteSeries qd_apply(int slot, const HermiteSeries& psi, DegreePolicy policy) {
    const HermiteSeries up = dstar_slot(slot, psi, policy);
    return up - at_cap(d_slot(slot, psi), up.cap());
}

HermiteSeries eom_dyn2(const HermiteSeries& psi, double m2, const Metric& eta, DegreePolicy policy) {
    if (policy == DegreePolicy::strict && psi.degree() > psi.cap() - 2)
        throw DegreeCapError("eom_dyn2 raises degree by 2 above the cap N = " + std::to_string(psi.cap()));
    const int cap = policy == DegreePolicy::grow ? psi.cap() + 2 : psi.cap();
    HermiteSeries out = -m2 * at_cap(psi, cap);
    for (int mu = 0; mu < 4; ++mu) {
        if (eta(mu) == 0.0) continue;
        out += eta(mu) * at_cap(qd_apply(mu, qd_apply(mu, psi, kGrow), kGrow), cap);
    }
    return out;
}

double lagrangian_KG(const HermiteSeries& psi, double m2, const Metric& eta) {
    require_real(psi, "psi");
    double l = 0.5 * m2 * norm2(psi);
    for (int mu = 0; mu < 4; ++mu)
        if (eta(mu) != 0.0) l -= 0.5 * eta(mu) * norm2(qd_apply(mu, psi, kGrow));
    return l;
}

double multiplier_term(const HermiteSeries& psi, const std::vector<HermiteSeries>& lambdas) {
    require_multipliers(psi, lambdas);
    const auto slots = multiplier_slots(psi.directions());
    double m = 0.0;
    for (std::size_t j = 0; j < slots.size(); ++j) {
        if (lambdas[j].degree() < 0) continue;
        const HermiteSeries u = qd_apply(slots[j], psi, kGrow);
        m += 0.5 * dot(times_multiplier(lambdas[j], u), u);
    }
    return m;
}

double lagrangian_full(const FieldState& s, double m2, const Metric& eta) {
    require_state(s);
    double l = 0.5 * m2 * norm2(s.psi);
    if (eta(0) != 0.0) l -= 0.5 * eta(0) * norm2(velocity_residual(s));
    for (int k = 1; k < 4; ++k)
        if (eta(k) != 0.0) l -= 0.5 * eta(k) * norm2(qd_apply(k, s.psi, kGrow));
    return l + multiplier_term(s.psi, s.lambdas);
}

LagrangianPartials lagrangian_partials(const FieldState& s, double m2, const Metric& eta) {
    require_state(s);
    const int N = s.psi.cap();
    const HermiteSeries w = velocity_residual(s);
    HermiteSeries dpsi = m2 * s.psi;
    if (eta(0) != 0.0) dpsi -= eta(0) * at_cap(q_slot(0, w, kGrow), N);
    for (int k = 1; k < 4; ++k)
        if (eta(k) != 0.0) dpsi += eta(k) * at_cap(qd_apply(k, qd_apply(k, s.psi, kGrow), kGrow), N);
    const auto slots = multiplier_slots(s.psi.directions());
    for (std::size_t j = 0; j < slots.size(); ++j) {
        if (s.lambdas[j].degree() < 0) continue;
        const HermiteSeries u = qd_apply(slots[j], s.psi, kGrow);
        dpsi -= at_cap(qd_apply(slots[j], times_multiplier(s.lambdas[j], u), kGrow), N);
    }
    return {dpsi, at_cap((2.0 * eta(0)) * w, N)};
}

HermiteSeries euler_lagrange_gradient(const FieldState& s, double m2, const Metric& eta) {
    const LagrangianPartials p = lagrangian_partials(s, m2, eta);
    return p.d_psi + at_cap(dstar_slot(0, p.d_v, kGrow), s.psi.cap());
}

double vainberg_symmetry_defect(const SparseReal& m, const ChaosBasis& basis) {
    if (m.rows() != m.cols()) throw InputShapeError("Vainberg defect needs a square matrix");
    if (m.rows() > basis.size()) throw InputShapeError("matrix larger than the basis");
    Eigen::VectorXd w(m.rows());
    for (Eigen::Index r = 0; r < m.rows(); ++r) w[r] = basis.weight(static_cast<int>(r));
    const SparseReal wm = w.asDiagonal() * m;
    const SparseReal diff = wm - SparseReal(wm.transpose());
    double worst = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SparseReal::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
}

double vainberg_symmetry_defect(const Eigen::MatrixXd& m, const ChaosBasis& basis) {
    return vainberg_symmetry_defect(SparseReal(m.sparseView(0.0, 0.0)), basis);
}

namespace {

SparseReal wave_matrix(const Metric& eta, int K, int cap, Elementary a, Elementary b, bool qd) {
    const int wide = cap + 2;
    const auto basis = ChaosBasis::get(K, wide);
    SparseReal acc(basis->size(), basis->size());
    for (int mu = 0; mu < 4; ++mu) {
        if (eta(mu) == 0.0) continue;
        SparseReal x, y;
        if (qd) {
            x = elementary_matrix(Elementary::Dstar, mu, K, wide) - elementary_matrix(Elementary::D, mu, K, wide);
            y = x;
        } else {
            x = elementary_matrix(a, mu, K, wide);
            y = elementary_matrix(b, mu, K, wide);
        }
        acc += eta(mu) * SparseReal(x * y);
    }
    const auto small = ChaosBasis::get(K, cap);
    return restrict_degree(acc, *small, cap);
}

} // namespace

SparseReal wave_matrix_qd(const Metric& eta, int K, int cap) {
    return wave_matrix(eta, K, cap, Elementary::Q, Elementary::Q, true);
}

SparseReal wave_matrix_QQ(const Metric& eta, int K, int cap) {
    return wave_matrix(eta, K, cap, Elementary::Q, Elementary::Q, false);
}

SparseReal wave_matrix_DD(const Metric& eta, int K, int cap) {
    return wave_matrix(eta, K, cap, Elementary::D, Elementary::D, false);
}

CotangentPoint fiber_derivative(const FieldState& s) {
    require_state(s);
    const HermiteSeries q0 = q_slot(0, s.psi, kGrow);
    return {s.psi, 4.0 * at_cap(s.v, q0.cap()) - 2.0 * q0, s.lambdas};
}

double energy(const FieldState& s, double m2, const Metric& eta) {
    const CotangentPoint pt = fiber_derivative(s);
    return dot(s.v, pt.pi) - lagrangian_full(s, m2, eta);
}

double hamiltonian(const CotangentPoint& pt, double m2, const Metric& eta) {
    require_real(pt.psi, "psi");
    require_real(pt.pi, "Pi");
    require_multipliers(pt.psi, pt.lambdas);
    const HermiteSeries q0 = q_slot(0, pt.psi, kGrow);
    double h = (0.25 + eta(0) / 8.0) * norm2(pt.pi) + 0.5 * dot(q0, pt.pi);
    for (int k = 1; k < 4; ++k)
        if (eta(k) != 0.0) h += 0.5 * eta(k) * norm2(qd_apply(k, pt.psi, kGrow));
    h -= 0.5 * m2 * norm2(pt.psi);
    return h - multiplier_term(pt.psi, pt.lambdas);
}

double symplectic_form(const HermiteSeries& psi1, const HermiteSeries& pi1, const HermiteSeries& psi2,
                       const HermiteSeries& pi2) {
    return dot(pi2, psi1) - dot(pi1, psi2);
}

std::pair<int, int> symplectic_rank(const DirectionSet& dirs, int cap) {
    const auto basis = ChaosBasis::get(dirs.size(), cap);
    const int n = basis->size();
    const HermiteSeries zero(dirs, cap);
    std::vector<HermiteSeries> e;
    e.reserve(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
        HermiteSeries b(dirs, cap);
        b.coeffs()[r] = 1.0;
        e.push_back(std::move(b));
    }
    // Coordinates: first n are (e_r, 0), last n are (0, e_r).
    auto psi = [&](int a) -> const HermiteSeries& { return a < n ? e[static_cast<std::size_t>(a)] : zero; };
    auto pi = [&](int a) -> const HermiteSeries& { return a < n ? zero : e[static_cast<std::size_t>(a - n)]; };
    Eigen::MatrixXd g(2 * n, 2 * n);
    for (int a = 0; a < 2 * n; ++a)
        for (int b = 0; b < 2 * n; ++b) g(a, b) = symplectic_form(psi(a), pi(a), psi(b), pi(b));
    Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
    return {static_cast<int>(lu.rank()), 2 * n};
}

} // namespace bms
