#pragma once

#include <utility>
#include <vector>

#include "bmsfield/chaos_basis.hpp"
#include "bmsfield/metric.hpp"
#include "bmsfield/whitenoise.hpp"

namespace bms {

/// Point of the tangent space: field, velocity (standing for D_{e_0} psi),
/// multipliers and multiplier velocities.
struct FieldState {
    HermiteSeries psi;
    HermiteSeries v;
    std::vector<HermiteSeries> lambdas;
    std::vector<HermiteSeries> lambda_vs;
};

struct CotangentPoint {
    HermiteSeries psi;
    HermiteSeries pi;
    std::vector<HermiteSeries> lambdas;
};

/// Slots carrying a multiplier: every l = 2 direction.
std::vector<int> multiplier_slots(const DirectionSet& dirs);
/// Slots with l > 1.
std::vector<int> st_slots(const DirectionSet& dirs);

/// Q_{e_i} psi for every ST slot i (computed without truncation).
std::vector<std::pair<int, HermiteSeries>> constraint_residuals(const HermiteSeries& psi);

/// max_i ||D_{e_i} psi|| over ST slots. This is the residual pairing
/// sup_phi |<(Q_i - D*_i) psi, phi>|/||phi|| and vanishes iff psi only depends on
/// the translation slots.
double constraint_pairing_defect(const HermiteSeries& psi);

/// eta^{mu mu} Q_mu Q_mu psi - m2 psi, degree raised by 2 (grow) or checked (strict).
HermiteSeries kg_apply(const HermiteSeries& psi, double m2, const Metric& eta,
                       DegreePolicy policy = DegreePolicy::strict);

/// (Q_{e_i} - 2 D_{e_i}) psi = (D*_i - D_i) psi.
HermiteSeries qd_apply(int slot, const HermiteSeries& psi, DegreePolicy policy = DegreePolicy::strict);

/// eta^{mu mu} qd_mu qd_mu psi - m2 psi.
HermiteSeries eom_dyn2(const HermiteSeries& psi, double m2, const Metric& eta,
                       DegreePolicy policy = DegreePolicy::strict);

/// 1/2 <[eta qd qd + m2] psi, psi> = -1/2 sum_mu eta_mu ||qd_mu psi||^2 + 1/2 m2 ||psi||^2.
double lagrangian_KG(const HermiteSeries& psi, double m2, const Metric& eta);

/// 1/2 sum_i int lambda_i (qd_i psi)^2 dmu over the multiplier slots.
double multiplier_term(const HermiteSeries& psi, const std::vector<HermiteSeries>& lambdas);

/// KG part with v in place of D_{e_0} psi inside qd_0, plus the multiplier term.
double lagrangian_full(const FieldState& s, double m2, const Metric& eta);

struct LagrangianPartials {
    HermiteSeries d_psi; // Gaussian gradient in psi at fixed v
    HermiteSeries d_v;   // Gaussian gradient in v
};
LagrangianPartials lagrangian_partials(const FieldState& s, double m2, const Metric& eta);

/// d_psi L + D*_{e_0} d_v L: the Gaussian gradient of psi -> L(psi, D_{e_0} psi, lambda).
HermiteSeries euler_lagrange_gradient(const FieldState& s, double m2, const Metric& eta);

/// max |W M - (W M)^T| with W = diag(n!) the Gram matrix of the basis.
double vainberg_symmetry_defect(const SparseReal& m, const ChaosBasis& basis);
double vainberg_symmetry_defect(const Eigen::MatrixXd& m, const ChaosBasis& basis);

/// Galerkin matrices on the cap-truncated basis (products formed on cap + 2, then restricted).
SparseReal wave_matrix_qd(const Metric& eta, int K, int cap);
SparseReal wave_matrix_QQ(const Metric& eta, int K, int cap);
SparseReal wave_matrix_DD(const Metric& eta, int K, int cap);

/// (psi, 4 v - 2 Q_{e_0} psi, lambda); multiplier velocities are forgotten.
CotangentPoint fiber_derivative(const FieldState& s);

/// <v, Pi> - L with Pi from fiber_derivative.
double energy(const FieldState& s, double m2, const Metric& eta);

/// Energy written on the cotangent side. Inverting Pi = 4v - 2 Q_0 psi gives
/// v = Pi/4 + Q_0 psi / 2, and
///   H = (1/4 + eta_0/8) ||Pi||^2 + 1/2 <Q_0 psi, Pi> + 1/2 sum_k eta_k ||qd_k psi||^2
///       - 1/2 m2 ||psi||^2 - multiplier_term.
double hamiltonian(const CotangentPoint& pt, double m2, const Metric& eta);

/// <Pi_2, psi_1> - <Pi_1, psi_2>.
double symplectic_form(const HermiteSeries& psi1, const HermiteSeries& pi1, const HermiteSeries& psi2,
                       const HermiteSeries& pi2);

/// Rank and dimension of the Gram matrix of the symplectic form on (psi, Pi) pairs.
std::pair<int, int> symplectic_rank(const DirectionSet& dirs, int cap);

} // namespace bms
