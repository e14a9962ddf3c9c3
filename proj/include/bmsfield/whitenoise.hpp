#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "bmsfield/chaos_basis.hpp"
#include "bmsfield/sphere.hpp"

namespace bms {

using SparseReal = Eigen::SparseMatrix<double>;
using SparseComplex = Eigen::SparseMatrix<cplx>;

/// Re sum_n conj(c_n) d_n n!; for real series this is the Gaussian L2 inner product.
double gaussian_inner(const HermiteSeries& psi, const HermiteSeries& phi);
cplx gaussian_inner_complex(const HermiteSeries& psi, const HermiteSeries& phi);
double gaussian_norm(const HermiteSeries& psi);

/// psi evaluated at direction coordinates p_i = (beta, e_i).
cplx eval_at_coords(const HermiteSeries& psi, std::span<const double> p);
cplx eval_at_sample(const HermiteSeries& psi, const Supermomentum& beta);
/// p_i = (beta, e_i); harmonics above beta's truncation pair to zero.
std::vector<double> direction_coords(const DirectionSet& dirs, const Supermomentum& beta);

/// Single-direction building blocks.
HermiteSeries q_slot(int slot, const HermiteSeries& psi, DegreePolicy policy = DegreePolicy::strict);
HermiteSeries d_slot(int slot, const HermiteSeries& psi);
HermiteSeries dstar_slot(int slot, const HermiteSeries& psi, DegreePolicy policy = DegreePolicy::strict);

/// Multiplication by (beta, alpha); alpha must lie in the span of the directions.
HermiteSeries multiply_Q(const SphereFunction& alpha, const HermiteSeries& psi,
                         DegreePolicy policy = DegreePolicy::strict);
/// Directional derivative along alpha (annihilation).
HermiteSeries gateaux_D(const SphereFunction& alpha, const HermiteSeries& psi);
/// Adjoint of gateaux_D under the Gaussian inner product (creation).
HermiteSeries adjoint_Dstar(const SphereFunction& alpha, const HermiteSeries& psi,
                            DegreePolicy policy = DegreePolicy::strict);

/// Pointwise product, linearized exactly with He_p He_q = sum_k C(p,k) C(q,k) k! He_{p+q-2k}.
/// The result has cap a.degree() + b.degree() (at least the larger input cap).
HermiteSeries hermite_product(const HermiteSeries& a, const HermiteSeries& b);

/// Matrix of u -> lambda u from the cap-in_cap basis to the cap (in_cap + deg lambda) basis,
/// with the same linearization as hermite_product. lambda must be real.
SparseReal multiplication_matrix(const HermiteSeries& lambda, int in_cap);

/// ||Gamma(A)^p psi||: weights prod_i lambda_i^{2 p n_i}; p may be negative.
double gamma_A_norm(const HermiteSeries& psi, int p);

/// Second quantization of the coordinate projection onto the slots in V.
HermiteSeries project_Pi_V(const HermiteSeries& psi, std::span<const int> V);
std::vector<int> translation_slots();

/// Polynomial in xi with one coefficient per multi-index (monomial basis).
struct MonomialSeries {
    DirectionSet dirs;
    int cap = 0;
    Eigen::VectorXcd coeffs;

    cplx operator()(std::span<const double> xi) const;
};

/// He_n -> xi^n coefficientwise.
MonomialSeries s_transform(const HermiteSeries& psi);
HermiteSeries s_inverse(const MonomialSeries& poly);

struct FourierResult {
    HermiteSeries series;
    /// Gamma(A)^{-1} norm of the terms of degree out_cap+1 and out_cap+2 that were dropped.
    double tail_norm = 0.0;
};

/// S-polynomial P(xi) -> P(-i xi) exp(-|xi|^2 / 2), truncated at out_cap.
FourierResult fourier_F(const HermiteSeries& psi, int out_cap);

/// G_{a,b} He_n = sum_{m + 2j = n} n!/(m! j!) ((a^2+b^2-1)/2)^j b^m He_m in every slot.
HermiteSeries fourier_gauss(cplx a, cplx b, const HermiteSeries& psi);

struct CharacteristicEstimate {
    double exact = 1.0;
    cplx mc{1.0, 0.0};
};

/// exp(-||alpha||^2 / 2) and a Monte Carlo mean of exp(i (beta, alpha)) over beta
/// with independent standard Gaussian coordinates. Samples are drawn in chunks
/// with per-chunk seeds and reduced in chunk order.
CharacteristicEstimate characteristic_functional(const SphereFunction& alpha, std::int64_t n_samples,
                                                 std::uint64_t seed);

enum class Elementary { Q, D, Dstar };

/// Matrix of a slot operator on the cap-truncated basis; terms raised above the
/// cap are dropped (Galerkin truncation).
SparseReal elementary_matrix(Elementary op, int slot, int K, int cap);
SparseComplex fourier_gauss_matrix(cplx a, cplx b, int K, int cap);
/// Top-left block restricted to multi-indices of degree <= d.
template <class M>
M restrict_degree(const M& m, const ChaosBasis& basis, int d) {
    const int n = basis.size_up_to(d);
    return m.topLeftCorner(n, n);
}

} // namespace bms
