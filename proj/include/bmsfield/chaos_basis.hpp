#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bmsfield/sphere.hpp"

namespace bms {

using cplx = std::complex<double>;

/// Ordered single-harmonic directions e_i = Y_{l_i m_i}. The first four are
/// always the translation harmonics Y_00, Y_1-1, Y_10, Y_11.
class DirectionSet {
public:
    DirectionSet() : DirectionSet(std::vector<std::pair<int, int>>{}, 2.0) {}
    /// `extra` lists directions appended after the four translations; each must have l > 1
    /// and appear once. k is the shift in A = L^2 + k.
    DirectionSet(std::vector<std::pair<int, int>> extra, double k);

    /// Four translations plus every l = 2 harmonic.
    static DirectionSet standard(double k = 2.0);
    static DirectionSet translations_only(double k = 2.0) { return {{}, k}; }

    int size() const { return static_cast<int>(lm_.size()); }
    std::pair<int, int> lm(int i) const { return lm_[static_cast<std::size_t>(i)]; }
    const std::vector<std::pair<int, int>>& all() const { return lm_; }
    double k() const { return k_; }
    double eigenvalue(int i) const { return a_eigenvalue(lm_[static_cast<std::size_t>(i)].first, k_); }
    bool is_translation(int i) const { return i < 4; }
    int max_l() const;
    /// Slot of Y_lm, or -1.
    int slot_of(int l, int m) const;

    /// Coordinates of alpha along the directions. Throws UnsupportedDirectionError
    /// when alpha has a component outside their span (relative tolerance 1e-12).
    std::vector<double> decompose(const SphereFunction& alpha) const;

    friend bool operator==(const DirectionSet& a, const DirectionSet& b) { return a.lm_ == b.lm_ && a.k_ == b.k_; }

private:
    std::vector<std::pair<int, int>> lm_;
    double k_;
};

/// Multi-indices n in N^K with |n| <= cap, in graded order (degree first).
/// The basis for cap N is a prefix of the basis for any larger cap, so
/// truncating an operator to a lower cap is taking its top-left block.
class ChaosBasis {
public:
    /// Shared, cached instance.
    static std::shared_ptr<const ChaosBasis> get(int K, int cap);

    ChaosBasis(int K, int cap);

    int K() const { return K_; }
    int cap() const { return cap_; }
    int size() const { return static_cast<int>(degree_.size()); }
    /// Number of multi-indices with |n| <= d (d may be below cap).
    int size_up_to(int d) const;

    std::span<const std::uint8_t> index(int r) const {
        return {idx_.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(K_), static_cast<std::size_t>(K_)};
    }
    int degree(int r) const { return degree_[static_cast<std::size_t>(r)]; }
    /// rank of n + e_i (-1 beyond the cap) and of n - e_i (-1 if n_i = 0).
    int raised(int r, int i) const { return up_[static_cast<std::size_t>(r * K_ + i)]; }
    int lowered(int r, int i) const { return down_[static_cast<std::size_t>(r * K_ + i)]; }
    /// rank of an arbitrary multi-index, -1 if out of range.
    int rank(std::span<const int> n) const;
    /// prod_i n_i!, the Gaussian norm of the basis product.
    double weight(int r) const { return weight_[static_cast<std::size_t>(r)]; }

private:
    int K_;
    int cap_;
    std::vector<std::uint8_t> idx_;
    std::vector<int> degree_;
    std::vector<int> up_;
    std::vector<int> down_;
    std::vector<double> weight_;
    std::vector<int> degree_end_;
};

enum class DegreePolicy { strict, grow };

/// Finite Hermite chaos expansion psi(beta) = sum_n c_n prod_i He_{n_i}((beta, e_i)).
class HermiteSeries {
public:
    HermiteSeries() : HermiteSeries(DirectionSet{}, 0) {}
    HermiteSeries(DirectionSet dirs, int cap);
    HermiteSeries(DirectionSet dirs, int cap, Eigen::VectorXcd coeffs);

    /// c * prod He_{n_i} for a single multi-index.
    static HermiteSeries monomial(const DirectionSet& dirs, int cap, std::span<const int> n, cplx c = 1.0);
    /// He_n in one slot.
    static HermiteSeries single(const DirectionSet& dirs, int cap, int slot, int n, cplx c = 1.0);
    static HermiteSeries constant(const DirectionSet& dirs, int cap, cplx c = 1.0);

    const DirectionSet& directions() const { return dirs_; }
    int cap() const { return cap_; }
    int K() const { return dirs_.size(); }
    const ChaosBasis& basis() const { return *basis_; }
    std::shared_ptr<const ChaosBasis> basis_ptr() const { return basis_; }

    const Eigen::VectorXcd& coeffs() const { return c_; }
    Eigen::VectorXcd& coeffs() { return c_; }
    cplx coeff(std::span<const int> n) const;
    void set_coeff(std::span<const int> n, cplx v);

    /// Highest degree carrying a nonzero coefficient (-1 for zero).
    int degree() const;
    bool is_real() const { return c_.imag().isZero(0.0); }

    /// Same function at another cap; throws DegreeCapError if nonzero terms would be dropped.
    HermiteSeries recapped(int cap) const;
    /// Drops every term above the cap.
    HermiteSeries truncated(int cap) const;

    HermiteSeries& operator+=(const HermiteSeries& o);
    HermiteSeries& operator-=(const HermiteSeries& o);
    HermiteSeries& operator*=(cplx s);
    friend HermiteSeries operator+(HermiteSeries a, const HermiteSeries& b) { return a += b; }
    friend HermiteSeries operator-(HermiteSeries a, const HermiteSeries& b) { return a -= b; }
    friend HermiteSeries operator*(cplx s, HermiteSeries a) { return a *= s; }
    friend HermiteSeries operator*(HermiteSeries a, cplx s) { return a *= s; }

    void require_compatible(const HermiteSeries& o) const;

private:
    DirectionSet dirs_;
    int cap_;
    std::shared_ptr<const ChaosBasis> basis_;
    Eigen::VectorXcd c_;
};

} // namespace bms
