#include "bmsfield/chaos_basis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <unordered_map>

#include "bmsfield/errors.hpp"

namespace bms {

DirectionSet::DirectionSet(std::vector<std::pair<int, int>> extra, double k) : k_(k) {
    if (!(k > 1.0)) throw DomainError("A = L^2 + k requires k > 1, got k = " + std::to_string(k));
    lm_ = {{0, 0}, {1, -1}, {1, 0}, {1, 1}};
    for (const auto& [l, m] : extra) {
        if (l < 2 || m < -l || m > l)
            throw UnsupportedDirectionError("extra direction (" + std::to_string(l) + ", " + std::to_string(m) +
                                            ") must be a harmonic with l > 1");
        if (std::find(lm_.begin(), lm_.end(), std::pair{l, m}) != lm_.end())
            throw UnsupportedDirectionError("direction (" + std::to_string(l) + ", " + std::to_string(m) +
                                            ") listed twice");
        lm_.emplace_back(l, m);
    }
}

DirectionSet DirectionSet::standard(double k) { return {{{2, -2}, {2, -1}, {2, 0}, {2, 1}, {2, 2}}, k}; }

int DirectionSet::max_l() const {
    int l = 0;
    for (const auto& d : lm_) l = std::max(l, d.first);
    return l;
}

int DirectionSet::slot_of(int l, int m) const {
    for (std::size_t i = 0; i < lm_.size(); ++i)
        if (lm_[i] == std::pair{l, m}) return static_cast<int>(i);
    return -1;
}

std::vector<double> DirectionSet::decompose(const SphereFunction& alpha) const {
    std::vector<double> gamma(lm_.size(), 0.0);
    double inside = 0.0, outside = 0.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        const auto [l, m] = harmonic_lm(static_cast<int>(j));
        const double v = alpha[j];
        const int s = slot_of(l, m);
        if (s >= 0) {
            gamma[static_cast<std::size_t>(s)] = v;
            inside += v * v;
        } else {
            outside += v * v;
        }
    }
    if (std::sqrt(outside) > 1e-12 * std::max(1.0, std::sqrt(inside + outside)))
        throw UnsupportedDirectionError("alpha has a component of norm " + std::to_string(std::sqrt(outside)) +
                                        " outside the span of the configured directions");
    return gamma;
}

namespace {

std::string key_of(std::span<const std::uint8_t> n) { return {n.begin(), n.end()}; }

} // namespace

ChaosBasis::ChaosBasis(int K, int cap) : K_(K), cap_(cap) {
    if (K < 1) throw InputShapeError("chaos basis needs at least one direction");
    if (cap < 0 || cap > 200) throw DegreeCapError("degree cap " + std::to_string(cap) + " out of range");
    std::vector<std::uint8_t> cur(static_cast<std::size_t>(K), 0);
    // Compositions of d into K parts, slot 0 descending first.
    auto emit = [&](auto&& self, int slot, int rem, int d) -> void {
        if (slot == K - 1) {
            cur[static_cast<std::size_t>(slot)] = static_cast<std::uint8_t>(rem);
            idx_.insert(idx_.end(), cur.begin(), cur.end());
            degree_.push_back(d);
            return;
        }
        for (int v = rem; v >= 0; --v) {
            cur[static_cast<std::size_t>(slot)] = static_cast<std::uint8_t>(v);
            self(self, slot + 1, rem - v, d);
        }
    };
    for (int d = 0; d <= cap; ++d) {
        emit(emit, 0, d, d);
        degree_end_.push_back(static_cast<int>(degree_.size()));
    }

    const int n = size();
    std::unordered_map<std::string, int> lookup;
    lookup.reserve(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) lookup.emplace(key_of(index(r)), r);

    up_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(K), -1);
    down_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(K), -1);
    weight_.assign(static_cast<std::size_t>(n), 1.0);
    std::vector<std::uint8_t> tmp(static_cast<std::size_t>(K));
    for (int r = 0; r < n; ++r) {
        const auto ix = index(r);
        double w = 1.0;
        for (int i = 0; i < K; ++i)
            for (int j = 2; j <= ix[static_cast<std::size_t>(i)]; ++j) w *= j;
        weight_[static_cast<std::size_t>(r)] = w;
        std::copy(ix.begin(), ix.end(), tmp.begin());
        for (int i = 0; i < K; ++i) {
            auto& t = tmp[static_cast<std::size_t>(i)];
            if (degree(r) < cap) {
                ++t;
                up_[static_cast<std::size_t>(r * K + i)] = lookup.at(key_of(tmp));
                --t;
            }
            if (t > 0) {
                --t;
                down_[static_cast<std::size_t>(r * K + i)] = lookup.at(key_of(tmp));
                ++t;
            }
        }
    }
}

std::shared_ptr<const ChaosBasis> ChaosBasis::get(int K, int cap) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const ChaosBasis>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{K, cap}];
    if (!slot) slot = std::make_shared<const ChaosBasis>(K, cap);
    return slot;
}

int ChaosBasis::size_up_to(int d) const {
    if (d < 0) return 0;
    return degree_end_[static_cast<std::size_t>(std::min(d, cap_))];
}

int ChaosBasis::rank(std::span<const int> n) const {
    if (static_cast<int>(n.size()) != K_) throw InputShapeError("multi-index length does not match direction count");
    // Walk from the constant term along the up-links.
    int r = 0;
    for (int i = 0; i < K_; ++i) {
        if (n[static_cast<std::size_t>(i)] < 0) return -1;
        for (int j = 0; j < n[static_cast<std::size_t>(i)]; ++j) {
            r = raised(r, i);
            if (r < 0) return -1;
        }
    }
    return r;
}

HermiteSeries::HermiteSeries(DirectionSet dirs, int cap)
    : dirs_(std::move(dirs)), cap_(cap), basis_(ChaosBasis::get(dirs_.size(), cap)),
      c_(Eigen::VectorXcd::Zero(basis_->size())) {}

HermiteSeries::HermiteSeries(DirectionSet dirs, int cap, Eigen::VectorXcd coeffs)
    : dirs_(std::move(dirs)), cap_(cap), basis_(ChaosBasis::get(dirs_.size(), cap)), c_(std::move(coeffs)) {
    if (c_.size() != basis_->size())
        throw InputShapeError("Hermite coefficient vector has length " + std::to_string(c_.size()) + ", expected " +
                              std::to_string(basis_->size()));
}

HermiteSeries HermiteSeries::monomial(const DirectionSet& dirs, int cap, std::span<const int> n, cplx c) {
    HermiteSeries s(dirs, cap);
    s.set_coeff(n, c);
    return s;
}

HermiteSeries HermiteSeries::single(const DirectionSet& dirs, int cap, int slot, int n, cplx c) {
    if (slot < 0 || slot >= dirs.size()) throw InputShapeError("direction slot out of range");
    std::vector<int> ix(static_cast<std::size_t>(dirs.size()), 0);
    ix[static_cast<std::size_t>(slot)] = n;
    return monomial(dirs, cap, ix, c);
}

HermiteSeries HermiteSeries::constant(const DirectionSet& dirs, int cap, cplx c) {
    HermiteSeries s(dirs, cap);
    s.c_[0] = c;
    return s;
}

cplx HermiteSeries::coeff(std::span<const int> n) const {
    const int r = basis_->rank(n);
    return r < 0 ? cplx(0.0) : c_[r];
}

void HermiteSeries::set_coeff(std::span<const int> n, cplx v) {
    const int r = basis_->rank(n);
    if (r < 0) throw DegreeCapError("multi-index exceeds degree cap " + std::to_string(cap_));
    c_[r] = v;
}

int HermiteSeries::degree() const {
    for (Eigen::Index r = c_.size() - 1; r >= 0; --r)
        if (c_[r] != cplx(0.0)) return basis_->degree(static_cast<int>(r));
    return -1;
}

HermiteSeries HermiteSeries::recapped(int cap) const {
    if (cap < cap_ && degree() > cap)
        throw DegreeCapError("series has degree " + std::to_string(degree()) + " above requested cap " +
                             std::to_string(cap));
    return truncated(cap);
}

HermiteSeries HermiteSeries::truncated(int cap) const {
    HermiteSeries out(dirs_, cap);
    const Eigen::Index n = std::min(out.c_.size(), c_.size());
    out.c_.head(n) = c_.head(n);
    return out;
}

void HermiteSeries::require_compatible(const HermiteSeries& o) const {
    if (!(dirs_ == o.dirs_)) throw InputShapeError("Hermite series use different direction sets");
    if (cap_ != o.cap_)
        throw InputShapeError("Hermite series caps differ (" + std::to_string(cap_) + " vs " + std::to_string(o.cap_) +
                              ")");
}

HermiteSeries& HermiteSeries::operator+=(const HermiteSeries& o) {
    require_compatible(o);
    c_ += o.c_;
    return *this;
}

HermiteSeries& HermiteSeries::operator-=(const HermiteSeries& o) {
    require_compatible(o);
    c_ -= o.c_;
    return *this;
}

HermiteSeries& HermiteSeries::operator*=(cplx s) {
    c_ *= s;
    return *this;
}

} // namespace bms
