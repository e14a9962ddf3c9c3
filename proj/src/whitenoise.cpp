#include "bmsfield/whitenoise.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include "bmsfield/errors.hpp"

namespace bms {

namespace {

constexpr std::int64_t kChunk = 65536;

std::vector<double> factorials(int n) {
    std::vector<double> f(static_cast<std::size_t>(n + 1), 1.0);
    for (int i = 1; i <= n; ++i) f[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>(i - 1)] * i;
    return f;
}

cplx ipow(cplx z, int n) {
    cplx r = 1.0;
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}

bool top_degree_occupied(const HermiteSeries& psi) { return psi.degree() == psi.cap(); }

// Applies sum_i gamma_i (a D_i + b D*_i) with a, b in {0, 1}.
HermiteSeries ladder(const std::vector<double>& gamma, bool lower, bool raise, const HermiteSeries& psi,
                     DegreePolicy policy) {
    bool any = false;
    for (double g : gamma) any = any || g != 0.0;
    HermiteSeries src = psi;
    if (raise && any && top_degree_occupied(psi)) {
        if (policy == DegreePolicy::strict)
            throw DegreeCapError("operator raises degree above the cap N = " + std::to_string(psi.cap()));
        src = psi.truncated(psi.cap() + 1);
    }
    HermiteSeries out(src.directions(), src.cap());
    const ChaosBasis& b = src.basis();
    const auto& c = src.coeffs();
    auto& o = out.coeffs();
    for (int r = 0; r < b.size(); ++r) {
        const cplx v = c[r];
        if (v == cplx(0.0)) continue;
        const auto ix = b.index(r);
        for (int i = 0; i < b.K(); ++i) {
            const double g = gamma[static_cast<std::size_t>(i)];
            if (g == 0.0) continue;
            if (lower && ix[static_cast<std::size_t>(i)] > 0) o[b.lowered(r, i)] += g * ix[static_cast<std::size_t>(i)] * v;
            if (raise) o[b.raised(r, i)] += g * v;
        }
    }
    return out;
}

std::vector<double> unit_gamma(int K, int slot) {
    if (slot < 0 || slot >= K) throw InputShapeError("direction slot " + std::to_string(slot) + " out of range");
    std::vector<double> g(static_cast<std::size_t>(K), 0.0);
    g[static_cast<std::size_t>(slot)] = 1.0;
    return g;
}

// Calls f(target multi-index rank, coefficient) for every term of G_{a,b} He_n.
template <class F>
void fg_terms(const ChaosBasis& basis, int r, cplx cfac, cplx b, const std::vector<double>& fact, F&& f) {
    const int K = basis.K();
    const auto n = basis.index(r);
    std::vector<int> m(static_cast<std::size_t>(K));
    auto rec = [&](auto&& self, int slot, cplx acc) -> void {
        if (slot == K) {
            f(basis.rank(m), acc);
            return;
        }
        const int ni = n[static_cast<std::size_t>(slot)];
        for (int mi = ni; mi >= 0; mi -= 2) {
            const int j = (ni - mi) / 2;
            if (j > 0 && cfac == cplx(0.0)) break;
            const double comb = fact[static_cast<std::size_t>(ni)] /
                                (fact[static_cast<std::size_t>(mi)] * fact[static_cast<std::size_t>(j)]);
            m[static_cast<std::size_t>(slot)] = mi;
            self(self, slot + 1, acc * comb * ipow(cfac, j) * ipow(b, mi));
        }
    };
    rec(rec, 0, cplx(1.0));
}

} // namespace

cplx gaussian_inner_complex(const HermiteSeries& psi, const HermiteSeries& phi) {
    psi.require_compatible(phi);
    const ChaosBasis& b = psi.basis();
    cplx s = 0.0;
    for (int r = 0; r < b.size(); ++r) s += std::conj(psi.coeffs()[r]) * phi.coeffs()[r] * b.weight(r);
    return s;
}

double gaussian_inner(const HermiteSeries& psi, const HermiteSeries& phi) {
    return gaussian_inner_complex(psi, phi).real();
}

double gaussian_norm(const HermiteSeries& psi) { return std::sqrt(gaussian_inner(psi, psi)); }

cplx eval_at_coords(const HermiteSeries& psi, std::span<const double> p) {
    const int K = psi.K();
    if (static_cast<int>(p.size()) != K) throw InputShapeError("coordinate count does not match direction count");
    const int N = psi.cap();
    std::vector<double> he(static_cast<std::size_t>(K * (N + 1)));
    for (int i = 0; i < K; ++i) {
        double* h = he.data() + static_cast<std::ptrdiff_t>(i * (N + 1));
        const double x = p[static_cast<std::size_t>(i)];
        h[0] = 1.0;
        if (N >= 1) h[1] = x;
        for (int n = 1; n < N; ++n) h[n + 1] = x * h[n] - n * h[n - 1];
    }
    const ChaosBasis& b = psi.basis();
    cplx s = 0.0;
    for (int r = 0; r < b.size(); ++r) {
        const cplx c = psi.coeffs()[r];
        if (c == cplx(0.0)) continue;
        const auto ix = b.index(r);
        double prod = 1.0;
        for (int i = 0; i < K; ++i) prod *= he[static_cast<std::size_t>(i * (N + 1) + ix[static_cast<std::size_t>(i)])];
        s += c * prod;
    }
    return s;
}

std::vector<double> direction_coords(const DirectionSet& dirs, const Supermomentum& beta) {
    std::vector<double> p(static_cast<std::size_t>(dirs.size()), 0.0);
    for (int i = 0; i < dirs.size(); ++i) {
        const auto [l, m] = dirs.lm(i);
        if (l <= beta.lmax()) p[static_cast<std::size_t>(i)] = beta.at(l, m);
    }
    return p;
}

cplx eval_at_sample(const HermiteSeries& psi, const Supermomentum& beta) {
    return eval_at_coords(psi, direction_coords(psi.directions(), beta));
}

HermiteSeries q_slot(int slot, const HermiteSeries& psi, DegreePolicy policy) {
    return ladder(unit_gamma(psi.K(), slot), true, true, psi, policy);
}

HermiteSeries d_slot(int slot, const HermiteSeries& psi) {
    return ladder(unit_gamma(psi.K(), slot), true, false, psi, DegreePolicy::strict);
}

HermiteSeries dstar_slot(int slot, const HermiteSeries& psi, DegreePolicy policy) {
    return ladder(unit_gamma(psi.K(), slot), false, true, psi, policy);
}

HermiteSeries multiply_Q(const SphereFunction& alpha, const HermiteSeries& psi, DegreePolicy policy) {
    return ladder(psi.directions().decompose(alpha), true, true, psi, policy);
}

HermiteSeries gateaux_D(const SphereFunction& alpha, const HermiteSeries& psi) {
    return ladder(psi.directions().decompose(alpha), true, false, psi, DegreePolicy::strict);
}

HermiteSeries adjoint_Dstar(const SphereFunction& alpha, const HermiteSeries& psi, DegreePolicy policy) {
    return ladder(psi.directions().decompose(alpha), false, true, psi, policy);
}

HermiteSeries hermite_product(const HermiteSeries& a_in, const HermiteSeries& b_in) {
    if (!(a_in.directions() == b_in.directions())) throw InputShapeError("Hermite series use different direction sets");
    // Iterate over the support of the lower-degree factor only; ranks agree across caps,
    // so targets are reached by walking the ladder links of the output basis.
    const bool swap = a_in.degree() > b_in.degree();
    const HermiteSeries& a = swap ? b_in : a_in;
    const HermiteSeries& b = swap ? a_in : b_in;
    const int cap = std::max({a.degree() + b.degree(), a.cap(), b.cap()});
    HermiteSeries out(a.directions(), cap);
    const ChaosBasis& ba = a.basis();
    const ChaosBasis& bb = b.basis();
    const ChaosBasis& bo = out.basis();
    const std::vector<double> fact = factorials(cap + 1);
    // lin[p][q][k] = C(p,k) C(q,k) k!
    const auto width = static_cast<std::size_t>(cap + 1);
    std::vector<double> lin(width * width * width, 0.0);
    for (int pp = 0; pp <= cap; ++pp)
        for (int qq = 0; qq <= cap; ++qq)
            for (int k = 0; k <= std::min(pp, qq); ++k)
                lin[(static_cast<std::size_t>(pp) * width + static_cast<std::size_t>(qq)) * width + static_cast<std::size_t>(k)] =
                    fact[static_cast<std::size_t>(pp)] * fact[static_cast<std::size_t>(qq)] /
                    (fact[static_cast<std::size_t>(k)] * fact[static_cast<std::size_t>(pp - k)] *
                     fact[static_cast<std::size_t>(qq - k)]);
    const bool real = a.is_real() && b.is_real();
    Eigen::VectorXd acc_real = Eigen::VectorXd::Zero(real ? bo.size() : 0);
    std::vector<std::pair<int, int>> support;
    for (int ra = 0; ra < ba.size(); ++ra) {
        const cplx ca = a.coeffs()[ra];
        if (ca == cplx(0.0)) continue;
        const auto p = ba.index(ra);
        support.clear();
        for (int i = 0; i < ba.K(); ++i)
            if (p[static_cast<std::size_t>(i)] > 0) support.emplace_back(i, p[static_cast<std::size_t>(i)]);
        for (int rb = 0; rb < bb.size(); ++rb) {
            const cplx cb = b.coeffs()[rb];
            if (cb == cplx(0.0)) continue;
            const auto q = bb.index(rb);
            // He_p He_q = sum_k C(p,k) C(q,k) k! He_{p+q-2k}: lower k times, raise p-k times.
            const double cr = real ? ca.real() * cb.real() : 0.0;
            auto rec = [&](auto&& self, std::size_t j, int rank, double acc) -> void {
                if (j == support.size()) {
                    if (real) acc_real[rank] += cr * acc;
                    else out.coeffs()[rank] += ca * cb * acc;
                    return;
                }
                const auto [slot, pi] = support[j];
                const int qi = q[static_cast<std::size_t>(slot)];
                int lowered = rank;
                for (int k = 0; k <= std::min(pi, qi); ++k) {
                    if (k > 0) lowered = bo.lowered(lowered, slot);
                    int target = lowered;
                    for (int u = 0; u < pi - k; ++u) target = bo.raised(target, slot);
                    self(self, j + 1, target,
                         acc * lin[(static_cast<std::size_t>(pi) * width + static_cast<std::size_t>(qi)) * width + static_cast<std::size_t>(k)]);
                }
            };
            rec(rec, 0, rb, 1.0);
        }
    }
    if (real) out.coeffs().real() = acc_real;
    return out;
}

SparseReal multiplication_matrix(const HermiteSeries& lambda, int in_cap) {
    if (!lambda.is_real()) throw InputShapeError("multiplication_matrix needs a real multiplier");
    const int K = lambda.K();
    const int out_cap = in_cap + std::max(0, lambda.degree());
    const auto bin = ChaosBasis::get(K, in_cap);
    const auto bo = ChaosBasis::get(K, std::max(out_cap, lambda.cap()));
    const ChaosBasis& bl = lambda.basis();
    const std::vector<double> fact = factorials(bo->cap() + 1);
    std::vector<Eigen::Triplet<double>> trip;
    std::vector<std::pair<int, int>> support;
    for (int ra = 0; ra < bl.size(); ++ra) {
        const double ca = lambda.coeffs()[ra].real();
        if (ca == 0.0) continue;
        const auto p = bl.index(ra);
        support.clear();
        for (int i = 0; i < K; ++i)
            if (p[static_cast<std::size_t>(i)] > 0) support.emplace_back(i, p[static_cast<std::size_t>(i)]);
        for (int rb = 0; rb < bin->size(); ++rb) {
            const auto q = bin->index(rb);
            auto rec = [&](auto&& self, std::size_t j, int rank, double acc) -> void {
                if (j == support.size()) {
                    trip.emplace_back(rank, rb, acc);
                    return;
                }
                const auto [slot, pi] = support[j];
                const int qi = q[static_cast<std::size_t>(slot)];
                int lowered = rank;
                for (int k = 0; k <= std::min(pi, qi); ++k) {
                    if (k > 0) lowered = bo->lowered(lowered, slot);
                    int target = lowered;
                    for (int u = 0; u < pi - k; ++u) target = bo->raised(target, slot);
                    const double lin = fact[static_cast<std::size_t>(pi)] * fact[static_cast<std::size_t>(qi)] /
                                       (fact[static_cast<std::size_t>(k)] * fact[static_cast<std::size_t>(pi - k)] *
                                        fact[static_cast<std::size_t>(qi - k)]);
                    self(self, j + 1, target, acc * lin);
                }
            };
            rec(rec, 0, rb, ca);
        }
    }
    SparseReal m(ChaosBasis::get(K, out_cap)->size(), bin->size());
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

double gamma_A_norm(const HermiteSeries& psi, int p) {
    const ChaosBasis& b = psi.basis();
    const DirectionSet& d = psi.directions();
    std::vector<double> logl(static_cast<std::size_t>(d.size()));
    for (int i = 0; i < d.size(); ++i) logl[static_cast<std::size_t>(i)] = std::log(d.eigenvalue(i));
    double s = 0.0;
    for (int r = 0; r < b.size(); ++r) {
        const double c2 = std::norm(psi.coeffs()[r]);
        if (c2 == 0.0) continue;
        const auto ix = b.index(r);
        double e = 0.0;
        for (int i = 0; i < b.K(); ++i) e += ix[static_cast<std::size_t>(i)] * logl[static_cast<std::size_t>(i)];
        s += c2 * b.weight(r) * std::exp(2.0 * p * e);
    }
    return std::sqrt(s);
}

HermiteSeries project_Pi_V(const HermiteSeries& psi, std::span<const int> V) {
    std::vector<bool> keep(static_cast<std::size_t>(psi.K()), false);
    for (int v : V) {
        if (v < 0 || v >= psi.K()) throw InputShapeError("projection slot " + std::to_string(v) + " out of range");
        keep[static_cast<std::size_t>(v)] = true;
    }
    HermiteSeries out = psi;
    const ChaosBasis& b = psi.basis();
    for (int r = 0; r < b.size(); ++r) {
        const auto ix = b.index(r);
        for (int i = 0; i < b.K(); ++i)
            if (ix[static_cast<std::size_t>(i)] > 0 && !keep[static_cast<std::size_t>(i)]) {
                out.coeffs()[r] = 0.0;
                break;
            }
    }
    return out;
}

std::vector<int> translation_slots() { return {0, 1, 2, 3}; }

cplx MonomialSeries::operator()(std::span<const double> xi) const {
    const auto basis = ChaosBasis::get(dirs.size(), cap);
    if (static_cast<int>(xi.size()) != basis->K()) throw InputShapeError("xi length does not match direction count");
    cplx s = 0.0;
    for (int r = 0; r < basis->size(); ++r) {
        const cplx c = coeffs[r];
        if (c == cplx(0.0)) continue;
        const auto ix = basis->index(r);
        double prod = 1.0;
        for (int i = 0; i < basis->K(); ++i) prod *= std::pow(xi[static_cast<std::size_t>(i)], ix[static_cast<std::size_t>(i)]);
        s += c * prod;
    }
    return s;
}

MonomialSeries s_transform(const HermiteSeries& psi) { return {psi.directions(), psi.cap(), psi.coeffs()}; }

HermiteSeries s_inverse(const MonomialSeries& poly) { return {poly.dirs, poly.cap, poly.coeffs}; }

FourierResult fourier_F(const HermiteSeries& psi, int out_cap) {
    if (out_cap < 0) throw DegreeCapError("out_cap must be non-negative");
    const int wide = out_cap + 2;
    const MonomialSeries poly = s_transform(psi);
    const ChaosBasis& in = psi.basis();
    const auto outb = ChaosBasis::get(psi.K(), wide);
    // exp(-xi^2/2) = prod_i sum_j (-1/2)^j / j! xi_i^{2j}: iterate over even multi-indices 2j.
    std::vector<int> gauss_ranks;
    std::vector<double> gauss_coef;
    const std::vector<double> fact = factorials(wide);
    for (int r = 0; r < outb->size(); ++r) {
        const auto ix = outb->index(r);
        bool even = true;
        double c = 1.0;
        for (int i = 0; i < outb->K() && even; ++i) {
            const int n = ix[static_cast<std::size_t>(i)];
            if (n % 2) even = false;
            else c *= std::pow(-0.5, n / 2) / fact[static_cast<std::size_t>(n / 2)];
        }
        if (even) {
            gauss_ranks.push_back(r);
            gauss_coef.push_back(c);
        }
    }
    HermiteSeries wide_out(psi.directions(), wide);
    auto& o = wide_out.coeffs();
    std::vector<int> m(static_cast<std::size_t>(psi.K()));
    const cplx mi(0.0, -1.0);
    for (int r = 0; r < in.size(); ++r) {
        const cplx c = poly.coeffs[r];
        if (c == cplx(0.0) || in.degree(r) > wide) continue;
        const cplx cr = c * ipow(mi, in.degree(r));
        const auto ix = in.index(r);
        for (std::size_t g = 0; g < gauss_ranks.size(); ++g) {
            const int gr = gauss_ranks[g];
            if (in.degree(r) + outb->degree(gr) > wide) break;
            const auto jx = outb->index(gr);
            for (int i = 0; i < psi.K(); ++i)
                m[static_cast<std::size_t>(i)] = ix[static_cast<std::size_t>(i)] + jx[static_cast<std::size_t>(i)];
            o[outb->rank(m)] += cr * gauss_coef[g];
        }
    }
    FourierResult res{wide_out.truncated(out_cap), 0.0};
    HermiteSeries tail = wide_out;
    tail.coeffs().head(outb->size_up_to(out_cap)).setZero();
    res.tail_norm = gamma_A_norm(tail, -1);
    return res;
}

HermiteSeries fourier_gauss(cplx a, cplx b, const HermiteSeries& psi) {
    if (a == cplx(0.0) || b == cplx(0.0)) throw DomainError("Fourier-Gauss parameters must be nonzero");
    const cplx cfac = (a * a + b * b - 1.0) / 2.0;
    const ChaosBasis& basis = psi.basis();
    const std::vector<double> fact = factorials(psi.cap());
    HermiteSeries out(psi.directions(), psi.cap());
    for (int r = 0; r < basis.size(); ++r) {
        const cplx c = psi.coeffs()[r];
        if (c == cplx(0.0)) continue;
        fg_terms(basis, r, cfac, b, fact, [&](int target, cplx v) { out.coeffs()[target] += c * v; });
    }
    return out;
}

CharacteristicEstimate characteristic_functional(const SphereFunction& alpha, std::int64_t n_samples,
                                                 std::uint64_t seed) {
    if (n_samples < 1) throw DomainError("characteristic_functional needs at least one sample");
    std::vector<double> comps;
    double norm2 = 0.0;
    for (double v : alpha.coeffs()) {
        norm2 += v * v;
        if (v != 0.0) comps.push_back(v);
    }
    CharacteristicEstimate est;
    est.exact = std::exp(-0.5 * norm2);

    const std::int64_t chunks = (n_samples + kChunk - 1) / kChunk;
    std::vector<cplx> partial(static_cast<std::size_t>(chunks));
    auto run_chunk = [&](std::int64_t ch) {
        std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(ch)};
        std::mt19937_64 rng(ss);
        std::normal_distribution<double> g(0.0, 1.0);
        const std::int64_t begin = ch * kChunk;
        const std::int64_t end = std::min(n_samples, begin + kChunk);
        double sc = 0.0, ss_ = 0.0;
        for (std::int64_t s = begin; s < end; ++s) {
            double x = 0.0;
            for (double c : comps) x += g(rng) * c;
            sc += std::cos(x);
            ss_ += std::sin(x);
        }
        partial[static_cast<std::size_t>(ch)] = {sc, ss_};
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const auto workers = static_cast<std::int64_t>(std::min<std::int64_t>(hw, chunks));
    if (workers <= 1) {
        for (std::int64_t ch = 0; ch < chunks; ++ch) run_chunk(ch);
    } else {
        std::vector<std::thread> pool;
        for (std::int64_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::int64_t ch = w; ch < chunks; ch += workers) run_chunk(ch);
            });
        for (auto& t : pool) t.join();
    }
    cplx total = 0.0;
    for (const cplx& p : partial) total += p;
    est.mc = total / static_cast<double>(n_samples);
    return est;
}

SparseReal elementary_matrix(Elementary op, int slot, int K, int cap) {
    const auto basis = ChaosBasis::get(K, cap);
    if (slot < 0 || slot >= K) throw InputShapeError("direction slot out of range");
    std::vector<Eigen::Triplet<double>> t;
    for (int r = 0; r < basis->size(); ++r) {
        const int n = basis->index(r)[static_cast<std::size_t>(slot)];
        if (op != Elementary::Dstar && n > 0) t.emplace_back(basis->lowered(r, slot), r, static_cast<double>(n));
        if (op != Elementary::D && basis->raised(r, slot) >= 0) t.emplace_back(basis->raised(r, slot), r, 1.0);
    }
    SparseReal m(basis->size(), basis->size());
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

SparseComplex fourier_gauss_matrix(cplx a, cplx b, int K, int cap) {
    if (a == cplx(0.0) || b == cplx(0.0)) throw DomainError("Fourier-Gauss parameters must be nonzero");
    const auto basis = ChaosBasis::get(K, cap);
    const cplx cfac = (a * a + b * b - 1.0) / 2.0;
    const std::vector<double> fact = factorials(cap);
    std::vector<Eigen::Triplet<cplx>> t;
    for (int r = 0; r < basis->size(); ++r)
        fg_terms(*basis, r, cfac, b, fact, [&](int target, cplx v) { t.emplace_back(target, r, v); });
    SparseComplex m(basis->size(), basis->size());
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

} // namespace bms
