#pragma once

// Fusion eigenvalues χ_λ(μ) = S_{λμ}/S_{0μ} of A_r at level k.
//
// With x_ℓ = ξ_k̄^{-μ(ℓ)} (μ(ℓ) the partition labels of μ),
//   χ_λ(μ) = ξ_N^{t(λ) t(μ+ρ)} s_λ(x_1, ..., x_r̄),   N = r̄ k̄,
// where s_λ is the Schur polynomial of the Young diagram of λ.
//
// Two exact routes:
//  * reference: power sums -> Newton -> Jacobi-Trudi, Bareiss over Q_k̄.
//  * fast: s_λ(x) is evaluated in F_p under all φ(k̄) embeddings of Q_k̄
//    (p = 1 mod k̄), canonical coefficients are recovered by an inverse
//    Vandermonde and lifted. Every canonical coefficient is bounded by
//    dim(λ) * max|x^e mod Φ_k̄|, so enough primes make the lift exact.
// S itself is assembled in floating point as χ * S_{0μ}.

#include <gmpxx.h>

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "verlinde/cyclotomic.hpp"
#include "verlinde/errors.hpp"
#include "verlinde/weight_lattice.hpp"

namespace verlinde {

// ---- shapes ------------------------------------------------------------------

/// Young diagram of λ and its transpose; Jacobi-Trudi picks the smaller one.
struct SchurShape {
    std::vector<int> rows;  // nonzero parts, weakly decreasing
    std::vector<int> cols;  // conjugate partition

    bool use_elementary() const { return cols.size() < rows.size(); }
    int size() const { return static_cast<int>(std::min(rows.size(), cols.size())); }
};

inline SchurShape schur_shape(const Weight& w) {
    SchurShape s;
    s.rows = young_rows(w);
    s.cols = conjugate_partition(s.rows);
    return s;
}

/// Weyl dimension Π_{a<b} (λ(a)-λ(b))/(b-a) of the SL(r̄) module, exactly.
inline mpz_class weyl_dimension(const Weight& w) {
    const auto p = partition_labels(w).values;
    mpz_class num = 1, den = 1;
    for (std::size_t a = 0; a < p.size(); ++a)
        for (std::size_t b = a + 1; b < p.size(); ++b) {
            num *= p[a] - p[b];
            den *= static_cast<long>(b - a);
        }
    mpz_class out;
    mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return out;
}

/// Exponent of the phase of χ_λ(μ) in Q_N: t(λ) t(μ+ρ) mod N.
inline std::int64_t chi_phase(const AlgebraSpec& spec, const Weight& lambda, const Weight& mu) {
    const std::int64_t n = spec.chi_order();
    return nt::mod(nt::mod(ality_raw(lambda), n) * nt::mod(shifted_ality(mu), n), n);
}

// ---- reference route ---------------------------------------------------------

/// P_ℓ[μ] = Σ_i ξ_k̄^{-ℓ μ(i)} in Q_k̄.
inline CycNumber power_sum(const AlgebraSpec& spec, int ell, const Weight& mu) {
    const int kb = spec.kbar();
    std::vector<nt::i64> v(static_cast<std::size_t>(kb), 0);
    for (int m : partition_labels(mu).values) ++v[static_cast<std::size_t>(nt::mod(-static_cast<nt::i64>(ell) * m, kb))];
    return CycNumber::from_integers(kb, v);
}

/// H_0..H_n at x(μ) from power sums: m H_m = Σ_{i=1..m} P_i H_{m-i}.
inline std::vector<CycNumber> complete_homogeneous(const AlgebraSpec& spec, const Weight& mu, int n) {
    const int kb = spec.kbar();
    std::vector<CycNumber> p(static_cast<std::size_t>(n) + 1, CycNumber(kb));
    for (int i = 1; i <= n; ++i) p[i] = power_sum(spec, i, mu);
    std::vector<CycNumber> h(static_cast<std::size_t>(n) + 1, CycNumber(kb));
    h[0] = CycNumber::integer(1, kb);
    for (int m = 1; m <= n; ++m) {
        CycNumber acc(kb);
        for (int i = 1; i <= m; ++i) acc += p[i] * h[m - i];
        h[m] = acc * mpq_class(1, m);
    }
    return h;
}

/// E_0..E_n at x(μ): m E_m = Σ_{i=1..m} (-1)^{i-1} P_i E_{m-i}.
inline std::vector<CycNumber> elementary_symmetric(const AlgebraSpec& spec, const Weight& mu, int n) {
    const int kb = spec.kbar();
    std::vector<CycNumber> p(static_cast<std::size_t>(n) + 1, CycNumber(kb));
    for (int i = 1; i <= n; ++i) p[i] = power_sum(spec, i, mu);
    std::vector<CycNumber> e(static_cast<std::size_t>(n) + 1, CycNumber(kb));
    e[0] = CycNumber::integer(1, kb);
    for (int m = 1; m <= n; ++m) {
        CycNumber acc(kb);
        for (int i = 1; i <= m; ++i) {
            if (i % 2 == 1)
                acc += p[i] * e[m - i];
            else
                acc -= p[i] * e[m - i];
        }
        e[m] = acc * mpq_class(1, m);
    }
    return e;
}

/// Fraction-free (Bareiss) determinant; divisions are exact in the ring of
/// integers of Q_n and carried out in the field.
inline CycNumber bareiss_determinant(std::vector<std::vector<CycNumber>> m, int order) {
    const std::size_t n = m.size();
    if (n == 0) return CycNumber::integer(1, order);
    CycNumber prev = CycNumber::integer(1, order);
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            std::size_t piv = k + 1;
            while (piv < n && m[piv][k].is_zero()) ++piv;
            if (piv == n) return CycNumber(order);
            std::swap(m[k], m[piv]);
            negate = !negate;
        }
        const CycNumber prev_inv = prev.inverse();
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) * prev_inv;
        prev = m[k][k];
    }
    return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

/// s_p(x(μ)) for an arbitrary partition p (row lengths, any length) by the
/// Jacobi-Trudi determinant det(H_{p_i - i + j}). A partition with more than
/// r̄ nonzero rows gives 0.
inline CycNumber schur_value(const AlgebraSpec& spec, const std::vector<int>& rows, const Weight& mu) {
    const int kb = spec.kbar();
    std::vector<int> p = rows;
    while (!p.empty() && p.back() == 0) p.pop_back();
    const int n = static_cast<int>(p.size());
    if (n == 0) return CycNumber::integer(1, kb);
    const int top = p.front() + n - 1;
    const auto h = complete_homogeneous(spec, mu, top);
    std::vector<std::vector<CycNumber>> m(n, std::vector<CycNumber>(n, CycNumber(kb)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int idx = p[i] - i + j;
            if (idx >= 0) m[i][j] = h[idx];
        }
    return bareiss_determinant(std::move(m), kb);
}

inline CycNumber schur_value(const AlgebraSpec& spec, const Weight& lambda, const Weight& mu) {
    return schur_value(spec, young_rows(lambda), mu);
}

/// χ_λ(μ) through the reference route.
inline CycNumber chi_reference(const AlgebraSpec& spec, const Weight& lambda, const Weight& mu) {
    const int n = spec.chi_order();
    return schur_value(spec, lambda, mu).embed(n).times_root_of_unity(chi_phase(spec, lambda, mu));
}

// ---- symmetric functions of the evaluation point --------------------------------

namespace detail {

/// e_j(x), h_j(x) for j < k̄ from whichever of X = {x_ℓ} or its complement B in
/// the k̄-th roots of unity is smaller. Since Π_{ζ^k̄=1}(1+ζt) = 1-(-t)^k̄,
/// e_j(X) = (-1)^j h_j(B) and h_j(X) = (-1)^j e_j(B) for j < k̄.
template <class T, class Mul, class Add, class Neg>
void symmetric_from_set(const std::vector<T>& set, bool complement, int kbar, const T& zero, const T& one, Mul mul,
                        Add add, Neg neg, T* e_out, T* h_out) {
    const int m = static_cast<int>(set.size());
    std::vector<T> e(static_cast<std::size_t>(m) + 1, zero);
    e[0] = one;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j >= 1; --j) e[j] = add(e[j], mul(e[j - 1], set[i]));
    std::vector<T> h(static_cast<std::size_t>(kbar), zero);
    h[0] = one;
    for (int n = 1; n < kbar; ++n) {
        T acc = zero;
        for (int i = 1; i <= std::min(n, m); ++i) {
            const T t = mul(e[i], h[n - i]);
            acc = add(acc, (i % 2 == 1) ? t : neg(t));
        }
        h[n] = acc;
    }
    for (int j = 0; j < kbar; ++j) {
        const T ej = j <= m ? e[j] : zero;
        if (!complement) {
            e_out[j] = ej;
            h_out[j] = h[j];
        } else {
            e_out[j] = (j % 2 == 0) ? h[j] : neg(h[j]);
            h_out[j] = (j % 2 == 0) ? ej : neg(ej);
        }
    }
}

/// Exponents m with x = ξ_k̄^{-m} for the smaller of X and its complement.
inline std::vector<int> evaluation_exponents(const AlgebraSpec& spec, const Weight& mu, bool& complement) {
    const auto labels = partition_labels(mu).values;
    const int kb = spec.kbar();
    complement = spec.k < spec.rbar();
    if (!complement) return labels;
    std::vector<char> in(static_cast<std::size_t>(kb), 0);
    for (int m : labels) in[m] = 1;
    std::vector<int> out;
    for (int m = 0; m < kb; ++m)
        if (!in[m]) out.push_back(m);
    return out;
}

inline nt::u64 det_mod(std::vector<nt::u64>& a, int n, nt::u64 p) {
    nt::u64 det = 1;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        while (piv < n && a[piv * n + c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
            det = det == 0 ? 0 : p - det;
        }
        const nt::u64 d = a[c * n + c];
        det = nt::mulmod(det, d, p);
        const nt::u64 inv = nt::invmod(d, p);
        for (int i = c + 1; i < n; ++i) {
            const nt::u64 f = nt::mulmod(a[i * n + c], inv, p);
            if (f == 0) continue;
            for (int j = c; j < n; ++j) a[i * n + j] = nt::submod(a[i * n + j], nt::mulmod(f, a[c * n + j], p), p);
        }
    }
    return det;
}

inline std::complex<double> det_complex(std::vector<std::complex<double>>& a, int n) {
    std::complex<double> det = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        double best = std::abs(a[c * n + c]);
        for (int i = c + 1; i < n; ++i)
            if (std::abs(a[i * n + c]) > best) {
                best = std::abs(a[i * n + c]);
                piv = i;
            }
        if (best == 0.0) return 0.0;
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
            det = -det;
        }
        const auto d = a[c * n + c];
        det *= d;
        for (int i = c + 1; i < n; ++i) {
            const auto f = a[i * n + c] / d;
            for (int j = c; j < n; ++j) a[i * n + j] -= f * a[c * n + j];
        }
    }
    return det;
}

/// Fill the Jacobi-Trudi matrix of `shape` from e/h sequences.
template <class T>
void fill_jacobi_trudi(const SchurShape& shape, const T* e, const T* h, const T& zero, std::vector<T>& out) {
    const bool dual = shape.use_elementary();
    const auto& parts = dual ? shape.cols : shape.rows;
    const T* seq = dual ? e : h;
    const int n = static_cast<int>(parts.size());
    out.assign(static_cast<std::size_t>(n) * n, zero);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int idx = parts[i] - i + j;
            if (idx >= 0) out[i * n + j] = seq[idx];
        }
}

struct PrimeContext {
    nt::u64 p = 0;
    std::vector<nt::u64> nodes;  // ω^u for u in (Z/k̄)^x
    std::vector<nt::u64> vinv;   // inverse of V[a][j] = nodes[a]^j, row-major φ x φ
};

inline PrimeContext build_prime_context(int kbar, nt::u64 p) {
    PrimeContext ctx;
    ctx.p = p;
    const nt::u64 omega = nt::primitive_root_of_unity(static_cast<nt::u64>(kbar), p);
    const auto us = nt::units(kbar);
    const int phi = static_cast<int>(us.size());
    for (auto u : us) ctx.nodes.push_back(nt::powmod(omega, static_cast<nt::u64>(u), p));
    // Gauss-Jordan on [V | I]
    const int w = 2 * phi;
    std::vector<nt::u64> m(static_cast<std::size_t>(phi) * w, 0);
    for (int a = 0; a < phi; ++a) {
        nt::u64 x = 1;
        for (int j = 0; j < phi; ++j) {
            m[a * w + j] = x;
            x = nt::mulmod(x, ctx.nodes[a], p);
        }
        m[a * w + phi + a] = 1;
    }
    for (int c = 0; c < phi; ++c) {
        int piv = c;
        while (m[piv * w + c] == 0) ++piv;
        for (int j = 0; j < w; ++j) std::swap(m[c * w + j], m[piv * w + j]);
        const nt::u64 inv = nt::invmod(m[c * w + c], p);
        for (int j = 0; j < w; ++j) m[c * w + j] = nt::mulmod(m[c * w + j], inv, p);
        for (int i = 0; i < phi; ++i) {
            if (i == c || m[i * w + c] == 0) continue;
            const nt::u64 f = m[i * w + c];
            for (int j = 0; j < w; ++j) m[i * w + j] = nt::submod(m[i * w + j], nt::mulmod(f, m[c * w + j], p), p);
        }
    }
    // row a of the inverse solves for coefficient index a
    ctx.vinv.resize(static_cast<std::size_t>(phi) * phi);
    for (int j = 0; j < phi; ++j)
        for (int a = 0; a < phi; ++a) ctx.vinv[j * phi + a] = m[j * w + phi + a];
    return ctx;
}

}  // namespace detail

/// Prime contexts for Q_k̄: index i is the i-th largest prime < 2^62 that is
/// 1 mod k̄. Built on first use, read-only afterwards.
inline const detail::PrimeContext& prime_context(int kbar, std::size_t index) {
    static std::mutex mu;
    static std::unordered_map<int, std::vector<std::unique_ptr<detail::PrimeContext>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& v = cache[kbar];
    while (v.size() <= index) {
        const auto ps = nt::primes_one_mod(static_cast<nt::u64>(kbar), v.size() + 1);
        v.push_back(std::make_unique<detail::PrimeContext>(detail::build_prime_context(kbar, ps.back())));
    }
    return *v[index];
}

// ---- fast exact route ----------------------------------------------------------

/// Evaluates s_λ(x(μ)) and χ_λ(μ) exactly through certified modular images.
/// Per-μ symmetric-function data is memoised; safe for concurrent use.
class ModularCharacters {
public:
    explicit ModularCharacters(const AlgebraSpec& spec)
        : spec_(spec), phi_(static_cast<int>(nt::euler_phi(spec.kbar()))),
          max_reduction_(cyclotomic_data(spec.kbar()).max_reduction_coeff) {}

    const AlgebraSpec& spec() const { return spec_; }

    /// Number of primes whose product exceeds 2 dim(λ) max|reduction|.
    std::size_t primes_needed(const Weight& lambda) const {
        const mpz_class bound = weyl_dimension(lambda) * static_cast<long>(max_reduction_) * 2;
        mpz_class prod = 1;
        std::size_t m = 0;
        while (prod <= bound) {
            const nt::u64 p = prime_context(spec_.kbar(), m).p;
            mpz_class pz;
            mpz_import(pz.get_mpz_t(), 1, -1, sizeof(p), 0, 0, &p);
            prod *= pz;
            ++m;
        }
        return m;
    }

    /// Canonical coefficients of s_λ(x(μ)) in Q_k̄ as machine integers;
    /// nullopt if one prime does not certify the lift.
    std::optional<std::vector<nt::i64>> schur_coeffs_i64(const Weight& lambda, const Weight& mu) const {
        if (primes_needed(lambda) != 1) return std::nullopt;
        return schur_coeffs_i64_unchecked(schur_shape(lambda), mu);
    }

    /// Same, with the shape precomputed and the bound already checked.
    std::vector<nt::i64> schur_coeffs_i64_unchecked(const SchurShape& shape, const Weight& mu) const {
        const auto& ctx = prime_context(spec_.kbar(), 0);
        const auto v = embedding_values(shape, mu, 0);
        std::vector<nt::i64> out(static_cast<std::size_t>(phi_));
        const nt::u64 p = ctx.p;
        for (int j = 0; j < phi_; ++j) {
            nt::u64 c = 0;
            for (int a = 0; a < phi_; ++a) c = nt::addmod(c, nt::mulmod(ctx.vinv[j * phi_ + a], v[a], p), p);
            out[j] = c > p / 2 ? -static_cast<nt::i64>(p - c) : static_cast<nt::i64>(c);
        }
        return out;
    }

    /// Canonical coefficients of s_λ(x(μ)) in Q_k̄, any size.
    std::vector<mpz_class> schur_coeffs(const Weight& lambda, const Weight& mu) const {
        const std::size_t m = primes_needed(lambda);
        const SchurShape shape = schur_shape(lambda);
        if (m == 1) {
            auto c = schur_coeffs_i64_unchecked(shape, mu);
            std::vector<mpz_class> out(c.size());
            for (std::size_t j = 0; j < c.size(); ++j) out[j] = static_cast<long>(c[j]);
            return out;
        }
        std::vector<mpz_class> acc(static_cast<std::size_t>(phi_), 0);
        mpz_class modulus = 1;
        for (std::size_t i = 0; i < m; ++i) {
            const auto& ctx = prime_context(spec_.kbar(), i);
            const auto v = embedding_values(shape, mu, i);
            mpz_class pz;
            mpz_import(pz.get_mpz_t(), 1, -1, sizeof(ctx.p), 0, 0, &ctx.p);
            // combine: x = acc + modulus * ((r - acc) * modulus^{-1} mod p)
            const nt::u64 mod_inv =
                modulus == 1 ? 1 : nt::invmod(static_cast<nt::u64>(mpz_class(modulus % pz).get_ui()), ctx.p);
            for (int j = 0; j < phi_; ++j) {
                nt::u64 r = 0;
                for (int a = 0; a < phi_; ++a)
                    r = nt::addmod(r, nt::mulmod(ctx.vinv[j * phi_ + a], v[a], ctx.p), ctx.p);
                const nt::u64 accp = mpz_class(acc[j] % pz).get_ui();
                const nt::u64 t = nt::mulmod(nt::submod(r, accp, ctx.p), mod_inv, ctx.p);
                mpz_class tz;
                mpz_import(tz.get_mpz_t(), 1, -1, sizeof(t), 0, 0, &t);
                acc[j] += modulus * tz;
            }
            modulus *= pz;
        }
        const mpz_class half = modulus / 2;
        for (auto& c : acc)
            if (c > half) c -= modulus;
        return acc;
    }

    CycNumber schur(const Weight& lambda, const Weight& mu) const {
        return CycNumber::from_group_ring_z(spec_.kbar(), schur_coeffs(lambda, mu));
    }

    /// χ_λ(μ) in Q_N, canonical.
    CycNumber chi(const Weight& lambda, const Weight& mu) const {
        const int n = spec_.chi_order();
        const auto c = schur_coeffs(lambda, mu);
        const std::int64_t phase = chi_phase(spec_, lambda, mu);
        std::vector<mpz_class> g(static_cast<std::size_t>(n));
        for (std::size_t j = 0; j < c.size(); ++j)
            if (c[j] != 0) g[static_cast<std::size_t>(nt::mod(phase + static_cast<std::int64_t>(j) * spec_.rbar(), n))] = c[j];
        return CycNumber::from_group_ring_z(n, std::move(g));
    }

    /// Canonical Q_N coefficients of χ_λ(μ) in machine integers given the
    /// certified Q_k̄ coefficients of s_λ; nullopt on overflow.
    std::optional<std::vector<nt::i64>> chi_canonical_i64(const std::vector<nt::i64>& schur, std::int64_t phase) const {
        const int n = spec_.chi_order();
        const auto& data = cyclotomic_data(n);
        std::vector<__int128> acc(static_cast<std::size_t>(data.phi), 0);
        for (std::size_t j = 0; j < schur.size(); ++j) {
            if (schur[j] == 0) continue;
            const auto e = static_cast<std::size_t>(nt::mod(phase + static_cast<std::int64_t>(j) * spec_.rbar(), n));
            for (const auto& [idx, r] : data.reduce[e]) acc[idx] += static_cast<__int128>(schur[j]) * r;
        }
        std::vector<nt::i64> out(acc.size());
        for (std::size_t j = 0; j < acc.size(); ++j) {
            if (acc[j] > INT64_MAX || acc[j] < INT64_MIN) return std::nullopt;
            out[j] = static_cast<nt::i64>(acc[j]);
        }
        return out;
    }

private:
    AlgebraSpec spec_;
    int phi_;
    nt::i64 max_reduction_;
    mutable std::mutex mu_;
    // per (μ, prime index): e and h for every embedding, layout [a * k̄ + j]
    mutable std::unordered_map<Weight, std::vector<std::shared_ptr<const std::vector<nt::u64>>>, WeightHash> cache_;

    std::shared_ptr<const std::vector<nt::u64>> mu_data(const Weight& mu, std::size_t prime) const {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = cache_.find(mu);
            if (it != cache_.end() && it->second.size() > prime && it->second[prime]) return it->second[prime];
        }
        const auto& ctx = prime_context(spec_.kbar(), prime);
        const int kb = spec_.kbar();
        const nt::u64 p = ctx.p;
        bool complement = false;
        const auto expo = detail::evaluation_exponents(spec_, mu, complement);
        auto data = std::make_shared<std::vector<nt::u64>>(static_cast<std::size_t>(phi_) * 2 * kb);
        std::vector<nt::u64> set(expo.size());
        for (int a = 0; a < phi_; ++a) {
            // x = ξ^{-m} ↦ nodes[a]^{-m} = nodes[a]^{k̄ - m}
            for (std::size_t i = 0; i < expo.size(); ++i)
                set[i] = nt::powmod(ctx.nodes[a], static_cast<nt::u64>(nt::mod(-expo[i], kb)), p);
            nt::u64* e = data->data() + static_cast<std::size_t>(a) * 2 * kb;
            nt::u64* h = e + kb;
            detail::symmetric_from_set<nt::u64>(
                set, complement, kb, 0, 1, [p](nt::u64 x, nt::u64 y) { return nt::mulmod(x, y, p); },
                [p](nt::u64 x, nt::u64 y) { return nt::addmod(x, y, p); },
                [p](nt::u64 x) { return x == 0 ? 0 : p - x; }, e, h);
        }
        std::lock_guard<std::mutex> lock(mu_);
        auto& slot = cache_[mu];
        if (slot.size() <= prime) slot.resize(prime + 1);
        if (!slot[prime]) slot[prime] = data;
        return slot[prime];
    }

    std::vector<nt::u64> embedding_values(const SchurShape& shape, const Weight& mu, std::size_t prime) const {
        const auto& ctx = prime_context(spec_.kbar(), prime);
        const auto data = mu_data(mu, prime);
        const int kb = spec_.kbar();
        const int n = shape.size();
        std::vector<nt::u64> v(static_cast<std::size_t>(phi_));
        std::vector<nt::u64> m;
        for (int a = 0; a < phi_; ++a) {
            if (n == 0) {
                v[a] = 1;
                continue;
            }
            const nt::u64* e = data->data() + static_cast<std::size_t>(a) * 2 * kb;
            detail::fill_jacobi_trudi<nt::u64>(shape, e, e + kb, 0, m);
            v[a] = detail::det_mod(m, n, ctx.p);
        }
        return v;
    }
};

/// χ_λ(μ) through the fast route (one-off evaluation).
inline CycNumber chi(const AlgebraSpec& spec, const Weight& lambda, const Weight& mu) {
    require_valid(spec, lambda);
    require_valid(spec, mu);
    return ModularCharacters(spec).chi(lambda, mu);
}

// ---- floating point -------------------------------------------------------------

/// Complex e_j, h_j (j < k̄) at x(μ).
struct NumericColumn {
    std::vector<std::complex<double>> e, h;
};

inline NumericColumn numeric_column(const AlgebraSpec& spec, const Weight& mu) {
    const int kb = spec.kbar();
    bool complement = false;
    const auto expo = detail::evaluation_exponents(spec, mu, complement);
    std::vector<std::complex<double>> set(expo.size());
    for (std::size_t i = 0; i < expo.size(); ++i)
        set[i] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(expo[i]) / kb);
    NumericColumn col;
    col.e.resize(kb);
    col.h.resize(kb);
    using C = std::complex<double>;
    detail::symmetric_from_set<C>(
        set, complement, kb, C(0), C(1), [](C x, C y) { return x * y; }, [](C x, C y) { return x + y; },
        [](C x) { return -x; }, col.e.data(), col.h.data());
    return col;
}

inline std::complex<double> numeric_root(std::int64_t e, std::int64_t n) {
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(nt::mod(e, n)) / static_cast<double>(n));
}

/// s_λ(x(μ)) in floating point.
inline std::complex<double> schur_numeric(const SchurShape& shape, const NumericColumn& col) {
    thread_local std::vector<std::complex<double>> m;
    const int n = shape.size();
    if (n == 0) return 1.0;
    if (n == 1) return shape.use_elementary() ? col.e[shape.cols[0]] : col.h[shape.rows[0]];
    detail::fill_jacobi_trudi<std::complex<double>>(shape, col.e.data(), col.h.data(), 0.0, m);
    return detail::det_complex(m, n);
}

inline std::complex<double> chi_numeric(const AlgebraSpec& spec, const SchurShape& shape, std::int64_t phase,
                                        const NumericColumn& col) {
    return numeric_root(phase, spec.chi_order()) * schur_numeric(shape, col);
}

inline std::complex<double> chi_numeric(const AlgebraSpec& spec, const Weight& lambda, const Weight& mu) {
    return chi_numeric(spec, schur_shape(lambda), chi_phase(spec, lambda, mu), numeric_column(spec, mu));
}

namespace detail {

/// log(2 sin(π d / k̄)) for d = 0..k̄-1 (entry 0 unused).
inline std::vector<double> log_sine_table(int kbar) {
    std::vector<double> t(static_cast<std::size_t>(kbar), 0.0);
    for (int d = 1; d < kbar; ++d) t[d] = std::log(2.0 * std::sin(std::numbers::pi * d / kbar));
    return t;
}

inline double s_zero_from_table(const AlgebraSpec& spec, const Weight& mu, const std::vector<double>& logsin) {
    const int kb = spec.kbar();
    const auto lab = partition_labels(mu).values;
    double acc = -0.5 * std::log(static_cast<double>(spec.rbar())) - 0.5 * spec.r * std::log(static_cast<double>(kb));
    if (spec.k < spec.rbar()) {
        // Π_{b≠a} 2 sin(π|μ(a)-μ(b)|/k̄) = k̄ / Π_{m∈B} 2 sin(π|μ(a)-m|/k̄)
        std::vector<char> in(static_cast<std::size_t>(kb), 0);
        for (int m : lab) in[m] = 1;
        std::vector<int> comp;
        for (int m = 0; m < kb; ++m)
            if (!in[m]) comp.push_back(m);
        double twice = static_cast<double>(lab.size()) * std::log(static_cast<double>(kb));
        for (int a : lab)
            for (int m : comp) twice -= logsin[std::abs(a - m)];
        acc += 0.5 * twice;
    } else {
        for (std::size_t a = 0; a < lab.size(); ++a)
            for (std::size_t b = a + 1; b < lab.size(); ++b) acc += logsin[lab[a] - lab[b]];
    }
    return std::exp(acc);
}

}  // namespace detail

/// S_{0μ} = r̄^{-1/2} k̄^{-r/2} Π_{a<b} 2 sin(π(μ(a)-μ(b))/k̄) > 0.
inline double s_zero(const AlgebraSpec& spec, const Weight& mu) {
    return detail::s_zero_from_table(spec, mu, detail::log_sine_table(spec.kbar()));
}

inline std::complex<double> s_entry(const AlgebraSpec& spec, const Weight& lambda, const Weight& mu) {
    return chi_numeric(spec, lambda, mu) * s_zero(spec, mu);
}

inline double unitarity_residual(const Eigen::MatrixXcd& s) {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(s.rows(), s.rows());
    g.selfadjointView<Eigen::Lower>().rankUpdate(s);
    g.diagonal().array() -= 1.0;
    double worst = 0.0;
    for (Eigen::Index j = 0; j < g.cols(); ++j)
        for (Eigen::Index i = j; i < g.rows(); ++i) worst = std::max(worst, std::abs(g(i, j)));
    return worst;
}

inline double symmetry_residual(const Eigen::MatrixXcd& s) { return (s - s.transpose()).cwiseAbs().maxCoeff(); }

// ---- the table -------------------------------------------------------------------

inline std::filesystem::path default_cache_dir() {
    if (const char* env = std::getenv("FUSION_CACHE_DIR"); env && *env) return env;
    return "./.fusion-cache";
}

inline constexpr std::uint32_t kCacheFormatVersion = 1;

/// S data for one (r, k): S_{0μ}, numeric S, and exact χ rows on demand.
/// Rows and columns follow the enumeration order.
class CharacterTable {
public:
    explicit CharacterTable(const AlgebraSpec& spec, std::size_t capacity = kDefaultCapacity)
        : spec_(spec), index_(spec, capacity), modular_(spec) {
        const auto logsin = detail::log_sine_table(spec.kbar());
        s0_.reserve(index_.size());
        for (const auto& w : index_.weights()) s0_.push_back(detail::s_zero_from_table(spec, w, logsin));
        rows_.resize(index_.size());
    }

    CharacterTable(const CharacterTable&) = delete;
    CharacterTable& operator=(const CharacterTable&) = delete;

    const AlgebraSpec& spec() const { return spec_; }
    const WeightIndex& index() const { return index_; }
    std::size_t size() const { return index_.size(); }
    const Weight& weight(std::size_t i) const { return index_[i]; }
    const ModularCharacters& modular() const { return modular_; }

    double s0(std::size_t mu) const { return s0_[mu]; }
    const std::vector<double>& s0() const { return s0_; }

    /// Numeric S, built on first use. The normalisation is checked against
    /// Σ_μ S_{0μ}^2 = 1 and S_{00} > 0.
    const Eigen::MatrixXcd& s_matrix() const {
        std::lock_guard<std::mutex> lock(s_mu_);
        if (!s_) build_s();
        return *s_;
    }

    std::complex<double> s(std::size_t lambda, std::size_t mu) const { return s_matrix()(lambda, mu); }

    /// Exact χ_λ(μ); served from the row cache when present.
    CycNumber chi(std::size_t lambda, std::size_t mu) const {
        {
            std::lock_guard<std::mutex> lock(row_mu_);
            if (rows_[lambda]) return (*rows_[lambda])[mu];
        }
        return modular_.chi(index_[lambda], index_[mu]);
    }

    /// All exact χ_λ(μ) for fixed λ, cached.
    const std::vector<CycNumber>& chi_row(std::size_t lambda) const {
        {
            std::lock_guard<std::mutex> lock(row_mu_);
            if (rows_[lambda]) return *rows_[lambda];
        }
        auto row = std::make_unique<std::vector<CycNumber>>();
        row->reserve(size());
        for (std::size_t m = 0; m < size(); ++m) row->push_back(modular_.chi(index_[lambda], index_[m]));
        std::lock_guard<std::mutex> lock(row_mu_);
        if (!rows_[lambda]) rows_[lambda] = std::move(row);
        return *rows_[lambda];
    }

    bool has_exact_row(std::size_t lambda) const {
        std::lock_guard<std::mutex> lock(row_mu_);
        return rows_[lambda] != nullptr;
    }

    std::filesystem::path cache_file(const std::filesystem::path& dir) const {
        return dir / ("A" + std::to_string(spec_.r) + "_k" + std::to_string(spec_.k) + ".smat");
    }

    void save(const std::filesystem::path& file) const;
    /// Replace numeric S and exact rows from a cache file; throws CacheError.
    void load(const std::filesystem::path& file);

private:
    AlgebraSpec spec_;
    WeightIndex index_;
    ModularCharacters modular_;
    std::vector<double> s0_;
    mutable std::mutex s_mu_;
    mutable std::unique_ptr<Eigen::MatrixXcd> s_;
    mutable std::mutex row_mu_;
    mutable std::vector<std::unique_ptr<std::vector<CycNumber>>> rows_;

    void build_s() const {
        const std::size_t n = size();
        auto s = std::make_unique<Eigen::MatrixXcd>(n, n);
        std::vector<SchurShape> shapes;
        std::vector<std::int64_t> t;
        shapes.reserve(n);
        for (const auto& w : index_.weights()) {
            shapes.push_back(schur_shape(w));
            t.push_back(nt::mod(ality_raw(w), spec_.chi_order()));
        }
        const std::int64_t big_n = spec_.chi_order();
        std::vector<std::complex<double>> roots(static_cast<std::size_t>(big_n));
        for (std::int64_t e = 0; e < big_n; ++e) roots[e] = numeric_root(e, big_n);
        for (std::size_t m = 0; m < n; ++m) {
            const auto col = numeric_column(spec_, index_[m]);
            const std::int64_t tm = nt::mod(shifted_ality(index_[m]), big_n);
            for (std::size_t l = 0; l < n; ++l)
                (*s)(l, m) = roots[(t[l] * tm) % big_n] * schur_numeric(shapes[l], col) * s0_[m];
        }
        double norm = 0.0;
        for (double x : s0_) norm += x * x;
        if (std::abs(norm - 1.0) > 1e-8 || !((*s)(0, 0).real() > 0))
            throw IdentityViolation("S normalisation check failed for A_" + std::to_string(spec_.r) + " level " +
                                    std::to_string(spec_.k));
        s_ = std::move(s);
    }
};

// ---- cache file ----------------------------------------------------------------------
//
// magic "VRLNDSMT", u32 version, i32 r, i32 k, u64 enumeration hash, u64 n,
// n*n (re, im) f64 pairs row-major, u64 row count, then per row: u64 index and
// n CycNumber records {i32 order, str den, u32 count, count x str numerator}.
// All integers little-endian; strings are u32 length + decimal digits.

namespace detail {

inline void put_u64(std::ostream& os, std::uint64_t v) {
    std::array<char, 8> b;
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b.data(), 8);
}
inline void put_u32(std::ostream& os, std::uint32_t v) {
    std::array<char, 4> b;
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(b.data(), 4);
}
inline void put_f64(std::ostream& os, double d) { put_u64(os, std::bit_cast<std::uint64_t>(d)); }
inline void put_str(std::ostream& os, const std::string& s) {
    put_u32(os, static_cast<std::uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::uint64_t get_u64(std::istream& is) {
    std::array<unsigned char, 8> b{};
    if (!is.read(reinterpret_cast<char*>(b.data()), 8)) throw CacheError("cache file truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}
inline std::uint32_t get_u32(std::istream& is) {
    std::array<unsigned char, 4> b{};
    if (!is.read(reinterpret_cast<char*>(b.data()), 4)) throw CacheError("cache file truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}
inline double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }
inline std::string get_str(std::istream& is) {
    const std::uint32_t n = get_u32(is);
    if (n > (1u << 24)) throw CacheError("cache string too long");
    std::string s(n, '\0');
    if (!is.read(s.data(), n)) throw CacheError("cache file truncated");
    return s;
}

}  // namespace detail

inline void write_record(std::ostream& os, const CycNumber& a) {
    detail::put_u32(os, static_cast<std::uint32_t>(a.order()));
    detail::put_str(os, a.denominator().get_str());
    const int phi = a.degree();
    detail::put_u32(os, static_cast<std::uint32_t>(phi));
    for (int j = 0; j < phi; ++j) detail::put_str(os, a.numerator(j).get_str());
}

/// Reads a record; the canonical form is re-established from the stored
/// coefficients, so hand-edited or non-reduced records still decode correctly.
inline CycNumber read_record(std::istream& is) {
    const auto order = static_cast<int>(detail::get_u32(is));
    if (order < 1 || order > (1 << 20)) throw CacheError("bad CycNumber order in cache");
    mpz_class den;
    if (den.set_str(detail::get_str(is), 10) != 0 || den <= 0) throw CacheError("bad denominator in cache");
    const auto count = detail::get_u32(is);
    if (count > static_cast<std::uint32_t>(order)) throw CacheError("too many coefficients in cache record");
    std::vector<mpq_class> c(count);
    for (auto& x : c) {
        mpz_class z;
        if (z.set_str(detail::get_str(is), 10) != 0) throw CacheError("bad numerator in cache");
        x = mpq_class(z, den);
        x.canonicalize();
    }
    return CycNumber::from_group_ring(order, c);
}

inline void CharacterTable::save(const std::filesystem::path& file) const {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    const auto tmp = file.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw CacheError("cannot write cache file " + tmp);
        os.write("VRLNDSMT", 8);
        detail::put_u32(os, kCacheFormatVersion);
        detail::put_u32(os, static_cast<std::uint32_t>(spec_.r));
        detail::put_u32(os, static_cast<std::uint32_t>(spec_.k));
        detail::put_u64(os, index_.enumeration_hash());
        const std::size_t n = size();
        detail::put_u64(os, n);
        const auto& s = s_matrix();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                detail::put_f64(os, s(i, j).real());
                detail::put_f64(os, s(i, j).imag());
            }
        std::vector<std::size_t> cached;
        {
            std::lock_guard<std::mutex> lock(row_mu_);
            for (std::size_t i = 0; i < n; ++i)
                if (rows_[i]) cached.push_back(i);
        }
        detail::put_u64(os, cached.size());
        for (std::size_t i : cached) {
            detail::put_u64(os, i);
            for (const auto& c : chi_row(i)) write_record(os, c);
        }
        if (!os) throw CacheError("error writing cache file " + tmp);
    }
    std::filesystem::rename(tmp, file);
}

inline void CharacterTable::load(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw CacheError("cannot open cache file " + file.string());
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, "VRLNDSMT", 8) != 0) throw CacheError("not a cache file: " + file.string());
    const auto version = detail::get_u32(is);
    if (version != kCacheFormatVersion)
        throw CacheError("cache format version " + std::to_string(version) + " != " + std::to_string(kCacheFormatVersion));
    const auto r = static_cast<int>(detail::get_u32(is));
    const auto k = static_cast<int>(detail::get_u32(is));
    if (r != spec_.r || k != spec_.k) throw CacheError("cache file is for a different algebra");
    if (detail::get_u64(is) != index_.enumeration_hash()) throw CacheError("cache enumeration hash mismatch");
    const std::size_t n = detail::get_u64(is);
    if (n != size()) throw CacheError("cache size mismatch");
    auto s = std::make_unique<Eigen::MatrixXcd>(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double re = detail::get_f64(is);
            const double im = detail::get_f64(is);
            (*s)(i, j) = {re, im};
        }
    const std::size_t nrows = detail::get_u64(is);
    std::vector<std::pair<std::size_t, std::unique_ptr<std::vector<CycNumber>>>> rows;
    for (std::size_t t = 0; t < nrows; ++t) {
        const std::size_t i = detail::get_u64(is);
        if (i >= n) throw CacheError("cache row index out of range");
        auto row = std::make_unique<std::vector<CycNumber>>();
        row->reserve(n);
        for (std::size_t j = 0; j < n; ++j) {
            row->push_back(read_record(is));
            if (row->back().order() != spec_.chi_order()) throw CacheError("cache record has wrong order");
        }
        rows.emplace_back(i, std::move(row));
    }
    {
        std::lock_guard<std::mutex> lock(s_mu_);
        s_ = std::move(s);
    }
    std::lock_guard<std::mutex> lock(row_mu_);
    for (auto& [i, row] : rows) rows_[i] = std::move(row);
}

/// Table for (r, k) backed by the on-disk cache in `dir` (created on miss).
inline std::unique_ptr<CharacterTable> s_matrix(const AlgebraSpec& spec, const std::filesystem::path& dir,
                                                std::size_t capacity = kDefaultCapacity) {
    auto table = std::make_unique<CharacterTable>(spec, capacity);
    const auto file = table->cache_file(dir);
    if (std::filesystem::exists(file)) {
        table->load(file);
    } else {
        table->s_matrix();
        table->save(file);
    }
    return table;
}

}  // namespace verlinde
