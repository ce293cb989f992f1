#pragma once

// Exact arithmetic in cyclotomic fields Q_n = Q(ξ_n), ξ_n = exp(2πi/n).
//
// A CycNumber of order n stores rational coefficients c_0..c_{n-1} of the
// group-ring element Σ c_j ξ_n^j, always kept in canonical form: reduced
// modulo the n-th cyclotomic polynomial (so only c_0..c_{φ(n)-1} can be
// nonzero) with a single positive common denominator coprime to the content.
// Two numbers of the same order are equal iff their canonical forms are.

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "verlinde/numtheory.hpp"

namespace verlinde {

namespace detail {

/// Per-order reduction data: Φ_n and the power-basis image of every ξ_n^e.
struct CyclotomicData {
    int n = 1;
    int phi = 1;
    std::vector<nt::i64> poly;  // Φ_n, ascending, monic of degree phi
    // reduce[e] = nonzero (index, coeff) of x^e mod Φ_n, 0 <= e < n
    std::vector<std::vector<std::pair<int, nt::i64>>> reduce;
    nt::i64 max_reduction_coeff = 1;
};

inline std::vector<nt::i64> poly_exact_div(std::vector<nt::i64> num, const std::vector<nt::i64>& den) {
    // both ascending; den monic
    const std::size_t dn = den.size() - 1;
    if (num.size() < den.size()) throw std::logic_error("poly_exact_div: degree mismatch");
    std::vector<nt::i64> q(num.size() - dn, 0);
    for (std::size_t i = num.size(); i-- > dn;) {
        const nt::i64 c = num[i];
        q[i - dn] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
    }
    for (std::size_t i = 0; i < dn; ++i)
        if (num[i] != 0) throw std::logic_error("poly_exact_div: nonzero remainder");
    return q;
}

inline std::vector<nt::i64> build_cyclotomic_poly(int n, std::map<int, std::vector<nt::i64>>& memo) {
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    std::vector<nt::i64> p(static_cast<std::size_t>(n) + 1, 0);
    p[0] = -1;
    p[n] = 1;
    for (nt::i64 d : nt::divisors(n)) {
        if (d == n) continue;
        p = poly_exact_div(std::move(p), build_cyclotomic_poly(static_cast<int>(d), memo));
    }
    memo[n] = p;
    return p;
}

inline std::unique_ptr<CyclotomicData> build_cyclotomic_data(int n) {
    auto data = std::make_unique<CyclotomicData>();
    data->n = n;
    std::map<int, std::vector<nt::i64>> memo;
    data->poly = build_cyclotomic_poly(n, memo);
    data->phi = static_cast<int>(data->poly.size()) - 1;
    const int phi = data->phi;
    data->reduce.resize(n);
    std::vector<__int128> cur(phi, 0);
    cur[0] = 1;
    nt::i64 maxc = 1;
    for (int e = 0; e < n; ++e) {
        auto& row = data->reduce[e];
        for (int j = 0; j < phi; ++j) {
            if (cur[j] == 0) continue;
            if (cur[j] > (__int128{1} << 40) || cur[j] < -(__int128{1} << 40))
                throw std::overflow_error("cyclotomic reduction table overflow");
            const auto c = static_cast<nt::i64>(cur[j]);
            row.emplace_back(j, c);
            maxc = std::max(maxc, c < 0 ? -c : c);
        }
        // multiply by x and reduce the overflow term
        const __int128 top = cur[phi - 1];
        for (int j = phi - 1; j > 0; --j) cur[j] = cur[j - 1];
        cur[0] = 0;
        if (top != 0)
            for (int j = 0; j < phi; ++j) cur[j] -= top * data->poly[j];
    }
    data->max_reduction_coeff = maxc;
    return data;
}

}  // namespace detail

/// Reduction data for Q_n; built once per order and read-only afterwards.
inline const detail::CyclotomicData& cyclotomic_data(int n) {
    if (n < 1) throw std::invalid_argument("cyclotomic order must be positive");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<detail::CyclotomicData>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = detail::build_cyclotomic_data(n);
    return *slot;
}

/// σ_ℓ ∈ Gal(Q_n/Q), ξ_n ↦ ξ_n^ℓ.
struct GaloisElement {
    int order = 1;
    nt::i64 ell = 1;

    GaloisElement() = default;
    GaloisElement(int n, nt::i64 l) : order(n), ell(nt::mod(l, n)) {
        if (n < 1) throw std::invalid_argument("Galois element order must be positive");
        if (n == 1) ell = 1;
        if (nt::gcd(ell, n) != 1) throw std::invalid_argument("Galois element: ell not coprime to order");
    }

    GaloisElement compose(const GaloisElement& other) const {
        if (other.order != order) throw std::invalid_argument("Galois elements of different orders");
        return GaloisElement(order, static_cast<nt::i64>((static_cast<__int128>(ell) * other.ell) % order));
    }
};

class CycNumber {
public:
    CycNumber() : CycNumber(1) {}
    explicit CycNumber(int order) : n_(order), num_(static_cast<std::size_t>(order)), den_(1) {
        if (order < 1) throw std::invalid_argument("CycNumber order must be positive");
    }

    static CycNumber rational(const mpq_class& q, int order = 1) {
        CycNumber a(order);
        mpq_class c = q;
        c.canonicalize();
        a.num_[0] = c.get_num();
        a.den_ = c.get_den();
        return a;
    }
    static CycNumber integer(long v, int order = 1) { return rational(mpq_class(v), order); }

    /// ξ_n^e.
    static CycNumber root_of_unity(int n, nt::i64 e) {
        CycNumber a(n);
        a.num_[static_cast<std::size_t>(nt::mod(e, n))] = 1;
        a.canonicalize();
        return a;
    }

    /// Σ coeffs[j] ξ_n^j for an arbitrary (not necessarily reduced) group-ring
    /// vector of length at most n.
    static CycNumber from_group_ring(int n, std::span<const mpq_class> coeffs) {
        if (coeffs.size() > static_cast<std::size_t>(n)) throw std::invalid_argument("too many coefficients");
        CycNumber a(n);
        mpz_class den = 1;
        for (const auto& c : coeffs) den = lcm_z(den, c.get_den());
        for (std::size_t j = 0; j < coeffs.size(); ++j) a.num_[j] = coeffs[j].get_num() * (den / coeffs[j].get_den());
        a.den_ = den;
        a.canonicalize();
        return a;
    }

    /// Integral group-ring vector (length at most n).
    static CycNumber from_integers(int n, std::span<const nt::i64> coeffs) {
        if (coeffs.size() > static_cast<std::size_t>(n)) throw std::invalid_argument("too many coefficients");
        CycNumber a(n);
        for (std::size_t j = 0; j < coeffs.size(); ++j)
            if (coeffs[j] != 0) a.num_[j] = static_cast<long>(coeffs[j]);
        a.canonicalize();
        return a;
    }

    /// Integral group-ring vector with big coefficients (length at most n).
    static CycNumber from_group_ring_z(int n, std::vector<mpz_class> coeffs) {
        if (coeffs.size() > static_cast<std::size_t>(n)) throw std::invalid_argument("too many coefficients");
        CycNumber a(n);
        for (std::size_t j = 0; j < coeffs.size(); ++j) a.num_[j].swap(coeffs[j]);
        a.canonicalize();
        return a;
    }

    int order() const { return n_; }
    int degree() const { return cyclotomic_data(n_).phi; }
    const mpz_class& denominator() const { return den_; }
    const mpz_class& numerator(std::size_t j) const { return num_[j]; }

    /// Canonical power-basis coefficient j (0 <= j < φ(n)).
    mpq_class coefficient(std::size_t j) const {
        mpq_class q(num_[j], den_);
        q.canonicalize();
        return q;
    }

    std::vector<mpq_class> coefficients() const {
        std::vector<mpq_class> out(static_cast<std::size_t>(degree()));
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = coefficient(j);
        return out;
    }

    /// Canonical coefficients as machine integers, if integral and in range.
    std::optional<std::vector<nt::i64>> integer_coefficients() const {
        if (den_ != 1) return std::nullopt;
        std::vector<nt::i64> out(static_cast<std::size_t>(degree()));
        for (std::size_t j = 0; j < out.size(); ++j) {
            if (!num_[j].fits_slong_p()) return std::nullopt;
            out[j] = num_[j].get_si();
        }
        return out;
    }

    bool is_zero() const {
        for (const auto& c : num_)
            if (c != 0) return false;
        return true;
    }

    bool is_rational() const {
        for (std::size_t j = 1; j < num_.size(); ++j)
            if (num_[j] != 0) return false;
        return true;
    }

    /// Same value in Q_m, n | m.
    CycNumber embed(int m) const {
        if (m % n_ != 0) throw std::invalid_argument("embed: target order must be a multiple");
        if (m == n_) return *this;
        const int step = m / n_;
        CycNumber a(m);
        for (std::size_t j = 0; j < num_.size(); ++j)
            if (num_[j] != 0) a.num_[j * static_cast<std::size_t>(step)] = num_[j];
        a.den_ = den_;
        a.canonicalize();
        return a;
    }

    /// The same element written in the smallest order that contains it.
    CycNumber with_minimal_order() const;

    CycNumber operator-() const {
        CycNumber a = *this;
        for (auto& c : a.num_) c = -c;
        return a;
    }

    friend CycNumber operator+(const CycNumber& a, const CycNumber& b) { return combine(a, b, false); }
    friend CycNumber operator-(const CycNumber& a, const CycNumber& b) { return combine(a, b, true); }

    friend CycNumber operator*(const CycNumber& a, const CycNumber& b) {
        if (a.n_ != b.n_) {
            const int m = static_cast<int>(nt::lcm(a.n_, b.n_));
            return a.embed(m) * b.embed(m);
        }
        const int n = a.n_;
        CycNumber c(n);
        const auto na = nonzero_indices(a);
        const auto nb = nonzero_indices(b);
        for (std::size_t i : na)
            for (std::size_t j : nb) {
                std::size_t e = i + j;
                if (e >= static_cast<std::size_t>(n)) e -= static_cast<std::size_t>(n);
                mpz_addmul(c.num_[e].get_mpz_t(), a.num_[i].get_mpz_t(), b.num_[j].get_mpz_t());
            }
        c.den_ = a.den_ * b.den_;
        c.canonicalize();
        return c;
    }

    friend CycNumber operator*(const CycNumber& a, const mpq_class& q) {
        CycNumber c = a;
        mpq_class s = q;
        s.canonicalize();
        for (auto& x : c.num_) x *= s.get_num();
        c.den_ *= s.get_den();
        c.normalize_content();
        return c;
    }
    friend CycNumber operator*(const mpq_class& q, const CycNumber& a) { return a * q; }

    CycNumber& operator+=(const CycNumber& b) { return *this = *this + b; }
    CycNumber& operator-=(const CycNumber& b) { return *this = *this - b; }
    CycNumber& operator*=(const CycNumber& b) { return *this = *this * b; }

    /// Multiply by ξ_n^e without a full product.
    CycNumber times_root_of_unity(nt::i64 e) const {
        CycNumber c(n_);
        for (std::size_t j = 0; j < num_.size(); ++j)
            if (num_[j] != 0) c.num_[static_cast<std::size_t>(nt::mod(static_cast<nt::i64>(j) + e, n_))] = num_[j];
        c.den_ = den_;
        c.canonicalize();
        return c;
    }

    /// σ_ℓ: ξ_n ↦ ξ_n^ℓ.
    CycNumber galois(const GaloisElement& g) const {
        if (g.order != n_) {
            if (g.order % n_ == 0) return embed(g.order).galois(g);
            // acting on a subfield: reduce ℓ modulo our order
            if (n_ % g.order == 0) throw std::invalid_argument("galois: element order smaller than number order");
            throw std::invalid_argument("galois: incompatible orders");
        }
        CycNumber c(n_);
        for (std::size_t j = 0; j < num_.size(); ++j)
            if (num_[j] != 0) {
                const auto e = static_cast<std::size_t>(
                    (static_cast<__int128>(j) * g.ell) % n_);
                c.num_[e] = num_[j];
            }
        c.den_ = den_;
        c.canonicalize();
        return c;
    }
    CycNumber galois(nt::i64 ell) const { return galois(GaloisElement(n_, ell)); }

    CycNumber conj() const { return galois(GaloisElement(n_, -1)); }

    /// Multiplicative inverse (extended Euclid against Φ_n over Q).
    CycNumber inverse() const;

    friend CycNumber operator/(const CycNumber& a, const CycNumber& b) {
        if (a.n_ != b.n_) {
            const int m = static_cast<int>(nt::lcm(a.n_, b.n_));
            return a.embed(m) / b.embed(m);
        }
        return a * b.inverse();
    }

    friend bool operator==(const CycNumber& a, const CycNumber& b) {
        if (a.n_ != b.n_) {
            const int m = static_cast<int>(nt::lcm(a.n_, b.n_));
            return a.embed(m) == b.embed(m);
        }
        return a.den_ == b.den_ && a.num_ == b.num_;
    }

    /// Floating evaluation. Each term is evaluated with long double sin/cos,
    /// so |result - exact| <= Σ|c_j| * 2^-60 * (n + 4) up to the final
    /// rounding to double.
    std::complex<double> to_complex() const {
        long double re = 0, im = 0;
        const long double scale = 1.0L / den_.get_d();
        const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
        for (std::size_t j = 0; j < num_.size(); ++j) {
            if (num_[j] == 0) continue;
            const long double c = num_[j].get_d() * scale;
            const long double ang = two_pi * static_cast<long double>(j) / static_cast<long double>(n_);
            re += c * std::cos(ang);
            im += c * std::sin(ang);
        }
        return {static_cast<double>(re), static_cast<double>(im)};
    }

    /// Structural hash of the canonical form (orders differ => hashes differ).
    std::size_t hash() const {
        std::uint64_t h = 1469598103934665603ull ^ static_cast<std::uint64_t>(n_);
        auto mix = [&h](std::uint64_t v) {
            h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 1099511628211ull;
        };
        for (const auto& c : num_) mix(hash_mpz(c));
        mix(hash_mpz(den_));
        return static_cast<std::size_t>(h);
    }

    std::string to_string() const;

private:
    int n_;
    std::vector<mpz_class> num_;
    mpz_class den_;

    static mpz_class lcm_z(const mpz_class& a, const mpz_class& b) {
        mpz_class l;
        mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        return l;
    }

    static std::uint64_t hash_mpz(const mpz_class& z) {
        const int sgn = mpz_sgn(z.get_mpz_t());
        if (sgn == 0) return 0;
        std::uint64_t h = static_cast<std::uint64_t>(sgn) * 0x51ed27ull;
        const std::size_t limbs = mpz_size(z.get_mpz_t());
        for (std::size_t i = 0; i < limbs; ++i) {
            h ^= static_cast<std::uint64_t>(mpz_getlimbn(z.get_mpz_t(), static_cast<mp_size_t>(i)));
            h *= 0x100000001b3ull;
        }
        return h;
    }

    static std::vector<std::size_t> nonzero_indices(const CycNumber& a) {
        std::vector<std::size_t> idx;
        for (std::size_t j = 0; j < a.num_.size(); ++j)
            if (a.num_[j] != 0) idx.push_back(j);
        return idx;
    }

    static CycNumber combine(const CycNumber& a, const CycNumber& b, bool subtract) {
        if (a.n_ != b.n_) {
            const int m = static_cast<int>(nt::lcm(a.n_, b.n_));
            return combine(a.embed(m), b.embed(m), subtract);
        }
        CycNumber c(a.n_);
        if (a.den_ == b.den_) {
            for (std::size_t j = 0; j < c.num_.size(); ++j)
                c.num_[j] = subtract ? mpz_class(a.num_[j] - b.num_[j]) : mpz_class(a.num_[j] + b.num_[j]);
            c.den_ = a.den_;
        } else {
            const mpz_class l = lcm_z(a.den_, b.den_);
            const mpz_class fa = l / a.den_, fb = l / b.den_;
            for (std::size_t j = 0; j < c.num_.size(); ++j)
                c.num_[j] = subtract ? mpz_class(a.num_[j] * fa - b.num_[j] * fb) : mpz_class(a.num_[j] * fa + b.num_[j] * fb);
            c.den_ = l;
        }
        c.normalize_content();  // sum of reduced forms stays reduced
        return c;
    }

    void normalize_content() {
        if (den_ < 0) {
            den_ = -den_;
            for (auto& c : num_) c = -c;
        }
        if (den_ == 1) return;
        mpz_class g = den_;
        for (const auto& c : num_) {
            if (c == 0) continue;
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
            if (g == 1) return;
        }
        bool all_zero = true;
        for (const auto& c : num_)
            if (c != 0) all_zero = false;
        if (all_zero) {
            den_ = 1;
            return;
        }
        for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    }

    /// Reduce modulo Φ_n, then normalise the content.
    void canonicalize() {
        const auto& data = cyclotomic_data(n_);
        const std::size_t phi = static_cast<std::size_t>(data.phi);
        bool dirty = false;
        for (std::size_t e = phi; e < num_.size(); ++e)
            if (num_[e] != 0) {
                dirty = true;
                break;
            }
        if (dirty) {
            for (std::size_t e = phi; e < num_.size(); ++e) {
                if (num_[e] == 0) continue;
                mpz_class c;
                c.swap(num_[e]);
                for (const auto& [j, r] : data.reduce[e]) {
                    if (r > 0)
                        mpz_addmul_ui(num_[j].get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(r));
                    else
                        mpz_submul_ui(num_[j].get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(-r));
                }
            }
        }
        normalize_content();
    }

    friend class CycNumberAccess;
};

// ---- inverse ---------------------------------------------------------------

namespace detail {

using QPoly = std::vector<mpq_class>;  // ascending coefficients

inline void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline QPoly poly_sub_mul(const QPoly& a, const QPoly& q, const QPoly& b) {
    // a - q*b
    QPoly out = a;
    if (!q.empty() && !b.empty() && out.size() < q.size() + b.size() - 1) out.resize(q.size() + b.size() - 1);
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q[i] != 0)
            for (std::size_t j = 0; j < b.size(); ++j) out[i + j] -= q[i] * b[j];
    trim(out);
    return out;
}

inline std::pair<QPoly, QPoly> poly_divmod(QPoly a, const QPoly& b) {
    trim(a);
    QPoly q;
    if (a.size() < b.size()) return {q, a};
    q.assign(a.size() - b.size() + 1, 0);
    const mpq_class lead = b.back();
    for (std::size_t i = a.size(); i-- >= b.size();) {
        if (a[i] == 0) {
            if (i == b.size() - 1) break;
            continue;
        }
        const mpq_class c = a[i] / lead;
        q[i - (b.size() - 1)] = c;
        for (std::size_t j = 0; j < b.size(); ++j) a[i - (b.size() - 1) + j] -= c * b[j];
        if (i == b.size() - 1) break;
    }
    trim(a);
    trim(q);
    return {q, a};
}

}  // namespace detail

inline CycNumber CycNumber::inverse() const {
    if (is_zero()) throw std::domain_error("CycNumber::inverse: division by zero");
    const auto& data = cyclotomic_data(n_);
    detail::QPoly f(data.poly.begin(), data.poly.end());
    detail::QPoly g = coefficients();
    detail::trim(g);
    // invariant: s_i * g ≡ r_i (mod f)
    detail::QPoly r0 = f, r1 = g, s0, s1{mpq_class(1)};
    while (!(r1.size() == 1)) {
        if (r1.empty()) throw std::logic_error("CycNumber::inverse: non-invertible (not a field?)");
        auto [q, rem] = detail::poly_divmod(r0, r1);
        auto s2 = detail::poly_sub_mul(s0, q, s1);
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    const mpq_class c = r1[0];
    for (auto& x : s1) x /= c;
    if (s1.size() > static_cast<std::size_t>(n_)) {
        auto [q, rem] = detail::poly_divmod(s1, f);
        s1 = rem;
    }
    return from_group_ring(n_, s1);
}

inline CycNumber CycNumber::with_minimal_order() const {
    // value lies in Q_m iff it is fixed by every σ_ℓ with ℓ ≡ 1 (mod m)
    for (nt::i64 m : nt::divisors(n_)) {
        if (m == n_) break;
        bool fixed = true;
        for (nt::i64 l : nt::units(n_)) {
            if (nt::mod(l - 1, m) != 0 || l == 1) continue;
            if (!(galois(l) == *this)) {
                fixed = false;
                break;
            }
        }
        if (!fixed) continue;
        // solve Σ_j b_j canon_n(ξ_m^j) = value, j < φ(m)
        const int phim = cyclotomic_data(static_cast<int>(m)).phi;
        const int phin = degree();
        const int step = n_ / static_cast<int>(m);
        std::vector<std::vector<mpq_class>> rows(static_cast<std::size_t>(phin),
                                                 std::vector<mpq_class>(static_cast<std::size_t>(phim) + 1));
        for (int j = 0; j < phim; ++j) {
            const auto& red = cyclotomic_data(n_).reduce[static_cast<std::size_t>(j * step)];
            for (const auto& [idx, c] : red) rows[idx][j] = mpq_class(static_cast<long>(c));
        }
        for (int i = 0; i < phin; ++i) rows[i][phim] = coefficient(static_cast<std::size_t>(i));
        // Gaussian elimination
        std::size_t rank = 0;
        std::vector<int> pivcol;
        for (int col = 0; col < phim && rank < rows.size(); ++col) {
            std::size_t piv = rank;
            while (piv < rows.size() && rows[piv][col] == 0) ++piv;
            if (piv == rows.size()) continue;
            std::swap(rows[piv], rows[rank]);
            const mpq_class inv = 1 / rows[rank][col];
            for (auto& x : rows[rank]) x *= inv;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (i == rank || rows[i][col] == 0) continue;
                const mpq_class f = rows[i][col];
                for (int c = 0; c <= phim; ++c) rows[i][c] -= f * rows[rank][c];
            }
            pivcol.push_back(col);
            ++rank;
        }
        std::vector<mpq_class> b(static_cast<std::size_t>(phim));
        for (std::size_t i = 0; i < pivcol.size(); ++i) b[pivcol[i]] = rows[i][phim];
        CycNumber out = from_group_ring(static_cast<int>(m), b);
        if (!(out.embed(n_) == *this)) throw std::logic_error("with_minimal_order: descent failed");
        return out;
    }
    return *this;
}

inline std::string CycNumber::to_string() const {
    std::string s;
    bool first = true;
    for (std::size_t j = 0; j < num_.size(); ++j) {
        if (num_[j] == 0) continue;
        const mpq_class c = coefficient(j);
        if (!first) s += " + ";
        first = false;
        s += "(" + c.get_str() + ")";
        if (j > 0) s += "*z" + std::to_string(n_) + "^" + std::to_string(j);
    }
    return first ? std::string("0") : s;
}

struct CycNumberHash {
    std::size_t operator()(const CycNumber& a) const { return a.hash(); }
};

inline CycNumber root_of_unity(int n, nt::i64 e) { return CycNumber::root_of_unity(n, e); }

inline CycNumber galois_apply(const GaloisElement& g, const CycNumber& a) { return a.galois(g); }

inline bool is_zero(const CycNumber& a) { return a.is_zero(); }

inline std::complex<double> to_complex(const CycNumber& a) { return a.to_complex(); }

}  // namespace verlinde
