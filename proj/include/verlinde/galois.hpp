#pragma once

// Galois symmetry of A_{r,k}: σ_ℓ χ_λ(μ) = χ_λ(σ_ℓ μ) and
// σ_ℓ S_{λμ} = ε_ℓ(μ) S_{λ,σ_ℓ μ}.
//
// The permutation is found by matching σ_ℓ of the fundamental characters
// χ_{w^1..w^r}(μ) against the table; these generate every χ_λ(μ), so the
// match is unique. Parities need S_{0μ} itself, which lives in Q_{4N}
// (N = r̄k̄): the sine product is exact in Q_{2k̄}, the square roots of r̄ and
// k̄ come from quadratic Gauss sums.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "verlinde/characters.hpp"
#include "verlinde/cyclotomic.hpp"
#include "verlinde/numtheory.hpp"
#include "verlinde/weight_lattice.hpp"

namespace verlinde {

// ---- exact square roots and S_{0μ} ------------------------------------------------

/// √n for n ≥ 1 as a cyclotomic number (square part times Gauss sums).
inline CycNumber cyclotomic_sqrt(nt::i64 n) {
    if (n < 1) throw std::invalid_argument("cyclotomic_sqrt needs n >= 1");
    nt::i64 square = 1;
    CycNumber out = CycNumber::integer(1);
    for (auto [p, a] : nt::factorize(n)) {
        for (int i = 0; i < a / 2; ++i) square *= p;
        if (a % 2 == 0) continue;
        if (p == 2) {
            out = out * (root_of_unity(8, 1) + root_of_unity(8, -1));
            continue;
        }
        // g = Σ (a/p) ξ_p^a = √p if p ≡ 1 mod 4, i√p otherwise
        std::vector<nt::i64> g(static_cast<std::size_t>(p), 0);
        for (nt::i64 x = 1; x < p; ++x)
            g[static_cast<std::size_t>(x)] = nt::powmod(static_cast<nt::u64>(x), static_cast<nt::u64>((p - 1) / 2), static_cast<nt::u64>(p)) == 1 ? 1 : -1;
        CycNumber gs = CycNumber::from_integers(static_cast<int>(p), g);
        if (p % 4 == 3) gs = gs * root_of_unity(4, -1);
        out = out * gs;
    }
    return out * mpq_class(square);
}

/// S_{0μ} = r̄^{-1/2} k̄^{-r/2} Π_{a<b} 2 sin(π(μ(a)-μ(b))/k̄), exactly in Q_{4N}.
inline CycNumber s_zero_exact(const AlgebraSpec& spec, const Weight& mu) {
    const int kb = spec.kbar(), big = 4 * spec.chi_order();
    const auto lab = partition_labels(mu).values;
    CycNumber prod = CycNumber::integer(1, big);
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < lab.size(); ++a)
        for (std::size_t b = a + 1; b < lab.size(); ++b) {
            // ξ_{2k̄}^d - ξ_{2k̄}^{-d} = 2i sin(πd/k̄)
            const int d = lab[a] - lab[b];
            prod = prod * (root_of_unity(2 * kb, d) - root_of_unity(2 * kb, -d)).embed(big);
            ++pairs;
        }
    prod = prod * root_of_unity(4, -static_cast<nt::i64>(pairs % 4)).embed(big);
    mpz_class kpow = 1;
    for (int i = 0; i < spec.r / 2; ++i) kpow *= kb;
    CycNumber den = cyclotomic_sqrt(spec.rbar()) * mpq_class(kpow);
    if (spec.r % 2) den = den * cyclotomic_sqrt(kb);
    return prod / den.embed(big);
}

// ---- the action --------------------------------------------------------------------

struct GaloisAction {
    nt::i64 ell = 1;                       // mod N
    nt::i64 lift = 1;                      // the element of (Z/4N)^× used for parities
    std::vector<std::size_t> permutation;  // μ ↦ σμ, indices into enumerate(spec)
    std::vector<int> parity;               // ε(μ); empty when not requested
};

/// Shared tables for many ℓ on one algebra.
class GaloisContext {
public:
    explicit GaloisContext(const AlgebraSpec& spec, std::size_t capacity = kDefaultCapacity)
        : spec_(spec), index_(spec, capacity), modular_(spec), n_(spec.chi_order()) {
        sig_.resize(index_.size());
        for (std::size_t m = 0; m < index_.size(); ++m) {
            for (int a = 1; a <= spec.r; ++a) sig_[m].push_back(modular_.chi(fundamental(spec, a), index_[m]).embed(n_));
            lookup_.emplace(key(sig_[m]), m);
        }
    }

    const AlgebraSpec& spec() const { return spec_; }
    const WeightIndex& index() const { return index_; }
    std::size_t size() const { return index_.size(); }
    nt::i64 order() const { return n_; }

    /// σ_ℓ μ for one weight.
    std::size_t image(nt::i64 ell, std::size_t mu) const {
        check_unit(ell);
        std::vector<CycNumber> s;
        s.reserve(sig_[mu].size());
        for (const auto& x : sig_[mu]) s.push_back(x.galois(GaloisElement(static_cast<int>(n_), ell)));
        auto [lo, hi] = lookup_.equal_range(key(s));
        for (auto it = lo; it != hi; ++it)
            if (sig_[it->second] == s) return it->second;
        throw std::logic_error("galois: no weight matches σ_" + std::to_string(ell) + " of " + to_string(index_[mu]));
    }

    std::vector<std::size_t> permutation(nt::i64 ell) const {
        std::vector<std::size_t> p(size());
        for (std::size_t m = 0; m < size(); ++m) p[m] = image(ell, m);
        return p;
    }

    /// True iff σ_ℓ fixes every fundamental character value, i.e. all of L.
    bool fixes_characters(nt::i64 ell) const {
        check_unit(ell);
        const GaloisElement g(static_cast<int>(n_), ell);
        for (const auto& row : sig_)
            for (const auto& x : row)
                if (!(x.galois(g) == x)) return false;
        return true;
    }

    const CycNumber& s_zero(std::size_t mu) const {
        if (s0_.empty()) s0_.resize(size());
        if (!s0_[mu]) s0_[mu] = s_zero_exact(spec_, index_[mu]);
        return *s0_[mu];
    }

    /// Lift of ℓ to (Z/4N)^×: ℓ itself when coprime to 4N, else ℓ + N.
    nt::i64 lift(nt::i64 ell) const {
        const nt::i64 big = 4 * n_;
        nt::i64 l = nt::mod(ell, big);
        if (nt::gcd(l, big) != 1) l = nt::mod(l + n_, big);
        return l;
    }

    /// ε(μ) with σ(S_{0μ}) = ε S_{0,σμ}; `lift` acts on Q_{4N}.
    int parity(nt::i64 lift, std::size_t mu, std::size_t image) const {
        const nt::i64 big = 4 * n_;
        if (nt::gcd(lift, big) != 1) throw std::invalid_argument("parity needs a unit mod 4N");
        const CycNumber lhs = s_zero(mu).galois(GaloisElement(static_cast<int>(big), lift));
        const CycNumber& rhs = s_zero(image);
        if (lhs == rhs) return 1;
        if (lhs == -rhs) return -1;
        throw std::logic_error("galois: σ S_{0μ} is not ±S_{0,σμ} at " + to_string(index_[mu]));
    }

    GaloisAction action(nt::i64 ell, bool with_parity = true) const {
        GaloisAction g;
        g.ell = nt::mod(ell, n_);
        g.lift = lift(ell);
        g.permutation = permutation(ell);
        if (with_parity) {
            g.parity.resize(size());
            for (std::size_t m = 0; m < size(); ++m) g.parity[m] = parity(g.lift, m, g.permutation[m]);
        }
        return g;
    }

    const ModularCharacters& modular() const { return modular_; }

private:
    void check_unit(nt::i64 ell) const {
        if (nt::gcd(nt::mod(ell, n_), n_) != 1)
            throw std::invalid_argument("galois: ℓ = " + std::to_string(ell) + " is not coprime to r̄k̄ = " + std::to_string(n_));
    }
    static std::size_t key(const std::vector<CycNumber>& s) {
        std::size_t h = 0x9e3779b97f4a7c15ULL;
        for (const auto& x : s) h ^= x.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }

    AlgebraSpec spec_;
    WeightIndex index_;
    ModularCharacters modular_;
    nt::i64 n_;
    std::vector<std::vector<CycNumber>> sig_;
    std::unordered_multimap<std::size_t, std::size_t> lookup_;
    mutable std::vector<std::optional<CycNumber>> s0_;
};

inline GaloisAction galois_permutation(nt::i64 ell, const AlgebraSpec& spec, bool with_parity = true) {
    return GaloisContext(spec).action(ell, with_parity);
}

// ---- σ_ℓ μ = C^a J^{b t(μ+ρ)} μ for ℓ = (-1)^a + b k̄ -------------------------------

struct SigmaFailure {
    nt::i64 ell = 0;
    int a = 0;
    nt::i64 b = 0;
    Weight mu, expected, got;
};

struct SigmaReport {
    std::size_t elements = 0;  // ℓ's of the form (-1)^a + b k̄
    std::size_t checked = 0;   // (ℓ, μ) pairs
    std::vector<SigmaFailure> failures;  // against C^a J^{b t(μ+ρ)} μ as written
    // against J^{b t(μ+ρ)} C^a μ = C^a J^{(-1)^a b t(μ+ρ)} μ, i.e. σ_{-1} σ_{1-bk̄} for a = 1
    std::vector<SigmaFailure> reordered_failures;
    bool ok() const { return failures.empty(); }
};

inline Weight sigma_formula(const AlgebraSpec& spec, int a, nt::i64 b, const Weight& mu) {
    Weight w = apply_J(mu, static_cast<int>(nt::mod(b * shifted_ality(mu), spec.rbar())));
    return a % 2 ? apply_C(w) : w;
}

inline Weight sigma_formula_reordered(const AlgebraSpec& spec, int a, nt::i64 b, const Weight& mu) {
    return apply_J(a % 2 ? apply_C(mu) : mu, static_cast<int>(nt::mod(b * shifted_ality(mu), spec.rbar())));
}

inline SigmaReport verify_sigma_formula(const GaloisContext& ctx) {
    const auto& spec = ctx.spec();
    const nt::i64 n = ctx.order(), kb = spec.kbar();
    SigmaReport rep;
    for (nt::i64 ell : nt::units(n)) {
        for (int a = 0; a < 2; ++a) {
            const nt::i64 base = a ? -1 : 1;
            if (nt::mod(ell - base, kb) != 0) continue;
            // when k̄ = 2 both signs apply; k̄ ≥ 3 always here
            const nt::i64 b = nt::mod((ell - base) / kb, spec.rbar());
            ++rep.elements;
            for (std::size_t m = 0; m < ctx.size(); ++m) {
                const Weight& mu = ctx.index()[m];
                const Weight want = sigma_formula(spec, a, b, mu);
                const Weight alt = sigma_formula_reordered(spec, a, b, mu);
                const Weight& got = ctx.index()[ctx.image(ell, m)];
                ++rep.checked;
                if (!(want == got)) rep.failures.push_back({ell, a, b, mu, want, got});
                if (!(alt == got)) rep.reordered_failures.push_back({ell, a, b, mu, alt, got});
            }
        }
    }
    return rep;
}

inline SigmaReport verify_sigma_formula(const AlgebraSpec& spec, std::size_t capacity = kDefaultCapacity) {
    return verify_sigma_formula(GaloisContext(spec, capacity));
}

// ---- quantum dimensions and Galois orbits of w^m ------------------------------------

inline double quantum_dimension(const AlgebraSpec& spec, const Weight& lambda) {
    return s_zero(spec, lambda) / s_zero(spec, vacuum(spec));
}

struct OrbitEntry {
    nt::i64 ell = 0;
    Weight image;
    bool plus_minus_one = false;  // ℓ ≡ ±1 mod k̄
    bool in_orbit = false;        // σ w^m ∈ [w^m] ∪ [C w^m]
    double qdim = 0.0;
};

struct OrbitReport {
    int m = 0;
    bool exception = false;  // the (3,4,2) case, where every σ keeps w^2 in [w^2]
    double qdim = 0.0;       // of w^m
    std::vector<OrbitEntry> entries;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

inline bool in_simple_current_orbit(const Weight& x, const Weight& w) {
    for (int a = 0; a < w.rbar(); ++a)
        if (apply_J(w, a) == x) return true;
    return false;
}

inline OrbitReport orbit_minimality_check(const GaloisContext& ctx, int m) {
    const auto& spec = ctx.spec();
    if (spec.k <= 2 || spec.r == 1) throw std::invalid_argument("orbit check needs k > 2 and r != 1");
    if (m < 1 || m > std::min(spec.rbar() - 2, spec.k - 2))
        throw std::invalid_argument("orbit check needs 1 <= m <= min(r̄-2, k-2)");
    OrbitReport rep;
    rep.m = m;
    rep.exception = spec.r == 3 && spec.k == 4 && m == 2;
    const Weight w = fundamental(spec, m);
    const std::size_t wi = ctx.index().index_of(w);
    rep.qdim = quantum_dimension(spec, w);
    const nt::i64 kb = spec.kbar();
    for (nt::i64 ell : nt::units(ctx.order())) {
        OrbitEntry e;
        e.ell = ell;
        e.image = ctx.index()[ctx.image(ell, wi)];
        e.plus_minus_one = nt::mod(ell - 1, kb) == 0 || nt::mod(ell + 1, kb) == 0;
        e.in_orbit = in_simple_current_orbit(e.image, w) || in_simple_current_orbit(e.image, apply_C(w));
        e.qdim = quantum_dimension(spec, e.image);
        const std::string tag = "ℓ=" + std::to_string(ell) + " σw=" + to_string(e.image);
        if (rep.exception) {
            // "fixes" at the level of the class [w^2]: σ_3 w^2 = J^2 w^2, for one
            if (!in_simple_current_orbit(e.image, w)) rep.violations.push_back(tag + " leaves [w^2]");
        } else if (e.plus_minus_one) {
            if (!e.in_orbit) rep.violations.push_back(tag + " leaves [w^m] ∪ [Cw^m]");
        } else {
            if (e.in_orbit) rep.violations.push_back(tag + " stays in [w^m] ∪ [Cw^m]");
            if (!(e.qdim > rep.qdim * (1.0 + 1e-9))) rep.violations.push_back(tag + " quantum dimension not larger");
        }
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

inline OrbitReport orbit_minimality_check(int m, const AlgebraSpec& spec) {
    return orbit_minimality_check(GaloisContext(spec), m);
}

/// {ℓ ∈ (Z/N)^× : σ_ℓ λ = λ} at the permutation level.
inline std::vector<nt::i64> permutation_stabilizer(const GaloisContext& ctx, const Weight& lambda) {
    const std::size_t li = ctx.index().index_of(lambda);
    std::vector<nt::i64> out;
    for (nt::i64 ell : nt::units(ctx.order()))
        if (ctx.image(ell, li) == li) out.push_back(ell);
    return out;
}

// ---- the fields L and K ---------------------------------------------------------------

struct FieldReport {
    nt::i64 N = 0;
    std::vector<nt::i64> l_stabilizer;  // in (Z/N)^×
    bool L_full = false;                // stabilizer trivial, so L = Q_N
    nt::i64 L_order = 0;                // conductor of L (Q_{2m} = Q_m for odd m)
    std::vector<nt::i64> k_stabilizer;  // in (Z/4N)^×
    std::string K_descriptor;           // computed from the stabilizer
    std::string K_predicted;            // the closed-form rule
    bool consistent() const { return L_full && K_descriptor == K_predicted; }
};

/// Smallest d | n with every unit ≡ 1 mod d inside H.
inline nt::i64 fixed_field_conductor(nt::i64 n, const std::vector<nt::i64>& h) {
    for (nt::i64 d : nt::divisors(n)) {
        bool all = true;
        for (nt::i64 u : nt::units(n))
            if (nt::mod(u - 1, d) == 0 && !std::binary_search(h.begin(), h.end(), u)) {
                all = false;
                break;
            }
        if (all) return d;
    }
    return n;
}

inline std::string field_name(nt::i64 n, const std::string& ext = "") { return "Q_" + std::to_string(n) + ext; }

inline std::string predicted_k_field(const AlgebraSpec& spec) {
    const nt::i64 n = spec.chi_order();
    if (spec.r % 4 != 1 || spec.k % 2 == 0) return field_name(n);
    const nt::i64 t = nt::mod(static_cast<nt::i64>(spec.rbar()) * spec.k, 8);
    if (t == 2) return field_name(n, "[sqrt2]");
    if (t == 6) return field_name(n, "[sqrt-2]");
    return "unclassified";
}

inline FieldReport field_identification(const GaloisContext& ctx) {
    const auto& spec = ctx.spec();
    if (spec.k <= 2 || spec.r == 1) throw std::invalid_argument("field identification covers k > 2 and r != 1 only");
    FieldReport rep;
    rep.N = ctx.order();
    const nt::i64 big = 4 * rep.N;
    for (nt::i64 ell : nt::units(rep.N))
        if (ctx.fixes_characters(ell)) rep.l_stabilizer.push_back(ell);
    rep.L_order = fixed_field_conductor(rep.N, rep.l_stabilizer);
    rep.L_full = rep.l_stabilizer == std::vector<nt::i64>{1};

    for (nt::i64 ell : nt::units(big)) {
        if (!std::binary_search(rep.l_stabilizer.begin(), rep.l_stabilizer.end(), nt::mod(ell, rep.N))) continue;
        bool fixed = true;
        for (std::size_t m = 0; m < ctx.size() && fixed; ++m) {
            const auto& s = ctx.s_zero(m);
            fixed = s.galois(GaloisElement(static_cast<int>(big), ell)) == s;
        }
        if (fixed) rep.k_stabilizer.push_back(ell);
    }
    // compare against the subgroups of Gal(Q_4N / Q_N) fixing Q_N, Q_N[√2], Q_N[√-2]
    auto over = [&](std::initializer_list<int> residues) {
        std::vector<nt::i64> out;
        for (nt::i64 u : nt::units(big)) {
            if (nt::mod(u - 1, rep.N) != 0) continue;
            if (std::find(residues.begin(), residues.end(), static_cast<int>(nt::mod(u, 8))) != residues.end())
                out.push_back(u);
        }
        return out;
    };
    if (!rep.L_full) {
        rep.K_descriptor = "L smaller than Q_" + std::to_string(rep.N);
    } else if (rep.k_stabilizer == over({1, 3, 5, 7})) {
        rep.K_descriptor = field_name(rep.N);
    } else if (rep.k_stabilizer == over({1, 7})) {
        rep.K_descriptor = field_name(rep.N, "[sqrt2]");
    } else if (rep.k_stabilizer == over({1, 3})) {
        rep.K_descriptor = field_name(rep.N, "[sqrt-2]");
    } else if (rep.k_stabilizer == over({1, 5})) {
        rep.K_descriptor = field_name(rep.N, "[i]");
    } else {
        rep.K_descriptor = "index " + std::to_string(over({1, 3, 5, 7}).size() / std::max<std::size_t>(1, rep.k_stabilizer.size())) +
                           " over Q_" + std::to_string(rep.N);
    }
    rep.K_predicted = predicted_k_field(spec);
    return rep;
}

inline FieldReport field_identification(const AlgebraSpec& spec) { return field_identification(GaloisContext(spec)); }

}  // namespace verlinde
