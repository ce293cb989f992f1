#pragma once

// The NZ(d) residue condition on partition labels, factor weights, and the
// fixed-point factorisation of χ_λ at J^d-fixed points φ:
//
//   χ_λ(φ) = sgn π · ξ · (-1)^{t(λ)(1-d/r̄)} · Π_i χ'_{λ'(i)}(φ')
//
// with primes denoting A_{d-1} at level kd/r̄. The root of unity ξ is
// resolved numerically-free: for each λ we search ε ∈ {±1} and c mod k̄'
// with ξ = ε ζ_{k̄'}^{c t'(φ'+ρ')} holding exactly at every fixed point.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "verlinde/characters.hpp"
#include "verlinde/cyclotomic.hpp"
#include "verlinde/errors.hpp"
#include "verlinde/weight_lattice.hpp"

namespace verlinde {

struct NZDecomposition {
    int d = 1;
    int q = 1;  // r̄/d
    // classes[i-1] = ℓ^{(i)}_1 < ... < ℓ^{(i)}_d (1-based slots)
    std::vector<std::vector<int>> classes;
    std::vector<int> pi;  // pi[m-1] = π(m)
    int pi_sign = 1;
    std::vector<Weight> factors;  // λ'^{(i)} in P_+^{d-1, kd/r̄}
};

struct NZResult {
    bool member = false;
    std::optional<NZDecomposition> decomposition;
    // when not a member: the first residue class with the wrong size
    int bad_class = 0;
    int bad_count = 0;
};

inline void require_period(const AlgebraSpec& spec, int d) {
    if (!fixed_period_allowed(spec, d)) {
        std::ostringstream os;
        os << "invalid d=" << d << " for A_" << spec.r << " level " << spec.k << ": need d | " << spec.rbar() << " and "
           << spec.rbar() << "/d | " << spec.k;
        throw std::invalid_argument(os.str());
    }
}

inline int permutation_sign(const std::vector<int>& perm1) {
    // perm1 is a permutation of 1..n
    std::vector<char> seen(perm1.size(), 0);
    int sign = 1;
    for (std::size_t i = 0; i < perm1.size(); ++i) {
        if (seen[i]) continue;
        std::size_t len = 0;
        for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm1[j] - 1)) {
            seen[j] = 1;
            ++len;
        }
        if (len % 2 == 0) sign = -sign;
    }
    return sign;
}

/// Condition (*): for each i = 1..r̄/d exactly d slots ℓ have λ(ℓ) ≡ -i mod r̄/d.
inline NZResult nz_test(const AlgebraSpec& spec, const Weight& lambda, int d) {
    require_valid(spec, lambda);
    require_period(spec, d);
    const int rb = spec.rbar();
    const int q = rb / d;
    const auto lab = partition_labels(lambda).values;
    NZResult res;
    std::vector<std::vector<int>> classes(static_cast<std::size_t>(q));
    for (int l = 1; l <= rb; ++l) {
        // λ(ℓ) ≡ -i (mod q) with i in 1..q
        int i = static_cast<int>(nt::mod(-lab[l - 1], q));
        if (i == 0) i = q;
        classes[i - 1].push_back(l);
    }
    for (int i = 1; i <= q; ++i)
        if (static_cast<int>(classes[i - 1].size()) != d) {
            res.bad_class = i;
            res.bad_count = static_cast<int>(classes[i - 1].size());
            return res;
        }
    NZDecomposition dec;
    dec.d = d;
    dec.q = q;
    dec.pi.assign(static_cast<std::size_t>(rb), 0);
    for (int i = 1; i <= q; ++i)
        for (int j = 1; j <= d; ++j) dec.pi[i + (j - 1) * q - 1] = classes[i - 1][j - 1];
    dec.pi_sign = permutation_sign(dec.pi);
    const AlgebraSpec t = truncated_spec(spec, d);
    for (int i = 1; i <= q; ++i) {
        const auto& cl = classes[i - 1];
        std::vector<int> w(static_cast<std::size_t>(d), 0);
        int sum = 0;
        for (int j = 1; j <= d - 1; ++j) {
            w[j] = (lab[cl[j - 1] - 1] - lab[cl[j] - 1]) / q - 1;
            sum += w[j];
        }
        w[0] = t.k - sum;
        Weight f(std::move(w));
        if (!is_valid(t, f)) throw std::logic_error("factor weight " + to_string(f) + " is not integrable");
        dec.factors.push_back(std::move(f));
    }
    dec.classes = std::move(classes);
    res.member = true;
    res.decomposition = std::move(dec);
    return res;
}

/// Outcome of checking the factorisation for one λ against every J^d-fixed φ.
struct FactorizationRecord {
    Weight lambda;
    int d = 1;
    bool member = false;
    // dichotomy: non-members vanish at every φ; members factorise at every φ
    bool dichotomy_holds = false;
    // Resolved phase: ξ = epsilon * ζ_{k̄'}^{c t'(φ'+ρ')}, the same for all φ.
    bool exact_holds = false;
    int epsilon = 0;
    int c = -1;
    int candidate_count = 0;  // number of (ε, c) consistent with all φ
    bool nonzero_at_canonical = false;
    double s_residual = 0.0;  // max |S_{λφ} - RHS| over φ
    std::vector<std::pair<Weight, bool>> nonzero;  // (φ, χ_λ(φ) ≠ 0)
    std::string mismatch;
};

/// Shared state for verifying many λ at the fixed points of one J^d.
class FixedPointFactorizer {
public:
    FixedPointFactorizer(const AlgebraSpec& spec, int d)
        : spec_((require_period(spec, d), spec)), d_(d), small_spec_(truncated_spec(spec, d)), big_(spec),
          small_(small_spec_) {
        const auto logsin = detail::log_sine_table(spec.kbar());
        const auto logsin_small = detail::log_sine_table(small_spec_.kbar());
        for (const auto& phi : fixed_points(spec, d)) {
            Point p;
            p.phi = phi;
            p.truncated = truncate_fixed_point(spec, phi, d);
            p.shifted = shifted_ality(p.truncated);
            p.s0 = detail::s_zero_from_table(spec, phi, logsin);
            p.s0_small = detail::s_zero_from_table(small_spec_, p.truncated, logsin_small);
            p.column = numeric_column(spec, phi);
            p.small_column = numeric_column(small_spec_, p.truncated);
            points_.push_back(std::move(p));
        }
        canonical_ = canonical_fixed_point(spec, d);
    }

    const AlgebraSpec& spec() const { return spec_; }
    const AlgebraSpec& truncated() const { return small_spec_; }
    int d() const { return d_; }
    std::size_t fixed_point_count() const { return points_.size(); }
    const ModularCharacters& big() const { return big_; }
    const ModularCharacters& small() const { return small_; }

    /// |S_{0φ} - (r̄/k̄)^{(r̄/d-1)/2} S'_{0φ'}^{r̄/d}| maximised over φ.
    double s_zero_residual() const {
        const int q = spec_.rbar() / d_;
        const double pref = std::pow(static_cast<double>(spec_.rbar()) / spec_.kbar(), 0.5 * (q - 1));
        double worst = 0.0;
        for (const auto& p : points_) worst = std::max(worst, std::abs(p.s0 - pref * std::pow(p.s0_small, q)));
        return worst;
    }

    FactorizationRecord verify(const Weight& lambda) const {
        FactorizationRecord rec;
        rec.lambda = lambda;
        rec.d = d_;
        const auto nz = nz_test(spec_, lambda, d_);
        rec.member = nz.member;
        std::vector<CycNumber> lhs;
        lhs.reserve(points_.size());
        for (const auto& p : points_) {
            lhs.push_back(big_.chi(lambda, p.phi));
            rec.nonzero.emplace_back(p.phi, !lhs.back().is_zero());
            if (p.phi == canonical_) rec.nonzero_at_canonical = rec.nonzero.back().second;
        }
        if (!nz.member) {
            rec.dichotomy_holds = std::none_of(rec.nonzero.begin(), rec.nonzero.end(), [](auto& x) { return x.second; });
            if (!rec.dichotomy_holds) rec.mismatch = "non-member with a nonzero value at a fixed point";
            return rec;
        }
        const auto& dec = *nz.decomposition;
        const int q = dec.q;
        const std::int64_t t = ality_raw(lambda);
        const int sign = dec.pi_sign * (((t / q) * (q - 1)) % 2 == 0 ? 1 : -1);
        const int kb_small = small_spec_.kbar();
        const int big_order = static_cast<int>(nt::lcm(spec_.chi_order(), small_spec_.chi_order() * 1LL));
        const int order = static_cast<int>(nt::lcm(big_order, kb_small));
        // candidates (ε, c) still consistent
        std::vector<std::pair<int, int>> cand;
        for (int e : {1, -1})
            for (int c = 0; c < kb_small; ++c) cand.emplace_back(e, c);
        for (std::size_t i = 0; i < points_.size(); ++i) {
            const auto& p = points_[i];
            CycNumber prod = CycNumber::integer(sign, small_spec_.chi_order());
            for (const auto& f : dec.factors) prod = prod * small_.chi(f, p.truncated);
            const CycNumber x = lhs[i].embed(order);
            const CycNumber y = prod.embed(order);
            if (y.is_zero() || x.is_zero()) {
                if (!(y.is_zero() && x.is_zero())) {
                    rec.mismatch = "zero pattern differs at φ=" + to_string(p.phi);
                    cand.clear();
                }
                continue;
            }
            std::vector<std::pair<int, int>> keep;
            for (auto [e, c] : cand) {
                const std::int64_t expo = nt::mod(static_cast<std::int64_t>(c) * p.shifted, kb_small) * (order / kb_small);
                CycNumber z = y.times_root_of_unity(expo);
                if (e < 0) z = -z;
                if (z == x) keep.emplace_back(e, c);
            }
            cand = std::move(keep);
            if (cand.empty() && rec.mismatch.empty()) rec.mismatch = "no constant phase fits at φ=" + to_string(p.phi);
        }
        rec.candidate_count = static_cast<int>(cand.size());
        rec.exact_holds = !cand.empty();
        if (rec.exact_holds) {
            rec.epsilon = cand.front().first;
            rec.c = cand.front().second;
        }
        rec.dichotomy_holds = rec.exact_holds && rec.nonzero_at_canonical;
        if (rec.exact_holds) {
            // S_{λφ} = sign ξ (r̄/k̄)^{(q-1)/2} Π S'_{λ'(i) φ'} in floating point
            const double pref = std::pow(static_cast<double>(spec_.rbar()) / spec_.kbar(), 0.5 * (q - 1));
            const SchurShape shape = schur_shape(lambda);
            std::vector<SchurShape> fshapes;
            for (const auto& f : dec.factors) fshapes.push_back(schur_shape(f));
            for (const auto& p : points_) {
                const auto s_lhs = chi_numeric(spec_, shape, chi_phase(spec_, lambda, p.phi), p.column) * p.s0;
                std::complex<double> s_rhs = static_cast<double>(sign * rec.epsilon) * pref *
                                             numeric_root(static_cast<std::int64_t>(rec.c) * p.shifted, kb_small);
                for (std::size_t i = 0; i < dec.factors.size(); ++i)
                    s_rhs *= chi_numeric(small_spec_, fshapes[i], chi_phase(small_spec_, dec.factors[i], p.truncated),
                                         p.small_column) *
                             p.s0_small;
                rec.s_residual = std::max(rec.s_residual, std::abs(s_lhs - s_rhs));
            }
        }
        return rec;
    }

private:
    struct Point {
        Weight phi;
        Weight truncated;
        std::int64_t shifted = 0;  // t'(φ'+ρ')
        double s0 = 0, s0_small = 0;
        NumericColumn column, small_column;
    };
    AlgebraSpec spec_;
    int d_;
    AlgebraSpec small_spec_;
    ModularCharacters big_, small_;
    std::vector<Point> points_;
    Weight canonical_;
};

inline FactorizationRecord factorization_verify(const AlgebraSpec& spec, const Weight& lambda, int d) {
    return FixedPointFactorizer(spec, d).verify(lambda);
}

struct FixedPointCount {
    Weight phi;
    std::size_t nonzero_count = 0;
};

struct NZCensus {
    int r = 0, k = 0, d = 1;
    std::size_t nz = 0;          // |NZ(d)|
    std::size_t ality_pass = 0;  // t(λ) ≡ 0 mod r̄/d
    std::size_t total = 0;       // |P_+|
    std::size_t ality_pass_all_zero = 0;  // pass the ality test yet vanish at every φ
    std::vector<FixedPointCount> per_fixed_point;
};

/// Tallies over P_+^{r,k}; nonzero counts are exact zero tests of χ_λ(φ).
inline NZCensus nz_census(const AlgebraSpec& spec, int d, std::size_t capacity = kDefaultCapacity) {
    require_period(spec, d);
    NZCensus c;
    c.r = spec.r;
    c.k = spec.k;
    c.d = d;
    const int q = spec.rbar() / d;
    const auto all = enumerate(spec, capacity);
    const auto fps = fixed_points(spec, d);
    ModularCharacters mc(spec);
    c.total = all.size();
    for (const auto& phi : fps) c.per_fixed_point.push_back({phi, 0});
    for (const auto& l : all) {
        if (nz_test(spec, l, d).member) ++c.nz;
        bool any = false;
        for (std::size_t i = 0; i < fps.size(); ++i)
            if (!mc.chi(l, fps[i]).is_zero()) {
                ++c.per_fixed_point[i].nonzero_count;
                any = true;
            }
        if (ality(l) % q != 0) continue;
        ++c.ality_pass;
        if (!any) ++c.ality_pass_all_zero;
    }
    return c;
}

}  // namespace verlinde
