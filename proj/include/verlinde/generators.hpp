#pragma once

#include <algorithm>
#include <cctype>
#include <atomic>
#include <cstdint>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "verlinde/characters.hpp"
#include "verlinde/cyclotomic.hpp"
#include "verlinde/errors.hpp"
#include "verlinde/fixed_points.hpp"
#include "verlinde/fusion.hpp"
#include "verlinde/numtheory.hpp"
#include "verlinde/weight_lattice.hpp"

namespace verlinde {

struct GeneratorCheck {
    bool generator = false;
    // two distinct weights with identical signatures when not a generator
    std::optional<std::pair<Weight, Weight>> collision;
};

// Signatures χ_γ(μ) are first compared through the ring map Z[ξ_N] -> F_p,
// ξ_N -> ω, for one prime p ≡ 1 (mod N). Different residues mean different
// values; equal residues are settled exactly in CycNumber, so every class id
// below is an exact equality class.
class SignatureTable {
public:
    explicit SignatureTable(const AlgebraSpec& spec, std::size_t capacity = kDefaultCapacity)
        : spec_(spec), index_(spec, capacity), modular_(spec) {
        const int n = spec.chi_order();
        p_ = nt::primes_one_mod(static_cast<nt::u64>(n), 1).front();
        const nt::u64 omega = nt::primitive_root_of_unity(static_cast<nt::u64>(n), p_);
        omega_pow_.resize(static_cast<std::size_t>(n));
        omega_pow_[0] = 1;
        for (int j = 1; j < n; ++j) omega_pow_[j] = nt::mulmod(omega_pow_[j - 1], omega, p_);
        const int kb = spec.kbar();
        const std::size_t m = index_.size();
        eh_.resize(m * 2 * static_cast<std::size_t>(kb));
        conj_.resize(m);
        ality_.resize(m);
        shifted_.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            const Weight& mu = index_[i];
            bool complement = false;
            const auto expo = detail::evaluation_exponents(spec, mu, complement);
            std::vector<nt::u64> set(expo.size());
            // x = ξ_k̄^{-m} = ξ_N^{-r̄ m}
            for (std::size_t a = 0; a < expo.size(); ++a)
                set[a] = omega_pow_[static_cast<std::size_t>(nt::mod(-static_cast<nt::i64>(expo[a]) * spec.rbar(), n))];
            nt::u64* e = eh_.data() + i * 2 * kb;
            const nt::u64 p = p_;
            detail::symmetric_from_set<nt::u64>(
                set, complement, kb, 0, 1, [p](nt::u64 x, nt::u64 y) { return nt::mulmod(x, y, p); },
                [p](nt::u64 x, nt::u64 y) { return nt::addmod(x, y, p); },
                [p](nt::u64 x) { return x == 0 ? 0 : p - x; }, e, e + kb);
            conj_[i] = index_.index_of(apply_C(mu));
            ality_[i] = nt::mod(ality_raw(mu), n);
            shifted_[i] = nt::mod(shifted_ality(mu), n);
        }
        ids_.resize(m);
    }

    SignatureTable(const SignatureTable&) = delete;
    SignatureTable& operator=(const SignatureTable&) = delete;

    const AlgebraSpec& spec() const { return spec_; }
    const WeightIndex& index() const { return index_; }
    std::size_t size() const { return index_.size(); }
    const Weight& weight(std::size_t i) const { return index_[i]; }
    std::size_t conj_index(std::size_t i) const { return conj_[i]; }
    nt::u64 prime() const { return p_; }
    const ModularCharacters& modular() const { return modular_; }

    /// Image of χ_γ(μ) in F_p.
    nt::u64 residue(const Weight& gamma, std::size_t mu) const {
        thread_local std::vector<nt::u64> m;
        return residue(schur_shape(gamma), nt::mod(ality_raw(gamma), spec_.chi_order()), mu, m);
    }

    std::vector<nt::u64> residue_row(const Weight& gamma) const {
        const SchurShape shape = schur_shape(gamma);
        const nt::i64 t = nt::mod(ality_raw(gamma), spec_.chi_order());
        std::vector<nt::u64> row(size()), m;
        for (std::size_t mu = 0; mu < size(); ++mu) row[mu] = residue(shape, t, mu, m);
        return row;
    }

    /// Exact class ids of μ ↦ χ_γ(μ).
    std::vector<std::uint32_t> exact_ids(const Weight& gamma) const { return settle(gamma, residue_row(gamma)); }

    /// Cached exact ids for a weight of the table.
    const std::vector<std::uint32_t>& ids(std::size_t gamma) const {
        {
            std::lock_guard<std::mutex> lock(mu_);
            if (!ids_[gamma].empty()) return ids_[gamma];
        }
        auto row = exact_ids(index_[gamma]);
        std::lock_guard<std::mutex> lock(mu_);
        if (ids_[gamma].empty()) ids_[gamma] = std::move(row);
        return ids_[gamma];
    }

    /// Fill ids for every weight, reusing one Schur evaluation per J,C orbit.
    void build_all_ids() {
        const std::size_t m = size();
        const int n = spec_.chi_order();
        const int rb = spec_.rbar();
        std::vector<char> done(m, 0);
        for (std::size_t g = 0; g < m; ++g) {
            if (done[g] || !ids_[g].empty()) {
                done[g] = 1;
                continue;
            }
            const auto base = residue_row(index_[g]);
            Weight w = index_[g];
            for (int a = 0; a < rb; ++a) {
                // χ_{J^a γ}(μ) = ξ_r̄^{a t(μ)} χ_γ(μ) and χ_{Cλ}(μ) = χ_λ(Cμ)
                const std::size_t j = index_.index_of(w);
                if (!done[j]) {
                    std::vector<nt::u64> row(m);
                    for (std::size_t mu = 0; mu < m; ++mu) {
                        const auto e = static_cast<std::size_t>(nt::mod(static_cast<nt::i64>(a) * spec_.kbar() * ality_[mu], n));
                        row[mu] = nt::mulmod(base[mu], omega_pow_[e], p_);
                    }
                    const std::size_t jc = conj_[j];
                    if (!done[jc]) {
                        std::vector<nt::u64> crow(m);
                        for (std::size_t mu = 0; mu < m; ++mu) crow[mu] = row[conj_[mu]];
                        ids_[jc] = settle(index_[jc], crow);
                        done[jc] = 1;
                    }
                    if (!done[j]) {
                        ids_[j] = settle(index_[j], row);
                        done[j] = 1;
                    }
                }
                w = apply_J(w, 1);
            }
        }
    }

    /// First exact collision of χ_γ, scanning μ in order; nullopt if injective.
    std::optional<std::pair<std::size_t, std::size_t>> first_collision(const Weight& gamma) const {
        const SchurShape shape = schur_shape(gamma);
        const nt::i64 t = nt::mod(ality_raw(gamma), spec_.chi_order());
        std::unordered_multimap<nt::u64, std::size_t> seen;
        seen.reserve(size());
        std::vector<nt::u64> m;
        for (std::size_t mu = 0; mu < size(); ++mu) {
            const nt::u64 r = residue(shape, t, mu, m);
            auto [lo, hi] = seen.equal_range(r);
            if (lo != hi) {
                const CycNumber x = modular_.chi(gamma, index_[mu]);
                for (auto it = lo; it != hi; ++it)
                    if (modular_.chi(gamma, index_[it->second]) == x) return std::make_pair(it->second, mu);
            }
            seen.emplace(r, mu);
        }
        return std::nullopt;
    }

    GeneratorCheck is_generator(const std::vector<Weight>& gamma) const {
        GeneratorCheck res;
        for (const auto& g : gamma) require_valid(spec_, g);
        if (gamma.size() == 1) {
            const auto c = first_collision(gamma.front());
            res.generator = !c;
            if (c) res.collision = std::make_pair(index_[c->first], index_[c->second]);
            return res;
        }
        std::vector<std::vector<std::uint32_t>> rows;
        std::vector<const std::vector<std::uint32_t>*> ptr;
        for (const auto& g : gamma) {
            if (index_.contains(g)) {
                ptr.push_back(&ids(index_.index_of(g)));
            } else {
                rows.push_back(exact_ids(g));
                ptr.push_back(&rows.back());
            }
        }
        // signature tuples through a map
        std::unordered_map<std::vector<std::uint32_t>, std::size_t, TupleHash> seen;
        std::vector<std::uint32_t> key(gamma.size());
        for (std::size_t mu = 0; mu < size(); ++mu) {
            for (std::size_t i = 0; i < gamma.size(); ++i) key[i] = (*ptr[i])[mu];
            auto [it, fresh] = seen.emplace(key, mu);
            if (!fresh) {
                res.collision = std::make_pair(index_[it->second], index_[mu]);
                return res;
            }
        }
        res.generator = true;
        return res;
    }

private:
    struct TupleHash {
        std::size_t operator()(const std::vector<std::uint32_t>& v) const {
            std::uint64_t h = 1469598103934665603ull;
            for (auto x : v) h = (h ^ x) * 1099511628211ull;
            return static_cast<std::size_t>(h);
        }
    };

    nt::u64 residue(const SchurShape& shape, nt::i64 t, std::size_t mu, std::vector<nt::u64>& m) const {
        const int n = spec_.chi_order();
        const int kb = spec_.kbar();
        const nt::u64 phase = omega_pow_[static_cast<std::size_t>(nt::mod(t * shifted_[mu], n))];
        const int sz = shape.size();
        if (sz == 0) return phase;
        const nt::u64* e = eh_.data() + mu * 2 * kb;
        detail::fill_jacobi_trudi<nt::u64>(shape, e, e + kb, 0, m);
        return nt::mulmod(detail::det_mod(m, sz, p_), phase, p_);
    }

    // residue classes, split exactly where residues agree
    std::vector<std::uint32_t> settle(const Weight& gamma, const std::vector<nt::u64>& row) const {
        const std::size_t m = row.size();
        std::unordered_map<nt::u64, std::vector<std::size_t>> groups;
        groups.reserve(m);
        for (std::size_t mu = 0; mu < m; ++mu) groups[row[mu]].push_back(mu);
        std::vector<std::uint32_t> ids(m);
        std::uint32_t next = 0;
        for (auto& [r, members] : groups) {
            if (members.size() == 1) {
                ids[members[0]] = next++;
                continue;
            }
            std::unordered_map<CycNumber, std::uint32_t, CycNumberHash> exact;
            for (auto mu : members) {
                auto [it, fresh] = exact.emplace(modular_.chi(gamma, index_[mu]), next);
                if (fresh) ++next;
                ids[mu] = it->second;
            }
        }
        return ids;
    }

    AlgebraSpec spec_;
    WeightIndex index_;
    ModularCharacters modular_;
    nt::u64 p_ = 0;
    std::vector<nt::u64> omega_pow_;
    std::vector<nt::u64> eh_;
    std::vector<std::size_t> conj_;
    std::vector<nt::i64> ality_, shifted_;
    mutable std::mutex mu_;
    mutable std::vector<std::vector<std::uint32_t>> ids_;
};

inline GeneratorCheck is_generator(const AlgebraSpec& spec, const std::vector<Weight>& gamma,
                                   std::size_t capacity = kDefaultCapacity) {
    return SignatureTable(spec, capacity).is_generator(gamma);
}

// ---- bounds and predicates ----------------------------------------------------

/// One clause of the generator certificate: some γ ∈ Γ ∩ NZ(d) with
/// gcd(D, t(γ)) = target (or D | t(γ) for the extra clause).
struct RankRequirement {
    int d = 1;
    int prime = 0;  // 0 for the D ≠ r̄ clause
    int power = 0;
    nt::i64 gcd_target = 1;

    bool satisfied_by(const AlgebraSpec& spec, const Weight& g, nt::i64 D) const {
        if (nt::gcd(D, nt::mod(ality_raw(g), D)) != gcd_target) return false;
        return nz_test(spec, g, d).member;
    }
};

struct LowerBound {
    int bound = 0;
    nt::i64 D = 1;
    std::vector<RankRequirement> requirements;
};

inline LowerBound rank_lower_bound(const AlgebraSpec& spec) {
    LowerBound lb;
    const int rb = spec.rbar();
    lb.D = nt::gcd(rb, spec.k);
    for (auto [p, a] : nt::factorize(lb.D)) {
        nt::i64 pl = 1;
        for (int l = 1; l <= a; ++l) {
            pl *= p;
            RankRequirement q;
            q.d = static_cast<int>(rb * pl / lb.D);
            q.prime = static_cast<int>(p);
            q.power = l;
            q.gcd_target = lb.D / pl;
            lb.requirements.push_back(q);
        }
    }
    if (lb.D != rb) {
        RankRequirement q;
        q.d = static_cast<int>(rb / lb.D);
        q.gcd_target = lb.D;
        lb.requirements.push_back(q);
    }
    lb.bound = static_cast<int>(lb.requirements.size());
    return lb;
}

struct DivisorGenerators {
    std::vector<Weight> div;
    std::vector<Weight> div_tau;
};

inline DivisorGenerators divisor_generators(const AlgebraSpec& spec) {
    DivisorGenerators g;
    const int rb = spec.rbar(), kb = spec.kbar(), k = spec.k;
    for (int d = 1; 2 * d <= rb && d <= spec.r; ++d)
        if (kb % d == 0) g.div.push_back(fundamental(spec, d));
    if (rb % k == 0) {
        // k = r̄ has no w^k; the hook k w^1 = J0 stands in for it
        g.div_tau.push_back(k <= spec.r ? fundamental(spec, k) : apply_J(vacuum(spec), 1));
    }
    for (int d = 1; 2 * d <= k && d <= spec.r; ++d)
        if (kb % d == 0 && !(rb % k == 0 && d == k)) g.div_tau.push_back(fundamental(spec, d));
    return g;
}

/// Hook ℓ w^1 + w^{d-ℓ}, 1 ≤ ℓ ≤ d; nullopt when the level is too small.
inline std::optional<Weight> hook(const AlgebraSpec& spec, int ell, int d) {
    std::vector<int> tail(static_cast<std::size_t>(spec.r), 0);
    tail[0] += ell;
    if (d - ell > 0) tail[static_cast<std::size_t>(d - ell - 1)] += 1;
    int s = 0;
    for (int x : tail) s += x;
    if (s > spec.k) return std::nullopt;
    return from_nonzero_labels(spec, tail);
}

/// {w^1} generates iff every prime p | k̄ has 2p > min(r̄, k) and (r̄ | k or gcd(r̄, k) = 1).
inline bool corollary1_predicate(const AlgebraSpec& spec) {
    const nt::i64 m = std::min(spec.rbar(), spec.k);
    for (auto p : nt::prime_divisors(spec.kbar()))
        if (2 * p <= m) return false;
    return spec.k % spec.rbar() == 0 || nt::gcd(spec.rbar(), spec.k) == 1;
}

/// Predicted generation by Γ = {w^1..w^m}.
inline bool prefix_generates_predicate(const AlgebraSpec& spec, int m) {
    const auto g = divisor_generators(spec);
    auto inside = [&](const std::vector<Weight>& s) {
        for (const auto& w : s) {
            bool found = false;
            for (int i = 1; i <= m && i <= spec.r; ++i)
                if (w == fundamental(spec, i)) found = true;
            if (!found) return false;
        }
        return true;
    };
    return inside(g.div) || inside(g.div_tau);
}

/// Rank-level transfer: Γ ↦ { J̃^{a_i} τγ^i } with gcd(a_i r̄ + t(γ^i), k) = gcd(t(γ^i), r̄, k).
inline std::vector<Weight> twisted_transpose(const AlgebraSpec& spec, const std::vector<Weight>& gamma) {
    const AlgebraSpec dual = dual_spec(spec);
    std::vector<Weight> out;
    for (const auto& g : gamma) {
        const nt::i64 t = ality_raw(g);
        const nt::i64 want = nt::gcd(nt::gcd(t, spec.rbar()), spec.k);
        int a = 0;
        while (nt::gcd(static_cast<nt::i64>(a) * spec.rbar() + t, spec.k) != want) ++a;
        out.push_back(apply_J(tau_dual(spec, g), nt::mod(a, dual.rbar())));
    }
    return out;
}

// ---- rank search ------------------------------------------------------------------

struct RankOptions {
    int max_size = 3;
    bool fundamental_only = false;
    // report every minimal basis; otherwise stop at the first one found
    bool all_witnesses = true;
    unsigned jobs = 1;
    std::size_t capacity = kDefaultCapacity;
};

struct RankResult {
    int rank = -1;  // -1 when above max_size
    int lower_bound = 0;
    int upper_bound = 0;
    std::vector<std::vector<Weight>> witnesses;  // C-orbit representatives
    std::uint64_t sets_tested = 0;
    std::uint64_t sets_pruned = 0;
};

namespace detail {

struct RankSearch {
    const SignatureTable& table;
    std::vector<std::size_t> cand;      // candidate weight indices
    std::vector<int> req;               // requirement satisfied by candidate, -1 if none
    int nreq = 0;
    int size = 0;
    std::vector<std::size_t> pos_of;    // candidate position by weight index, or npos

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    bool c_canonical(const std::vector<std::size_t>& chosen) const {
        std::vector<std::size_t> a(chosen), b;
        for (auto i : chosen) b.push_back(table.conj_index(i));
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        return a <= b;
    }

    // refine groups (flat list, boundaries) by ids of weight g; keep non-singletons
    static void refine(const std::vector<std::uint32_t>& ids, const std::vector<std::size_t>& flat,
                       const std::vector<std::size_t>& bounds, std::vector<std::size_t>& out_flat,
                       std::vector<std::size_t>& out_bounds) {
        out_flat.clear();
        out_bounds.assign(1, 0);
        std::vector<std::pair<std::uint32_t, std::size_t>> tmp;
        for (std::size_t g = 0; g + 1 < bounds.size(); ++g) {
            tmp.clear();
            for (std::size_t i = bounds[g]; i < bounds[g + 1]; ++i) tmp.emplace_back(ids[flat[i]], flat[i]);
            std::sort(tmp.begin(), tmp.end());
            for (std::size_t i = 0; i < tmp.size();) {
                std::size_t j = i;
                while (j < tmp.size() && tmp[j].first == tmp[i].first) ++j;
                if (j - i > 1) {
                    for (std::size_t x = i; x < j; ++x) out_flat.push_back(tmp[x].second);
                    out_bounds.push_back(out_flat.size());
                }
                i = j;
            }
        }
    }

    static bool separates(const std::vector<std::uint32_t>& ids, const std::vector<std::size_t>& flat,
                          const std::vector<std::size_t>& bounds, std::vector<std::uint32_t>& stamp,
                          std::uint32_t& serial) {
        for (std::size_t g = 0; g + 1 < bounds.size(); ++g) {
            ++serial;
            for (std::size_t i = bounds[g]; i < bounds[g + 1]; ++i) {
                const auto id = ids[flat[i]];
                if (stamp[id] == serial) return false;
                stamp[id] = serial;
            }
        }
        return true;
    }

    // all generating sets of `size` whose first member is cand[first]
    void search_from(std::size_t first, std::vector<std::vector<std::size_t>>& found, std::uint64_t& tested,
                     std::uint64_t& pruned, const std::atomic<bool>& stop) const {
        std::vector<std::size_t> flat, bounds;
        // initial groups: all weights, one group
        std::vector<std::size_t> all(table.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        std::vector<std::size_t> b0{0, all.size()};
        refine(table.ids(cand[first]), all, b0, flat, bounds);
        std::vector<std::size_t> chosen{cand[first]};
        std::vector<char> met(static_cast<std::size_t>(nreq), 0);
        if (req[first] >= 0) met[req[first]] = 1;
        std::vector<std::uint32_t> stamp(table.size() + 1, 0);
        std::uint32_t serial = 0;
        rec(first + 1, flat, bounds, chosen, met, found, tested, pruned, stamp, serial, stop);
    }

    void rec(std::size_t start, const std::vector<std::size_t>& flat, const std::vector<std::size_t>& bounds,
             std::vector<std::size_t>& chosen, std::vector<char>& met, std::vector<std::vector<std::size_t>>& found,
             std::uint64_t& tested, std::uint64_t& pruned, std::vector<std::uint32_t>& stamp, std::uint32_t& serial,
             const std::atomic<bool>& stop) const {
        if (stop.load(std::memory_order_relaxed)) return;
        const int depth = static_cast<int>(chosen.size());
        const int unmet = static_cast<int>(std::count(met.begin(), met.end(), 0));
        const int left = size - depth;
        if (unmet > left) {
            ++pruned;
            return;
        }
        if (left == 0) {
            if (bounds.size() <= 1 && c_canonical(chosen)) found.push_back(chosen);
            return;
        }
        std::vector<std::size_t> nf, nb;
        for (std::size_t c = start; c < cand.size(); ++c) {
            // a slot must go to an unmet clause when no slack remains
            if (unmet == left && (req[c] < 0 || met[req[c]])) {
                ++pruned;
                continue;
            }
            const auto& ids = table.ids(cand[c]);
            chosen.push_back(cand[c]);
            if (left == 1) {
                ++tested;
                if (separates(ids, flat, bounds, stamp, serial) && c_canonical(chosen)) found.push_back(chosen);
            } else {
                refine(ids, flat, bounds, nf, nb);
                const bool flip = req[c] >= 0 && !met[req[c]];
                if (flip) met[req[c]] = 1;
                rec(c + 1, nf, nb, chosen, met, found, tested, pruned, stamp, serial, stop);
                if (flip) met[req[c]] = 0;
            }
            chosen.pop_back();
        }
    }
};

}  // namespace detail

inline RankResult fusion_rank(const AlgebraSpec& spec, const RankOptions& opt = {}) {
    RankResult res;
    const auto lb = rank_lower_bound(spec);
    res.lower_bound = lb.bound;
    const auto dg = divisor_generators(spec);
    res.upper_bound = static_cast<int>(std::min(dg.div.size(), dg.div_tau.size()));
    if (opt.fundamental_only) {
        // J0 in Γ_div^τ is not fundamental
        res.upper_bound = static_cast<int>(dg.div.size());
        bool fund = true;
        for (const auto& w : dg.div_tau)
            if (apply_J(vacuum(spec), 1) == w && spec.k > spec.r) fund = false;
        if (fund) res.upper_bound = std::min(res.upper_bound, static_cast<int>(dg.div_tau.size()));
    }
    SignatureTable table(spec, opt.capacity);

    detail::RankSearch s{table, {}, {}, lb.bound, 0, {}};
    s.pos_of.assign(table.size(), detail::RankSearch::npos);
    for (std::size_t i = 0; i < table.size(); ++i) {
        const Weight& w = table.weight(i);
        if (w == vacuum(spec)) continue;
        if (opt.fundamental_only) {
            bool f = false;
            for (int a = 1; a <= spec.r; ++a) f = f || w == fundamental(spec, a);
            if (!f) continue;
        }
        int q = -1;
        for (int j = 0; j < lb.bound && q < 0; ++j)
            if (lb.requirements[j].satisfied_by(spec, w, lb.D)) q = j;
        s.pos_of[i] = s.cand.size();
        s.cand.push_back(i);
        s.req.push_back(q);
    }

    auto known = [&](int n) -> std::optional<std::vector<Weight>> {
        for (const auto* g : {&dg.div, &dg.div_tau})
            if (static_cast<int>(g->size()) == n && table.is_generator(*g).generator) return *g;
        return std::nullopt;
    };

    bool full_ids = false;
    for (int n = std::max(1, lb.bound); n <= opt.max_size; ++n) {
        if (!opt.all_witnesses)
            if (auto g = known(n)) {
                res.rank = n;
                res.witnesses.push_back(*g);
                return res;
            }
        std::vector<std::vector<std::size_t>> found;
        if (n == 1) {
            for (std::size_t c = 0; c < s.cand.size(); ++c) {
                const std::size_t i = s.cand[c];
                if (table.conj_index(i) < i) continue;
                if (lb.bound == 1 && s.req[c] < 0) {
                    ++res.sets_pruned;
                    continue;
                }
                ++res.sets_tested;
                const bool gen = full_ids ? table.is_generator({table.weight(i)}).generator
                                          : !table.first_collision(table.weight(i));
                if (gen) {
                    found.push_back({i});
                    if (!opt.all_witnesses) break;
                }
            }
        } else {
            if (!full_ids) {
                const_cast<SignatureTable&>(table).build_all_ids();
                full_ids = true;
            }
            s.size = n;
            std::atomic<std::size_t> next{0};
            std::atomic<bool> stop{false};
            std::mutex mu;
            auto worker = [&] {
                std::vector<std::vector<std::size_t>> local;
                std::uint64_t tested = 0, pruned = 0;
                for (std::size_t c; (c = next.fetch_add(1)) < s.cand.size();) {
                    if (s.req[c] < 0 && s.nreq >= n) {
                        ++pruned;
                        continue;
                    }
                    s.search_from(c, local, tested, pruned, stop);
                    if (!opt.all_witnesses && !local.empty()) stop = true;
                }
                std::lock_guard<std::mutex> lock(mu);
                found.insert(found.end(), local.begin(), local.end());
                res.sets_tested += tested;
                res.sets_pruned += pruned;
            };
            std::vector<std::thread> pool;
            for (unsigned j = 1; j < std::max(1u, opt.jobs); ++j) pool.emplace_back(worker);
            worker();
            for (auto& t : pool) t.join();
            std::sort(found.begin(), found.end());
        }
        if (!found.empty()) {
            res.rank = n;
            for (const auto& f : found) {
                std::vector<Weight> b;
                for (auto i : f) b.push_back(table.weight(i));
                res.witnesses.push_back(std::move(b));
            }
            return res;
        }
        res.lower_bound = n + 1;
    }
    return res;
}

inline bool same_up_to_conjugation(std::vector<Weight> a, std::vector<Weight> b) {
    auto key = [](const Weight& w) { return w.labels; };
    auto norm = [&](std::vector<Weight>& v) {
        std::sort(v.begin(), v.end(), [&](const Weight& x, const Weight& y) { return key(x) < key(y); });
    };
    norm(a);
    norm(b);
    if (a == b) return true;
    for (auto& w : b) w = apply_C(w);
    norm(b);
    return a == b;
}

/// Parses sums like "2w2+w5", "w1", "J0" or "0" into a weight of P_+^{r,k}.
inline Weight parse_weight_expr(const AlgebraSpec& spec, const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t == "0") return vacuum(spec);
    if (t == "J0") return apply_J(vacuum(spec), 1);
    std::vector<int> tail(static_cast<std::size_t>(spec.r), 0);
    std::size_t i = 0;
    while (i < t.size()) {
        int coef = 0;
        bool has = false;
        while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
            coef = coef * 10 + (t[i++] - '0');
            has = true;
        }
        if (!has) coef = 1;
        if (i >= t.size() || t[i] != 'w') throw std::invalid_argument("bad weight expression: " + text);
        ++i;
        int idx = 0;
        bool digits = false;
        while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
            idx = idx * 10 + (t[i++] - '0');
            digits = true;
        }
        if (!digits || idx < 1 || idx > spec.r) throw std::invalid_argument("bad fundamental index in: " + text);
        tail[static_cast<std::size_t>(idx - 1)] += coef;
        if (i < t.size()) {
            if (t[i] != '+') throw std::invalid_argument("bad weight expression: " + text);
            ++i;
        }
    }
    return from_nonzero_labels(spec, tail);
}

/// One cell of the bases/invertibility grid.
struct TableCell {
    int r = 0, k = 0;
    int rank = -1;
    int lower_bound = 0;
    std::vector<std::vector<Weight>> bases;
    bool w1_invertible = false;
};

inline TableCell table_cell(const AlgebraSpec& spec, const RankOptions& opt = {}) {
    TableCell c;
    c.r = spec.r;
    c.k = spec.k;
    const auto rr = fusion_rank(spec, opt);
    c.rank = rr.rank;
    c.lower_bound = rank_lower_bound(spec).bound;
    c.bases = rr.witnesses;
    ZeroScanOptions z;
    z.first_only = true;
    z.capacity = opt.capacity;
    c.w1_invertible = chi_w1_zero_set(spec, z).invertible();
    return c;
}

inline std::vector<TableCell> table_repro(int max_rank, int max_level, const RankOptions& opt = {}) {
    std::vector<TableCell> out;
    for (int r = 1; r <= max_rank; ++r)
        for (int k = 1; k <= max_level; ++k) out.push_back(table_cell({r, k}, opt));
    return out;
}

}  // namespace verlinde
