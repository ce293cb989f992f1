#pragma once

// Level-k integrable highest weights of A_r^(1) and the combinatorial maps on
// them: r̄-ality, simple current J, conjugation C, partition labels, fixed-point
// periods, rank-level transpose and fixed-point truncation.
//
// A weight always carries all r̄ = r+1 Dynkin labels (λ_0, ..., λ_r).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "verlinde/errors.hpp"
#include "verlinde/numtheory.hpp"

namespace verlinde {

inline constexpr std::size_t kDefaultCapacity = 500000;

/// A_r at level k. r = 0 is allowed (trivial algebra; it shows up as the
/// truncation of period-1 fixed points).
struct AlgebraSpec {
    int r = 1;
    int k = 1;

    AlgebraSpec() = default;
    AlgebraSpec(int rank, int level) : r(rank), k(level) {
        if (rank < 0) throw std::invalid_argument("rank must be >= 0");
        if (level < 0) throw std::invalid_argument("level must be >= 0");
    }

    int rbar() const { return r + 1; }
    int kbar() const { return k + r + 1; }
    /// Order of the cyclotomic field holding every fusion eigenvalue.
    int chi_order() const { return rbar() * kbar(); }

    friend bool operator==(const AlgebraSpec&, const AlgebraSpec&) = default;
};

struct Weight {
    std::vector<int> labels;

    Weight() = default;
    explicit Weight(std::vector<int> l) : labels(std::move(l)) {}

    int rbar() const { return static_cast<int>(labels.size()); }
    int rank() const { return rbar() - 1; }
    int level() const { return std::accumulate(labels.begin(), labels.end(), 0); }
    int operator[](std::size_t i) const { return labels[i]; }

    friend bool operator==(const Weight&, const Weight&) = default;
    friend auto operator<=>(const Weight&, const Weight&) = default;
};

struct WeightHash {
    std::size_t operator()(const Weight& w) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (int x : w.labels) {
            h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

/// Strictly decreasing (λ(1), ..., λ(r̄)) with λ(r̄) = 0.
struct PartitionLabels {
    std::vector<int> values;
    friend bool operator==(const PartitionLabels&, const PartitionLabels&) = default;
};

/// Mod-r̄ ality together with the J-period of a weight.
struct OrbitInfo {
    int ality = 0;
    int fixed_order = 1;
};

// ---- validation and construction ------------------------------------------

inline bool is_valid(const AlgebraSpec& spec, const Weight& w) {
    if (w.rbar() != spec.rbar()) return false;
    for (int x : w.labels)
        if (x < 0) return false;
    return w.level() == spec.k;
}

inline void require_valid(const AlgebraSpec& spec, const Weight& w) {
    if (!is_valid(spec, w)) {
        std::ostringstream os;
        os << "weight (";
        for (std::size_t i = 0; i < w.labels.size(); ++i) os << (i ? "," : "") << w.labels[i];
        os << ") is not in P_+ for r=" << spec.r << ", k=" << spec.k;
        throw std::invalid_argument(os.str());
    }
}

inline Weight vacuum(const AlgebraSpec& spec) {
    std::vector<int> l(spec.rbar(), 0);
    l[0] = spec.k;
    return Weight(std::move(l));
}

/// Fundamental weight w^i padded to level k; w^0 is the vacuum.
inline Weight fundamental(const AlgebraSpec& spec, int i) {
    if (i < 0 || i > spec.r) throw std::invalid_argument("fundamental index out of range");
    if (spec.k < 1 && i != 0) throw std::invalid_argument("fundamental weight needs level >= 1");
    Weight w = vacuum(spec);
    if (i != 0) {
        w.labels[0] -= 1;
        w.labels[i] += 1;
    }
    return w;
}

/// Build a weight from (λ_1, ..., λ_r), inferring λ_0 from the level.
inline Weight from_nonzero_labels(const AlgebraSpec& spec, const std::vector<int>& tail) {
    if (static_cast<int>(tail.size()) != spec.r)
        throw std::invalid_argument("expected r labels (λ_1..λ_r)");
    std::vector<int> l(spec.rbar());
    int s = 0;
    for (int i = 0; i < spec.r; ++i) {
        l[i + 1] = tail[i];
        s += tail[i];
    }
    l[0] = spec.k - s;
    Weight w(std::move(l));
    require_valid(spec, w);
    return w;
}

inline std::string to_string(const Weight& w) {
    std::string s;
    for (std::size_t i = 0; i < w.labels.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(w.labels[i]);
    }
    return s;
}

// ---- enumeration -----------------------------------------------------------

inline std::int64_t weight_count(const AlgebraSpec& spec) {
    return nt::binomial(spec.r + spec.k, spec.r);
}

/// All of P_+^{r,k}, lexicographic on (λ_1, ..., λ_r). This order is the
/// index order of every table in the library.
inline std::vector<Weight> enumerate(const AlgebraSpec& spec, std::size_t capacity = kDefaultCapacity) {
    const auto count = nt::binomial_capped(spec.r + spec.k, spec.r, static_cast<std::int64_t>(capacity));
    if (count > static_cast<std::int64_t>(capacity)) {
        throw CapacityError("|P_+| for r=" + std::to_string(spec.r) + ", k=" + std::to_string(spec.k) +
                            " exceeds capacity limit " + std::to_string(capacity));
    }
    std::vector<Weight> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<int> labels(spec.rbar(), 0);
    std::function<void(int, int)> rec = [&](int slot, int budget) {
        if (slot > spec.r) {
            labels[0] = budget;
            out.emplace_back(labels);
            return;
        }
        for (int v = 0; v <= budget; ++v) {
            labels[slot] = v;
            rec(slot + 1, budget - v);
        }
        labels[slot] = 0;
    };
    rec(1, spec.k);
    return out;
}

/// Enumeration plus reverse lookup.
class WeightIndex {
public:
    explicit WeightIndex(const AlgebraSpec& spec, std::size_t capacity = kDefaultCapacity)
        : spec_(spec), weights_(enumerate(spec, capacity)) {
        index_.reserve(weights_.size() * 2);
        for (std::size_t i = 0; i < weights_.size(); ++i) index_.emplace(weights_[i], i);
    }

    const AlgebraSpec& spec() const { return spec_; }
    std::size_t size() const { return weights_.size(); }
    const Weight& operator[](std::size_t i) const { return weights_[i]; }
    const std::vector<Weight>& weights() const { return weights_; }

    std::size_t index_of(const Weight& w) const {
        auto it = index_.find(w);
        if (it == index_.end()) throw std::invalid_argument("weight " + to_string(w) + " not in P_+");
        return it->second;
    }
    bool contains(const Weight& w) const { return index_.count(w) != 0; }

    /// FNV-1a over the label stream; identifies the enumeration in cache files.
    std::uint64_t enumeration_hash() const {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint32_t v) {
            for (int b = 0; b < 4; ++b) {
                h ^= (v >> (8 * b)) & 0xffu;
                h *= 1099511628211ull;
            }
        };
        mix(static_cast<std::uint32_t>(spec_.r));
        mix(static_cast<std::uint32_t>(spec_.k));
        for (const auto& w : weights_)
            for (int x : w.labels) mix(static_cast<std::uint32_t>(x));
        return h;
    }

private:
    AlgebraSpec spec_;
    std::vector<Weight> weights_;
    std::unordered_map<Weight, std::size_t, WeightHash> index_;
};

// ---- ality and the dihedral symmetries ---------------------------------------

/// t(λ) = Σ j λ_j as an integer (not reduced).
inline std::int64_t ality_raw(const Weight& w) {
    std::int64_t t = 0;
    for (int j = 1; j < w.rbar(); ++j) t += static_cast<std::int64_t>(j) * w.labels[j];
    return t;
}

/// r̄-ality t(λ) mod r̄.
inline int ality(const Weight& w) { return static_cast<int>(nt::mod(ality_raw(w), w.rbar())); }

/// t(λ+ρ) = Σ j (λ_j + 1).
inline std::int64_t shifted_ality(const Weight& w) {
    std::int64_t t = 0;
    for (int j = 1; j < w.rbar(); ++j) t += static_cast<std::int64_t>(j) * (w.labels[j] + 1);
    return t;
}

/// J^a: slot i receives slot i-a (mod r̄).
inline Weight apply_J(const Weight& w, int a = 1) {
    const int n = w.rbar();
    std::vector<int> out(n);
    for (int i = 0; i < n; ++i) out[i] = w.labels[nt::mod(i - a, n)];
    return Weight(std::move(out));
}

/// C: reverse slots 1..r, keep slot 0.
inline Weight apply_C(const Weight& w) {
    Weight out = w;
    std::reverse(out.labels.begin() + 1, out.labels.end());
    return out;
}

/// Smallest d >= 1 with J^d λ = λ.
inline int fixed_point_order(const Weight& w) {
    const int n = w.rbar();
    for (int d : nt::divisors(n)) {
        bool periodic = true;
        for (int i = 0; i < n && periodic; ++i) periodic = w.labels[i] == w.labels[(i + d) % n];
        if (periodic) return d;
    }
    return n;
}

inline bool is_fixed_point(const Weight& w) { return fixed_point_order(w) < w.rbar(); }

inline OrbitInfo orbit_info(const Weight& w) { return {ality(w), fixed_point_order(w)}; }

// ---- partition labels and Young diagrams ------------------------------------

/// λ(ℓ) = Σ_{j=ℓ..r} (λ_j + 1), ℓ = 1..r̄.
inline PartitionLabels partition_labels(const Weight& w) {
    const int n = w.rbar();
    std::vector<int> v(n, 0);
    for (int l = n - 1; l >= 1; --l) v[l - 1] = v[l] + w.labels[l] + 1;
    return {std::move(v)};
}

/// Inverse of partition_labels at the given level.
inline Weight weight_from_partition_labels(const AlgebraSpec& spec, const PartitionLabels& p) {
    const auto& v = p.values;
    if (static_cast<int>(v.size()) != spec.rbar())
        throw std::invalid_argument("partition labels must have r+1 entries");
    if (v.back() != 0) throw std::invalid_argument("last partition label must be 0");
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (v[i] <= v[i + 1]) throw std::invalid_argument("partition labels must be strictly decreasing");
    if (v.front() > spec.kbar() - 1) throw std::invalid_argument("partition label exceeds kbar-1");
    std::vector<int> l(spec.rbar(), 0);
    int s = 0;
    for (int j = 1; j <= spec.r; ++j) {
        l[j] = v[j - 1] - v[j] - 1;
        s += l[j];
    }
    l[0] = spec.k - s;
    return Weight(std::move(l));
}

/// Row lengths of the Young diagram: row i has Σ_{j=i..r} λ_j boxes (i = 1..r),
/// trailing zero rows dropped.
inline std::vector<int> young_rows(const Weight& w) {
    std::vector<int> rows;
    int acc = 0;
    std::vector<int> all(w.rbar() - 1, 0);
    for (int i = w.rbar() - 1; i >= 1; --i) {
        acc += w.labels[i];
        all[i - 1] = acc;
    }
    for (int x : all)
        if (x > 0) rows.push_back(x);
    return rows;
}

/// Transpose of a partition.
inline std::vector<int> conjugate_partition(const std::vector<int>& rows) {
    if (rows.empty()) return {};
    std::vector<int> cols(rows.front(), 0);
    for (int len : rows)
        for (int c = 0; c < len; ++c) ++cols[c];
    return cols;
}

inline AlgebraSpec dual_spec(const AlgebraSpec& spec) {
    if (spec.k < 1) throw std::invalid_argument("rank-level dual needs level >= 1");
    return AlgebraSpec(spec.k - 1, spec.r + 1);
}

/// Rank-level transpose τ: P_+^{r,k} → P_+^{k-1,r+1}. Rows of length k are
/// removed before transposing (they become full columns of length k).
inline Weight tau_dual(const AlgebraSpec& spec, const Weight& w) {
    require_valid(spec, w);
    const AlgebraSpec dual = dual_spec(spec);
    std::vector<int> rows;
    for (int x : young_rows(w))
        if (x < spec.k) rows.push_back(x);
    const auto cols = conjugate_partition(rows);
    std::vector<int> l(dual.rbar(), 0);
    // cols has at most k-1 entries, each at most r
    std::vector<int> padded(dual.rbar(), 0);
    for (std::size_t c = 0; c < cols.size(); ++c) padded[c] = cols[c];
    for (int j = 1; j <= dual.r; ++j) l[j] = padded[j - 1] - padded[j];
    l[0] = dual.k - padded[0];
    Weight out(std::move(l));
    require_valid(dual, out);
    return out;
}

// ---- fixed points ------------------------------------------------------------

/// Do J^d-fixed points exist? (d | r̄ and r̄/d | k)
inline bool fixed_period_allowed(const AlgebraSpec& spec, int d) {
    return d >= 1 && spec.rbar() % d == 0 && spec.k % (spec.rbar() / d) == 0;
}

inline AlgebraSpec truncated_spec(const AlgebraSpec& spec, int d) {
    if (!fixed_period_allowed(spec, d)) throw std::invalid_argument("no J^d-fixed points for this d");
    return AlgebraSpec(d - 1, spec.k * d / spec.rbar());
}

/// (φ_0, ..., φ_{d-1}) of a weight with J^d φ = φ.
inline Weight truncate_fixed_point(const AlgebraSpec& spec, const Weight& phi, int d) {
    require_valid(spec, phi);
    if (!fixed_period_allowed(spec, d)) throw std::invalid_argument("invalid period d");
    if (d % fixed_point_order(phi) != 0) throw std::invalid_argument("weight is not fixed by J^d");
    return Weight(std::vector<int>(phi.labels.begin(), phi.labels.begin() + d));
}

/// Inverse of truncation: tile a weight of A_{d-1} at level kd/r̄.
inline Weight tile_fixed_point(const AlgebraSpec& spec, const Weight& truncated) {
    const int d = truncated.rbar();
    if (!fixed_period_allowed(spec, d)) throw std::invalid_argument("invalid period d");
    std::vector<int> l(spec.rbar());
    for (int i = 0; i < spec.rbar(); ++i) l[i] = truncated.labels[i % d];
    return Weight(std::move(l));
}

/// Every φ with J^d φ = φ, in the enumeration order of the truncated algebra.
inline std::vector<Weight> fixed_points(const AlgebraSpec& spec, int d) {
    std::vector<Weight> out;
    for (const auto& t : enumerate(truncated_spec(spec, d))) out.push_back(tile_fixed_point(spec, t));
    return out;
}

/// (kd/r̄) Σ_i w^{di}: the fixed point whose truncation is the vacuum.
inline Weight canonical_fixed_point(const AlgebraSpec& spec, int d) {
    const AlgebraSpec t = truncated_spec(spec, d);
    return tile_fixed_point(spec, vacuum(t));
}

}  // namespace verlinde
