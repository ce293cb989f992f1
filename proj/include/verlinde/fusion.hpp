#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "verlinde/characters.hpp"
#include "verlinde/cyclotomic.hpp"
#include "verlinde/errors.hpp"
#include "verlinde/numtheory.hpp"
#include "verlinde/weight_lattice.hpp"

namespace verlinde {

inline constexpr double kIntegralityTolerance = 1e-6;

/// N_{λμ}^ν by the Verlinde sum in floats, rounded; throws if not an integer.
inline nt::i64 verlinde_coefficient(const CharacterTable& t, std::size_t lambda, std::size_t mu, std::size_t nu) {
    const auto& s = t.s_matrix();
    std::complex<double> acc = 0;
    for (std::size_t g = 0; g < t.size(); ++g) acc += s(lambda, g) * s(mu, g) * std::conj(s(nu, g)) / s(0, g);
    const double r = std::round(acc.real());
    const double res = std::max(std::abs(acc.real() - r), std::abs(acc.imag()));
    if (res >= kIntegralityTolerance || r < 0) {
        std::ostringstream os;
        os << "N_{" << to_string(t.weight(lambda)) << "," << to_string(t.weight(mu)) << "}^" << to_string(t.weight(nu))
           << " = " << acc.real() << (acc.imag() < 0 ? "" : "+") << acc.imag() << "i";
        throw IntegralityError(os.str());
    }
    return static_cast<nt::i64>(r);
}

inline nt::i64 verlinde_coefficient(const CharacterTable& t, const Weight& lambda, const Weight& mu, const Weight& nu) {
    const auto& ix = t.index();
    return verlinde_coefficient(t, ix.index_of(lambda), ix.index_of(mu), ix.index_of(nu));
}

struct FusionMatrix {
    Weight lambda;
    // entries(μ, ν) = N_{λμ}^ν, rows and columns in enumeration order
    Eigen::Matrix<nt::i64, Eigen::Dynamic, Eigen::Dynamic> entries;
    double residual = 0.0;  // worst distance to the rounded value
};

/// N_λ = S diag(S_λγ/S_0γ) S^†.
inline FusionMatrix fusion_matrix(const CharacterTable& t, std::size_t lambda) {
    const auto& s = t.s_matrix();
    const auto n = static_cast<Eigen::Index>(t.size());
    Eigen::VectorXcd ev(n);
    for (Eigen::Index g = 0; g < n; ++g) ev(g) = s(static_cast<Eigen::Index>(lambda), g) / s(0, g);
    const Eigen::MatrixXcd m = s * ev.asDiagonal() * s.adjoint();
    FusionMatrix f;
    f.lambda = t.weight(lambda);
    f.entries.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto z = m(i, j);
            const double r = std::round(z.real());
            const double res = std::max(std::abs(z.real() - r), std::abs(z.imag()));
            f.residual = std::max(f.residual, res);
            if (res >= kIntegralityTolerance || r < 0) {
                std::ostringstream os;
                os << "N_" << to_string(f.lambda) << " entry (" << to_string(t.weight(i)) << ", " << to_string(t.weight(j))
                   << ") = " << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
                throw IntegralityError(os.str());
            }
            f.entries(i, j) = static_cast<nt::i64>(r);
        }
    return f;
}

inline FusionMatrix fusion_matrix(const CharacterTable& t, const Weight& lambda) {
    return fusion_matrix(t, t.index().index_of(lambda));
}

/// λ ⊗ μ as {ν: N_{λμ}^ν} over nonzero coefficients.
inline std::vector<std::pair<Weight, nt::i64>> fuse(const CharacterTable& t, const Weight& lambda, const Weight& mu) {
    const auto& ix = t.index();
    const std::size_t l = ix.index_of(lambda), m = ix.index_of(mu);
    std::vector<std::pair<Weight, nt::i64>> out;
    for (std::size_t v = 0; v < t.size(); ++v)
        if (const auto c = verlinde_coefficient(t, l, m, v); c != 0) out.emplace_back(t.weight(v), c);
    return out;
}

/// P_{r,k}: primes p ≤ min(r̄, k) dividing k̄.
struct PrimeSet {
    std::vector<nt::i64> primes;

    bool contains(nt::i64 p) const { return std::find(primes.begin(), primes.end(), p) != primes.end(); }
    // ℓ ∈ Z_≥ P
    bool generates(nt::i64 ell) const { return nt::in_numerical_semigroup(ell, primes); }
};

inline PrimeSet prime_set(const AlgebraSpec& spec) {
    PrimeSet ps;
    const nt::i64 cap = std::min(spec.rbar(), spec.k);
    for (auto p : nt::prime_divisors(spec.kbar()))
        if (p <= cap) ps.primes.push_back(p);
    return ps;
}

/// Predicted singularity of N_{w^1}: r̄ and k both lie in Z_≥ P_{r,k}.
inline bool predicts_singular(const AlgebraSpec& spec) {
    const auto ps = prime_set(spec);
    return ps.generates(spec.rbar()) && ps.generates(spec.k);
}

/// Σ_j ξ_k̄^{μ(j)} as an element of Q_k̄ (χ_{w^1}(μ) up to conjugation and a root of unity).
inline CycNumber w1_label_sum(const AlgebraSpec& spec, const Weight& mu) {
    const int kb = spec.kbar();
    std::vector<nt::i64> v(static_cast<std::size_t>(kb), 0);
    for (int l : partition_labels(mu).values) ++v[static_cast<std::size_t>(l)];
    return CycNumber::from_integers(kb, v);
}

/// Exact zero test of the same sum: its canonical coefficients mod Φ_k̄,
/// accumulated in machine integers (they are bounded by r̄ times the reduction table).
inline bool chi_w1_is_zero(const AlgebraSpec& spec, const Weight& mu) {
    const auto& data = cyclotomic_data(spec.kbar());
    thread_local std::vector<nt::i64> acc;
    acc.assign(static_cast<std::size_t>(data.phi), 0);
    int label = 0;
    for (int j = spec.r; j >= 0; --j) {
        if (j < spec.r) label += mu.labels[static_cast<std::size_t>(j) + 1] + 1;
        for (const auto& [idx, c] : data.reduce[static_cast<std::size_t>(label)]) acc[idx] += c;
    }
    return std::all_of(acc.begin(), acc.end(), [](nt::i64 x) { return x == 0; });
}

struct ZeroScanOptions {
    // skip cells where r̄ or k outside Z_≥ P rules out any zero
    bool prefilter = true;
    // re-check cells the prefilter skipped; a zero there is a contradiction
    bool validate = false;
    // stop at the first zero
    bool first_only = false;
    std::size_t capacity = kDefaultCapacity;
};

struct ZeroScan {
    std::vector<Weight> zeros;
    bool prefiltered = false;  // cell skipped: r̄ or k not in Z_≥ P
    std::size_t tested = 0;
    bool invertible() const { return zeros.empty(); }
};

/// { μ : χ_{w^1}(μ) = 0 }, decided exactly.
inline ZeroScan chi_w1_zero_set(const AlgebraSpec& spec, const ZeroScanOptions& opt = {}) {
    ZeroScan res;
    if (opt.prefilter && !predicts_singular(spec)) {
        res.prefiltered = true;
        if (!opt.validate) return res;
    }
    if (weight_count(spec) > static_cast<std::int64_t>(opt.capacity)) {
        std::ostringstream os;
        os << "|P_+^{" << spec.r << "," << spec.k << "}| = " << weight_count(spec) << " exceeds capacity " << opt.capacity;
        throw CapacityError(os.str());
    }
    // lexicographic walk without materialising the whole list
    const int r = spec.r;
    std::vector<int> tail(static_cast<std::size_t>(r), 0);
    int used = 0;
    while (true) {
        Weight w = from_nonzero_labels(spec, tail);
        ++res.tested;
        if (chi_w1_is_zero(spec, w)) {
            if (res.prefiltered)
                throw IdentityViolation("zero of chi_{w^1} at " + to_string(w) + " although Z_>=P excludes it");
            res.zeros.push_back(std::move(w));
            if (opt.first_only) break;
        }
        // next tail in lex order with sum ≤ k
        int i = r - 1;
        while (i >= 0 && used == spec.k) {
            used -= tail[i];
            tail[i] = 0;
            --i;
        }
        if (i < 0) break;
        ++tail[i];
        ++used;
    }
    return res;
}

struct ZeroConstruction {
    bool ok = false;
    std::string recipe;  // "two-prime" or "stacked"
    std::vector<nt::i64> primes;
    std::vector<int> multiplicities;
    std::vector<int> labels;  // descending
    std::optional<Weight> weight;
    bool bound_holds = false;
    std::string failure;
};

namespace detail {

inline void finish_construction(int rbar, int kbar, ZeroConstruction& z, const std::vector<std::vector<int>>& progressions) {
    std::set<int> pts;
    std::size_t total = 0;
    for (const auto& pr : progressions) {
        total += pr.size();
        pts.insert(pr.begin(), pr.end());
    }
    if (pts.size() != total) {
        if (z.failure.empty()) z.failure = "progressions intersect";
        return;
    }
    if (static_cast<int>(pts.size()) != rbar) {
        z.failure = "progressions cover " + std::to_string(pts.size()) + " points, need " + std::to_string(rbar);
        return;
    }
    const AlgebraSpec spec{rbar - 1, kbar - rbar};
    // rotating every label multiplies the sum by a root of unity
    const int low = *pts.begin();
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) z.labels.push_back(*it - low);
    Weight w = weight_from_partition_labels(spec, PartitionLabels{z.labels});
    if (!chi_w1_is_zero(spec, w)) {
        z.failure = "constructed weight is not a zero";
        return;
    }
    z.weight = std::move(w);
    z.ok = true;
}

inline std::vector<int> progression(int start, int stride, int kbar) {
    std::vector<int> v;
    for (int x = nt::mod(start, stride); x < kbar; x += stride) v.push_back(x);
    return v;
}

}  // namespace detail

/// Stacked recipe: c_ij = j-1 + Σ_{ℓ<i} a_ℓ, progressions (k̄/p_i)Z + c_ij.
inline ZeroConstruction construct_zero_weight_n(int rbar, int kbar, const std::vector<nt::i64>& primes,
                                                const std::vector<int>& mult) {
    ZeroConstruction z;
    z.recipe = "stacked";
    z.primes = primes;
    z.multiplicities = mult;
    z.bound_holds = true;
    for (std::size_t i = 0; i < primes.size(); ++i)
        for (std::size_t j = i + 1; j < primes.size(); ++j) {
            nt::i64 s = 0;
            for (std::size_t h = i; h <= j; ++h) s += mult[h];
            if (kbar < primes[i] * primes[j] * s && z.bound_holds) {
                z.bound_holds = false;
                std::ostringstream os;
                os << "bound k̄ >= p_i p_j (a_i+..+a_j) fails at i=" << i + 1 << ", j=" << j + 1 << ": " << kbar << " < "
                   << primes[i] * primes[j] * s;
                z.failure = os.str();
            }
        }
    std::vector<std::vector<int>> prog;
    int offset = 0;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        for (int j = 1; j <= mult[i]; ++j)
            prog.push_back(detail::progression(j - 1 + offset, kbar / static_cast<int>(primes[i]), kbar));
        offset += mult[i];
    }
    detail::finish_construction(rbar, kbar, z, prog);
    return z;
}

/// Two-prime recipe: a progressions of stride k̄/p and b of stride k̄/q.
inline ZeroConstruction construct_zero_weight_pq(int rbar, int kbar, nt::i64 p, int a, nt::i64 q, int b) {
    ZeroConstruction z;
    z.recipe = "two-prime";
    z.primes = {p, q};
    z.multiplicities = {a, b};
    const auto ceil_div = [](nt::i64 x, nt::i64 y) { return (x + y - 1) / y; };
    const nt::i64 ca = ceil_div(a, q), cb = ceil_div(b, p);
    const nt::i64 bound = p * q * (ca + cb);
    z.bound_holds = kbar >= bound;
    if (!z.bound_holds) {
        std::ostringstream os;
        os << "bound k̄ >= pq(ceil(a/q)+ceil(b/p)) fails: " << kbar << " < " << bound;
        z.failure = os.str();
    }
    const int sp = kbar / static_cast<int>(p), sq = kbar / static_cast<int>(q);
    std::vector<std::vector<int>> prog;
    // c_i: 0, k̄/q, ..., k̄/q (q-1), 1, 1 + k̄/q, ...
    for (int i = 0; i < a; ++i) prog.push_back(detail::progression(i / static_cast<int>(q) + (i % q) * sq, sp, kbar));
    // c'_j: ceil(a/q), ceil(a/q) + k̄/p, ...
    for (int j = 0; j < b; ++j)
        prog.push_back(detail::progression(static_cast<int>(ca) + j / static_cast<int>(p) + (j % p) * sp, sq, kbar));
    detail::finish_construction(rbar, kbar, z, prog);
    return z;
}

/// Dispatch: two primes use the two-prime recipe, otherwise the stacked one.
inline ZeroConstruction construct_zero_weight(int rbar, int kbar, const std::vector<nt::i64>& primes, const std::vector<int>& mult) {
    if (primes.size() != mult.size()) throw std::invalid_argument("need one multiplicity per prime");
    nt::i64 sum = 0;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (!nt::is_prime_small(primes[i]) || kbar % primes[i] != 0)
            throw std::invalid_argument(std::to_string(primes[i]) + " is not a prime divisor of " + std::to_string(kbar));
        if (mult[i] < 0) throw std::invalid_argument("negative multiplicity");
        sum += primes[i] * mult[i];
    }
    if (sum != rbar) throw std::invalid_argument("sum a_i p_i = " + std::to_string(sum) + " != " + std::to_string(rbar));
    if (rbar >= kbar) throw std::invalid_argument("need r̄ < k̄");
    if (primes.size() == 2 && primes[0] != primes[1]) {
        auto z = construct_zero_weight_pq(rbar, kbar, primes[0], mult[0], primes[1], mult[1]);
        if (z.ok) return z;
        auto alt = construct_zero_weight_n(rbar, kbar, primes, mult);
        return alt.ok ? alt : z;
    }
    return construct_zero_weight_n(rbar, kbar, primes, mult);
}

/// Tries every decomposition r̄ = Σ a_i p_i over primes dividing k̄ and every ordering.
inline ZeroConstruction construct_zero_weight_auto(int rbar, int kbar) {
    std::vector<nt::i64> ps;
    for (auto p : nt::prime_divisors(kbar))
        if (p <= rbar) ps.push_back(p);
    ZeroConstruction fail;
    if (ps.empty() || rbar >= kbar) {
        fail.failure = "no admissible primes";
        return fail;
    }
    std::vector<int> mult(ps.size(), 0);
    std::optional<ZeroConstruction> first_failure;
    std::optional<ZeroConstruction> found;
    auto rec = [&](auto&& self, std::size_t i, nt::i64 left) -> void {
        if (found) return;
        if (i == ps.size()) {
            if (left != 0) return;
            std::vector<nt::i64> used;
            std::vector<int> m;
            for (std::size_t j = 0; j < ps.size(); ++j)
                if (mult[j] > 0) {
                    used.push_back(ps[j]);
                    m.push_back(mult[j]);
                }
            std::vector<std::size_t> perm(used.size());
            for (std::size_t j = 0; j < perm.size(); ++j) perm[j] = j;
            do {
                std::vector<nt::i64> pp;
                std::vector<int> mm;
                for (auto j : perm) {
                    pp.push_back(used[j]);
                    mm.push_back(m[j]);
                }
                auto z = construct_zero_weight(rbar, kbar, pp, mm);
                if (z.ok) {
                    found = std::move(z);
                    return;
                }
                if (!first_failure) first_failure = std::move(z);
            } while (std::next_permutation(perm.begin(), perm.end()));
            return;
        }
        for (int a = 0; a * ps[i] <= left; ++a) {
            mult[i] = a;
            self(self, i + 1, left - a * ps[i]);
        }
        mult[i] = 0;
    };
    rec(rec, 0, rbar);
    if (found) return *found;
    if (first_failure) return *first_failure;
    fail.failure = "r̄ is not a sum of primes dividing k̄";
    return fail;
}

struct ScanCell {
    int r = 0, k = 0;
    bool predicate = false;
    bool invertible = false;
    std::optional<Weight> witness;
    double elapsed_ms = 0;
    std::string error;

    bool match() const { return error.empty() && predicate == !invertible; }
};

inline nlohmann::json to_json(const ScanCell& c) {
    nlohmann::json j{{"r", c.r}, {"k", c.k}, {"predicate", c.predicate}, {"invertible", c.invertible}, {"elapsed_ms", c.elapsed_ms}};
    if (c.witness) j["witness_weight"] = c.witness->labels;
    if (!c.error.empty()) j["error"] = c.error;
    return j;
}

inline ScanCell scan_cell_from_json(const nlohmann::json& j) {
    ScanCell c;
    c.r = j.at("r").get<int>();
    c.k = j.at("k").get<int>();
    c.predicate = j.at("predicate").get<bool>();
    c.invertible = j.at("invertible").get<bool>();
    c.elapsed_ms = j.value("elapsed_ms", 0.0);
    if (j.contains("witness_weight")) c.witness = Weight(j.at("witness_weight").get<std::vector<int>>());
    if (j.contains("error")) c.error = j.at("error").get<std::string>();
    return c;
}

struct ScanReport {
    std::vector<ScanCell> cells;  // in grid order
    std::size_t mismatches = 0;
    std::size_t resumed = 0;  // cells taken from the journal
};

struct ScanOptions {
    std::optional<std::filesystem::path> journal;
    unsigned jobs = 1;
    std::size_t capacity = kDefaultCapacity;
    bool prefilter = true;
};

/// Ground-truth invertibility of N_{w^1} for one cell; the witness is the first zero.
inline ScanCell scan_invertible(const AlgebraSpec& spec, std::size_t capacity = kDefaultCapacity, bool prefilter = true) {
    const auto t0 = std::chrono::steady_clock::now();
    ScanCell c;
    c.r = spec.r;
    c.k = spec.k;
    c.predicate = predicts_singular(spec);
    try {
        ZeroScanOptions o;
        o.first_only = true;
        o.capacity = capacity;
        o.prefilter = prefilter;
        const auto z = chi_w1_zero_set(spec, o);
        c.invertible = z.invertible();
        if (!z.zeros.empty()) c.witness = z.zeros.front();
    } catch (const std::exception& e) {
        c.error = e.what();
    }
    c.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

/// Compares predicts_singular with exact ground truth over a grid;
/// each finished cell is appended to the journal, which also seeds a resume.
inline ScanReport conjecture2_scan(const std::vector<AlgebraSpec>& grid, const ScanOptions& opt = {}) {
    ScanReport rep;
    std::map<std::pair<int, int>, ScanCell> done;
    if (opt.journal && std::filesystem::exists(*opt.journal)) {
        std::ifstream in(*opt.journal);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            try {
                auto c = scan_cell_from_json(nlohmann::json::parse(line));
                done[{c.r, c.k}] = std::move(c);
            } catch (const std::exception&) {
                // a torn last line from an interrupted run
            }
        }
    }
    std::ofstream journal;
    if (opt.journal) {
        if (opt.journal->has_parent_path()) std::filesystem::create_directories(opt.journal->parent_path());
        journal.open(*opt.journal, std::ios::app);
        if (!journal) throw std::runtime_error("cannot open journal " + opt.journal->string());
    }
    rep.cells.resize(grid.size());
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto it = done.find({grid[i].r, grid[i].k});
        if (it != done.end()) {
            rep.cells[i] = it->second;
            ++rep.resumed;
        } else {
            todo.push_back(i);
        }
    }
    std::mutex jmu;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t n; (n = next.fetch_add(1)) < todo.size();) {
            const std::size_t i = todo[n];
            ScanCell c = scan_invertible(grid[i], opt.capacity, opt.prefilter);
            std::lock_guard<std::mutex> lock(jmu);
            if (journal.is_open()) journal << to_json(c).dump() << '\n' << std::flush;
            rep.cells[i] = std::move(c);
        }
    };
    const unsigned jobs = std::max(1u, opt.jobs);
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (const auto& c : rep.cells)
        if (!c.match()) ++rep.mismatches;
    return rep;
}

}  // namespace verlinde
