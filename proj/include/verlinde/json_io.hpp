#pragma once

// JSON records shared by the command-line tool, the acceptance runner and the
// demo. Exact values carry "certified": "exact"; floating ones "float".

#include <string>
#include <vector>

#include "json.hpp"
#include "verlinde/fixed_points.hpp"
#include "verlinde/fusion.hpp"
#include "verlinde/galois.hpp"
#include "verlinde/generators.hpp"

namespace verlinde::io {

using nlohmann::json;

inline std::string label_key(const Weight& w) {
    std::string s;
    for (std::size_t i = 0; i < w.labels.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(w.labels[i]);
    }
    return s;
}

inline json weight(const Weight& w) { return w.labels; }

inline json weights(const std::vector<Weight>& ws) {
    json a = json::array();
    for (const auto& w : ws) a.push_back(weight(w));
    return a;
}

inline json complex(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

/// {order, coefficients (canonical power basis, as strings), approx}.
inline json cyc(const CycNumber& x) {
    json c = json::array();
    for (const auto& q : x.coefficients()) c.push_back(q.get_str());
    return {{"order", x.order()}, {"coefficients", c}, {"approx", complex(x.to_complex())}, {"certified", "exact"}};
}

inline json zero_construction(const ZeroConstruction& z) {
    json j{{"ok", z.ok}, {"recipe", z.recipe}, {"primes", z.primes}, {"multiplicities", z.multiplicities},
           {"labels", z.labels}, {"bound_holds", z.bound_holds}};
    if (z.weight) j["weight"] = weight(*z.weight);
    if (!z.failure.empty()) j["failure"] = z.failure;
    return j;
}

inline json factorization(const FactorizationRecord& r) {
    json nz = json::array();
    for (const auto& [phi, v] : r.nonzero) nz.push_back({{"phi", weight(phi)}, {"nonzero", v}, {"certified", "exact"}});
    return {{"lambda", weight(r.lambda)}, {"d", r.d}, {"member", r.member}, {"dichotomy_holds", r.dichotomy_holds},
            {"exact_holds", r.exact_holds}, {"epsilon", r.epsilon}, {"c", r.c}, {"candidate_count", r.candidate_count},
            {"s_residual", r.s_residual}, {"fixed_points", nz}, {"mismatch", r.mismatch}};
}

inline json census(const NZCensus& c) {
    json per = json::array();
    for (const auto& p : c.per_fixed_point) per.push_back({{"phi", weight(p.phi)}, {"nonzero_count", p.nonzero_count}});
    return {{"r", c.r}, {"k", c.k}, {"d", c.d}, {"nz", c.nz}, {"ality_pass", c.ality_pass}, {"total", c.total},
            {"ality_pass_all_zero", c.ality_pass_all_zero}, {"per_fixed_point", per}, {"certified", "exact"}};
}

inline json rank_result(const RankResult& r) {
    json w = json::array();
    for (const auto& b : r.witnesses) w.push_back(weights(b));
    return {{"rank", r.rank}, {"open", r.rank < 0}, {"lower_bound", r.lower_bound}, {"upper_bound", r.upper_bound},
            {"witnesses", w}, {"sets_tested", r.sets_tested}, {"sets_pruned", r.sets_pruned}};
}

inline json table_cell(const TableCell& c) {
    json b = json::array();
    for (const auto& x : c.bases) b.push_back(weights(x));
    return {{"r", c.r}, {"k", c.k}, {"rank", c.rank}, {"lower_bound", c.lower_bound}, {"basis_list", b},
            {"w1_invertible", c.w1_invertible}, {"certified", "exact"}};
}

/// Cycle notation over enumeration indices; fixed points omitted.
inline json cycles(const std::vector<std::size_t>& perm) {
    json out = json::array();
    std::vector<char> seen(perm.size(), 0);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i] || perm[i] == i) continue;
        json c = json::array();
        for (std::size_t j = i; !seen[j]; j = perm[j]) {
            seen[j] = 1;
            c.push_back(j);
        }
        out.push_back(c);
    }
    return out;
}

inline json galois_action(const GaloisAction& g) {
    return {{"ell", g.ell}, {"lift", g.lift}, {"permutation", g.permutation}, {"permutation_cycles", cycles(g.permutation)},
            {"parity_vector", g.parity}, {"certified", "exact"}};
}

inline json sigma_report(const SigmaReport& r) {
    auto fails = [](const std::vector<SigmaFailure>& v) {
        json a = json::array();
        for (const auto& f : v)
            a.push_back({{"ell", f.ell}, {"a", f.a}, {"b", f.b}, {"mu", weight(f.mu)}, {"expected", weight(f.expected)},
                         {"got", weight(f.got)}});
        return a;
    };
    return {{"elements", r.elements}, {"checked", r.checked}, {"ok", r.ok()}, {"failures", fails(r.failures)},
            {"reordered_failures", fails(r.reordered_failures)}};
}

inline json orbit_report(const OrbitReport& r) {
    json e = json::array();
    for (const auto& x : r.entries)
        e.push_back({{"ell", x.ell}, {"image", weight(x.image)}, {"plus_minus_one", x.plus_minus_one},
                     {"in_orbit", x.in_orbit}, {"qdim", x.qdim}});
    return {{"m", r.m}, {"exception", r.exception}, {"qdim", r.qdim}, {"ok", r.ok()}, {"violations", r.violations}, {"entries", e}};
}

inline json field_report(const FieldReport& f) {
    return {{"N", f.N}, {"L_order", f.L_order}, {"L_full", f.L_full}, {"l_stabilizer", f.l_stabilizer},
            {"k_stabilizer", f.k_stabilizer}, {"K_descriptor", f.K_descriptor}, {"K_predicted", f.K_predicted},
            {"consistent", f.consistent()}, {"certified", "exact"}};
}

}  // namespace verlinde::io
