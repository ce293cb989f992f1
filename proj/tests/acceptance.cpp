// Acceptance runner: one PASS/FAIL line per criterion, with wall time.
// --expect-fail 4,8 marks criteria whose FAIL is already understood; the exit
// status is nonzero on any other FAIL, or if an expected FAIL starts passing.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "verlinde.hpp"

using namespace verlinde;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back("failed: " + what);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

std::string str(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

Outcome counting() {
    Outcome o;
    AlgebraSpec s{3, 4};
    const auto all = enumerate(s);
    auto members = [&](int d) {
        return static_cast<std::size_t>(std::count_if(all.begin(), all.end(), [&](const Weight& l) { return nz_test(s, l, d).member; }));
    };
    o.check(all.size() == 35, "|P_+^{3,4}| = 35");
    o.check(members(1) == 8, "|NZ(1)| = 8 at (3,4)");
    o.check(members(2) == 18, "|NZ(2)| = 18 at (3,4)");
    const auto c8 = nz_census({3, 8}, 2);
    o.check(c8.total == 165 && c8.nz == 75 && c8.ality_pass == 85, "(3,8): 165/75/85");
    bool found = false;
    for (const auto& p : c8.per_fixed_point)
        if (p.phi == Weight({3, 1, 3, 1})) found = p.nonzero_count == 48;
    o.check(found, "48 nonzero at φ=(3,1,3,1)");
    const auto c12 = nz_census({3, 12}, 2);
    o.check(c12.nz == 196 && c12.ality_pass == 231 && c12.total == 455, "k=12: 196/231/455");
    const auto c16 = nz_census({3, 16}, 2);
    o.check(c16.nz == 405 && c16.ality_pass == 489 && c16.total == 969, "k=16: 405/489/969");
    return o;
}

Outcome factor_weights() {
    Outcome o;
    AlgebraSpec s{11, 6};
    const Weight lam({0, 0, 1, 0, 0, 1, 1, 1, 0, 1, 1, 0});
    o.check(partition_labels(lam).values == std::vector<int>{17, 16, 14, 13, 12, 10, 8, 6, 5, 3, 1, 0}, "partition labels");
    const auto res = nz_test(s, lam, 4);
    o.check(res.member, "λ ∈ NZ(4)");
    if (res.member)
        o.check(res.decomposition->factors == std::vector<Weight>{Weight({1, 0, 1, 0}), Weight({0, 0, 0, 2}), Weight({1, 1, 0, 0})},
                "factors (1,0,1,0),(0,0,0,2),(1,1,0,0)");
    return o;
}

Outcome factorisation() {
    Outcome o;
    double worst28a = 0, worst29c = 0;
    std::size_t checked = 0;
    for (auto [r, k, d] : std::vector<std::array<int, 3>>{{3, 4, 1}, {3, 4, 2}, {3, 8, 2}, {5, 6, 2}, {5, 6, 3}}) {
        AlgebraSpec s{r, k};
        FixedPointFactorizer fz(s, d);
        worst29c = std::max(worst29c, fz.s_zero_residual());
        for (const auto& l : enumerate(s)) {
            const auto rec = fz.verify(l);
            ++checked;
            o.check(rec.dichotomy_holds, "dichotomy at " + to_string(l) + " " + rec.mismatch);
            if (rec.member) {
                o.check(rec.exact_holds, "exact factorisation at " + to_string(l));
                worst28a = std::max(worst28a, rec.s_residual);
            }
        }
    }
    o.check(worst28a < 1e-9, "S factorisation residual " + str(worst28a));
    o.check(worst29c < 1e-9, "S_0 product residual " + str(worst29c));
    o.note(std::to_string(checked) + " weights, residuals " + str(worst28a) + " / " + str(worst29c));
    return o;
}

Outcome fusion_ranks(const std::filesystem::path& fixtures) {
    Outcome o;
    for (auto [k, want] : std::vector<std::array<int, 2>>{{5, 1}, {7, 2}, {9, 1}, {11, 2}}) {
        RankOptions opt;
        opt.all_witnesses = false;
        const auto res = fusion_rank({4, k}, opt);
        o.check(res.rank == want, "rank(4," + std::to_string(k) + ") = " + std::to_string(want) + ", got " + std::to_string(res.rank));
    }
    // (8,5): rank and the stated witness
    AlgebraSpec s85{8, 5};
    const auto r85 = fusion_rank(s85);
    o.check(r85.rank == 1, "rank(8,5) = 1");
    const Weight stated = parse_weight_expr(s85, "2w2+w5");
    const auto g = SignatureTable(s85).is_generator({stated});
    o.check(g.generator, "{2w²+w⁵} generates at (8,5)");
    if (!g.generator && g.collision)
        o.note("2w²+w⁵ has t ≡ 0 mod 9, so χ agrees on " + to_string(g.collision->first) + " and " + to_string(g.collision->second) +
               "; its J-translates with gcd(t,9)=1 do generate");
    // table grid
    std::ifstream in(fixtures / "table.json");
    const auto doc = nlohmann::json::parse(in);
    const auto cells = table_repro(8, 5);
    std::size_t compared = 0;
    for (const auto& cell : doc.at("cells")) {
        const int r = cell.at("r"), k = cell.at("k");
        const auto it = std::find_if(cells.begin(), cells.end(), [&](const TableCell& c) { return c.r == r && c.k == k; });
        if (it == cells.end()) continue;
        ++compared;
        const AlgebraSpec s{r, k};
        std::vector<Weight> basis;
        for (const auto& e : cell.at("basis")) basis.push_back(parse_weight_expr(s, e.get<std::string>()));
        const std::string at = "(" + std::to_string(r) + "," + std::to_string(k) + ")";
        o.check(it->rank == static_cast<int>(basis.size()), "Table rank " + at);
        o.check(std::any_of(it->bases.begin(), it->bases.end(), [&](const auto& b) { return same_up_to_conjugation(b, basis); }),
                "Table basis " + at);
        o.check(it->w1_invertible == cell.at("invertible").get<bool>(), "Table invertibility mark " + at);
    }
    o.note(std::to_string(compared) + " Table cells compared");
    return o;
}

Outcome invertibility() {
    Outcome o;
    const auto z = construct_zero_weight(11, 30, {3, 5}, {2, 1});
    o.check(z.ok && z.weight, "construction succeeds");
    o.check(z.labels == std::vector<int>{26, 25, 20, 19, 16, 13, 10, 7, 6, 1, 0}, "labels {26,...,0}");
    if (z.weight) {
        AlgebraSpec s{10, 19};
        o.check(chi(s, fundamental(s, 1), *z.weight).is_zero(), "χ_{w^1} = 0 (CycNumber)");
        o.check(chi_w1_is_zero(s, *z.weight), "χ_{w^1} = 0 (label sum)");
    }
    std::vector<AlgebraSpec> grid;
    for (int r = 1; r <= 5; ++r)
        for (int k = 1; k <= 8; ++k) grid.push_back({r, k});
    const auto rep = conjecture2_scan(grid);
    o.check(rep.mismatches == 0, std::to_string(rep.mismatches) + " predicate mismatches");
    o.note(std::to_string(rep.cells.size()) + " cells scanned");
    return o;
}

Outcome integrality() {
    Outcome o;
    double worst = 0;
    std::vector<AlgebraSpec> specs;
    for (int k = 1; k <= 8; ++k) specs.push_back({1, k});
    for (int k = 1; k <= 5; ++k) specs.push_back({2, k});
    for (int k = 1; k <= 4; ++k) specs.push_back({3, k});
    for (const auto& s : specs) {
        CharacterTable t(s);
        try {
            for (std::size_t l = 0; l < t.size(); ++l) {
                const auto f = fusion_matrix(t, l);
                worst = std::max(worst, f.residual);
                if (l == 0) o.check(f.entries.isIdentity(), "N_0 = I at " + std::to_string(s.r) + "," + std::to_string(s.k));
            }
        } catch (const IntegralityError& e) {
            o.check(false, e.what());
        }
    }
    o.check(worst < 1e-6, "residual " + str(worst));
    for (auto s : {AlgebraSpec{1, 3}, AlgebraSpec{2, 2}}) {
        CharacterTable t(s);
        std::vector<Eigen::Matrix<nt::i64, Eigen::Dynamic, Eigen::Dynamic>> n;
        for (std::size_t l = 0; l < t.size(); ++l) n.push_back(fusion_matrix(t, l).entries);
        const std::size_t m = t.size();
        bool assoc = true;
        for (std::size_t l = 0; l < m; ++l)
            for (std::size_t mu = 0; mu < m; ++mu)
                for (std::size_t g = 0; g < m; ++g)
                    for (std::size_t d = 0; d < m; ++d) {
                        nt::i64 lhs = 0, rhs = 0;
                        for (std::size_t v = 0; v < m; ++v) {
                            lhs += n[l](mu, v) * n[v](g, d);
                            rhs += n[mu](g, v) * n[l](v, d);
                        }
                        assoc = assoc && lhs == rhs;
                    }
        o.check(assoc, "associativity at " + std::to_string(s.r) + "," + std::to_string(s.k));
    }
    o.note("max residual " + str(worst));
    return o;
}

Outcome unitarity() {
    Outcome o;
    double wu = 0, ws = 0;
    std::size_t cells = 0;
    // k = 0 has the single weight 0 for every r and is omitted
    for (int r = 1; weight_count({r, 1}) <= 500; ++r)
        for (int k = 1; weight_count({r, k}) <= 500; ++k) {
            CharacterTable t({r, k});
            const auto& s = t.s_matrix();
            wu = std::max(wu, unitarity_residual(s));
            ws = std::max(ws, symmetry_residual(s));
            ++cells;
        }
    o.check(wu < 1e-8, "unitarity " + str(wu));
    o.check(ws < 1e-8, "symmetry " + str(ws));
    o.note(std::to_string(cells) + " cells, max residuals " + str(wu) + " / " + str(ws));
    return o;
}

Outcome galois() {
    Outcome o;
    // S covariance, exact, over every unit mod 4N
    for (auto s : {AlgebraSpec{2, 3}, AlgebraSpec{1, 4}}) {
        GaloisContext ctx(s);
        const nt::i64 big = 4 * ctx.order();
        bool ok = true;
        for (nt::i64 ell : nt::units(big)) {
            const auto act = ctx.action(ell);
            const GaloisElement g(static_cast<int>(big), ell);
            for (std::size_t l = 0; l < ctx.size() && ok; ++l)
                for (std::size_t m = 0; m < ctx.size() && ok; ++m) {
                    const auto lhs = (ctx.modular().chi(ctx.index()[l], ctx.index()[m]) * ctx.s_zero(m)).galois(g);
                    const auto rhs = ctx.modular().chi(ctx.index()[l], ctx.index()[act.permutation[m]]) *
                                     ctx.s_zero(act.permutation[m]) * mpq_class(act.parity[m]);
                    ok = (lhs - rhs).is_zero();
                }
        }
        o.check(ok, "S covariance at " + std::to_string(s.r) + "," + std::to_string(s.k));
    }
    // σ-formula as written, C^a J^{b t(μ+ρ)} μ
    for (auto s : {AlgebraSpec{2, 3}, AlgebraSpec{3, 4}}) {
        const auto rep = verify_sigma_formula(s);
        const std::string at = std::to_string(s.r) + "," + std::to_string(s.k);
        o.check(rep.failures.empty(), "σ-formula as written at " + at + ": " + std::to_string(rep.failures.size()) + " of " +
                                          std::to_string(rep.checked) + " fail");
        o.note("σ-formula at " + at + " with J^{bt} applied after C^a: " + std::to_string(rep.reordered_failures.size()) + " failures");
    }
    for (auto [r, k, m] : std::vector<std::array<int, 3>>{{4, 4, 1}, {5, 4, 1}, {3, 4, 2}}) {
        const auto rep = orbit_minimality_check(m, {r, k});
        const std::string at = std::to_string(r) + "," + std::to_string(k) + "," + std::to_string(m);
        o.check(rep.ok(), "orbit check " + at + (rep.violations.empty() ? "" : ": " + rep.violations.front()));
        if (r == 3) o.check(rep.exception, "(3,4,2) recognised as the exception");
    }
    for (auto [r, k] : std::vector<std::array<int, 2>>{{2, 3}, {3, 4}, {4, 3}, {5, 3}}) {
        const auto f = field_identification({r, k});
        const std::string at = std::to_string(r) + "," + std::to_string(k);
        o.check(f.L_full, "L = Q_N at " + at);
        o.check(f.consistent(), "K = " + f.K_descriptor + " vs predicted " + f.K_predicted + " at " + at);
        o.note(at + ": L = Q_" + std::to_string(f.N) + ", K = " + f.K_descriptor);
    }
    return o;
}

// The fast paths (label-sum zero test, mod-p signatures) against CycNumber::is_zero.
Outcome exactness() {
    Outcome o;
    for (auto s : {AlgebraSpec{3, 4}, AlgebraSpec{4, 5}, AlgebraSpec{5, 3}}) {
        ModularCharacters mc(s);
        const auto w1 = fundamental(s, 1);
        for (const auto& mu : enumerate(s))
            o.check(chi_w1_is_zero(s, mu) == mc.chi(w1, mu).is_zero(), "label-sum test at " + to_string(mu));
    }
    for (auto s : {AlgebraSpec{3, 3}, AlgebraSpec{2, 5}}) {
        SignatureTable st(s);
        ModularCharacters mc(s);
        const auto all = enumerate(s);
        for (const auto& g : all) {
            const auto ids = st.exact_ids(g);
            for (std::size_t i = 0; i < all.size(); ++i)
                for (std::size_t j = i + 1; j < all.size(); ++j)
                    o.check((ids[i] == ids[j]) == (mc.chi(g, all[i]) - mc.chi(g, all[j])).is_zero(), "signature classes");
        }
    }
    o.note("all suites run under ctest");
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> expect_fail;
    std::vector<int> only;
    std::string fixtures = VERLINDE_FIXTURE_DIR;
    app.add_option("--expect-fail", expect_fail, "criteria whose FAIL is known and recorded")->delimiter(',');
    app.add_option("--only", only, "run a subset")->delimiter(',');
    app.add_option("--fixtures", fixtures);
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::tuple<int, std::string, double, std::function<Outcome()>>> criteria{
        {1, "counting suite", 5, counting},
        {2, "factor-weight example", 1, factor_weights},
        {3, "fixed-point factorisation", 60, factorisation},
        {4, "fusion-rank reproduction", 600, [&] { return fusion_ranks(fixtures); }},
        {5, "invertibility and zeros", 60, invertibility},
        {6, "Verlinde integrality", 60, integrality},
        {7, "unitarity and symmetry", 30, unitarity},
        {8, "Galois suite", 300, galois},
        {9, "exact decisions by CycNumber", 60, exactness},
    };
    const std::set<int> expected(expect_fail.begin(), expect_fail.end());
    int unexpected = 0;
    for (const auto& [id, name, budget, run] : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = run();
        } catch (const std::exception& e) {
            out.check(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.check(secs < budget, "time budget " + str(budget) + " s");
        const bool known = expected.count(id) > 0;
        std::cout << (out.pass ? "PASS" : "FAIL") << "  " << id << "  " << name << "  (" << str(secs) << " s)"
                  << (!out.pass && known ? "  [known]" : "") << '\n';
        for (const auto& n : out.notes) std::cout << "        " << n << '\n';
        if (out.pass == known) ++unexpected;
    }
    return unexpected ? 1 : 0;
}
