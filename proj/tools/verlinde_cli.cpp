// Command-line front end. Exit codes: 0 success, 1 a mathematical check
// failed, 2 usage or capacity error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "verlinde.hpp"
#include "verlinde/json_io.hpp"

using namespace verlinde;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    int r = 1;
    int k = 1;
    std::string format = "json";
    std::string cache_dir;
    bool no_zeroth = false;
    std::size_t capacity = kDefaultCapacity;
    unsigned jobs = 1;

    AlgebraSpec spec() const {
        if (r < 1) throw UsageError("--rank must be >= 1");
        if (k < 0) throw UsageError("--level must be >= 0");
        return {r, k};
    }
};

// "1,0,2" (all labels, or λ_1..λ_r with --no-zeroth), or a sum like "2w2+w5".
Weight parse_weight(const Common& c, const std::string& text, const char* flag) {
    const auto spec = c.spec();
    if (text.find('w') != std::string::npos || text == "0" || text == "J0") {
        try {
            return parse_weight_expr(spec, text);
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string(flag) + ": " + e.what());
        }
    }
    std::vector<int> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string(flag) + ": not an integer: '" + item + "'");
        }
    }
    try {
        if (c.no_zeroth) return from_nonzero_labels(spec, v);
        if (static_cast<int>(v.size()) != spec.rbar())
            throw UsageError(std::string(flag) + ": expected " + std::to_string(spec.rbar()) +
                             " labels (or pass --no-zeroth with " + std::to_string(spec.r) + ")");
        Weight w(v);
        require_valid(spec, w);
        return w;
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
}

std::vector<Weight> parse_weight_list(const Common& c, const std::string& text, const char* flag) {
    std::vector<Weight> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';'))
        if (!item.empty()) out.push_back(parse_weight(c, item, flag));
    if (out.empty()) throw UsageError(std::string(flag) + ": empty weight list");
    return out;
}

void emit(const Common& c, const json& j) {
    if (c.format == "json") {
        std::cout << j.dump() << '\n';
        return;
    }
    if (j.is_object()) {
        for (const auto& [key, v] : j.items()) std::cout << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    } else {
        std::cout << j.dump(2) << '\n';
    }
}

std::filesystem::path cache_dir(const Common& c) { return c.cache_dir.empty() ? default_cache_dir() : std::filesystem::path(c.cache_dir); }

void add_spec(CLI::App* sub, Common& c) {
    sub->add_option("--rank,-r", c.r, "rank r of A_r")->required();
    sub->add_option("--level,-k", c.k, "level k")->required();
}

json golden_compare(const std::vector<TableCell>& cells, const std::filesystem::path& golden) {
    std::ifstream in(golden);
    if (!in) throw UsageError("--golden: cannot open " + golden.string());
    const auto doc = json::parse(in);
    json mismatches = json::array();
    std::size_t compared = 0;
    for (const auto& g : doc.at("cells")) {
        const int r = g.at("r"), k = g.at("k");
        const auto it = std::find_if(cells.begin(), cells.end(), [&](const TableCell& c) { return c.r == r && c.k == k; });
        if (it == cells.end()) continue;
        ++compared;
        const AlgebraSpec s{r, k};
        std::vector<Weight> basis;
        for (const auto& e : g.at("basis")) basis.push_back(parse_weight_expr(s, e.get<std::string>()));
        const bool rank_ok = it->rank == static_cast<int>(basis.size());
        const bool basis_ok = std::any_of(it->bases.begin(), it->bases.end(), [&](const auto& b) { return same_up_to_conjugation(b, basis); });
        const bool inv_ok = it->w1_invertible == g.at("invertible").get<bool>();
        if (!(rank_ok && basis_ok && inv_ok))
            mismatches.push_back({{"r", r}, {"k", k}, {"rank_ok", rank_ok}, {"basis_ok", basis_ok}, {"invertible_ok", inv_ok}});
    }
    return {{"compared", compared}, {"mismatches", mismatches}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fusion rings of A_r at level k: characters, fusion, generators, zeros, Galois action"};
    app.require_subcommand(1);
    app.fallthrough();
    Common c;
    app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--cache-dir", c.cache_dir, "S-matrix cache directory (default $FUSION_CACHE_DIR or ./.fusion-cache)");
    app.add_option("--capacity", c.capacity, "largest |P_+| any command may enumerate");
    app.add_flag("--no-zeroth", c.no_zeroth, "weights are given as λ_1..λ_r, λ_0 inferred from the level");
    app.add_option("--jobs", c.jobs, "worker threads for scans")->check(CLI::PositiveNumber);

    std::string lambda_s, mu_s, gamma_s, journal, golden;
    int d = 1, max_rank = 8, max_level = 5, max_size = 3, max_zeros = 50;
    long long ell = 1;
    bool first_only = false, sigma = false, no_prefilter = false;
    std::vector<nt::i64> primes;
    std::vector<int> mult;
    int orbit_m = 0;

    auto* en = app.add_subcommand("enumerate", "list P_+^{r,k} in canonical order");
    add_spec(en, c);
    auto* ch = app.add_subcommand("chi", "exact fusion eigenvalue χ_λ(μ)");
    add_spec(ch, c);
    ch->add_option("--lambda", lambda_s)->required();
    ch->add_option("--mu", mu_s)->required();
    auto* sm = app.add_subcommand("smatrix", "numeric S matrix (cached)");
    add_spec(sm, c);
    auto* fu = app.add_subcommand("fuse", "fusion product λ × μ");
    add_spec(fu, c);
    fu->add_option("--lambda", lambda_s)->required();
    fu->add_option("--mu", mu_s)->required();
    auto* rk = app.add_subcommand("rank", "fusion-rank by exhaustive search");
    add_spec(rk, c);
    rk->add_option("--max-size", max_size, "largest basis size searched");
    rk->add_flag("--first", first_only, "stop at the first basis");
    auto* ge = app.add_subcommand("generators", "is a set of weights a fusion-generator");
    add_spec(ge, c);
    ge->add_option("--gamma", gamma_s, "weights separated by ';' (e.g. 'w1;w2')");
    auto* iv = app.add_subcommand("invertible", "zeros of χ_{w^1} and invertibility of N_{w^1}");
    add_spec(iv, c);
    iv->add_option("--max-zeros", max_zeros, "zeros listed in the output");
    iv->add_flag("--no-prefilter", no_prefilter, "test every weight even when the cell cannot have zeros");
    auto* si = app.add_subcommand("scan-invertible", "compare the invertibility predicate with exact zeros over a grid");
    si->add_option("--max-rank", max_rank);
    si->add_option("--max-level", max_level);
    si->add_option("--journal", journal, "JSON-lines journal; existing cells are resumed");
    auto* fa = app.add_subcommand("factorize", "fixed-point factorisation of χ_λ");
    add_spec(fa, c);
    fa->add_option("--lambda", lambda_s)->required();
    fa->add_option("-d", d, "period divisor of r̄")->required();
    auto* nz = app.add_subcommand("nz-census", "count NZ(d) and the ality test");
    add_spec(nz, c);
    nz->add_option("-d", d)->required();
    auto* zc = app.add_subcommand("zero-construct", "build a zero of χ_{w^1} from primes dividing k̄");
    add_spec(zc, c);
    zc->add_option("--primes", primes, "primes p_i (default: search)")->delimiter(',');
    zc->add_option("--mult", mult, "multiplicities a_i")->delimiter(',');
    auto* ga = app.add_subcommand("galois", "Galois permutation, σ-formula and orbit checks");
    add_spec(ga, c);
    ga->add_option("--ell", ell, "ℓ coprime to r̄k̄");
    ga->add_flag("--sigma", sigma, "check σ_ℓ μ = C^a J^{b t(μ+ρ)} μ for every ℓ = (-1)^a + b k̄");
    ga->add_option("--orbit", orbit_m, "check the Galois orbit of w^m");
    auto* fi = app.add_subcommand("fields", "identify the fields L and K");
    add_spec(fi, c);
    auto* tr = app.add_subcommand("table-repro", "fusion bases and N_{w^1} invertibility over a grid");
    tr->add_option("--max-rank", max_rank);
    tr->add_option("--max-level", max_level);
    tr->add_option("--golden", golden, "compare against a golden table file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*en) {
            const auto s = c.spec();
            const auto all = enumerate(s, c.capacity);
            emit(c, {{"r", s.r}, {"k", s.k}, {"count", all.size()}, {"weights", io::weights(all)}});
        } else if (*ch) {
            const auto s = c.spec();
            const Weight l = parse_weight(c, lambda_s, "--lambda"), u = parse_weight(c, mu_s, "--mu");
            const auto x = chi(s, l, u);
            emit(c, {{"lambda", io::weight(l)}, {"mu", io::weight(u)}, {"value", io::cyc(x)}, {"zero", x.is_zero()}});
        } else if (*sm) {
            const auto s = c.spec();
            CharacterTable t(s, c.capacity);
            const auto file = t.cache_file(cache_dir(c));
            bool cached = false;
            if (std::filesystem::exists(file)) {
                try {
                    t.load(file);
                    cached = true;
                } catch (const CacheError&) {
                }
            }
            const auto& sm_ = t.s_matrix();
            if (!cached) t.save(file);
            json rows = json::array();
            for (Eigen::Index i = 0; i < sm_.rows(); ++i) {
                json row = json::array();
                for (Eigen::Index j = 0; j < sm_.cols(); ++j) row.push_back(io::complex(sm_(i, j)));
                rows.push_back(row);
            }
            emit(c, {{"r", s.r}, {"k", s.k}, {"weights", io::weights(t.index().weights())}, {"s", rows},
                     {"unitarity_residual", unitarity_residual(sm_)}, {"symmetry_residual", symmetry_residual(sm_)},
                     {"certified", "float"}, {"from_cache", cached}});
        } else if (*fu) {
            const auto s = c.spec();
            CharacterTable t(s, c.capacity);
            const Weight l = parse_weight(c, lambda_s, "--lambda"), u = parse_weight(c, mu_s, "--mu");
            json out = json::object();
            for (const auto& [w, n] : fuse(t, l, u)) out[io::label_key(w)] = n;
            emit(c, out);
        } else if (*rk) {
            RankOptions o;
            o.max_size = max_size;
            o.all_witnesses = !first_only;
            o.jobs = c.jobs;
            o.capacity = c.capacity;
            const auto res = fusion_rank(c.spec(), o);
            emit(c, io::rank_result(res));
        } else if (*ge) {
            const auto s = c.spec();
            const auto dg = divisor_generators(s);
            json j{{"div", io::weights(dg.div)}, {"div_tau", io::weights(dg.div_tau)},
                   {"lower_bound", rank_lower_bound(s).bound}, {"w1_generates", corollary1_predicate(s)}};
            if (!gamma_s.empty()) {
                const auto gamma = parse_weight_list(c, gamma_s, "--gamma");
                const auto res = SignatureTable(s, c.capacity).is_generator(gamma);
                j["gamma"] = io::weights(gamma);
                j["generator"] = res.generator;
                j["certified"] = "exact";
                if (res.collision) j["collision"] = {io::weight(res.collision->first), io::weight(res.collision->second)};
            }
            emit(c, j);
        } else if (*iv) {
            const auto s = c.spec();
            ZeroScanOptions o;
            o.prefilter = !no_prefilter;
            o.capacity = c.capacity;
            const auto z = chi_w1_zero_set(s, o);
            std::vector<Weight> shown(z.zeros.begin(), z.zeros.begin() + std::min<std::size_t>(z.zeros.size(), static_cast<std::size_t>(max_zeros)));
            emit(c, {{"r", s.r}, {"k", s.k}, {"invertible", z.invertible()}, {"predicate", predicts_singular(s)},
                     {"zero_count", z.zeros.size()}, {"zeros", io::weights(shown)}, {"prefiltered", z.prefiltered},
                     {"tested", z.tested}, {"certified", "exact"}});
        } else if (*si) {
            std::vector<AlgebraSpec> grid;
            for (int r = 1; r <= max_rank; ++r)
                for (int k = 1; k <= max_level; ++k) grid.push_back({r, k});
            ScanOptions o;
            if (!journal.empty()) o.journal = journal;
            o.jobs = c.jobs;
            o.capacity = c.capacity;
            const auto rep = conjecture2_scan(grid, o);
            json cells = json::array();
            for (const auto& cell : rep.cells) {
                auto j = to_json(cell);
                j["certified"] = "exact";
                cells.push_back(j);
            }
            emit(c, {{"cells", cells}, {"mismatches", rep.mismatches}, {"resumed", rep.resumed}});
            return rep.mismatches ? 1 : 0;
        } else if (*fa) {
            const auto s = c.spec();
            const Weight l = parse_weight(c, lambda_s, "--lambda");
            if (s.rbar() % d) throw UsageError("-d: must divide r̄ = " + std::to_string(s.rbar()));
            const auto rec = factorization_verify(s, l, d);
            emit(c, io::factorization(rec));
            return rec.dichotomy_holds ? 0 : 1;
        } else if (*nz) {
            const auto s = c.spec();
            if (s.rbar() % d) throw UsageError("-d: must divide r̄ = " + std::to_string(s.rbar()));
            emit(c, io::census(nz_census(s, d, c.capacity)));
        } else if (*zc) {
            const auto s = c.spec();
            ZeroConstruction z;
            if (!primes.empty()) {
                if (mult.size() != primes.size()) throw UsageError("--mult: need one multiplicity per prime");
                z = construct_zero_weight(s.rbar(), s.kbar(), primes, mult);
            } else {
                z = construct_zero_weight_auto(s.rbar(), s.kbar());
            }
            json j = io::zero_construction(z);
            bool certified = false;
            if (z.ok && z.weight) {
                certified = chi_w1_is_zero(s, *z.weight);
                j["zero_certified"] = certified;
                j["certified"] = "exact";
            }
            emit(c, j);
            return z.ok && !certified ? 1 : 0;
        } else if (*ga) {
            const auto s = c.spec();
            GaloisContext ctx(s, c.capacity);
            json j{{"r", s.r}, {"k", s.k}, {"N", ctx.order()}, {"weights", io::weights(ctx.index().weights())}};
            bool ok = true;
            if (nt::gcd(nt::mod(ell, ctx.order()), ctx.order()) != 1) throw UsageError("--ell: must be coprime to r̄k̄");
            j["action"] = io::galois_action(ctx.action(ell));
            if (sigma) {
                const auto rep = verify_sigma_formula(ctx);
                j["sigma"] = io::sigma_report(rep);
                ok = ok && rep.ok();
            }
            if (orbit_m > 0) {
                const auto rep = orbit_minimality_check(ctx, orbit_m);
                j["orbit"] = io::orbit_report(rep);
                ok = ok && rep.ok();
            }
            emit(c, j);
            return ok ? 0 : 1;
        } else if (*fi) {
            const auto f = field_identification(c.spec());
            emit(c, io::field_report(f));
            return f.consistent() ? 0 : 1;
        } else if (*tr) {
            RankOptions o;
            o.jobs = c.jobs;
            o.capacity = c.capacity;
            const auto cells = table_repro(max_rank, max_level, o);
            json arr = json::array();
            for (const auto& cell : cells) arr.push_back(io::table_cell(cell));
            json j{{"cells", arr}};
            bool ok = true;
            if (!golden.empty()) {
                j["golden"] = golden_compare(cells, golden);
                ok = j["golden"]["mismatches"].empty();
            }
            emit(c, j);
            return ok ? 0 : 1;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << " (raise with --capacity)\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const IdentityViolation& e) {
        std::cerr << "identity violated: " << e.what() << '\n';
        return 1;
    } catch (const IntegralityError& e) {
        std::cerr << "integrality failure: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
