#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "verlinde/fixed_points.hpp"

using namespace verlinde;

TEST(FixedPoints, FactorWeightExample) {
    AlgebraSpec s{11, 6};
    const Weight lam({0, 0, 1, 0, 0, 1, 1, 1, 0, 1, 1, 0});
    ASSERT_TRUE(is_valid(s, lam));
    EXPECT_EQ(partition_labels(lam).values, (std::vector<int>{17, 16, 14, 13, 12, 10, 8, 6, 5, 3, 1, 0}));
    const auto res = nz_test(s, lam, 4);
    ASSERT_TRUE(res.member);
    const auto& f = res.decomposition->factors;
    ASSERT_EQ(f.size(), 3u);
    EXPECT_EQ(f[0], Weight({1, 0, 1, 0}));
    EXPECT_EQ(f[1], Weight({0, 0, 0, 2}));
    EXPECT_EQ(f[2], Weight({1, 1, 0, 0}));
    // classes partition 1..r̄
    std::set<int> seen;
    for (const auto& c : res.decomposition->classes) seen.insert(c.begin(), c.end());
    EXPECT_EQ(seen.size(), 12u);
}

TEST(FixedPoints, FullPeriodEveryoneIsMember) {
    AlgebraSpec s{3, 4};
    for (const auto& l : enumerate(s)) {
        const auto r = nz_test(s, l, 4);
        ASSERT_TRUE(r.member);
        EXPECT_EQ(r.decomposition->factors.size(), 1u);
    }
}

TEST(FixedPoints, NonMemberCertificate) {
    AlgebraSpec s{3, 4};
    const auto r = nz_test(s, fundamental(s, 1), 1);
    EXPECT_FALSE(r.member);
    EXPECT_GE(r.bad_class, 1);
    EXPECT_NE(r.bad_count, 1);
    EXPECT_THROW(nz_test(s, vacuum(s), 3), std::invalid_argument);
}

TEST(FixedPoints, CountsSmall) {
    AlgebraSpec s{3, 4};
    const auto all = enumerate(s);
    auto count = [&](int d) { return std::count_if(all.begin(), all.end(), [&](const Weight& l) { return nz_test(s, l, d).member; }); };
    EXPECT_EQ(all.size(), 35u);
    EXPECT_EQ(count(1), 8);
    EXPECT_EQ(count(2), 18);
}

TEST(FixedPoints, CensusRank3) {
    const auto c8 = nz_census({3, 8}, 2);
    EXPECT_EQ(c8.nz, 75u);
    EXPECT_EQ(c8.ality_pass, 85u);
    EXPECT_EQ(c8.total, 165u);
    EXPECT_EQ(c8.ality_pass_all_zero, 10u);
    bool found = false;
    for (const auto& p : c8.per_fixed_point)
        if (p.phi == Weight({3, 1, 3, 1})) {
            found = true;
            EXPECT_EQ(p.nonzero_count, 48u);
        }
    EXPECT_TRUE(found);
    const auto c12 = nz_census({3, 12}, 2);
    EXPECT_EQ(c12.nz, 196u);
    EXPECT_EQ(c12.ality_pass, 231u);
    EXPECT_EQ(c12.total, 455u);
    const auto c16 = nz_census({3, 16}, 2);
    EXPECT_EQ(c16.nz, 405u);
    EXPECT_EQ(c16.ality_pass, 489u);
    EXPECT_EQ(c16.total, 969u);
}

TEST(FixedPoints, DichotomyAndFactorisation) {
    for (auto [r, k, d] : std::vector<std::array<int, 3>>{{3, 4, 1}, {3, 4, 2}, {3, 8, 2}, {5, 6, 2}, {5, 6, 3}, {7, 4, 2}}) {
        AlgebraSpec s{r, k};
        FixedPointFactorizer fz(s, d);
        EXPECT_LT(fz.s_zero_residual(), 1e-9);
        std::size_t members = 0;
        for (const auto& l : enumerate(s)) {
            const auto rec = fz.verify(l);
            ASSERT_TRUE(rec.dichotomy_holds) << r << "," << k << "," << d << " " << to_string(l) << " " << rec.mismatch;
            if (!rec.member) continue;
            ++members;
            EXPECT_TRUE(rec.exact_holds);
            // under our phase convention the fitted root of unity is trivial
            EXPECT_EQ(rec.epsilon, 1);
            EXPECT_EQ(rec.c, 0);
            EXPECT_LT(rec.s_residual, 1e-9);
        }
        EXPECT_GT(members, 0u);
    }
}

TEST(FixedPoints, VacuumFactorsTrivially) {
    AlgebraSpec s{5, 6};
    for (int d : {1, 2, 3, 6}) {
        const auto rec = factorization_verify(s, vacuum(s), d);
        EXPECT_TRUE(rec.exact_holds);
        for (const auto& [phi, nz] : rec.nonzero) EXPECT_TRUE(nz);
    }
}

TEST(FixedPoints, FundamentalWeightsAtFixedPoints) {
    // χ_{w^ℓ}(φ) = χ'_{w'^{ℓd/r̄}}(φ') when r̄/d | ℓ, else 0
    for (auto [r, k, d] : std::vector<std::array<int, 3>>{{3, 8, 2}, {5, 6, 2}, {5, 6, 3}, {7, 4, 2}}) {
        AlgebraSpec s{r, k};
        const AlgebraSpec t = truncated_spec(s, d);
        ModularCharacters big(s), small(t);
        const int q = s.rbar() / d;
        for (const auto& phi : fixed_points(s, d)) {
            const Weight tp = truncate_fixed_point(s, phi, d);
            for (int l = 1; l <= r; ++l) {
                const auto x = big.chi(fundamental(s, l), phi);
                if (l % q) {
                    EXPECT_TRUE(x.is_zero());
                } else {
                    const int m = l / q;
                    const Weight w = m == d ? vacuum(t) : fundamental(t, m);
                    EXPECT_TRUE((x - small.chi(w, tp)).is_zero()) << to_string(phi) << " l=" << l;
                }
            }
        }
    }
}

TEST(FixedPoints, NZMonotoneInPeriod) {
    AlgebraSpec s{3, 8};
    for (const auto& l : enumerate(s)) {
        const bool m1 = nz_test(s, l, 1).member, m2 = nz_test(s, l, 2).member, m4 = nz_test(s, l, 4).member;
        EXPECT_TRUE(!m1 || m2) << to_string(l);
        EXPECT_TRUE(!m2 || m4) << to_string(l);
    }
}

TEST(FixedPoints, MembershipMatchesCanonicalPoint) {
    for (auto [r, k] : std::vector<std::array<int, 2>>{{3, 4}, {3, 8}}) {
        AlgebraSpec s{r, k};
        ModularCharacters mc(s);
        for (int d = 1; d <= s.rbar(); ++d) {
            if (!fixed_period_allowed(s, d)) continue;
            const Weight phi = canonical_fixed_point(s, d);
            for (const auto& l : enumerate(s)) EXPECT_EQ(nz_test(s, l, d).member, !mc.chi(l, phi).is_zero()) << to_string(l);
        }
    }
}

TEST(FixedPoints, SZeroFactorisation) {
    for (int d : {1, 2, 4}) EXPECT_LT(FixedPointFactorizer({3, 8}, d).s_zero_residual(), 1e-9);
}
