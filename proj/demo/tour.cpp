// A short walk through the library at small rank and level.

#include <iostream>

#include "verlinde.hpp"

using namespace verlinde;

int main() {
    const AlgebraSpec s{2, 3};
    std::cout << "A_2 at level 3: " << weight_count(s) << " integrable weights, N = " << s.rbar() * s.kbar() << "\n";

    CharacterTable t(s);
    const Weight w1 = fundamental(s, 1);
    std::cout << "w1 x w1 =";
    for (const auto& [nu, n] : fuse(t, w1, w1)) std::cout << ' ' << n << '*' << to_string(nu);
    std::cout << "\n";

    // fusion eigenvalues of w1 are exact cyclotomic numbers
    for (const auto& mu : enumerate(s)) {
        const auto x = chi(s, w1, mu);
        std::cout << "  chi_w1(" << to_string(mu) << ") ~ " << x.to_complex() << (x.is_zero() ? "  (zero)" : "") << "\n";
    }

    const auto rank = fusion_rank(s);
    std::cout << "fusion rank " << rank.rank << ", e.g. basis";
    for (const auto& g : rank.witnesses.front()) std::cout << ' ' << to_string(g);
    std::cout << "\n";

    // zeros of chi_w1 make N_{w1} singular
    const AlgebraSpec z{3, 4};
    const auto zeros = chi_w1_zero_set(z);
    std::cout << "A_3 level 4: N_w1 " << (zeros.invertible() ? "invertible" : "singular") << ", " << zeros.zeros.size()
              << " zeros, first " << to_string(zeros.zeros.front()) << "\n";

    const auto act = galois_permutation(5, s);
    std::cout << "sigma_5 on P_+^{2,3}:";
    for (std::size_t i = 0; i < act.permutation.size(); ++i) std::cout << ' ' << i << "->" << act.permutation[i];
    std::cout << "\n";

    const auto f = field_identification(s);
    std::cout << "character field Q_" << f.N << ", S-matrix field " << f.K_descriptor << "\n";
}
