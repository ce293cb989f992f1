#pragma once

// Small integer number theory shared by the other modules: gcd/lcm,
// factorisation, unit groups, 64-bit modular arithmetic and prime search.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace verlinde::nt {

using i64 = std::int64_t;
using u64 = std::uint64_t;

inline i64 mod(i64 a, i64 n) {
    i64 r = a % n;
    return r < 0 ? r + n : r;
}

inline i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }
inline i64 lcm(i64 a, i64 b) { return std::lcm(a, b); }

/// Prime factorisation by trial division, as (prime, exponent) pairs in
/// increasing prime order.
inline std::vector<std::pair<i64, int>> factorize(i64 n) {
    if (n < 1) throw std::invalid_argument("factorize: n must be positive");
    std::vector<std::pair<i64, int>> out;
    for (i64 p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline std::vector<i64> prime_divisors(i64 n) {
    std::vector<i64> ps;
    for (auto [p, e] : factorize(n)) ps.push_back(p);
    return ps;
}

inline std::vector<i64> divisors(i64 n) {
    std::vector<i64> ds;
    for (i64 d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        ds.push_back(d);
        if (d * d != n) ds.push_back(n / d);
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

inline bool is_prime_small(i64 n) {
    if (n < 2) return false;
    for (i64 p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

inline i64 euler_phi(i64 n) {
    i64 phi = n;
    for (auto [p, e] : factorize(n)) phi = phi / p * (p - 1);
    return phi;
}

/// (Z/n)^x as sorted representatives in [0, n).
inline std::vector<i64> units(i64 n) {
    std::vector<i64> u;
    for (i64 a = 0; a < n; ++a)
        if (std::gcd(a, n) == 1) u.push_back(a);
    if (n == 1) u = {0};
    return u;
}

inline i64 binomial(i64 n, i64 k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    __int128 r = 1;
    for (i64 i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return static_cast<i64>(r);
}

/// Saturating binomial: returns `cap + 1` once the value exceeds `cap`.
inline i64 binomial_capped(i64 n, i64 k, i64 cap) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    __int128 r = 1;
    for (i64 i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > cap) return cap + 1;
    }
    return static_cast<i64>(r);
}

/// Is `target` a nonnegative integer combination of `gens`?
inline bool in_numerical_semigroup(i64 target, const std::vector<i64>& gens) {
    if (target < 0) return false;
    std::vector<char> reach(static_cast<std::size_t>(target) + 1, 0);
    reach[0] = 1;
    for (i64 t = 1; t <= target; ++t)
        for (i64 g : gens)
            if (g > 0 && g <= t && reach[t - g]) {
                reach[t] = 1;
                break;
            }
    return reach[target] != 0;
}

// ---- 64-bit modular arithmetic -------------------------------------------

inline u64 mulmod(u64 a, u64 b, u64 p) {
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % p);
}

inline u64 addmod(u64 a, u64 b, u64 p) {
    u64 s = a + b;
    return (s >= p || s < a) ? s - p : s;
}

inline u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + (p - b); }

inline u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline u64 invmod(u64 a, u64 p) {
    // p is prime throughout this library
    if (a % p == 0) throw std::domain_error("invmod: zero has no inverse");
    return powmod(a, p - 2, p);
}

/// Deterministic Miller-Rabin for 64-bit integers.
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// Largest prime p < 2^62 with p = 1 (mod n).
inline u64 prime_one_mod(u64 n) {
    const u64 top = (u64{1} << 62);
    for (u64 t = (top - 1) / n; t > 0; --t) {
        u64 p = t * n + 1;
        if (is_prime_u64(p)) return p;
    }
    throw std::runtime_error("prime_one_mod: no prime found");
}

/// The `count` largest primes p < 2^62 with p = 1 (mod n), descending.
inline std::vector<u64> primes_one_mod(u64 n, std::size_t count) {
    std::vector<u64> ps;
    const u64 top = (u64{1} << 62);
    for (u64 t = (top - 1) / n; t > 0 && ps.size() < count; --t) {
        u64 p = t * n + 1;
        if (is_prime_u64(p)) ps.push_back(p);
    }
    if (ps.size() < count) throw std::runtime_error("primes_one_mod: not enough primes");
    return ps;
}

/// An element of exact multiplicative order n in F_p (requires n | p-1).
inline u64 primitive_root_of_unity(u64 n, u64 p) {
    const auto qs = prime_divisors(static_cast<i64>(n));
    for (u64 g = 2; g < p; ++g) {
        u64 w = powmod(g, (p - 1) / n, p);
        bool ok = true;
        for (i64 q : qs)
            if (powmod(w, n / static_cast<u64>(q), p) == 1) {
                ok = false;
                break;
            }
        if (ok) return w;
    }
    throw std::runtime_error("primitive_root_of_unity: none found");
}

}  // namespace verlinde::nt
