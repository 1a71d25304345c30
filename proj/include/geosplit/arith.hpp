#pragma once

// Elementary number theory on machine integers.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace geosplit {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

/// Nonnegative residue of x modulo m (m > 0).
constexpr i64 mod(i64 x, i64 m) {
    i64 r = x % m;
    return r < 0 ? r + m : r;
}

constexpr i64 mul_mod(i64 a, i64 b, i64 m) {
    return static_cast<i64>(static_cast<i128>(mod(a, m)) * mod(b, m) % m);
}

constexpr i64 pow_mod(i64 base, u64 e, i64 m) {
    i64 r = 1 % m;
    i64 b = mod(base, m);
    while (e) {
        if (e & 1U) r = mul_mod(r, b, m);
        b = mul_mod(b, b, m);
        e >>= 1U;
    }
    return r;
}

/// Extended Euclid: returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
struct EuclidResult {
    i64 g, x, y;
};

constexpr EuclidResult ext_gcd(i64 a, i64 b) {
    i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        i64 q = old_r / r;
        i64 tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) return {-old_r, -old_s, -old_t};
    return {old_r, old_s, old_t};
}

/// Inverse of a modulo m; throws if a is not a unit.
inline i64 inv_mod(i64 a, i64 m) {
    auto [g, x, y] = ext_gcd(mod(a, m), m);
    (void)y;
    if (g != 1) throw std::domain_error("inv_mod: not a unit");
    return mod(x, m);
}

constexpr bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

struct PrimePower {
    i64 prime;
    int exponent;
    i64 value;  // prime^exponent
};

inline std::vector<PrimePower> factorize(i64 n) {
    std::vector<PrimePower> out;
    for (i64 p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        PrimePower pp{p, 0, 1};
        while (n % p == 0) {
            n /= p;
            ++pp.exponent;
            pp.value *= p;
        }
        out.push_back(pp);
    }
    if (n > 1) out.push_back({n, 1, n});
    return out;
}

/// If n = p^r with p prime, returns (p, r); otherwise (0, 0).
inline std::pair<i64, int> prime_power(i64 n) {
    auto f = factorize(n);
    if (f.size() != 1) return {0, 0};
    return {f[0].prime, f[0].exponent};
}

inline std::vector<i64> divisors(i64 n) {
    std::vector<i64> small, large;
    for (i64 d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        small.push_back(d);
        if (d != n / d) large.push_back(n / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

inline int moebius(i64 n) {
    int mu = 1;
    for (auto& pp : factorize(n)) {
        if (pp.exponent > 1) return 0;
        mu = -mu;
    }
    return mu;
}

inline i64 euler_phi(i64 n) {
    i64 phi = n;
    for (auto& pp : factorize(n)) phi = phi / pp.prime * (pp.prime - 1);
    return phi;
}

constexpr i64 ipow(i64 b, int e) {
    i64 r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

/// p-adic valuation of x, capped at cap (x == 0 returns cap).
constexpr int valuation(i64 x, i64 p, int cap) {
    if (x == 0) return cap;
    int v = 0;
    while (x % p == 0 && v < cap) {
        x /= p;
        ++v;
    }
    return v;
}

/// Legendre symbol (a/p) for an odd prime p: 1, -1 or 0.
inline int legendre(i64 a, i64 p) {
    i64 r = pow_mod(a, static_cast<u64>((p - 1) / 2), p);
    if (r == 0) return 0;
    return r == 1 ? 1 : -1;
}

/// floor(sqrt(n)) for n >= 0.
constexpr i64 isqrt(i64 n) {
    if (n < 2) return n;
    i64 x = static_cast<i64>(__builtin_sqrtl(static_cast<long double>(n)));
    while (x * x > n) --x;
    while ((x + 1) * (x + 1) <= n) ++x;
    return x;
}

/// Size of (Z/nZ)^* / {+-1}.
inline i64 units_mod_sign(i64 n) {
    return n <= 2 ? 1 : euler_phi(n) / 2;
}

}  // namespace geosplit
