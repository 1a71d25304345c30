#pragma once

// Conjugacy-class families of Xi = SL2(Z/p^r)/{+-1} for odd p: the split
// semisimple sets A0^(k,l), A_k, the unipotent-type sets B_k^(m) (with the
// B_k^(m,+-) refinement), and the non-split sets C0^(k,l), C_k.

#include "geosplit/arith.hpp"
#include "geosplit/errors.hpp"
#include "geosplit/matrix.hpp"
#include "geosplit/subgroup.hpp"

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace geosplit {

enum class FamilyKind { Identity, A0, A, B, BPlus, BMinus, C0, C };

/// k is the level (largest k with g = +-I mod p^k) for A, B, C; for A0 and
/// C0 it is the index with M(g) = l p^(r-k). m is the B parameter.
struct FamilyLabel {
    FamilyKind kind = FamilyKind::Identity;
    int k = 0;
    i64 l = 1;
    int m = 0;

    auto operator<=>(const FamilyLabel&) const = default;

    /// The B_k^(m) set containing a B^(m,+-) label.
    FamilyLabel without_sign() const {
        FamilyLabel f = *this;
        if (f.kind == FamilyKind::BPlus || f.kind == FamilyKind::BMinus) f.kind = FamilyKind::B;
        return f;
    }

    std::string to_string() const {
        const std::string ks = std::to_string(k);
        switch (kind) {
            case FamilyKind::Identity: return "I";
            case FamilyKind::A0: return "A0(" + ks + "," + std::to_string(l) + ")";
            case FamilyKind::A: return "A" + ks;
            case FamilyKind::B: return "B" + ks + "(" + std::to_string(m) + ")";
            case FamilyKind::BPlus: return "B" + ks + "(" + std::to_string(m) + ",+)";
            case FamilyKind::BMinus: return "B" + ks + "(" + std::to_string(m) + ",-)";
            case FamilyKind::C0: return "C0(" + ks + "," + std::to_string(l) + ")";
            case FamilyKind::C: return "C" + ks;
        }
        return "?";
    }
};

inline FamilyLabel label_identity() { return {FamilyKind::Identity, 0, 1, 0}; }
inline FamilyLabel label_a0(int k, i64 l) { return {FamilyKind::A0, k, l, 0}; }
inline FamilyLabel label_a(int k) { return {FamilyKind::A, k, 1, 0}; }
inline FamilyLabel label_b(int k, int m) { return {FamilyKind::B, k, 1, m}; }
inline FamilyLabel label_b_signed(int k, int m, int sign) {
    return {sign > 0 ? FamilyKind::BPlus : FamilyKind::BMinus, k, 1, m};
}
inline FamilyLabel label_c0(int k, i64 l) { return {FamilyKind::C0, k, l, 0}; }
inline FamilyLabel label_c(int k) { return {FamilyKind::C, k, 1, 0}; }

/// B_k^(m) label with the +- refinement applied where it exists (m even, m < r-k).
inline FamilyLabel label_b_refined(int k, int m, int r, int sign) {
    if (m % 2 == 0 && m < r - k) return label_b_signed(k, m, sign);
    return label_b(k, m);
}

struct OddPrimePower {
    i64 p;
    int r;
    i64 n;
};

/// Returns (p, r, p^r) if level is an odd prime power, otherwise nullopt.
inline std::optional<OddPrimePower> odd_prime_power(i64 level) {
    auto [p, r] = prime_power(level);
    if (p == 0 || p == 2) return std::nullopt;
    return OddPrimePower{p, r, level};
}

inline OddPrimePower require_odd_prime_power(i64 level) {
    auto pp = odd_prime_power(level);
    if (!pp) throw std::invalid_argument("level " + std::to_string(level) + " is not an odd prime power");
    return *pp;
}

/// Largest k <= r with g = +-I mod p^k.
inline int level_of(const ProjectiveResidueMatrix& g, const OddPrimePower& pp) {
    int best = 0;
    for (i64 sign : {1, -1}) {
        int k = 0;
        i64 q = 1;
        while (k < pp.r) {
            const i64 q2 = q * pp.p;
            if (mod(g.a() - sign, q2) || mod(g.b(), q2) || mod(g.c(), q2) || mod(g.d() - sign, q2)) break;
            q = q2;
            ++k;
        }
        best = std::max(best, k);
    }
    return best;
}

/// Structural family of g: level, then the quadratic character of the
/// discriminant of (g - I)/p^k, then the valuation of its determinant.
inline FamilyLabel classify_element(const ProjectiveResidueMatrix& g, const OddPrimePower& pp) {
    const i64 p = pp.p, n = pp.n;
    const int r = pp.r;
    const int k = level_of(g, pp);
    if (k == r) return label_identity();

    std::array<i64, 4> e = g.entries();
    if (k == 0) {
        const i64 t = g.trace();
        const int chi = legendre(mod(t * t - 4, p), p);
        if (chi != 0) {
            const i64 order = order_in_xi(g);
            const int v = valuation(order, p, r);
            const i64 l = order / ipow(p, v);
            return chi > 0 ? label_a0(r - v, l) : label_c0(r - v, l);
        }
        if (mod(t - 2, p) != 0) e = g.negated();
    } else if (mod(e[0] - 1, p) != 0) {
        e = g.negated();
    }
    // X = (g - I)/p^k modulo q = p^(r-k), with the lift g = I mod p^k.
    const i64 pk = ipow(p, k), q = n / pk;
    const i64 xa = mod(e[0] - 1, n) / pk, xb = e[1] / pk, xc = e[2] / pk, xd = mod(e[3] - 1, n) / pk;
    const i64 minus_det = mod(mul_mod(xb, xc, q) - mul_mod(xa, xd, q), q);
    if (minus_det % p != 0) return legendre(minus_det, p) > 0 ? label_a(k) : label_c(k);
    const int m = valuation(minus_det, p, r - k);
    const int sign = m < r - k ? legendre(minus_det / ipow(p, m), p) : 1;
    return label_b_refined(k, m, r, sign);
}

/// (Z/p^r)^*/{+-1} is cyclic; the smallest integer generating it.
inline i64 smallest_sign_unit_generator(const OddPrimePower& pp) {
    const i64 target = euler_phi(pp.n) / 2;
    for (i64 g = 2; g < pp.n; ++g) {
        if (g % pp.p == 0) continue;
        i64 x = g, e = 1;
        while (x != 1 && x != pp.n - 1) {
            x = mul_mod(x, g, pp.n);
            ++e;
        }
        if (e == target) return g;
    }
    return 1;  // only for p^r = 3, where the group is trivial
}

inline i64 smallest_nonresidue(i64 p) {
    for (i64 a = 2; a < p; ++a)
        if (legendre(a, p) < 0) return a;
    throw std::invalid_argument("no quadratic non-residue");
}

/// Sizes of the family sets, as closed forms in p and r.
inline i64 family_set_size(const FamilyLabel& f, const OddPrimePower& pp) {
    const i64 p = pp.p;
    const int r = pp.r, k = f.k, m = f.m;
    switch (f.kind) {
        case FamilyKind::Identity: return 1;
        case FamilyKind::A0:
            return k < r ? euler_phi(f.l) * ipow(p, 3 * r - k - 2) * (p * p - 1) / 2
                         : euler_phi(f.l) * ipow(p, 2 * r - 1) * (p + 1) / 2;
        case FamilyKind::A: return ipow(p, 3 * r - 3 * k - 2) * (p * p - 1) / 2;
        case FamilyKind::B:
            return m < r - k ? ipow(p, 3 * r - 3 * k - m - 3) * (p - 1) * (p - 1) * (p + 1)
                             : ipow(p, 2 * r - 2 * k - 2) * (p * p - 1);
        case FamilyKind::BPlus:
        case FamilyKind::BMinus: return family_set_size(f.without_sign(), pp) / 2;
        case FamilyKind::C0:
            return k < r ? euler_phi(f.l) * ipow(p, 3 * r - k - 2) * (p - 1) * (p - 1) / 2
                         : euler_phi(f.l) * ipow(p, 2 * r - 1) * (p - 1) / 2;
        case FamilyKind::C: return ipow(p, 3 * r - 3 * k - 2) * (p - 1) * (p - 1) / 2;
    }
    return 0;
}

/// Every family set of Xi(p^r), with B_k^(m) split into +- where defined.
inline std::vector<FamilyLabel> all_family_labels(const OddPrimePower& pp) {
    const i64 p = pp.p;
    const int r = pp.r;
    std::vector<FamilyLabel> out{label_identity()};
    for (i64 l : divisors((p - 1) / 2))
        if (l > 1)
            for (int k = 1; k <= r; ++k) out.push_back(label_a0(k, l));
    for (int k = 1; k <= r - 1; ++k) out.push_back(label_a(k));
    for (int k = 0; k <= r - 1; ++k)
        for (int m = 1; m <= r - k; ++m) {
            if (m % 2 == 0 && m < r - k) {
                out.push_back(label_b_signed(k, m, 1));
                out.push_back(label_b_signed(k, m, -1));
            } else {
                out.push_back(label_b(k, m));
            }
        }
    for (i64 l : divisors((p + 1) / 2))
        if (l > 1)
            for (int k = 1; k <= r; ++k) out.push_back(label_c0(k, l));
    for (int k = 1; k <= r - 1; ++k) out.push_back(label_c(k));
    return out;
}

/// Companion matrix [[0,-1],[1,t]] with least t such that t^2 - 4 is a
/// non-residue mod p and the order in Xi is p^(r-1)(p+1)/2.
inline ProjectiveResidueMatrix nonsplit_generator(const OddPrimePower& pp) {
    const i64 want = ipow(pp.p, pp.r - 1) * (pp.p + 1) / 2;
    for (i64 t = 0; t < pp.n; ++t) {
        if (legendre(mod(t * t - 4, pp.p), pp.p) != -1) continue;
        ProjectiveResidueMatrix g(0, -1, 1, t, pp.n);
        if (order_in_xi(g) == want) return g;
    }
    throw ConsistencyError("no non-split generator at level " + std::to_string(pp.n));
}

/// One row instance of the explicit class-representative table.
struct ExplicitRepresentative {
    ProjectiveResidueMatrix matrix;
    FamilyLabel family;
    i64 order;       // tabulated M(g)
    i64 class_size;  // tabulated #[g]
};

namespace detail {

/// Representatives of (Z/q)^*/{+-1}.
inline std::vector<i64> units_up_to_sign(i64 q) {
    std::vector<i64> out;
    for (i64 s = 1; s <= std::max<i64>(1, q / 2); ++s)
        if (std::gcd(s, q) == 1) out.push_back(s);
    return out;
}

inline ProjectiveResidueMatrix diagonal_power(i64 delta, i64 e, i64 n) {
    const i64 x = pow_mod(delta, static_cast<u64>(e), n);
    return {x, 0, 0, inv_mod(x, n), n};
}

}  // namespace detail

/// Explicit class representatives built from delta (smallest generator of
/// (Z/p^r)^*/{+-1}), nu (smallest non-residue mod p) and omega (an element
/// of order p^(r-1)(p+1)/2 with tr^2 - 4 a non-residue), with the orders and
/// class sizes the classification tabulates for them.
inline std::vector<ExplicitRepresentative> explicit_representatives(const OddPrimePower& pp,
                                                                    const ProjectiveResidueMatrix& omega) {
    const i64 p = pp.p, n = pp.n;
    const int r = pp.r;
    const i64 delta = smallest_sign_unit_generator(pp);
    const i64 nu = smallest_nonresidue(p);
    std::vector<ExplicitRepresentative> out;

    for (i64 l : divisors((p - 1) / 2)) {
        if (l == 1) continue;
        for (int k = 1; k <= r; ++k)
            for (i64 s : detail::units_up_to_sign(l * ipow(p, r - k)))
                out.push_back({detail::diagonal_power(delta, s * ipow(p, k - 1) * (p - 1) / (2 * l), n),
                               label_a0(k, l), l * ipow(p, r - k), ipow(p, 2 * r - 1) * (p + 1)});
    }
    for (int k = 1; k <= r - 1; ++k)
        for (i64 s : detail::units_up_to_sign(ipow(p, r - k)))
            out.push_back({detail::diagonal_power(delta, s * ipow(p, k - 1) * (p - 1), n), label_a(k), ipow(p, r - k),
                           ipow(p, 2 * r - 2 * k - 1) * (p + 1)});
    for (int k = 0; k <= r - 1; ++k)
        for (int m = 1; m <= r - k; ++m) {
            const i64 q = ipow(p, r - k - m);
            for (i64 alpha = 1; alpha <= q; ++alpha) {
                if (q > 1 && alpha % p == 0) continue;
                if (q == 1 && alpha > 1) break;
                const i64 pk = ipow(p, k), low = ipow(p, k + m), high = ipow(p, 2 * k + m);
                ProjectiveResidueMatrix plain(1 + alpha * high, pk, alpha * low, 1, n);
                ProjectiveResidueMatrix twisted(1 + nu * alpha * high, nu * pk, alpha * low, 1, n);
                const int chi = legendre(alpha, p);
                const i64 size = ipow(p, 2 * r - 2 * k - 2) * (p * p - 1) / 2;
                out.push_back({plain, label_b_refined(k, m, r, chi), ipow(p, r - k), size});
                out.push_back({twisted, label_b_refined(k, m, r, -chi), ipow(p, r - k), size});
            }
        }
    for (i64 l : divisors((p + 1) / 2)) {
        if (l == 1) continue;
        for (int k = 1; k <= r; ++k)
            for (i64 s : detail::units_up_to_sign(l * ipow(p, r - k)))
                out.push_back({power(omega, static_cast<u64>(s * ipow(p, k - 1) * (p + 1) / (2 * l))), label_c0(k, l),
                               l * ipow(p, r - k), ipow(p, 2 * r - 1) * (p - 1)});
    }
    for (int k = 1; k <= r - 1; ++k)
        for (i64 s : detail::units_up_to_sign(ipow(p, r - k)))
            out.push_back({power(omega, static_cast<u64>(s * ipow(p, k - 1) * (p + 1))), label_c(k), ipow(p, r - k),
                           ipow(p, 2 * r - 2 * k - 1) * (p - 1)});
    return out;
}

/// Closed-form induced traces tr sigma(g) on the cosets of each family.
inline i64 closed_form_trace(const FamilyLabel& f, Family family, const OddPrimePower& pp) {
    const i64 p = pp.p;
    const int r = pp.r;
    if (f.kind == FamilyKind::Identity) return subgroup_index({family, pp.n});
    const bool top_b = f.kind == FamilyKind::B && f.m == r - f.k;
    switch (family) {
        case Family::Gamma0:
            if (f.kind == FamilyKind::A) return 2 * ipow(p, f.k);
            if (f.kind == FamilyKind::A0) return 2;
            if (top_b) return ipow(p, (r + f.k) / 2);
            if (f.kind == FamilyKind::BPlus) return 2 * ipow(p, f.k + f.m / 2);
            return 0;
        case Family::Gamma1:
            if (top_b) return ipow(p, r + f.k - 1) * (p - 1) / 2;
            return 0;
        case Family::GammaPrincipal: return 0;
    }
    return 0;
}

}  // namespace geosplit
