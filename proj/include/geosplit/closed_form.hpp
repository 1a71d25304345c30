#pragma once

// Closed-form splitting types and densities at odd prime-power levels.
// Throughout, k is the exponent of p in the element order M = l p^k.

#include "geosplit/arith.hpp"
#include "geosplit/census.hpp"
#include "geosplit/family.hpp"
#include "geosplit/partition.hpp"
#include "geosplit/rational.hpp"
#include "geosplit/subgroup.hpp"

#include <string>
#include <vector>

namespace geosplit {

namespace closed_form {

using Runs = std::vector<Partition::Run>;

/// (p^(k-2i))^(p^(r-k+i-1)(p-1)) for i = 1..last.
inline void add_alternating(Runs& runs, i64 p, int r, int k, int last) {
    for (int i = 1; i <= last; ++i) runs.push_back({ipow(p, k - 2 * i), ipow(p, r - k + i - 1) * (p - 1)});
}

inline Partition gamma0_identity(i64 p, int r) { return Partition::rectangle(1, ipow(p, r - 1) * (p + 1)); }

/// Split semisimple, order l p^k with l | (p-1)/2, l > 1.
inline Partition gamma0_split(i64 p, int r, int k, i64 l) {
    if (k == 0) return Partition::from_runs({{l, (ipow(p, r) + ipow(p, r - 1) - 2) / l}, {1, 2}});
    Runs runs{{l * ipow(p, k), ipow(p, r - k - 1) * (p - 1) / l}};
    for (int j = k - 1; j >= 1; --j) runs.push_back({l * ipow(p, j), 2 * ipow(p, r - k - 1) * (p - 1) / l});
    runs.push_back({l, 2 * (ipow(p, r - k) - 1) / l});
    runs.push_back({1, 2});
    return Partition::from_runs(runs);
}

/// Non-split semisimple, order l p^k with l | (p+1)/2, l > 1 (or l = 1, k > 0).
inline Partition gamma0_nonsplit(i64 p, int r, int k, i64 l) {
    return Partition::rectangle(l * ipow(p, k), ipow(p, r - 1) * (p + 1));
}

/// Split, order p^k, 1 <= k <= r-1.
inline Partition gamma0_a(i64 p, int r, int k) {
    Runs runs{{ipow(p, k), ipow(p, r - k - 1) * (p - 1)}};
    for (int j = k - 1; j >= 1; --j) runs.push_back({ipow(p, j), 2 * ipow(p, r - k - 1) * (p - 1)});
    runs.push_back({1, 2 * ipow(p, r - k)});
    return Partition::from_runs(runs);
}

/// B^(m) at order p^k with m = k (the set B_(r-k)^(r-(r-k))).
inline Partition gamma0_b_top(i64 p, int r, int k) {
    Runs runs{{ipow(p, k), ipow(p, r - k)}};
    add_alternating(runs, p, r, k, (k - 1) / 2);
    runs.push_back({1, ipow(p, r - (k + 1) / 2)});
    return Partition::from_runs(runs);
}

/// B^(m), m odd, m < k.
inline Partition gamma0_b_odd(i64 p, int r, int k, int m) {
    Runs runs{{ipow(p, k), ipow(p, r - k)}};
    add_alternating(runs, p, r, k, (m - 1) / 2);
    runs.push_back({ipow(p, k - m), ipow(p, r - k + (m - 1) / 2)});
    return Partition::from_runs(runs);
}

/// B^(m,+), m even, m < k.
inline Partition gamma0_b_plus(i64 p, int r, int k, int m) {
    Runs runs{{ipow(p, k), ipow(p, r - k)}};
    add_alternating(runs, p, r, k, m / 2 - 1);
    runs.push_back({ipow(p, k - m), ipow(p, r - k + m / 2 - 1) * (p - 2)});
    for (int j = k - m - 1; j >= 1; --j) runs.push_back({ipow(p, j), 2 * ipow(p, r - k + m / 2 - 1) * (p - 1)});
    runs.push_back({1, 2 * ipow(p, r - k + m / 2)});
    return Partition::from_runs(runs);
}

/// B^(m,-), m even, m < k.
inline Partition gamma0_b_minus(i64 p, int r, int k, int m) {
    Runs runs{{ipow(p, k), ipow(p, r - k)}};
    add_alternating(runs, p, r, k, m / 2 - 1);
    runs.push_back({ipow(p, k - m), ipow(p, r - k + m / 2)});
    return Partition::from_runs(runs);
}

inline i64 gamma1_index(i64 p, int r) { return ipow(p, 2 * r - 2) * (p * p - 1) / 2; }

/// B^(m) at order p^k on Gamma1 cosets, 1 <= m <= k.
inline Partition gamma1_b(i64 p, int r, int k, int m) {
    Runs runs{{ipow(p, k), ipow(p, 2 * r - k - 1) * (p - 1) / 2}};
    for (int j = k - 1; j >= k - m + 1; --j) runs.push_back({ipow(p, j), ipow(p, 2 * r - k - 2) * (p - 1) * (p - 1) / 2});
    runs.push_back({ipow(p, k - m), ipow(p, 2 * r - k - 1) * (p - 1) / 2});
    return Partition::from_runs(runs);
}

/// Density of the semisimple family of order l p^k, l > 1.
inline Rational semisimple_density(i64 p, int r, int k, i64 l, bool split) {
    const i64 phi = euler_phi(l);
    if (k == 0) return split ? Rational(phi, ipow(p, r - 1) * (p - 1)) : Rational(phi, ipow(p, r - 1) * (p + 1));
    return split ? Rational(phi, ipow(p, r - k)) : Rational(phi * (p - 1), ipow(p, r - k) * (p + 1));
}

inline Rational identity_density(i64 p, int r) { return Rational(2, ipow(p, 3 * r - 2) * (p * p - 1)); }

inline Rational b_density(i64 p, int r, int k, int m) {
    if (m == k) return Rational(2, ipow(p, 3 * r - 2 * k));
    return Rational(2 * (p - 1), ipow(p, 3 * r - 3 * k + m + 1));
}

}  // namespace closed_form

/// One closed-form row: a named family of elements, its type and density.
struct ClosedFormRow {
    std::string name;
    Partition type;
    Rational density;
};

/// Rows of the closed-form table, before equal partitions are merged.
inline std::vector<ClosedFormRow> closed_form_rows(const SubgroupSpec& s) {
    using namespace closed_form;
    const auto pp = require_odd_prime_power(s.level);
    const i64 p = pp.p;
    const int r = pp.r;
    const i64 xi = xi_order(s.level);
    const i64 n = subgroup_index(s);
    std::vector<ClosedFormRow> rows;
    auto ks = [](int k) { return std::to_string(k); };
    auto ss = [](i64 v) { return std::to_string(v); };

    rows.push_back({"identity", Partition::rectangle(1, n), identity_density(p, r)});
    for (bool split : {true, false}) {
        for (i64 l : divisors(split ? (p - 1) / 2 : (p + 1) / 2)) {
            if (l == 1) continue;
            for (int k = 0; k <= r - 1; ++k) {
                const std::string name = std::string(split ? "split" : "nonsplit") + " l=" + ss(l) + " k=" + ks(k);
                Partition type;
                if (s.family == Family::Gamma0)
                    type = split ? gamma0_split(p, r, k, l) : gamma0_nonsplit(p, r, k, l);
                else
                    type = Partition::rectangle(l * ipow(p, k), n);
                rows.push_back({name, type, semisimple_density(p, r, k, l, split)});
            }
        }
    }
    switch (s.family) {
        case Family::Gamma0:
            for (int k = 1; k <= r - 1; ++k) {
                rows.push_back({"A k=" + ks(k), gamma0_a(p, r, k), Rational(1, ipow(p, 3 * (r - k)))});
                rows.push_back({"C k=" + ks(k), gamma0_nonsplit(p, r, k, 1),
                                Rational(p - 1, ipow(p, 3 * (r - k)) * (p + 1))});
            }
            for (int k = 1; k <= r; ++k)
                for (int m = 1; m <= k; ++m) {
                    const std::string name = "B k=" + ks(k) + " m=" + ks(m);
                    if (m == k) {
                        rows.push_back({name, gamma0_b_top(p, r, k), b_density(p, r, k, m)});
                    } else if (m % 2 == 1) {
                        rows.push_back({name, gamma0_b_odd(p, r, k, m), b_density(p, r, k, m)});
                    } else {
                        const Rational half(p - 1, ipow(p, 3 * r - 3 * k + m + 1));
                        rows.push_back({name + " +", gamma0_b_plus(p, r, k, m), half});
                        rows.push_back({name + " -", gamma0_b_minus(p, r, k, m), half});
                    }
                }
            break;
        case Family::Gamma1:
            for (int k = 1; k <= r - 1; ++k)
                rows.push_back({"A+C k=" + ks(k), Partition::rectangle(ipow(p, k), n),
                                Rational(2, ipow(p, 3 * r - 3 * k - 1) * (p + 1))});
            for (int k = 1; k <= r; ++k)
                for (int m = 1; m <= k; ++m)
                    rows.push_back({"B k=" + ks(k) + " m=" + ks(m), gamma1_b(p, r, k, m), b_density(p, r, k, m)});
            break;
        case Family::GammaPrincipal:
            for (int k = 1; k <= r; ++k) {
                const Rational d = k == r ? Rational(2, p)
                                          : Rational(2 * (p * p + p + 1), ipow(p, 3 * r - 3 * k + 1) * (p + 1));
                rows.push_back({"order p^" + ks(k), Partition::rectangle(ipow(p, k), xi), d});
            }
            break;
    }
    return rows;
}

/// The closed-form density table, equal partitions merged.
inline DensityTable density_table_closed_form(const SubgroupSpec& s) {
    DensityTable t;
    t.subgroup = s;
    t.xi_order = xi_order(s.level);
    t.index = subgroup_index(s);
    for (auto& row : closed_form_rows(s)) {
        if (row.type.weight() != t.index)
            throw ConsistencyError("closed form row '" + row.name + "' has weight " + std::to_string(row.type.weight()));
        t.entries[row.type] += row.density;
    }
    return t;
}

/// Closed-form splitting type of an element of a given family set.
inline Partition closed_form_type(const FamilyLabel& f, Family family, const OddPrimePower& pp) {
    using namespace closed_form;
    const i64 p = pp.p;
    const int r = pp.r;
    const i64 n = subgroup_index({family, pp.n});
    if (f.kind == FamilyKind::Identity) return Partition::rectangle(1, n);
    // Exponent of p in the element order.
    const int e = r - f.k;
    const bool semisimple = f.kind == FamilyKind::A0 || f.kind == FamilyKind::C0;
    const i64 l = semisimple ? f.l : 1;
    if (family == Family::GammaPrincipal) return Partition::rectangle(l * ipow(p, e), n);
    if (family == Family::Gamma1) {
        if (f.kind == FamilyKind::B || f.kind == FamilyKind::BPlus || f.kind == FamilyKind::BMinus)
            return gamma1_b(p, r, e, f.m);
        return Partition::rectangle(l * ipow(p, e), n);
    }
    switch (f.kind) {
        case FamilyKind::A0: return gamma0_split(p, r, e, l);
        case FamilyKind::C0: return gamma0_nonsplit(p, r, e, l);
        case FamilyKind::A: return gamma0_a(p, r, e);
        case FamilyKind::C: return gamma0_nonsplit(p, r, e, 1);
        case FamilyKind::B: return f.m == e ? gamma0_b_top(p, r, e) : gamma0_b_odd(p, r, e, f.m);
        case FamilyKind::BPlus: return gamma0_b_plus(p, r, e, f.m);
        case FamilyKind::BMinus: return gamma0_b_minus(p, r, e, f.m);
        case FamilyKind::Identity: break;
    }
    return Partition::rectangle(1, n);
}

}  // namespace geosplit
