#pragma once

// Coset tables SL2(Z)/G~ for the congruence families and the permutation
// representation Ind 1 they carry. Cosets are r*G~ and g acts by left
// multiplication: image[i] = j iff r_j^{-1} g r_i lies in G~.

#include "geosplit/arith.hpp"
#include "geosplit/errors.hpp"
#include "geosplit/matrix.hpp"
#include "geosplit/partition.hpp"
#include "geosplit/subgroup.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace geosplit {

using CosetIndex = std::uint32_t;

struct CosetPermutation {
    std::vector<CosetIndex> image;

    std::size_t size() const { return image.size(); }
    bool is_identity() const {
        for (std::size_t i = 0; i < image.size(); ++i)
            if (image[i] != i) return false;
        return true;
    }
    bool operator==(const CosetPermutation&) const = default;
};

enum class CosetKeyMode {
    /// Gamma0/Gamma1 cosets keyed by the first column of the representative
    /// (a point of P^1(Z/N), resp. a column up to sign).
    Fast,
    /// Cosets identified by explicit enumeration of r*Psi over all of Xi,
    /// Psi = image of the subgroup. Family-agnostic reference path.
    Generic,
};

struct CosetTableOptions {
    std::size_t cap = kDefaultCap;
    CosetKeyMode mode = CosetKeyMode::Fast;
};

class CosetTable {
public:
    const SubgroupSpec& subgroup() const { return subgroup_; }
    i64 level() const { return subgroup_.level; }
    std::size_t index() const { return reps_.size(); }
    const std::vector<ProjectiveResidueMatrix>& representatives() const { return reps_; }
    CosetKeyMode mode() const { return mode_; }

    /// Permutations induced by S and T (in that order).
    const std::vector<CosetPermutation>& generator_action() const { return generator_action_; }

    /// Coset index containing g.
    CosetIndex coset_of(const ProjectiveResidueMatrix& g) const {
        if (uses_columns()) return column_lookup_[column_key(g.a(), g.c())];
        auto it = element_lookup_.find(g.encode());
        if (it == element_lookup_.end()) throw ConsistencyError("coset_of: element not covered");
        return it->second;
    }

    CosetPermutation act(const ProjectiveResidueMatrix& g) const {
        check_level(g);
        CosetPermutation p;
        p.image.resize(reps_.size());
        if (uses_columns()) {
            const i64 n = level();
            for (std::size_t i = 0; i < reps_.size(); ++i) {
                const auto& r = reps_[i];
                i64 a = (g.a() * r.a() + g.b() * r.c()) % n;
                i64 c = (g.c() * r.a() + g.d() * r.c()) % n;
                p.image[i] = column_lookup_[column_key(a, c)];
            }
        } else {
            for (std::size_t i = 0; i < reps_.size(); ++i) p.image[i] = coset_of(g * reps_[i]);
        }
        return p;
    }

    /// Number of fixed cosets of g.
    i64 fixed_points(const ProjectiveResidueMatrix& g) const {
        check_level(g);
        i64 count = 0;
        if (uses_columns()) {
            const i64 n = level();
            for (std::size_t i = 0; i < reps_.size(); ++i) {
                const auto& r = reps_[i];
                i64 a = (g.a() * r.a() + g.b() * r.c()) % n;
                i64 c = (g.c() * r.a() + g.d() * r.c()) % n;
                count += column_lookup_[column_key(a, c)] == i;
            }
        } else {
            for (std::size_t i = 0; i < reps_.size(); ++i) count += coset_of(g * reps_[i]) == i;
        }
        return count;
    }

    friend CosetTable build_coset_table(const SubgroupSpec& s, const CosetTableOptions& opt);

private:
    explicit CosetTable(SubgroupSpec s) : subgroup_(s) {}

    bool uses_columns() const { return !column_lookup_.empty(); }

    void check_level(const ProjectiveResidueMatrix& g) const {
        if (g.level() != level()) throw std::invalid_argument("coset action: level mismatch");
    }

    std::size_t column_key(i64 a, i64 c) const {
        return column_class_[static_cast<std::size_t>(a * level() + c)];
    }

    SubgroupSpec subgroup_;
    CosetKeyMode mode_ = CosetKeyMode::Fast;
    std::vector<ProjectiveResidueMatrix> reps_;
    std::vector<CosetPermutation> generator_action_;
    // Fast path: column (a,c) -> column class id -> coset index.
    std::vector<std::uint32_t> column_class_;
    std::vector<CosetIndex> column_lookup_;
    // Generic path and Gamma(N): element encoding -> coset index.
    std::unordered_map<u64, CosetIndex> element_lookup_;
};

namespace detail {

inline constexpr std::uint32_t kNoClass = 0xffffffffU;

/// Column classes for the fast path. Gamma0: columns up to units, i.e.
/// P^1(Z/N). Gamma1: columns up to sign. Non-primitive columns get kNoClass.
inline std::vector<std::uint32_t> column_classes(Family f, i64 n) {
    std::vector<std::uint32_t> cls(static_cast<std::size_t>(n * n), kNoClass);
    std::vector<i64> scalars;
    if (f == Family::Gamma0) {
        for (i64 u = 1; u < n; ++u)
            if (std::gcd(u, n) == 1) scalars.push_back(u);
    } else {
        scalars = {1, n - 1};
    }
    std::uint32_t next = 0;
    for (i64 a = 0; a < n; ++a)
        for (i64 c = 0; c < n; ++c) {
            if (std::gcd(std::gcd(a, c), n) != 1) continue;
            auto& slot = cls[static_cast<std::size_t>(a * n + c)];
            if (slot != kNoClass) continue;
            for (i64 u : scalars) cls[static_cast<std::size_t>((u * a % n) * n + u * c % n)] = next;
            ++next;
        }
    return cls;
}

inline std::vector<ProjectiveResidueMatrix> subgroup_image(const SubgroupSpec& s);

}  // namespace detail

/// BFS closure from the identity coset, multiplying representatives on the
/// left by S then T. Throws CapExceeded if the index exceeds opt.cap and
/// ConsistencyError if the closure disagrees with the index formula.
inline CosetTable build_coset_table(const SubgroupSpec& s, const CosetTableOptions& opt = {}) {
    const i64 expected = subgroup_index(s);
    if (static_cast<std::size_t>(expected) > opt.cap)
        throw CapExceeded("coset index " + std::to_string(expected) + " of " + s.name() + " exceeds cap " +
                          std::to_string(opt.cap));
    CosetTable t(s);
    t.mode_ = opt.mode;
    const i64 n = s.level;
    const bool columns = opt.mode == CosetKeyMode::Fast && s.family != Family::GammaPrincipal;

    std::vector<ProjectiveResidueMatrix> psi;
    if (columns) {
        t.column_class_ = detail::column_classes(s.family, n);
        std::uint32_t classes = 0;
        for (auto c : t.column_class_)
            if (c != detail::kNoClass && c + 1 > classes) classes = c + 1;
        t.column_lookup_.assign(classes, detail::kNoClass);
    } else if (opt.mode == CosetKeyMode::Generic) {
        psi = detail::subgroup_image(s);
    }

    // Returns the coset of y if already known, else registers y as a new representative.
    auto locate_or_add = [&](const ProjectiveResidueMatrix& y) -> bool {
        const auto idx = static_cast<CosetIndex>(t.reps_.size());
        if (columns) {
            auto& slot = t.column_lookup_[t.column_key(y.a(), y.c())];
            if (slot != detail::kNoClass) return false;
            slot = idx;
        } else if (opt.mode == CosetKeyMode::Generic) {
            if (t.element_lookup_.count(y.encode())) return false;
            for (const auto& h : psi) t.element_lookup_.emplace((y * h).encode(), idx);
        } else {
            if (!t.element_lookup_.emplace(y.encode(), idx).second) return false;
        }
        t.reps_.push_back(y);
        return true;
    };

    const std::array<ProjectiveResidueMatrix, 2> gens{generator_s(n), generator_t(n)};
    locate_or_add(ProjectiveResidueMatrix::identity(n));
    for (std::size_t head = 0; head < t.reps_.size(); ++head) {
        if (t.reps_.size() > opt.cap) throw CapExceeded("coset closure exceeds cap");
        const auto r = t.reps_[head];
        for (const auto& g : gens) locate_or_add(g * r);
    }
    if (static_cast<i64>(t.reps_.size()) != expected)
        throw ConsistencyError("coset closure of " + s.name() + " has " + std::to_string(t.reps_.size()) +
                               " cosets, index formula gives " + std::to_string(expected));
    for (const auto& g : gens) t.generator_action_.push_back(t.act(g));
    return t;
}

/// Cycle type of a permutation.
inline Partition cycle_type(const CosetPermutation& p) {
    std::vector<char> seen(p.size(), 0);
    std::map<i64, i64> mult;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (seen[i]) continue;
        i64 len = 0;
        for (std::size_t j = i; !seen[j]; j = p.image[j]) {
            seen[j] = 1;
            ++len;
        }
        ++mult[len];
    }
    return Partition::from_multiplicities(mult);
}

inline CosetPermutation act(const ProjectiveResidueMatrix& g, const CosetTable& t) { return t.act(g); }

inline Partition splitting_type_cycles(const ProjectiveResidueMatrix& g, const CosetTable& t) {
    return cycle_type(t.act(g));
}

/// tr sigma(g): the number of cosets fixed by g.
inline i64 induced_trace(const ProjectiveResidueMatrix& g, const CosetTable& t) { return t.fixed_points(g); }

/// Reconstructs the cycle type from the traces of powers. With traces
/// tr(g^d) = sum_{j | d} j*l_j, Moebius inversion gives
/// m*l_m = sum_{d | m} mu(m/d) tr(g^d), for m dividing the permutation order.
inline Partition partition_from_power_traces(i64 order, const std::map<i64, i64>& trace_of_power) {
    std::map<i64, i64> mult;
    for (i64 m : divisors(order)) {
        i64 acc = 0;
        for (i64 d : divisors(m)) acc += moebius(m / d) * trace_of_power.at(d);
        if (acc < 0 || acc % m != 0)
            throw ConsistencyError("Moebius recursion produced a non-integral or negative multiplicity at m=" +
                                   std::to_string(m));
        if (acc) mult[m] = acc / m;
    }
    return Partition::from_multiplicities(mult);
}

/// Traces tr sigma(g^d) for d dividing the order of sigma(g), together with
/// that order: the least d | M(g) with tr sigma(g^d) = n.
struct PowerTraces {
    i64 permutation_order = 1;
    std::map<i64, i64> traces;
};

inline PowerTraces power_traces(const ProjectiveResidueMatrix& g, const CosetTable& t) {
    const i64 n = static_cast<i64>(t.index());
    std::map<i64, i64> all;
    PowerTraces out;
    out.permutation_order = 0;
    for (i64 d : divisors(order_in_xi(g))) {
        const i64 tr = t.fixed_points(power(g, static_cast<u64>(d)));
        all[d] = tr;
        if (tr == n) {
            out.permutation_order = d;
            break;
        }
    }
    if (out.permutation_order == 0) throw ConsistencyError("power_traces: g^M(g) does not act trivially");
    for (i64 d : divisors(out.permutation_order)) out.traces[d] = all.at(d);
    return out;
}

inline Partition splitting_type_moebius(const ProjectiveResidueMatrix& g, const CosetTable& t) {
    const auto pt = power_traces(g, t);
    auto p = partition_from_power_traces(pt.permutation_order, pt.traces);
    if (p.weight() != static_cast<i64>(t.index()))
        throw ConsistencyError("Moebius recursion: weight " + std::to_string(p.weight()) + " != index " +
                               std::to_string(t.index()));
    return p;
}

namespace detail {

/// Elements of Xi lying in the subgroup, found among the upper-triangular
/// elements.
inline std::vector<ProjectiveResidueMatrix> subgroup_image(const SubgroupSpec& s) {
    const i64 n = s.level;
    std::vector<ProjectiveResidueMatrix> out;
    for (i64 a = 1; a < n; ++a) {
        if (std::gcd(a, n) != 1) continue;
        for (i64 b = 0; b < n; ++b) {
            ProjectiveResidueMatrix g(a, b, 0, inv_mod(a, n), n);
            if (is_member(g, s)) out.push_back(g);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

}  // namespace geosplit
