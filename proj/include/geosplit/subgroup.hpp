#pragma once

#include "geosplit/arith.hpp"
#include "geosplit/matrix.hpp"

#include <array>
#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace geosplit {

/// Congruence families. Gamma1 and GammaPrincipal are the +-symmetric
/// versions (a = d = +-1 with one sign), so all three contain -I.
enum class Family { Gamma0, Gamma1, GammaPrincipal };

inline constexpr std::array<Family, 3> kAllFamilies{Family::Gamma0, Family::Gamma1, Family::GammaPrincipal};

inline std::string_view family_name(Family f) {
    switch (f) {
        case Family::Gamma0: return "gamma0";
        case Family::Gamma1: return "gamma1";
        case Family::GammaPrincipal: return "gamma";
    }
    return "?";
}

inline Family parse_family(std::string_view s) {
    if (s == "gamma0") return Family::Gamma0;
    if (s == "gamma1") return Family::Gamma1;
    if (s == "gamma") return Family::GammaPrincipal;
    throw std::invalid_argument("unknown family '" + std::string(s) + "' (expected gamma0|gamma1|gamma)");
}

struct SubgroupSpec {
    Family family;
    i64 level;

    SubgroupSpec(Family f, i64 n) : family(f), level(n) {
        if (n < 2) throw std::invalid_argument("subgroup level must be >= 2");
    }

    auto operator<=>(const SubgroupSpec&) const = default;

    std::string name() const { return std::string(family_name(family)) + "(" + std::to_string(level) + ")"; }
};

/// |SL2(Z/NZ)/{+-I}|.
inline i64 xi_order(i64 level) {
    i64 order = level * level * level;
    for (auto& pp : factorize(level)) order = order / (pp.prime * pp.prime) * (pp.prime * pp.prime - 1);
    return level == 2 ? order : order / 2;
}

/// [SL2(Z) : subgroup] from the index formulas.
inline i64 subgroup_index(const SubgroupSpec& s) {
    const i64 n = s.level;
    switch (s.family) {
        case Family::Gamma0: {
            i64 idx = n;
            for (auto& pp : factorize(n)) idx = idx / pp.prime * (pp.prime + 1);
            return idx;
        }
        case Family::Gamma1:
            // The image of Gamma1 in Xi is {T^b}, of order N, once -1 != 1 has
            // been identified; for N <= 2 Gamma1 and Gamma0 coincide.
            if (n <= 2) return subgroup_index({Family::Gamma0, n});
            return xi_order(n) / n;
        case Family::GammaPrincipal: return xi_order(n);
    }
    return 0;
}

inline bool is_member(const ProjectiveResidueMatrix& g, const SubgroupSpec& s) {
    if (g.level() != s.level) throw std::invalid_argument("is_member: level mismatch");
    const i64 n = s.level;
    if (g.c() != 0) return false;
    if (s.family == Family::Gamma0) return true;
    // c == 0 forces ad == 1, so a == +-1 already gives d == a.
    const bool unipotent = g.a() == 1 % n || g.a() == n - 1;
    if (!unipotent) return false;
    if (s.family == Family::Gamma1) return true;
    return g.b() == 0;
}

}  // namespace geosplit
