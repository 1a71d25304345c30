#pragma once

// Power maps between family sets: for each family F and 1 <= M <= p, the
// set {g^M : g in F} is predicted to be a single family set.

#include "geosplit/census.hpp"
#include "geosplit/family.hpp"

#include <set>
#include <string>
#include <vector>

namespace geosplit {

/// The family set predicted to contain {g^M : g in F}.
inline FamilyLabel predicted_power_family(const FamilyLabel& f, i64 M, const OddPrimePower& pp) {
    const i64 p = pp.p;
    const int r = pp.r, k = f.k;
    switch (f.kind) {
        case FamilyKind::Identity: return f;
        case FamilyKind::A0:
        case FamilyKind::C0: {
            const bool split = f.kind == FamilyKind::A0;
            if (M % f.l == 0) {
                if (k == r) return label_identity();
                return split ? label_a(k) : label_c(k);
            }
            if (M == p && k <= r - 1) return split ? label_a0(k + 1, f.l) : label_c0(k + 1, f.l);
            const i64 l = f.l / std::gcd(M, f.l);
            return split ? label_a0(k, l) : label_c0(k, l);
        }
        case FamilyKind::A:
        case FamilyKind::C: {
            const bool split = f.kind == FamilyKind::A;
            if (M == p && k == r - 1) return label_identity();
            if (M == p) return split ? label_a(k + 1) : label_c(k + 1);
            return f;
        }
        case FamilyKind::B:
        case FamilyKind::BPlus:
        case FamilyKind::BMinus: {
            if (M != p) return f;
            if (k == r - 1) return label_identity();
            if (f.m == r - k) return label_b(k + 1, r - k - 1);
            const int sign = f.kind == FamilyKind::BMinus ? -1 : 1;
            return label_b_refined(k + 1, f.m, r, sign);
        }
    }
    return f;
}

struct PowerRelationResult {
    FamilyLabel source;
    i64 exponent = 1;
    FamilyLabel predicted;
    /// Every g^M lies in the predicted set.
    bool contained = false;
    /// Every element of the predicted set is some g^M.
    bool covers = false;
    /// Families actually hit.
    std::vector<FamilyLabel> observed;

    bool pass() const { return contained && covers; }
    std::string to_string() const {
        std::string s = "{g^" + std::to_string(exponent) + " : g in " + source.to_string() + "} = " +
                        predicted.to_string() + (pass() ? "  ok" : "  FAILED, observed");
        if (!pass())
            for (auto& o : observed) s += " " + o.to_string();
        return s;
    }
};

struct PowerRelationReport {
    i64 level = 0;
    std::vector<PowerRelationResult> results;

    bool all_pass() const {
        for (auto& r : results)
            if (!r.pass()) return false;
        return true;
    }
    std::size_t failures() const {
        std::size_t n = 0;
        for (auto& r : results) n += !r.pass();
        return n;
    }
};

/// Checks every family set and every exponent 1 <= M <= p on a labeled census.
inline PowerRelationReport power_relation_check(const Census& c) {
    const auto pp = require_odd_prime_power(c.level());
    PowerRelationReport report;
    report.level = c.level();
    std::map<FamilyLabel, std::set<std::size_t>> classes_by_family;
    for (std::size_t i = 0; i < c.classes().size(); ++i) {
        const auto& rec = c.classes()[i];
        if (!rec.family) throw std::invalid_argument("power_relation_check needs a labeled census");
        classes_by_family[*rec.family].insert(i);
    }
    for (const auto& f : all_family_labels(pp)) {
        if (f.kind == FamilyKind::Identity) continue;
        const auto& source = classes_by_family[f];
        for (i64 M = 1; M <= pp.p; ++M) {
            PowerRelationResult res;
            res.source = f;
            res.exponent = M;
            res.predicted = predicted_power_family(f, M, pp);
            std::set<std::size_t> image;
            std::set<FamilyLabel> hit;
            for (auto ci : source) {
                const auto j = c.class_index(power(c.classes()[ci].representative, static_cast<u64>(M)));
                image.insert(j);
                hit.insert(*c.classes()[j].family);
            }
            res.observed.assign(hit.begin(), hit.end());
            res.contained = !source.empty() && hit.size() == 1 && *hit.begin() == res.predicted;
            res.covers = image == classes_by_family[res.predicted];
            report.results.push_back(res);
        }
    }
    return report;
}

inline PowerRelationReport power_relation_check(i64 level, unsigned threads = 1) {
    CensusOptions opt;
    opt.families.clear();
    opt.threads = threads;
    return power_relation_check(build_census(level, opt));
}

}  // namespace geosplit
