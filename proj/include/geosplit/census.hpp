#pragma once

// Enumeration of Xi, its conjugacy classes, and exact density tables
// density(lambda) = sum over classes of lambda-type of #[g] / |Xi|.

#include "geosplit/arith.hpp"
#include "geosplit/coset_table.hpp"
#include "geosplit/errors.hpp"
#include "geosplit/family.hpp"
#include "geosplit/matrix.hpp"
#include "geosplit/parallel.hpp"
#include "geosplit/partition.hpp"
#include "geosplit/rational.hpp"
#include "geosplit/subgroup.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace geosplit {

/// All of Xi(N), one canonical representative per element. Elements are
/// produced column by column: for each primitive first column (a, c) one
/// completion (b0, d0) is found and the N completions (b0 + t a, d0 + t c)
/// are kept when canonical.
inline std::vector<ProjectiveResidueMatrix> enumerate_xi(i64 level, std::size_t cap = kDefaultCap) {
    if (level < 2) throw std::invalid_argument("level must be >= 2");
    const i64 order = xi_order(level);
    if (static_cast<std::size_t>(order) > cap)
        throw CapExceeded("|Xi(" + std::to_string(level) + ")| = " + std::to_string(order) + " exceeds cap " +
                          std::to_string(cap));
    const i64 n = level;
    std::vector<ProjectiveResidueMatrix> out;
    out.reserve(static_cast<std::size_t>(order));
    for (i64 a = 0; a < n; ++a)
        for (i64 c = 0; c < n; ++c) {
            if (std::gcd(std::gcd(a, c), n) != 1) continue;
            i64 b0 = 0, d0 = 0;
            if (c == 0) {
                d0 = inv_mod(a, n);
            } else {
                i64 lift = a;
                while (std::gcd(lift, c) != 1) lift += n;
                auto eg = ext_gcd(lift, c);  // lift*x + c*y = 1
                d0 = mod(eg.x, n);
                b0 = mod(-eg.y, n);
            }
            for (i64 t = 0; t < n; ++t) {
                const i64 b = (b0 + t * a) % n, d = (d0 + t * c) % n;
                ProjectiveResidueMatrix g(a, b, c, d, n);
                if (g.a() == a && g.b() == b && g.c() == c && g.d() == d) out.push_back(g);
            }
        }
    if (static_cast<i64>(out.size()) != order)
        throw ConsistencyError("enumerate_xi: produced " + std::to_string(out.size()) + " elements, expected " +
                               std::to_string(order));
    return out;
}

struct ConjugacyClassRecord {
    ProjectiveResidueMatrix representative = ProjectiveResidueMatrix::identity(2);  // least element of the class
    i64 size = 0;
    i64 order = 0;
    std::optional<FamilyLabel> family;  // odd prime-power levels only
    std::map<Family, Partition> types;
};

struct CensusOptions {
    std::size_t cap = kDefaultCap;
    std::vector<Family> families{kAllFamilies.begin(), kAllFamilies.end()};
    unsigned threads = 1;
    bool label_families = true;
};

/// Xi(N) with its conjugacy classes and per-element class membership.
class Census {
public:
    i64 level() const { return level_; }
    i64 xi_order() const { return static_cast<i64>(elements_.size()); }
    const std::vector<ProjectiveResidueMatrix>& elements() const { return elements_; }
    const std::vector<ConjugacyClassRecord>& classes() const { return classes_; }
    const std::vector<Family>& families() const { return families_; }

    std::size_t element_index(const ProjectiveResidueMatrix& g) const {
        auto it = index_.find(g.encode());
        if (it == index_.end() || g.level() != level_) throw std::invalid_argument("element not in census");
        return it->second;
    }
    std::size_t class_index(const ProjectiveResidueMatrix& g) const { return class_of_[element_index(g)]; }
    const ConjugacyClassRecord& class_of(const ProjectiveResidueMatrix& g) const { return classes_[class_index(g)]; }

    friend Census build_census(i64 level, const CensusOptions& opt);

private:
    i64 level_ = 0;
    std::vector<Family> families_;
    std::vector<ProjectiveResidueMatrix> elements_;
    std::unordered_map<u64, std::uint32_t> index_;
    std::vector<std::uint32_t> class_of_;
    std::vector<ConjugacyClassRecord> classes_;
};

/// Orbits of Xi under conjugation by S and T (which generate Xi), sorted by
/// representative. Splitting types are computed by cycle decomposition on
/// class representatives for each requested family.
inline Census build_census(i64 level, const CensusOptions& opt = {}) {
    Census c;
    c.level_ = level;
    c.families_ = opt.families;
    c.elements_ = enumerate_xi(level, opt.cap);
    const std::size_t total = c.elements_.size();
    c.index_.reserve(total);
    for (std::size_t i = 0; i < total; ++i) c.index_.emplace(c.elements_[i].encode(), static_cast<std::uint32_t>(i));

    constexpr std::uint32_t none = 0xffffffffU;
    std::vector<std::uint32_t> orbit(total, none);
    const auto s = generator_s(level), t = generator_t(level);
    const auto si = inverse(s), ti = inverse(t);
    std::vector<std::uint32_t> queue;
    std::vector<std::pair<std::size_t, std::vector<std::uint32_t>>> orbits;  // (min element, members)
    for (std::size_t i = 0; i < total; ++i) {
        if (orbit[i] != none) continue;
        const auto id = static_cast<std::uint32_t>(orbits.size());
        queue.assign(1, static_cast<std::uint32_t>(i));
        orbit[i] = id;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const auto& x = c.elements_[queue[head]];
            for (const auto& y : {s * x * si, t * x * ti}) {
                const auto j = c.index_.at(y.encode());
                if (orbit[j] == none) {
                    orbit[j] = id;
                    queue.push_back(j);
                }
            }
        }
        std::size_t least = queue[0];
        for (auto j : queue)
            if (c.elements_[j] < c.elements_[least]) least = j;
        orbits.emplace_back(least, queue);
    }
    std::vector<std::size_t> perm(orbits.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) {
        return c.elements_[orbits[x].first] < c.elements_[orbits[y].first];
    });
    c.class_of_.assign(total, none);
    c.classes_.resize(orbits.size());
    for (std::size_t ci = 0; ci < perm.size(); ++ci) {
        const auto& [least, members] = orbits[perm[ci]];
        for (auto j : members) c.class_of_[j] = static_cast<std::uint32_t>(ci);
        auto& rec = c.classes_[ci];
        rec.representative = c.elements_[least];
        rec.size = static_cast<i64>(members.size());
    }

    const auto pp = opt.label_families ? odd_prime_power(level) : std::nullopt;
    std::vector<CosetTable> tables;
    for (auto f : opt.families) tables.push_back(build_coset_table({f, level}, {opt.cap, CosetKeyMode::Fast}));
    parallel_for(c.classes_.size(), opt.threads, [&](std::size_t ci) {
        auto& rec = c.classes_[ci];
        rec.order = order_in_xi(rec.representative);
        if (pp) rec.family = classify_element(rec.representative, *pp);
        for (std::size_t fi = 0; fi < tables.size(); ++fi)
            rec.types.emplace(opt.families[fi], splitting_type_cycles(rec.representative, tables[fi]));
    });
    return c;
}

inline std::vector<ConjugacyClassRecord> conjugacy_classes(i64 level, const CensusOptions& opt = {}) {
    return build_census(level, opt).classes();
}

struct DensityTable {
    SubgroupSpec subgroup{Family::Gamma0, 2};
    std::map<Partition, Rational> entries;
    i64 xi_order = 0;
    i64 index = 0;

    Rational total() const {
        Rational s = 0;
        for (auto& [p, d] : entries) s += d;
        return s;
    }
    bool operator==(const DensityTable&) const = default;
};

inline void check_normalized(const DensityTable& t) {
    if (t.total() != 1)
        throw ConsistencyError("density table for " + t.subgroup.name() + " sums to " + to_string(t.total()));
}

inline DensityTable density_table_from_census(const Census& c, Family f) {
    DensityTable t;
    t.subgroup = {f, c.level()};
    t.xi_order = c.xi_order();
    t.index = subgroup_index(t.subgroup);
    for (auto& rec : c.classes()) {
        auto it = rec.types.find(f);
        if (it == rec.types.end()) throw std::invalid_argument("census lacks types for " + t.subgroup.name());
        t.entries[it->second] += Rational(rec.size, t.xi_order);
    }
    check_normalized(t);
    return t;
}

inline DensityTable density_table(const SubgroupSpec& s, const CensusOptions& base = {}) {
    CensusOptions opt = base;
    opt.families = {s.family};
    opt.label_families = false;
    return density_table_from_census(build_census(s.level, opt), s.family);
}

/// Regular-cover path for Gamma(N): sigma(g) is a product of n/M(g) cycles
/// of length M(g), so only class orders are needed.
inline DensityTable rectangle_density_table(const SubgroupSpec& s, const CensusOptions& base = {}) {
    if (s.family != Family::GammaPrincipal)
        throw std::invalid_argument("rectangle_density_table needs the principal congruence subgroup");
    CensusOptions opt = base;
    opt.families.clear();
    opt.label_families = false;
    const auto c = build_census(s.level, opt);
    DensityTable t;
    t.subgroup = s;
    t.xi_order = c.xi_order();
    t.index = subgroup_index(s);
    for (auto& rec : c.classes()) t.entries[Partition::rectangle(rec.order, t.index)] += Rational(rec.size, t.xi_order);
    check_normalized(t);
    return t;
}

/// Elements of Xi acting trivially on the cosets of the given table, found
/// class by class: a class lies in the kernel iff its representative fixes
/// every coset.
inline i64 action_kernel_order(const Census& c, const CosetTable& t) {
    i64 k = 0;
    for (auto& rec : c.classes())
        if (t.fixed_points(rec.representative) == static_cast<i64>(t.index())) k += rec.size;
    return k;
}

/// lambda1 (x) lambda2: the partition whose power-trace sequence is the
/// pointwise product of the two sequences, tr(k) = sum of parts dividing k.
inline Partition tensor_partitions(const Partition& x, const Partition& y) {
    auto lcm_of = [](const Partition& p) {
        i64 l = 1;
        for (auto& run : p.runs()) l = std::lcm(l, run.part);
        return l;
    };
    auto trace = [](const Partition& p, i64 k) {
        i64 s = 0;
        for (auto& run : p.runs())
            if (k % run.part == 0) s += run.part * run.count;
        return s;
    };
    const i64 order = std::lcm(lcm_of(x), lcm_of(y));
    std::map<i64, i64> traces;
    for (i64 d : divisors(order)) traces[d] = trace(x, d) * trace(y, d);
    return partition_from_power_traces(order, traces);
}

/// Coprime factorization of a level into prime powers.
inline std::vector<i64> prime_power_factors(i64 level) {
    std::vector<i64> out;
    for (auto& pp : factorize(level)) out.push_back(pp.value);
    return out;
}

/// Convolution of factor tables under tensor_partitions. Valid for Gamma0,
/// where Gamma0(q1 q2) is the intersection of Gamma0(q1) and Gamma0(q2).
inline DensityTable convolve_tables(const std::vector<DensityTable>& factors) {
    if (factors.empty()) throw std::invalid_argument("convolve_tables: no factors");
    DensityTable acc = factors[0];
    for (std::size_t i = 1; i < factors.size(); ++i) {
        const auto& f = factors[i];
        if (std::gcd(acc.subgroup.level, f.subgroup.level) != 1)
            throw std::invalid_argument("convolve_tables: factor levels must be coprime");
        DensityTable next;
        next.subgroup = {acc.subgroup.family, acc.subgroup.level * f.subgroup.level};
        next.xi_order = acc.xi_order * f.xi_order;
        next.index = acc.index * f.index;
        for (auto& [p1, d1] : acc.entries)
            for (auto& [p2, d2] : f.entries) next.entries[tensor_partitions(p1, p2)] += d1 * d2;
        acc = std::move(next);
    }
    acc.xi_order = xi_order(acc.subgroup.level);
    check_normalized(acc);
    return acc;
}

inline DensityTable density_table_composite(const SubgroupSpec& s, const std::vector<i64>& factors,
                                            const CensusOptions& opt = {}) {
    if (s.family != Family::Gamma0)
        throw std::invalid_argument("composite tables are only defined for gamma0 (the +-symmetric gamma1 and "
                                    "gamma at a composite level are not intersections of their factors)");
    i64 prod = 1;
    for (i64 q : factors) prod *= q;
    if (prod != s.level) throw std::invalid_argument("factors do not multiply to the level");
    std::vector<DensityTable> tables;
    for (i64 q : factors) tables.push_back(density_table({s.family, q}, opt));
    return convolve_tables(tables);
}

inline DensityTable density_table_composite(const SubgroupSpec& s, const CensusOptions& opt = {}) {
    return density_table_composite(s, prime_power_factors(s.level), opt);
}

}  // namespace geosplit
