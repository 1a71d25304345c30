#pragma once

// Primitive hyperbolic classes of SL2(Z) (taken up to sign, trace t >= 3)
// through reduced forms of discriminant t^2 - 4, and empirical splitting
// densities of those below a norm cutoff.
//
// Cutoff rule: for x > 1, N(gamma) < x  <=>  t^2 x < (x + 1)^2, compared
// exactly with x rational. (N + 1/N = t^2 - 2 and y + 1/y is increasing on
// y > 1.) The rule is monotone in x.

#include "geosplit/coset_table.hpp"
#include "geosplit/matrix.hpp"
#include "geosplit/parallel.hpp"
#include "geosplit/partition.hpp"
#include "geosplit/quadratic_form.hpp"
#include "geosplit/rational.hpp"
#include "geosplit/subgroup.hpp"

#include <boost/math/special_functions/expint.hpp>

#include <cmath>
#include <map>
#include <vector>

namespace geosplit {

/// N(gamma) = ((t + sqrt(t^2 - 4)) / 2)^2.
template <typename Real = double>
Real norm_of_trace(i64 t) {
    const Real root = std::sqrt(static_cast<Real>(t * t - 4));
    const Real lambda = (static_cast<Real>(t) + root) / 2;
    return lambda * lambda;
}

inline bool norm_below(i64 t, const Rational& x) {
    if (x <= 1) return false;
    return Rational(t) * t * x < (x + 1) * (x + 1);
}

/// Largest trace t with N < x, or 2 if there is none.
inline i64 max_trace_below(const Rational& x) {
    if (x <= 1) return 2;
    const double xd = static_cast<double>(x);
    i64 t = std::max<i64>(2, static_cast<i64>((xd + 1) / std::sqrt(xd)) - 2);
    while (t > 2 && !norm_below(t, x)) --t;
    while (norm_below(t + 1, x)) ++t;
    return t;
}

/// Logarithmic integral li(x) = Ei(log x).
inline double li(double x) { return boost::math::expint(std::log(x)); }

struct FormClassRecord {
    i64 trace = 0;
    /// Least reduced form of the cycle.
    QuadraticForm canonical;
    std::size_t cycle_length = 0;
    /// [[(t-b)/2, -c], [a, (t+b)/2]] for the canonical form (a, b, c).
    IntegerMatrix representative;
    bool primitive = true;

    std::vector<QuadraticForm> cycle() const { return reduction_cycle(canonical); }
    template <typename Real = double>
    Real norm() const {
        return norm_of_trace<Real>(trace);
    }
};

/// Every SL2(Z) class (up to sign) of trace t, sorted by canonical form.
/// Imprimitive classes are included; primitivity is left at its default.
inline std::vector<FormClassRecord> classes_at_trace(i64 t) {
    if (t < 3) throw std::invalid_argument("classes_at_trace: trace must be at least 3");
    const auto forms = reduced_forms(t * t - 4);
    std::vector<char> seen(forms.size(), 0);
    std::vector<FormClassRecord> out;
    for (std::size_t i = 0; i < forms.size(); ++i) {
        if (seen[i]) continue;
        const auto cycle = reduction_cycle(forms[i]);
        for (auto& f : cycle) {
            auto it = std::lower_bound(forms.begin(), forms.end(), f);
            if (it == forms.end() || *it != f) throw ConsistencyError("reduction cycle left the reduced forms");
            seen[static_cast<std::size_t>(it - forms.begin())] = 1;
        }
        FormClassRecord rec;
        rec.trace = t;
        rec.canonical = cycle.front();
        rec.cycle_length = cycle.size();
        rec.representative = matrix_of(rec.canonical, t);
        out.push_back(rec);
    }
    return out;
}

/// Canonical form of the class of a hyperbolic matrix with positive trace.
inline QuadraticForm canonical_form(const IntegerMatrix& m) {
    if (m.trace() < 3) throw std::invalid_argument("canonical_form: trace must be at least 3");
    return reduction_cycle(reduce(form_of(m))).front();
}

/// All classes with trace 3 <= t <= max_trace, with primitivity marked.
class GeodesicCatalog {
public:
    GeodesicCatalog() = default;
    GeodesicCatalog(i64 max_trace, unsigned threads = 1) : max_trace_(std::max<i64>(2, max_trace)) {
        by_trace_.resize(static_cast<std::size_t>(max_trace_ + 1));
        const std::size_t count = max_trace_ >= 3 ? static_cast<std::size_t>(max_trace_ - 2) : 0;
        parallel_for(count, threads, [&](std::size_t i) {
            const i64 t = static_cast<i64>(i) + 3;
            by_trace_[static_cast<std::size_t>(t)] = classes_at_trace(t);
        });
        mark_primitivity(threads);
    }

    i64 max_trace() const { return max_trace_; }
    const std::vector<FormClassRecord>& at_trace(i64 t) const { return by_trace_.at(static_cast<std::size_t>(t)); }
    std::size_t class_count() const {
        std::size_t n = 0;
        for (auto& v : by_trace_) n += v.size();
        return n;
    }

    /// Index of the class of m within at_trace(trace of m).
    std::size_t locate(const IntegerMatrix& m) const {
        const i64 t = static_cast<i64>(m.trace());
        if (t < 3 || t > max_trace_) throw std::out_of_range("locate: trace outside the catalog");
        const auto key = canonical_form(m);
        const auto& v = at_trace(t);
        auto it = std::lower_bound(v.begin(), v.end(), key,
                                   [](const FormClassRecord& r, const QuadraticForm& f) { return r.canonical < f; });
        if (it == v.end() || it->canonical != key)
            throw ConsistencyError("locate: no class at trace " + std::to_string(t) + " for " + key.to_string());
        return static_cast<std::size_t>(it - v.begin());
    }

    /// Primitive classes with N < x, ordered by trace then canonical form.
    std::vector<const FormClassRecord*> primitive_below(const Rational& x) const {
        std::vector<const FormClassRecord*> out;
        for (i64 t = 3; t <= max_trace_ && norm_below(t, x); ++t)
            for (auto& rec : at_trace(t))
                if (rec.primitive) out.push_back(&rec);
        return out;
    }

private:
    // For each base class at t0 and k >= 2, the class of rep^k at trace t_k
    // (t_1 = t0, t_2 = t0^2 - 2, t_k = t0 t_(k-1) - t_(k-2)) is imprimitive.
    void mark_primitivity(unsigned threads) {
        std::vector<std::vector<std::pair<i64, std::size_t>>> marks(by_trace_.size());
        const std::size_t count = max_trace_ >= 3 ? static_cast<std::size_t>(max_trace_ - 2) : 0;
        parallel_for(count, threads, [&](std::size_t i) {
            const i64 t0 = static_cast<i64>(i) + 3;
            if (t0 * t0 - 2 > max_trace_) return;
            for (auto& rec : at_trace(t0)) {
                IntegerMatrix power = rec.representative;
                i64 prev = 2, cur = t0;
                while (true) {
                    const i64 next = t0 * cur - prev;
                    if (next > max_trace_) break;
                    prev = cur;
                    cur = next;
                    power = power * rec.representative;
                    if (power.trace() != cur) throw ConsistencyError("power trace recurrence mismatch");
                    marks[static_cast<std::size_t>(t0)].push_back({cur, locate(power)});
                }
            }
        });
        for (auto& list : marks)
            for (auto& [t, idx] : list) by_trace_[static_cast<std::size_t>(t)][idx].primitive = false;
    }

    i64 max_trace_ = 2;
    std::vector<std::vector<FormClassRecord>> by_trace_;
};

inline GeodesicCatalog geodesics_below(const Rational& x, unsigned threads = 1) {
    return GeodesicCatalog(max_trace_below(x), threads);
}

/// pi(x): primitive classes with N < x.
inline i64 prime_geodesic_count(const GeodesicCatalog& cat, const Rational& x) {
    return static_cast<i64>(cat.primitive_below(x).size());
}

struct EmpiricalTally {
    Rational cutoff;
    SubgroupSpec subgroup{Family::Gamma0, 2};
    std::map<Partition, i64> counts;
    i64 total = 0;
};

namespace detail {

/// Splitting types of the primitive classes below x, in primitive_below order.
inline std::vector<Partition> primitive_types(const GeodesicCatalog& cat, const CosetTable& table,
                                              const Rational& x, unsigned threads) {
    const auto prims = cat.primitive_below(x);
    std::vector<Partition> types(prims.size());
    parallel_for(prims.size(), threads, [&](std::size_t i) {
        types[i] = splitting_type_cycles(reduce_mod(prims[i]->representative, table.level()), table);
    });
    return types;
}

}  // namespace detail

inline EmpiricalTally empirical_tally(const GeodesicCatalog& cat, const CosetTable& table, const Rational& x,
                                      unsigned threads = 1) {
    if (max_trace_below(x) > cat.max_trace()) throw std::invalid_argument("empirical_tally: catalog too short for x");
    EmpiricalTally tally;
    tally.cutoff = x;
    tally.subgroup = table.subgroup();
    for (auto& type : detail::primitive_types(cat, table, x, threads)) {
        tally.counts[type]++;
        tally.total++;
    }
    return tally;
}

inline EmpiricalTally empirical_tally(const SubgroupSpec& s, const Rational& x, unsigned threads = 1) {
    return empirical_tally(geodesics_below(x, threads), build_coset_table(s), x, threads);
}

struct AnomalyWitness {
    i64 trace = 0;
    IntegerMatrix representative;
    Partition type;
    i64 order = 0;
};

struct AnomalyScan {
    SubgroupSpec subgroup{Family::Gamma0, 2};
    Rational cutoff;
    i64 scanned = 0;
    std::vector<AnomalyWitness> witnesses;
    i64 count() const { return static_cast<i64>(witnesses.size()); }
};

/// Primitive classes below x whose splitting type has no part equal to M(gamma).
inline AnomalyScan anomalous_type_scan(const GeodesicCatalog& cat, const CosetTable& table, const Rational& x,
                                       unsigned threads = 1) {
    if (max_trace_below(x) > cat.max_trace()) throw std::invalid_argument("anomalous_type_scan: catalog too short for x");
    AnomalyScan scan;
    scan.subgroup = table.subgroup();
    scan.cutoff = x;
    const auto prims = cat.primitive_below(x);
    const auto types = detail::primitive_types(cat, table, x, threads);
    scan.scanned = static_cast<i64>(prims.size());
    for (std::size_t i = 0; i < prims.size(); ++i) {
        const i64 order = order_in_xi(reduce_mod(prims[i]->representative, table.level()));
        if (types[i].multiplicity(order) == 0)
            scan.witnesses.push_back({prims[i]->trace, prims[i]->representative, types[i], order});
    }
    return scan;
}

inline AnomalyScan anomalous_type_scan(const SubgroupSpec& s, const Rational& x, unsigned threads = 1) {
    return anomalous_type_scan(geodesics_below(x, threads), build_coset_table(s), x, threads);
}

}  // namespace geosplit
