#pragma once

// Truncated Euler products over primitive classes with N(gamma) < x, and
// numerical checks of the cover factorization and the Gamma1(p)/Gamma(p)
// ratio identity at matched truncation.

#include "geosplit/arith.hpp"
#include "geosplit/coset_table.hpp"
#include "geosplit/geodesics.hpp"
#include "geosplit/parallel.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

namespace geosplit {

/// Neumaier compensated summation.
template <typename Real>
class CompensatedSum {
public:
    void add(Real v) {
        const Real t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    Real value() const { return sum_ + comp_; }

private:
    Real sum_ = 0, comp_ = 0;
};

/// Sums values in index order.
template <typename Real>
Real compensated_total(const std::vector<Real>& values) {
    CompensatedSum<Real> acc;
    for (Real v : values) acc.add(v);
    return acc.value();
}

/// -log(1 - N^-s).
template <typename Real>
Real euler_log_factor(Real norm, Real s) {
    return -std::log1p(-std::pow(norm, -s));
}

template <typename Real = long double>
struct ZetaTruncation {
    Real s = 0;
    Rational cutoff;
    Real log_value = 0;
    i64 term_count = 0;
};

namespace detail {

inline void require_s(double s) {
    if (!(s > 1)) throw std::invalid_argument("zeta: s must be > 1");
}

}  // namespace detail

/// Primitive classes below x together with their images mod N.
class ZetaClassSet {
public:
    ZetaClassSet(const GeodesicCatalog& cat, const Rational& x) : cutoff_(x), classes_(cat.primitive_below(x)) {
        if (max_trace_below(x) > cat.max_trace()) throw std::invalid_argument("zeta: catalog too short for x");
    }

    const Rational& cutoff() const { return cutoff_; }
    std::size_t size() const { return classes_.size(); }
    const FormClassRecord& operator[](std::size_t i) const { return *classes_[i]; }

    template <typename Real>
    std::vector<Real> norms() const {
        std::vector<Real> out(classes_.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = classes_[i]->template norm<Real>();
        return out;
    }

    std::vector<Partition> types(const CosetTable& table, unsigned threads = 1) const {
        std::vector<Partition> out(classes_.size());
        parallel_for(out.size(), threads, [&](std::size_t i) {
            out[i] = splitting_type_cycles(reduce_mod(classes_[i]->representative, table.level()), table);
        });
        return out;
    }

    std::vector<i64> orders(i64 level) const {
        std::vector<i64> out(classes_.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = order_in_xi(reduce_mod(classes_[i]->representative, level));
        return out;
    }

private:
    Rational cutoff_;
    std::vector<const FormClassRecord*> classes_;
};

/// log zeta_Gamma(s): all primitive classes.
template <typename Real = long double>
ZetaTruncation<Real> zeta_gamma_log(const ZetaClassSet& set, Real s) {
    detail::require_s(static_cast<double>(s));
    const auto norms = set.norms<Real>();
    std::vector<Real> terms(norms.size());
    for (std::size_t i = 0; i < norms.size(); ++i) terms[i] = euler_log_factor(norms[i], s);
    return {s, set.cutoff(), compensated_total(terms), static_cast<i64>(terms.size())};
}

/// log zeta^lambda(s): the classes whose splitting type is lambda.
template <typename Real = long double>
ZetaTruncation<Real> zeta_lambda_log(const ZetaClassSet& set, const std::vector<Partition>& types, const Partition& lambda,
                                     Real s) {
    detail::require_s(static_cast<double>(s));
    const auto norms = set.norms<Real>();
    std::vector<Real> terms;
    for (std::size_t i = 0; i < norms.size(); ++i)
        if (types[i] == lambda) terms.push_back(euler_log_factor(norms[i], s));
    return {s, set.cutoff(), compensated_total(terms), static_cast<i64>(terms.size())};
}

template <typename Real = long double>
ZetaTruncation<Real> zeta_lambda_log(const ZetaClassSet& set, const CosetTable& table, const Partition& lambda, Real s) {
    return zeta_lambda_log<Real>(set, set.types(table), lambda, s);
}

/// log zeta^(N,m)(s): the classes with M(gamma) = m at level N.
template <typename Real = long double>
ZetaTruncation<Real> zeta_order_log(const ZetaClassSet& set, const std::vector<i64>& orders, i64 m, Real s) {
    detail::require_s(static_cast<double>(s));
    const auto norms = set.norms<Real>();
    std::vector<Real> terms;
    for (std::size_t i = 0; i < norms.size(); ++i)
        if (orders[i] == m) terms.push_back(euler_log_factor(norms[i], s));
    return {s, set.cutoff(), compensated_total(terms), static_cast<i64>(terms.size())};
}

/// log zeta of the cover: sum over classes of -log det(1 - sigma(gamma) N^-s),
/// expanded as sum_k tr sigma(gamma^k) N^(-sk) / k.
template <typename Real = long double>
Real cover_zeta_log(const ZetaClassSet& set, const CosetTable& table, Real s, unsigned threads = 1) {
    detail::require_s(static_cast<double>(s));
    const auto norms = set.norms<Real>();
    const Real n = static_cast<Real>(table.index());
    const Real tol = std::numeric_limits<Real>::epsilon() * Real(1e-6);
    std::vector<Real> terms(norms.size());
    parallel_for(norms.size(), threads, [&](std::size_t i) {
        const auto g = reduce_mod(set[i].representative, table.level());
        const i64 period = order_in_xi(g);
        std::vector<Real> traces(static_cast<std::size_t>(period));
        auto h = g;
        for (i64 k = 1; k <= period; ++k, h = h * g)
            traces[static_cast<std::size_t>(k % period)] = static_cast<Real>(table.fixed_points(h));
        const Real q = std::pow(norms[i], -s);
        CompensatedSum<Real> acc;
        Real qk = q;
        for (i64 k = 1; n * qk > tol; ++k, qk *= q)
            acc.add(traces[static_cast<std::size_t>(k % period)] * qk / static_cast<Real>(k));
        terms[i] = acc.value();
    });
    return compensated_total(terms);
}

template <typename Real = long double>
struct IdentityCheck {
    Real s = 0;
    Rational cutoff;
    Real lhs_log = 0;
    Real rhs_log = 0;
    Real discrepancy = 0;
    i64 term_count = 0;
};

/// Cover factorization: log zeta_cover(s) against sum_lambda sum_i log zeta^lambda(m_i s).
template <typename Real = long double>
IdentityCheck<Real> venkov_zograf_check(const ZetaClassSet& set, const CosetTable& table, Real s, unsigned threads = 1) {
    IdentityCheck<Real> out;
    out.s = s;
    out.cutoff = set.cutoff();
    out.term_count = static_cast<i64>(set.size());
    out.lhs_log = cover_zeta_log<Real>(set, table, s, threads);
    const auto types = set.types(table, threads);
    std::map<Partition, bool> lambdas;
    for (auto& t : types) lambdas[t] = true;
    CompensatedSum<Real> rhs;
    for (auto& [lambda, unused] : lambdas)
        for (auto& run : lambda.runs())
            rhs.add(static_cast<Real>(run.count) *
                    zeta_lambda_log<Real>(set, types, lambda, static_cast<Real>(run.part) * s).log_value);
    out.rhs_log = rhs.value();
    out.discrepancy = std::abs(out.lhs_log - out.rhs_log);
    return out;
}

/// ((p-1)/2) (p log zeta^(p,p)(s) - log zeta^(p,p)(ps)) against
/// p log zeta_Gamma1(p)(s) - log zeta_Gamma(p)(s).
template <typename Real = long double>
IdentityCheck<Real> ratio_identity_check(const ZetaClassSet& set, i64 p, Real s, unsigned threads = 1) {
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("ratio_identity_check: p must be an odd prime");
    detail::require_s(static_cast<double>(s));
    IdentityCheck<Real> out;
    out.s = s;
    out.cutoff = set.cutoff();
    out.term_count = static_cast<i64>(set.size());
    const auto orders = set.orders(p);
    const Real pr = static_cast<Real>(p);
    const Real z1 = zeta_order_log<Real>(set, orders, p, s).log_value;
    const Real zp = zeta_order_log<Real>(set, orders, p, pr * s).log_value;
    out.lhs_log = (pr - 1) / 2 * (pr * z1 - zp);
    const Real g1 = cover_zeta_log<Real>(set, build_coset_table({Family::Gamma1, p}), s, threads);
    const Real g = cover_zeta_log<Real>(set, build_coset_table({Family::GammaPrincipal, p}), s, threads);
    out.rhs_log = pr * g1 - g;
    out.discrepancy = std::abs(out.lhs_log - out.rhs_log);
    return out;
}

}  // namespace geosplit
