#include "geosplit/census.hpp"
#include "geosplit/zeta.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace geosplit;

namespace {

const GeodesicCatalog& catalog() {
    static const GeodesicCatalog cat = geodesics_below(parse_number("1e4"));
    return cat;
}

// Order of an integer matrix in SL2(Z/p)/{+-1}, by repeated multiplication.
i64 order_mod(const IntegerMatrix& g, i64 p) {
    i64 a = 1, b = 0, c = 0, d = 1;
    for (i64 k = 1;; ++k) {
        const i64 na = mod(a * static_cast<i64>(g.a()) + b * static_cast<i64>(g.c()), p);
        const i64 nb = mod(a * static_cast<i64>(g.b()) + b * static_cast<i64>(g.d()), p);
        const i64 nc = mod(c * static_cast<i64>(g.a()) + d * static_cast<i64>(g.c()), p);
        const i64 nd = mod(c * static_cast<i64>(g.b()) + d * static_cast<i64>(g.d()), p);
        a = na, b = nb, c = nc, d = nd;
        if (b == 0 && c == 0 && a == d && (a == 1 || a == p - 1)) return k;
    }
}

}  // namespace

TEST(CompensatedSum, BeatsNaiveSummation) {
    CompensatedSum<double> acc;
    double naive = 0;
    for (double v : {1.0, 1e100, 1.0, -1e100}) {
        acc.add(v);
        naive += v;
    }
    EXPECT_EQ(acc.value(), 2.0);
    EXPECT_NE(naive, 2.0);
}

TEST(Zeta, CountsAndPartition) {
    const auto x = parse_number("1e4");
    ZetaClassSet set(catalog(), x);
    EXPECT_EQ(static_cast<i64>(set.size()), prime_geodesic_count(catalog(), x));
    const auto table = build_coset_table({Family::Gamma0, 5});
    const auto types = set.types(table);
    const auto full = zeta_gamma_log<long double>(set, 2.0L);
    EXPECT_EQ(full.term_count, static_cast<i64>(set.size()));
    long double sum = 0;
    i64 count = 0;
    for (auto& [lambda, d] : density_table({Family::Gamma0, 5}).entries) {
        auto z = zeta_lambda_log<long double>(set, types, lambda, 2.0L);
        sum += z.log_value;
        count += z.term_count;
    }
    EXPECT_EQ(count, full.term_count);
    EXPECT_NEAR(static_cast<double>(sum), static_cast<double>(full.log_value), 1e-15);
    auto empty = zeta_lambda_log<long double>(set, types, Partition::from_parts({4, 2}), 2.0L);
    EXPECT_EQ(empty.term_count, 0);
    EXPECT_EQ(empty.log_value, 0.0L);
    EXPECT_THROW(zeta_gamma_log<double>(set, 1.0), std::invalid_argument);
}

TEST(Zeta, OrderZetaMatchesDirectLoop) {
    ZetaClassSet set(catalog(), parse_number("1e4"));
    auto z = zeta_order_log<long double>(set, set.orders(5), 5, 2.0L);
    double direct = 0;
    i64 count = 0;
    for (i64 t = 3; t <= catalog().max_trace(); ++t) {
        if (!norm_below(t, parse_number("1e4"))) break;
        const double lambda = (t + std::sqrt(static_cast<double>(t * t - 4))) / 2;
        for (auto& rec : catalog().at_trace(t)) {
            if (!rec.primitive || order_mod(rec.representative, 5) != 5) continue;
            direct -= std::log(1 - 1 / std::pow(lambda, 4));
            ++count;
        }
    }
    EXPECT_EQ(z.term_count, count);
    EXPECT_GT(count, 0);
    EXPECT_NEAR(static_cast<double>(z.log_value), direct, 1e-12);
}

TEST(Zeta, Monotonicity) {
    const GeodesicCatalog& cat = catalog();
    long double prev = 0;
    for (const char* x : {"10", "100", "1000", "1e4"}) {
        auto v = zeta_gamma_log<long double>(ZetaClassSet(cat, parse_number(x)), 1.5L).log_value;
        EXPECT_GE(v, prev);
        prev = v;
    }
    ZetaClassSet set(cat, parse_number("1e4"));
    long double last = std::numeric_limits<long double>::infinity();
    for (long double s : {1.1L, 1.5L, 2.0L, 3.0L}) {
        auto v = zeta_gamma_log<long double>(set, s).log_value;
        EXPECT_LE(v, last);
        last = v;
    }
}

TEST(Zeta, CoverLogMatchesCycleTypeProduct) {
    ZetaClassSet set(catalog(), parse_number("1e3"));
    const auto table = build_coset_table({Family::Gamma0, 7});
    const auto norms = set.norms<long double>();
    const auto types = set.types(table);
    long double direct = 0;
    for (std::size_t i = 0; i < set.size(); ++i)
        for (auto part : types[i].parts()) direct -= std::log1p(-std::pow(norms[i], -2.0L * part));
    EXPECT_NEAR(static_cast<double>(cover_zeta_log<long double>(set, table, 2.0L)), static_cast<double>(direct), 1e-14);
}

TEST(Venkov, Factorization) {
    ZetaClassSet set(catalog(), parse_number("1e4"));
    auto g1 = venkov_zograf_check<long double>(set, build_coset_table({Family::Gamma1, 5}), 2.0L);
    EXPECT_LT(g1.discrepancy, 1e-9L);
    EXPECT_GT(g1.lhs_log, 0.0L);
    auto g3 = venkov_zograf_check<long double>(set, build_coset_table({Family::GammaPrincipal, 3}), 1.5L);
    EXPECT_LT(g3.discrepancy, 1e-9L);
    auto g0 = venkov_zograf_check<long double>(set, build_coset_table({Family::Gamma0, 25}), 1.2L);
    EXPECT_LT(g0.discrepancy, 1e-9L);
}

TEST(Ratio, Identity) {
    ZetaClassSet set(catalog(), parse_number("1e4"));
    EXPECT_LT(ratio_identity_check<long double>(set, 3, 2.0L).discrepancy, 1e-9L);
    EXPECT_LT(ratio_identity_check<long double>(set, 5, 2.0L).discrepancy, 1e-9L);
    EXPECT_LT(ratio_identity_check<long double>(set, 5, 1.2L).discrepancy, 1e-8L);
    EXPECT_LT(ratio_identity_check<long double>(set, 7, 1.5L).discrepancy, 1e-9L);
    EXPECT_THROW(ratio_identity_check<long double>(set, 4, 2.0L), std::invalid_argument);
    EXPECT_THROW(ratio_identity_check<long double>(set, 2, 2.0L), std::invalid_argument);
    EXPECT_THROW(ratio_identity_check<long double>(set, 5, 0.9L), std::invalid_argument);
}

TEST(Ratio, OrderClassesAreUnipotentType) {
    ZetaClassSet set(catalog(), parse_number("1e4"));
    for (i64 p : {3, 5, 7}) {
        const auto orders = set.orders(p);
        const auto types = set.types(build_coset_table({Family::Gamma1, p}));
        const auto unipotent = Partition::from_runs({{p, (p - 1) / 2}, {1, (p - 1) / 2}});
        for (std::size_t i = 0; i < set.size(); ++i) EXPECT_EQ(orders[i] == p, types[i] == unipotent) << p;
    }
}

TEST(Precision, ExtendedNotWorse) {
    ZetaClassSet set(catalog(), parse_number("1e4"));
    for (double s : {1.2, 2.0}) {
        const double d = ratio_identity_check<double>(set, 5, s).discrepancy;
        const long double ld = ratio_identity_check<long double>(set, 5, static_cast<long double>(s)).discrepancy;
        EXPECT_LE(static_cast<double>(ld), d + 1e-15) << s;
        const auto table = build_coset_table({Family::Gamma1, 5});
        const double vd = venkov_zograf_check<double>(set, table, s).discrepancy;
        const long double vld = venkov_zograf_check<long double>(set, table, static_cast<long double>(s)).discrepancy;
        EXPECT_LE(static_cast<double>(vld), vd + 1e-15) << s;
    }
}

TEST(Zeta, ThreadCountDoesNotChangeBits) {
    ZetaClassSet set(catalog(), parse_number("1e4"));
    const auto table = build_coset_table({Family::Gamma1, 7});
    EXPECT_EQ(cover_zeta_log<long double>(set, table, 1.5L, 1), cover_zeta_log<long double>(set, table, 1.5L, 3));
}
