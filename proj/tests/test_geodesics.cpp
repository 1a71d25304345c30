#include "geosplit/census.hpp"
#include "geosplit/geodesics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

using namespace geosplit;

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t x, std::size_t y) { parent[find(x)] = find(y); }
};

bool reduced_by_float(i64 a, i64 b, i64 D) {
    const long double r = std::sqrt(static_cast<long double>(D));
    const long double a2 = 2.0L * std::abs(static_cast<long double>(a));
    return b > 0 && b < r && r - b < a2 && a2 < r + b;
}

// Reduced forms of discriminant D found by scanning |a|, |b| <= sqrt(D).
std::set<QuadraticForm> brute_reduced(i64 D) {
    std::set<QuadraticForm> out;
    const i64 bound = static_cast<i64>(std::sqrt(static_cast<double>(D))) + 1;
    for (i64 a = -bound; a <= bound; ++a)
        for (i64 b = -bound; b <= bound; ++b) {
            if (a == 0 || (b * b - D) % (4 * a) != 0) continue;
            if (reduced_by_float(a, b, D)) out.insert({a, b, (b * b - D) / (4 * a)});
        }
    return out;
}

// Number of SL2(Z) classes of forms of discriminant D, via union-find over all
// forms with |b| <= sqrt(D), |a|, |c| <= D joined by S and T moves; a class
// is counted when its component holds a reduced form.
std::size_t brute_class_count(i64 D) {
    const i64 s = static_cast<i64>(std::sqrt(static_cast<double>(D)));
    std::map<QuadraticForm, std::size_t> index;
    std::vector<QuadraticForm> forms;
    for (i64 b = -s - 1; b <= s + 1; ++b) {
        if ((b * b - D) % 4 != 0) continue;
        const i64 ac = (b * b - D) / 4;
        for (i64 a = -D; a <= D; ++a) {
            if (a == 0 || ac % a != 0 || std::abs(ac / a) > D) continue;
            QuadraticForm f{a, b, ac / a};
            index.emplace(f, forms.size());
            forms.push_back(f);
        }
    }
    UnionFind uf(forms.size());
    auto link = [&](std::size_t i, const QuadraticForm& g) {
        auto it = index.find(g);
        if (it != index.end()) uf.unite(i, it->second);
    };
    for (std::size_t i = 0; i < forms.size(); ++i) {
        auto [a, b, c] = forms[i];
        link(i, {c, -b, a});
        link(i, {a, b + 2 * a, a + b + c});
        link(i, {a, b - 2 * a, a - b + c});
    }
    std::set<std::size_t> components;
    for (std::size_t i = 0; i < forms.size(); ++i)
        if (reduced_by_float(forms[i].a, forms[i].b, D)) components.insert(uf.find(i));
    return components.size();
}

// gamma is a proper power iff gamma = U_k(t0) delta - U_(k-1) I for an
// integral delta of trace t0 (Cayley-Hamilton), i.e. gamma = -U_(k-1) I mod U_k.
bool imprimitive_by_chebyshev(const IntegerMatrix& g) {
    const i64 t = static_cast<i64>(g.trace());
    for (i64 t0 = 3; t0 * t0 - 2 <= t; ++t0) {
        i64 u_prev = 1, u = t0, trace_k = t0 * t0 - 2, trace_prev = t0;
        while (trace_k <= t) {
            if (trace_k == t) {
                const i128 a = g.a() + u_prev;
                if (g.b() % u == 0 && g.c() % u == 0 && a % u == 0 && (g.d() + u_prev) % u == 0) return true;
            }
            const i64 u_next = t0 * u - u_prev;
            u_prev = u;
            u = u_next;
            const i64 next = t0 * trace_k - trace_prev;
            trace_prev = trace_k;
            trace_k = next;
        }
    }
    return false;
}

}  // namespace

TEST(QuadraticForm, ReducedFormsMatchScan) {
    for (i64 t = 3; t <= 60; ++t) {
        const i64 D = t * t - 4;
        auto forms = reduced_forms(D);
        EXPECT_EQ(std::set<QuadraticForm>(forms.begin(), forms.end()), brute_reduced(D)) << t;
        for (auto& f : forms) {
            EXPECT_TRUE(is_reduced(f));
            EXPECT_EQ(f.discriminant(), D);
            EXPECT_TRUE(is_reduced(rho(f)));
        }
    }
}

TEST(QuadraticForm, ReduceReachesReducedForm) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
        const i64 t = 3 + static_cast<i64>(rng() % 40);
        IntegerMatrix g = matrix_of(reduced_forms(t * t - 4).front(), t);
        for (int k = 0; k < 6; ++k) {
            const IntegerMatrix step = rng() % 2 ? IntegerMatrix(0, -1, 1, 0) : IntegerMatrix(1, rng() % 2 ? 1 : -1, 0, 1);
            g = step * g * step.inverse();
        }
        auto f = reduce(form_of(g));
        EXPECT_TRUE(is_reduced(f));
        EXPECT_EQ(f.discriminant(), t * t - 4);
    }
}

TEST(Geodesics, SmallTraceCounts) {
    EXPECT_EQ(classes_at_trace(3).size(), 1u);
    EXPECT_EQ(classes_at_trace(3).front().canonical, (QuadraticForm{-1, 1, 1}));
    EXPECT_EQ(classes_at_trace(4).size(), 2u);
    EXPECT_THROW(classes_at_trace(2), std::invalid_argument);
}

TEST(Geodesics, ClassCountMatchesUnionFind) {
    for (i64 t = 3; t <= 60; ++t) EXPECT_EQ(classes_at_trace(t).size(), brute_class_count(t * t - 4)) << t;
}

TEST(Geodesics, RepresentativesAndCycles) {
    for (i64 t = 3; t <= 80; ++t) {
        std::set<QuadraticForm> all;
        std::size_t total = 0;
        for (auto& rec : classes_at_trace(t)) {
            EXPECT_EQ(rec.representative.trace(), t);
            EXPECT_EQ(rec.representative.a() * rec.representative.d() - rec.representative.b() * rec.representative.c(), 1);
            EXPECT_EQ(form_of(rec.representative), rec.canonical);
            auto cycle = rec.cycle();
            EXPECT_EQ(cycle.size(), rec.cycle_length);
            EXPECT_EQ(cycle.front(), *std::min_element(cycle.begin(), cycle.end()));
            all.insert(cycle.begin(), cycle.end());
            total += cycle.size();
        }
        EXPECT_EQ(all.size(), total) << "cycles overlap at trace " << t;
        EXPECT_EQ(all.size(), reduced_forms(t * t - 4).size());
    }
}

// Conjugacy of trace-t matrices checked directly: union-find over matrices
// with bounded entries under conjugation by S, T and T^-1. This also fixes
// the convention that imprimitive forms (content > 1) give their own classes.
TEST(Geodesics, ClassesMatchMatrixConjugation) {
    for (i64 t = 3; t <= 12; ++t) {
        const i64 B = t * t;
        std::map<std::array<i64, 3>, std::size_t> index;
        std::vector<std::array<i64, 3>> mats;
        for (i64 x = -B; x <= B; ++x) {
            const i64 yz = x * (t - x) - 1;
            for (i64 y = -B; y <= B; ++y) {
                if (y == 0 || yz % y != 0 || std::abs(yz / y) > B) continue;
                index.emplace(std::array<i64, 3>{x, y, yz / y}, mats.size());
                mats.push_back({x, y, yz / y});
            }
        }
        UnionFind uf(mats.size());
        for (std::size_t i = 0; i < mats.size(); ++i) {
            const IntegerMatrix g(mats[i][0], mats[i][1], mats[i][2], t - mats[i][0]);
            for (const IntegerMatrix& h : {IntegerMatrix(0, -1, 1, 0), IntegerMatrix(1, 1, 0, 1), IntegerMatrix(1, -1, 0, 1)}) {
                const IntegerMatrix c = h * g * h.inverse();
                auto it = index.find({static_cast<i64>(c.a()), static_cast<i64>(c.b()), static_cast<i64>(c.c())});
                if (it != index.end()) uf.unite(i, it->second);
            }
        }
        std::set<std::size_t> reduced_components, rep_components;
        for (std::size_t i = 0; i < mats.size(); ++i) {
            const QuadraticForm f{mats[i][2], t - 2 * mats[i][0], -mats[i][1]};
            if (reduced_by_float(f.a, f.b, t * t - 4)) reduced_components.insert(uf.find(i));
        }
        const auto records = classes_at_trace(t);
        for (auto& rec : records) {
            auto& m = rec.representative;
            rep_components.insert(uf.find(index.at({static_cast<i64>(m.a()), static_cast<i64>(m.b()), static_cast<i64>(m.c())})));
        }
        EXPECT_EQ(rep_components.size(), records.size()) << t;
        EXPECT_EQ(rep_components, reduced_components) << t;
    }
    // (-2, 4, 2) has content 2 and is its own class at trace 6.
    auto six = classes_at_trace(6);
    EXPECT_EQ(six.size(), 3u);
    EXPECT_TRUE(std::any_of(six.begin(), six.end(), [](auto& r) { return r.canonical == QuadraticForm{-2, 4, 2}; }));
}

TEST(Geodesics, Primitivity) {
    GeodesicCatalog cat(200);
    EXPECT_TRUE(cat.at_trace(3).front().primitive);
    const auto& base = cat.at_trace(3).front().representative;
    const auto sq = base * base;
    EXPECT_EQ(sq.trace(), 7);
    EXPECT_FALSE(cat.at_trace(7)[cat.locate(sq)].primitive);
    EXPECT_FALSE(cat.at_trace(18)[cat.locate(sq * base)].primitive);
    EXPECT_FALSE(cat.at_trace(47)[cat.locate(sq * sq)].primitive);
    for (i64 t = 3; t <= 200; ++t)
        for (auto& rec : cat.at_trace(t))
            EXPECT_EQ(rec.primitive, !imprimitive_by_chebyshev(rec.representative)) << t << " " << rec.canonical.to_string();
}

TEST(Geodesics, CatalogDeterministicAcrossThreads) {
    GeodesicCatalog one(150, 1), four(150, 4);
    for (i64 t = 3; t <= 150; ++t) {
        ASSERT_EQ(one.at_trace(t).size(), four.at_trace(t).size());
        for (std::size_t i = 0; i < one.at_trace(t).size(); ++i) {
            EXPECT_EQ(one.at_trace(t)[i].canonical, four.at_trace(t)[i].canonical);
            EXPECT_EQ(one.at_trace(t)[i].primitive, four.at_trace(t)[i].primitive);
        }
    }
}

TEST(Cutoff, ExactComparison) {
    EXPECT_TRUE(norm_below(3, parse_number("6.86")));
    EXPECT_FALSE(norm_below(3, parse_number("6.85")));
    EXPECT_FALSE(norm_below(3, Rational(1)));
    EXPECT_EQ(max_trace_below(parse_number("6.86")), 3);
    EXPECT_EQ(max_trace_below(parse_number("6.85")), 2);
    EXPECT_EQ(max_trace_below(parse_number("1e6")), 1000);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 2000; ++i) {
        const Rational x(static_cast<i64>(2 + rng() % 10'000'000), static_cast<i64>(1 + rng() % 100));
        const i64 t = 3 + static_cast<i64>(rng() % 400);
        const long double nx = norm_of_trace<long double>(t);
        const long double xd = static_cast<long double>(x);
        if (std::abs(nx - xd) > 1e-9L * xd) {
            EXPECT_EQ(norm_below(t, x), nx < xd) << t;
        }
        EXPECT_LE(norm_below(t + 1, x), norm_below(t, x));
        EXPECT_LE(norm_below(t, x), norm_below(t, x + Rational(1, 7)));
    }
}

TEST(Cutoff, ParseNumber) {
    EXPECT_EQ(parse_number("7"), Rational(7));
    EXPECT_EQ(parse_number("6.86"), Rational(686, 100));
    EXPECT_EQ(parse_number("1e6"), Rational(1000000));
    EXPECT_EQ(parse_number("2.5E-3"), Rational(1, 400));
    EXPECT_EQ(parse_number("3/4"), Rational(3, 4));
    EXPECT_THROW(parse_number("abc"), std::invalid_argument);
    EXPECT_THROW(parse_number("1e"), std::invalid_argument);
}

TEST(Geodesics, PrimeGeodesicTheorem) {
    auto cat = geodesics_below(parse_number("1e6"));
    EXPECT_EQ(prime_geodesic_count(cat, parse_number("6.86")), 1);
    for (const char* x : {"1e4", "1e5", "1e6"}) {
        const double ratio = static_cast<double>(prime_geodesic_count(cat, parse_number(x))) / li(std::stod(x));
        EXPECT_GE(ratio, 0.8) << x;
        EXPECT_LE(ratio, 1.2) << x;
    }
    EXPECT_NEAR(li(1e6), 78627.549159, 1e-3);
}

TEST(Empirical, TallyConsistency) {
    const SubgroupSpec s{Family::Gamma0, 5};
    const auto x = parse_number("1e5");
    auto cat = geodesics_below(x);
    auto tally = empirical_tally(cat, build_coset_table(s), x);
    auto theory = density_table(s);
    i64 sum = 0;
    for (auto& [part, count] : tally.counts) {
        EXPECT_TRUE(theory.entries.count(part)) << part.to_pretty();
        EXPECT_EQ(part.weight(), 6);
        sum += count;
    }
    EXPECT_EQ(sum, tally.total);
    EXPECT_EQ(tally.total, prime_geodesic_count(cat, x));
    EXPECT_EQ(empirical_tally(s, Rational(7)).total, 1);
    EXPECT_EQ(empirical_tally(s, parse_number("6.85")).total, 0);
}

TEST(Empirical, ConvergesToDensities) {
    const auto x = parse_number("1e6");
    auto cat = geodesics_below(x);
    for (i64 n : {3, 5}) {
        const SubgroupSpec s{Family::Gamma0, n};
        auto tally = empirical_tally(cat, build_coset_table(s), x);
        for (auto& [part, d] : density_table(s).entries) {
            if (d < Rational(1, 10)) continue;
            const double emp = static_cast<double>(tally.counts[part]) / static_cast<double>(tally.total);
            EXPECT_NEAR(emp, static_cast<double>(d), 0.05) << n << " " << part.to_pretty();
        }
    }
}

TEST(Empirical, AnomalousScan) {
    const auto x = parse_number("1e5");
    auto cat = geodesics_below(x);
    for (auto s : {SubgroupSpec{Family::Gamma0, 3}, SubgroupSpec{Family::Gamma0, 5}, SubgroupSpec{Family::Gamma0, 25},
                   SubgroupSpec{Family::Gamma1, 5}, SubgroupSpec{Family::GammaPrincipal, 5}}) {
        auto scan = anomalous_type_scan(cat, build_coset_table(s), x);
        EXPECT_EQ(scan.count(), 0) << s.name();
        EXPECT_EQ(scan.scanned, prime_geodesic_count(cat, x));
    }
    // At composite level the Gamma0 action has a kernel of order 2, so an
    // element that is -I mod 3 and I mod 5 has M = 2 but acts trivially.
    auto scan = anomalous_type_scan(cat, build_coset_table({Family::Gamma0, 15}), x);
    for (auto& w : scan.witnesses) {
        EXPECT_LT(w.type.largest(), w.order);
        EXPECT_EQ(w.type.weight(), 24);
    }
}
