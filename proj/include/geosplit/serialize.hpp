#pragma once

// JSON and TSV exports. Orderings are fixed so identical inputs give
// byte-identical output.

#include "geosplit/census.hpp"
#include "geosplit/geodesics.hpp"
#include "geosplit/zeta.hpp"

#include <json.hpp>

#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

namespace geosplit {

using Json = nlohmann::ordered_json;

inline std::string format_real(long double v, int digits = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*Lg", digits, v);
    return buf;
}

inline std::string matrix_string(const ProjectiveResidueMatrix& g) {
    return std::to_string(g.a()) + "," + std::to_string(g.b()) + "," + std::to_string(g.c()) + "," + std::to_string(g.d());
}

inline std::string matrix_string(const IntegerMatrix& g) {
    auto s = [](i128 v) { return std::to_string(static_cast<long long>(v)); };
    return s(g.a()) + "," + s(g.b()) + "," + s(g.c()) + "," + s(g.d());
}

inline Json subgroup_json(const SubgroupSpec& s) { return {{"family", family_name(s.family)}, {"level", s.level}}; }

inline Json density_table_json(const DensityTable& t) {
    Json rows = Json::array();
    for (auto& [part, d] : t.entries)
        rows.push_back({{"partition", part.to_string()}, {"density", to_string(d)}, {"approx", static_cast<double>(d)}});
    return {{"subgroup", subgroup_json(t.subgroup)},
            {"xi_order", t.xi_order},
            {"index", t.index},
            {"total", to_string(t.total())},
            {"rows", rows}};
}

inline std::string density_table_tsv(const DensityTable& t) {
    std::ostringstream out;
    out << "partition\tdensity\tapprox\n";
    for (auto& [part, d] : t.entries) out << part.to_string() << '\t' << to_string(d) << '\t' << format_real(static_cast<double>(d), 10) << '\n';
    return out.str();
}

struct TableDiff {
    std::vector<std::tuple<Partition, Rational, Rational>> rows;  // partition, left, right
    bool empty() const { return rows.empty(); }
};

inline TableDiff diff_tables(const DensityTable& left, const DensityTable& right) {
    TableDiff d;
    std::set<Partition> keys;
    for (auto& [p, q] : left.entries) keys.insert(p);
    for (auto& [p, q] : right.entries) keys.insert(p);
    for (auto& p : keys) {
        auto a = left.entries.count(p) ? left.entries.at(p) : Rational(0);
        auto b = right.entries.count(p) ? right.entries.at(p) : Rational(0);
        if (a != b) d.rows.emplace_back(p, a, b);
    }
    return d;
}

inline Json diff_json(const TableDiff& d) {
    Json rows = Json::array();
    for (auto& [p, a, b] : d.rows) rows.push_back({{"partition", p.to_string()}, {"census", to_string(a)}, {"closed_form", to_string(b)}});
    return rows;
}

inline Json census_json(const Census& c, Family f) {
    const SubgroupSpec s{f, c.level()};
    Json classes = Json::array();
    for (auto& rec : c.classes()) {
        Json row{{"rep", matrix_string(rec.representative)}, {"size", rec.size}, {"order", rec.order}};
        row["family_label"] = rec.family ? Json(rec.family->to_string()) : Json(nullptr);
        row["type"] = rec.types.at(f).to_string();
        classes.push_back(row);
    }
    Json densities = Json::object();
    for (auto& [part, d] : density_table_from_census(c, f).entries) densities[part.to_string()] = to_string(d);
    return {{"level", c.level()},
            {"family", family_name(f)},
            {"xi_order", c.xi_order()},
            {"index", subgroup_index(s)},
            {"classes", classes},
            {"densities", densities}};
}

struct EmpiricalRow {
    Partition partition;
    i64 count = 0;
    double empirical = 0;
    Rational theoretical;
    double abs_error = 0;
};

/// Rows for every partition with nonzero theoretical density or nonzero count.
inline std::vector<EmpiricalRow> empirical_rows(const EmpiricalTally& tally, const DensityTable& theory) {
    std::set<Partition> keys;
    for (auto& [p, d] : theory.entries) keys.insert(p);
    for (auto& [p, c] : tally.counts) keys.insert(p);
    std::vector<EmpiricalRow> rows;
    for (auto& p : keys) {
        EmpiricalRow r;
        r.partition = p;
        r.count = tally.counts.count(p) ? tally.counts.at(p) : 0;
        r.empirical = tally.total ? static_cast<double>(r.count) / static_cast<double>(tally.total) : 0.0;
        r.theoretical = theory.entries.count(p) ? theory.entries.at(p) : Rational(0);
        r.abs_error = std::abs(r.empirical - static_cast<double>(r.theoretical));
        rows.push_back(r);
    }
    return rows;
}

inline Json anomaly_json(const AnomalyScan& scan) {
    Json w = Json::array();
    for (auto& x : scan.witnesses)
        w.push_back({{"trace", x.trace}, {"matrix", matrix_string(x.representative)}, {"type", x.type.to_string()}, {"order", x.order}});
    return {{"count", scan.count()}, {"scanned", scan.scanned}, {"witnesses", w}};
}

inline Json empirical_json(const EmpiricalTally& tally, const DensityTable& theory, const AnomalyScan* scan) {
    Json rows = Json::array();
    for (auto& r : empirical_rows(tally, theory))
        rows.push_back({{"partition", r.partition.to_string()},
                        {"count", r.count},
                        {"empirical_density", r.empirical},
                        {"theoretical_density", to_string(r.theoretical)},
                        {"abs_error", r.abs_error}});
    Json out{{"subgroup", subgroup_json(tally.subgroup)},
             {"cutoff", to_string(tally.cutoff)},
             {"xi_order", theory.xi_order},
             {"index", theory.index},
             {"total", tally.total},
             {"li", tally.cutoff > 1 ? li(static_cast<double>(tally.cutoff)) : 0.0},
             {"rows", rows}};
    if (scan) out["anomalous"] = anomaly_json(*scan);
    return out;
}

inline std::string empirical_tsv(const EmpiricalTally& tally, const DensityTable& theory, const AnomalyScan* scan) {
    std::ostringstream out;
    out << "partition\tcount\tempirical_density\ttheoretical_density\tabs_error\n";
    for (auto& r : empirical_rows(tally, theory))
        out << r.partition.to_string() << '\t' << r.count << '\t' << format_real(r.empirical, 10) << '\t'
            << to_string(r.theoretical) << '\t' << format_real(r.abs_error, 10) << '\n';
    out << "# total\t" << tally.total << '\n';
    if (scan) {
        out << "# anomalous\t" << scan->count() << '\n';
        for (auto& w : scan->witnesses)
            out << "# witness\t" << w.trace << '\t' << matrix_string(w.representative) << '\t' << w.type.to_string() << '\t'
                << w.order << '\n';
    }
    return out.str();
}

template <typename Real>
Json identity_check_json(const IdentityCheck<Real>& c) {
    return {{"s", static_cast<double>(c.s)},
            {"cutoff", to_string(c.cutoff)},
            {"lhs_log", static_cast<double>(c.lhs_log)},
            {"rhs_log", static_cast<double>(c.rhs_log)},
            {"discrepancy", static_cast<double>(c.discrepancy)},
            {"term_count", c.term_count}};
}

}  // namespace geosplit
