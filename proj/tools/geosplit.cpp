// geosplit: density tables, splitting types, empirical tallies, census
// caches and zeta checks for congruence subgroups of SL2(Z).
//
// Exit codes: 0 success, 1 usage error, 2 resource cap, 3 consistency failure.

#include "geosplit.hpp"
#include "geosplit/serialize.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace geosplit;
namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitCap = 2;
constexpr int kExitConsistency = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string format;
    std::string output;
    unsigned threads = default_threads();
    std::size_t cap = kDefaultCap;
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_format) {
    c.format = default_format;
    cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "tsv"}))->capture_default_str();
    cmd->add_option("--output", c.output, "Write to this file instead of stdout");
    cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--cap", c.cap, "Largest group or coset count to build")->capture_default_str();
}

void emit(const Common& c, const std::string& text) {
    if (c.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(c.output, std::ios::binary);
    if (!out) throw UsageError("cannot write " + c.output);
    out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

SubgroupSpec make_spec(const std::string& family, i64 level) {
    Family f;
    try {
        f = parse_family(family);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (level < 2) throw UsageError("--level must be at least 2");
    return {f, level};
}

CensusOptions census_options(const Common& c, std::vector<Family> families) {
    CensusOptions opt;
    opt.cap = c.cap;
    opt.threads = c.threads;
    opt.families = std::move(families);
    return opt;
}

bool is_composite_level(i64 level) { return factorize(level).size() > 1; }

DensityTable theoretical_table(const SubgroupSpec& s, const Common& c) {
    if (s.family == Family::Gamma0 && is_composite_level(s.level))
        return density_table_composite(s, census_options(c, {Family::Gamma0}));
    return density_table(s, census_options(c, {s.family}));
}

Rational parse_cutoff(const std::string& text) {
    Rational x;
    try {
        x = parse_number(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (x <= 1) throw UsageError("--x must be greater than 1");
    return x;
}

// densities

struct DensitiesArgs {
    Common common;
    std::string family;
    i64 level = 0;
    bool closed_form = false;
    bool composite = false;
};

int run_densities(const DensitiesArgs& a) {
    const auto s = make_spec(a.family, a.level);
    DensityTable table;
    if (a.composite) {
        if (s.family != Family::Gamma0) throw UsageError("--composite is only available for gamma0");
        if (!is_composite_level(s.level)) throw UsageError("--composite needs a level with two or more prime factors");
        table = density_table_composite(s, census_options(a.common, {Family::Gamma0}));
    } else {
        table = density_table(s, census_options(a.common, {s.family}));
    }
    check_normalized(table);
    if (!a.closed_form) {
        emit(a.common, a.common.format == "json" ? dump(density_table_json(table)) : density_table_tsv(table));
        return 0;
    }
    if (!odd_prime_power(s.level)) throw UsageError("--closed-form needs an odd prime-power level");
    const auto closed = density_table_closed_form(s);
    const auto diff = diff_tables(table, closed);
    if (a.common.format == "json") {
        emit(a.common, dump({{"table", density_table_json(table)}, {"closed_form", density_table_json(closed)}, {"diff", diff_json(diff)}}));
    } else {
        std::ostringstream out;
        out << density_table_tsv(table) << "# closed form\n" << density_table_tsv(closed) << "# diff\n";
        out << "partition\tcensus\tclosed_form\n";
        for (auto& [p, x, y] : diff.rows) out << p.to_string() << '\t' << to_string(x) << '\t' << to_string(y) << '\n';
        emit(a.common, out.str());
    }
    if (!diff.empty()) {
        std::cerr << "closed form disagrees with the census on " << diff.rows.size() << " partitions\n";
        return kExitConsistency;
    }
    return 0;
}

// type

struct TypeArgs {
    Common common;
    std::string family;
    i64 level = 0;
    std::string matrix;
};

IntegerMatrix parse_matrix(const std::string& text) {
    std::vector<long long> v;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("--matrix entries must be integers: " + text);
        }
    }
    if (v.size() != 4) throw UsageError("--matrix needs four entries a,b,c,d");
    try {
        return {v[0], v[1], v[2], v[3]};
    } catch (const std::invalid_argument&) {
        throw UsageError("--matrix must have determinant 1: " + text);
    }
}

int run_type(const TypeArgs& a) {
    const auto s = make_spec(a.family, a.level);
    const auto m = parse_matrix(a.matrix);
    CosetTableOptions opt;
    opt.cap = a.common.cap;
    const auto table = build_coset_table(s, opt);
    const auto g = reduce_mod(m, s.level);
    const auto cycles = splitting_type_cycles(g, table);
    const auto moebius = splitting_type_moebius(g, table);
    const i64 order = order_in_xi(g);
    const bool agree = cycles == moebius;
    if (a.common.format == "json") {
        emit(a.common, dump({{"matrix", matrix_string(m)},
                             {"subgroup", subgroup_json(s)},
                             {"type", agree ? Json(cycles.to_string()) : Json(nullptr)},
                             {"cycles", cycles.to_string()},
                             {"moebius", moebius.to_string()},
                             {"order", order},
                             {"agree", agree}}));
    } else {
        std::ostringstream out;
        if (agree) out << cycles.to_string() << '\n';
        out << "cycles\t" << cycles.to_string() << "\nmoebius\t" << moebius.to_string() << "\norder\t" << order << '\n';
        emit(a.common, out.str());
    }
    if (!agree) {
        std::cerr << "cycle type and Moebius type disagree\n";
        return kExitConsistency;
    }
    return 0;
}

// empirical

struct EmpiricalArgs {
    Common common;
    std::string family;
    i64 level = 0;
    std::string x;
    bool scan = false;
};

int run_empirical(const EmpiricalArgs& a) {
    const auto s = make_spec(a.family, a.level);
    const auto x = parse_cutoff(a.x);
    CosetTableOptions topt;
    topt.cap = a.common.cap;
    const auto table = build_coset_table(s, topt);
    const auto theory = theoretical_table(s, a.common);
    const auto cat = geodesics_below(x, a.common.threads);
    const auto tally = empirical_tally(cat, table, x, a.common.threads);
    std::optional<AnomalyScan> scan;
    if (a.scan) scan = anomalous_type_scan(cat, table, x, a.common.threads);
    const AnomalyScan* sp = scan ? &*scan : nullptr;
    emit(a.common, a.common.format == "json" ? dump(empirical_json(tally, theory, sp)) : empirical_tsv(tally, theory, sp));
    if (scan && scan->count() > 0) std::cerr << "notable: " << scan->count() << " anomalous classes found\n";
    return 0;
}

// census

struct CensusArgs {
    Common common;
    i64 level = 0;
    std::string family;
    std::string cache_dir = "geosplit-cache";
    bool trust_cache = false;
};

int run_census(const CensusArgs& a) {
    if (a.level < 2) throw UsageError("--level must be at least 2");
    std::vector<Family> families;
    if (a.family.empty())
        families.assign(kAllFamilies.begin(), kAllFamilies.end());
    else
        families.push_back(make_spec(a.family, a.level).family);
    fs::path dir = a.cache_dir;
    if (const char* env = std::getenv("GEODESIC_CACHE_DIR"); env && *env) dir = env;
    fs::create_directories(dir);

    std::optional<Census> census;
    auto fresh = [&]() -> const Census& {
        if (!census) census = build_census(a.level, census_options(a.common, families));
        return *census;
    };
    int status = 0;
    Json report = Json::array();
    for (auto f : families) {
        const fs::path path = dir / ("census_" + std::string(family_name(f)) + "_" + std::to_string(a.level) + ".json");
        std::string state;
        i64 classes = 0;
        if (fs::exists(path)) {
            std::ifstream in(path);
            Json cached;
            try {
                cached = Json::parse(in);
            } catch (const Json::parse_error&) {
                cached = nullptr;
            }
            if (a.trust_cache && cached.is_object()) {
                state = "cache trusted";
                classes = static_cast<i64>(cached["classes"].size());
            } else {
                const auto now = census_json(fresh(), f);
                classes = static_cast<i64>(fresh().classes().size());
                if (cached == now) {
                    state = "cache verified";
                } else {
                    state = "cache mismatch";
                    status = kExitConsistency;
                }
            }
        } else {
            const auto now = census_json(fresh(), f);
            classes = static_cast<i64>(fresh().classes().size());
            std::ofstream out(path, std::ios::binary);
            if (!out) throw UsageError("cannot write " + path.string());
            out << dump(now);
            state = "cache written";
        }
        report.push_back({{"family", family_name(f)}, {"path", path.string()}, {"status", state}, {"classes", classes}});
    }
    if (a.common.format == "json") {
        emit(a.common, dump({{"level", a.level}, {"xi_order", xi_order(a.level)}, {"files", report}}));
    } else {
        std::ostringstream out;
        for (auto& r : report)
            out << r["status"].get<std::string>() << '\t' << r["family"].get<std::string>() << '\t'
                << r["path"].get<std::string>() << '\n';
        emit(a.common, out.str());
    }
    if (status) std::cerr << "cache differs from a fresh computation\n";
    return status;
}

// zeta-check

struct ZetaArgs {
    Common common;
    i64 p = 0;
    double s = 0;
    std::string x;
    double tolerance = 1e-8;
};

int run_zeta(const ZetaArgs& a) {
    if (a.p < 3 || !is_prime(a.p)) throw UsageError("--p must be an odd prime");
    if (!(a.s > 1)) throw UsageError("--s must be greater than 1");
    const auto x = parse_cutoff(a.x);
    const auto cat = geodesics_below(x, a.common.threads);
    const ZetaClassSet set(cat, x);
    const long double s = a.s;
    const auto ratio = ratio_identity_check<long double>(set, a.p, s, a.common.threads);
    Json out{{"p", a.p}, {"s", a.s}, {"cutoff", to_string(x)},
             {"lhs_log", static_cast<double>(ratio.lhs_log)},
             {"rhs_log", static_cast<double>(ratio.rhs_log)},
             {"discrepancy", static_cast<double>(ratio.discrepancy)},
             {"term_count", ratio.term_count}};
    long double worst = ratio.discrepancy;
    Json venkov = Json::array();
    for (auto f : {Family::Gamma1, Family::GammaPrincipal}) {
        const SubgroupSpec spec{f, a.p};
        const auto v = venkov_zograf_check<long double>(set, build_coset_table(spec), s, a.common.threads);
        worst = std::max(worst, v.discrepancy);
        Json j = identity_check_json(v);
        j["subgroup"] = subgroup_json(spec);
        venkov.push_back(j);
    }
    out["venkov"] = venkov;
    if (a.common.format == "json") {
        emit(a.common, dump(out));
    } else {
        std::ostringstream t;
        for (auto key : {"p", "s", "cutoff", "lhs_log", "rhs_log", "discrepancy", "term_count"}) t << key << '\t' << out[key].dump() << '\n';
        for (auto& v : venkov)
            t << "venkov_discrepancy\t" << v["subgroup"]["family"].get<std::string>() << '\t' << v["discrepancy"].dump() << '\n';
        emit(a.common, t.str());
    }
    if (worst > a.tolerance) {
        std::cerr << "discrepancy " << format_real(worst, 6) << " exceeds tolerance\n";
        return kExitConsistency;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Splitting densities of closed geodesics on modular curves"};
    app.require_subcommand(1);

    DensitiesArgs dens;
    auto* c_dens = app.add_subcommand("densities", "Density table of splitting types");
    add_common(c_dens, dens.common, "tsv");
    c_dens->add_option("--family", dens.family, "gamma0 | gamma1 | gamma")->required();
    c_dens->add_option("--level", dens.level, "Level N")->required();
    c_dens->add_flag("--closed-form", dens.closed_form, "Also print the closed-form table and the difference");
    c_dens->add_flag("--composite", dens.composite, "Build gamma0 tables from prime-power factors");

    TypeArgs type;
    auto* c_type = app.add_subcommand("type", "Splitting type of one matrix");
    add_common(c_type, type.common, "tsv");
    c_type->add_option("--matrix", type.matrix, "a,b,c,d with ad - bc = 1")->required();
    c_type->add_option("--family", type.family, "gamma0 | gamma1 | gamma")->required();
    c_type->add_option("--level", type.level, "Level N")->required();

    EmpiricalArgs emp;
    auto* c_emp = app.add_subcommand("empirical", "Empirical splitting densities of geodesics below a norm cutoff");
    add_common(c_emp, emp.common, "tsv");
    c_emp->add_option("--family", emp.family, "gamma0 | gamma1 | gamma")->required();
    c_emp->add_option("--level", emp.level, "Level N")->required();
    c_emp->add_option("--x", emp.x, "Norm cutoff (decimal, e.g. 1e6)")->required();
    c_emp->add_flag("--scan-anomalous", emp.scan, "Report classes whose type has no part equal to their order");

    CensusArgs cen;
    auto* c_cen = app.add_subcommand("census", "Conjugacy-class census with a verified JSON cache");
    add_common(c_cen, cen.common, "tsv");
    c_cen->add_option("--level", cen.level, "Level N")->required();
    c_cen->add_option("--family", cen.family, "gamma0 | gamma1 | gamma (default: all)");
    c_cen->add_option("--cache-dir", cen.cache_dir, "Cache directory (GEODESIC_CACHE_DIR overrides)")->capture_default_str();
    c_cen->add_flag("--trust-cache", cen.trust_cache, "Use an existing cache without recomputing");

    ZetaArgs zeta;
    auto* c_zeta = app.add_subcommand("zeta-check", "Numerical check of the zeta factorization identities");
    add_common(c_zeta, zeta.common, "json");
    c_zeta->add_option("--p", zeta.p, "Odd prime")->required();
    c_zeta->add_option("--s", zeta.s, "Evaluation point s > 1")->required();
    c_zeta->add_option("--x", zeta.x, "Norm cutoff")->required();
    c_zeta->add_option("--tolerance", zeta.tolerance, "Largest accepted discrepancy")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*c_dens) return run_densities(dens);
        if (*c_type) return run_type(type);
        if (*c_emp) return run_empirical(emp);
        if (*c_cen) return run_census(cen);
        if (*c_zeta) return run_zeta(zeta);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << '\n';
        return kExitCap;
    } catch (const ConsistencyError& e) {
        std::cerr << "consistency failure: " << e.what() << '\n';
        return kExitConsistency;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConsistency;
    }
    return kExitUsage;
}
