#pragma once

#include "geosplit/arith.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace geosplit {

/// A partition of n, stored run-length encoded: (part, multiplicity) with
/// strictly decreasing parts. Index-sized partitions of Gamma(N) have
/// |Xi| parts, so the expanded list is only materialized on request.
class Partition {
public:
    struct Run {
        i64 part;
        i64 count;
        auto operator<=>(const Run&) const = default;
    };

    Partition() = default;

    /// From an arbitrary multiset of positive parts.
    static Partition from_parts(std::vector<i64> parts) {
        std::sort(parts.begin(), parts.end(), std::greater<>());
        Partition p;
        for (i64 x : parts) {
            if (x <= 0) throw std::invalid_argument("partition parts must be positive");
            if (!p.runs_.empty() && p.runs_.back().part == x)
                ++p.runs_.back().count;
            else
                p.runs_.push_back({x, 1});
        }
        return p;
    }

    /// From multiplicities l_m (number of parts equal to m); zero counts dropped.
    static Partition from_multiplicities(const std::map<i64, i64>& mult) {
        Partition p;
        for (auto it = mult.rbegin(); it != mult.rend(); ++it) {
            if (it->second < 0 || it->first <= 0)
                throw std::invalid_argument("invalid multiplicity");
            if (it->second > 0) p.runs_.push_back({it->first, it->second});
        }
        return p;
    }

    /// Convenience for closed forms: list of (part, count) in any order.
    static Partition from_runs(const std::vector<Run>& runs) {
        std::map<i64, i64> mult;
        for (auto& r : runs) {
            if (r.count < 0 || r.part <= 0) throw std::invalid_argument("invalid run");
            mult[r.part] += r.count;
        }
        return from_multiplicities(mult);
    }

    /// The rectangle (m^{n/m}).
    static Partition rectangle(i64 m, i64 n) {
        if (m <= 0 || n % m) throw std::invalid_argument("rectangle: m must divide n");
        Partition p;
        p.runs_.push_back({m, n / m});
        return p;
    }

    const std::vector<Run>& runs() const { return runs_; }

    std::vector<i64> parts() const {
        std::vector<i64> out;
        for (auto& r : runs_) out.insert(out.end(), static_cast<std::size_t>(r.count), r.part);
        return out;
    }

    i64 weight() const {
        i64 w = 0;
        for (auto& r : runs_) w += r.part * r.count;
        return w;
    }

    i64 length() const {
        i64 k = 0;
        for (auto& r : runs_) k += r.count;
        return k;
    }

    i64 largest() const { return runs_.empty() ? 0 : runs_.front().part; }

    i64 multiplicity(i64 part) const {
        for (auto& r : runs_)
            if (r.part == part) return r.count;
        return 0;
    }

    bool is_rectangle() const { return runs_.size() == 1; }

    bool empty() const { return runs_.empty(); }

    auto operator<=>(const Partition&) const = default;

    /// Comma-joined descending parts: "3,1,1".
    std::string to_string() const {
        std::string s;
        for (auto& r : runs_)
            for (i64 i = 0; i < r.count; ++i) {
                if (!s.empty()) s += ',';
                s += std::to_string(r.part);
            }
        return s;
    }

    /// Exponent notation for humans: "25 5^6 1^5".
    std::string to_pretty() const {
        std::ostringstream os;
        bool first = true;
        for (auto& r : runs_) {
            if (!first) os << ' ';
            first = false;
            os << r.part;
            if (r.count > 1) os << '^' << r.count;
        }
        return os.str();
    }

    static Partition parse(const std::string& s) {
        std::vector<i64> parts;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) throw std::invalid_argument("empty part in partition: " + s);
            std::size_t pos = 0;
            long long v = std::stoll(item, &pos);
            if (pos != item.size()) throw std::invalid_argument("bad partition: " + s);
            parts.push_back(v);
        }
        if (parts.empty()) throw std::invalid_argument("empty partition");
        auto p = from_parts(std::move(parts));
        if (p.to_string() != s) throw std::invalid_argument("partition not in descending order: " + s);
        return p;
    }

private:
    std::vector<Run> runs_;
};

inline std::ostream& operator<<(std::ostream& os, const Partition& p) {
    return os << '(' << p.to_pretty() << ')';
}

}  // namespace geosplit
