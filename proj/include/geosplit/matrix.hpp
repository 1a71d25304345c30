#pragma once

#include "geosplit/arith.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace geosplit {

/// Element of SL2(Z) with 128-bit entries; arithmetic throws on overflow.
class IntegerMatrix {
public:
    IntegerMatrix() : a_(1), b_(0), c_(0), d_(1) {}

    IntegerMatrix(i128 a, i128 b, i128 c, i128 d) : a_(a), b_(b), c_(c), d_(d) {
        if (checked_sub(checked_mul(a, d), checked_mul(b, c)) != 1)
            throw std::invalid_argument("IntegerMatrix: determinant must be 1");
    }

    i128 a() const { return a_; }
    i128 b() const { return b_; }
    i128 c() const { return c_; }
    i128 d() const { return d_; }
    i128 trace() const { return checked_add(a_, d_); }

    friend IntegerMatrix operator*(const IntegerMatrix& x, const IntegerMatrix& y) {
        IntegerMatrix r;
        r.a_ = checked_add(checked_mul(x.a_, y.a_), checked_mul(x.b_, y.c_));
        r.b_ = checked_add(checked_mul(x.a_, y.b_), checked_mul(x.b_, y.d_));
        r.c_ = checked_add(checked_mul(x.c_, y.a_), checked_mul(x.d_, y.c_));
        r.d_ = checked_add(checked_mul(x.c_, y.b_), checked_mul(x.d_, y.d_));
        return r;
    }

    IntegerMatrix inverse() const {
        IntegerMatrix r;
        r.a_ = d_;
        r.b_ = -b_;
        r.c_ = -c_;
        r.d_ = a_;
        return r;
    }

    IntegerMatrix pow(u64 e) const {
        IntegerMatrix result, base = *this;
        while (e) {
            if (e & 1U) result = result * base;
            e >>= 1U;
            if (e) base = base * base;
        }
        return result;
    }

    bool operator==(const IntegerMatrix&) const = default;

    std::string to_string() const {
        return "[[" + str(a_) + "," + str(b_) + "],[" + str(c_) + "," + str(d_) + "]]";
    }

    static std::string str(i128 v) {
        if (v == 0) return "0";
        bool neg = v < 0;
        unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                                  : static_cast<unsigned __int128>(v);
        std::string s;
        while (u) {
            s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
            u /= 10;
        }
        return neg ? "-" + s : s;
    }

private:
    static i128 checked_mul(i128 x, i128 y) {
        i128 r;
        if (__builtin_mul_overflow(x, y, &r)) throw std::overflow_error("IntegerMatrix overflow");
        return r;
    }
    static i128 checked_add(i128 x, i128 y) {
        i128 r;
        if (__builtin_add_overflow(x, y, &r)) throw std::overflow_error("IntegerMatrix overflow");
        return r;
    }
    static i128 checked_sub(i128 x, i128 y) {
        i128 r;
        if (__builtin_sub_overflow(x, y, &r)) throw std::overflow_error("IntegerMatrix overflow");
        return r;
    }

    i128 a_, b_, c_, d_;
};

inline std::ostream& operator<<(std::ostream& os, const IntegerMatrix& m) { return os << m.to_string(); }

/// Element of Xi = SL2(Z/NZ)/{+-I}. The stored entries are the
/// lexicographically smaller of (a,b,c,d) and (-a,-b,-c,-d) mod N, so
/// equality of elements is equality of the stored tuple.
class ProjectiveResidueMatrix {
public:
    ProjectiveResidueMatrix(i64 a, i64 b, i64 c, i64 d, i64 level) : level_(level) {
        if (level < 2) throw std::invalid_argument("level must be >= 2");
        e_ = {mod(a, level), mod(b, level), mod(c, level), mod(d, level)};
        if (mod(mul_mod(e_[0], e_[3], level) - mul_mod(e_[1], e_[2], level), level) != 1 % level)
            throw std::invalid_argument("ProjectiveResidueMatrix: determinant must be 1 mod N");
        canonicalize();
    }

    static ProjectiveResidueMatrix identity(i64 level) { return {1, 0, 0, 1, level}; }

    i64 a() const { return e_[0]; }
    i64 b() const { return e_[1]; }
    i64 c() const { return e_[2]; }
    i64 d() const { return e_[3]; }
    i64 level() const { return level_; }
    const std::array<i64, 4>& entries() const { return e_; }

    bool is_identity() const { return e_[0] == 1 % level_ && e_[1] == 0 && e_[2] == 0 && e_[3] == 1 % level_; }

    /// Trace of the stored lift; the other lift has trace -tr.
    i64 trace() const { return mod(e_[0] + e_[3], level_); }

    /// The negated lift (-a,-b,-c,-d) mod N.
    std::array<i64, 4> negated() const {
        return {mod(-e_[0], level_), mod(-e_[1], level_), mod(-e_[2], level_), mod(-e_[3], level_)};
    }

    /// Dense key in [0, N^4).
    u64 encode() const {
        u64 n = static_cast<u64>(level_);
        return ((static_cast<u64>(e_[0]) * n + static_cast<u64>(e_[1])) * n + static_cast<u64>(e_[2])) * n +
               static_cast<u64>(e_[3]);
    }

    auto operator<=>(const ProjectiveResidueMatrix& o) const {
        if (auto c = level_ <=> o.level_; c != 0) return c;
        return e_ <=> o.e_;
    }
    bool operator==(const ProjectiveResidueMatrix&) const = default;

    std::string to_string() const {
        return "[[" + std::to_string(e_[0]) + "," + std::to_string(e_[1]) + "],[" + std::to_string(e_[2]) + "," +
               std::to_string(e_[3]) + "]] mod " + std::to_string(level_);
    }

private:
    friend ProjectiveResidueMatrix multiply(const ProjectiveResidueMatrix&, const ProjectiveResidueMatrix&);
    friend ProjectiveResidueMatrix inverse(const ProjectiveResidueMatrix&);

    struct Trusted {};
    ProjectiveResidueMatrix(Trusted, std::array<i64, 4> e, i64 level) : level_(level), e_(e) { canonicalize(); }

    void canonicalize() {
        auto n = negated();
        if (n < e_) e_ = n;
    }

    i64 level_;
    std::array<i64, 4> e_;
};

inline std::ostream& operator<<(std::ostream& os, const ProjectiveResidueMatrix& m) { return os << m.to_string(); }

inline ProjectiveResidueMatrix multiply(const ProjectiveResidueMatrix& x, const ProjectiveResidueMatrix& y) {
    if (x.level_ != y.level_) throw std::invalid_argument("multiply: level mismatch");
    const i64 n = x.level_;
    const auto& p = x.e_;
    const auto& q = y.e_;
    return ProjectiveResidueMatrix(ProjectiveResidueMatrix::Trusted{},
                                   {(p[0] * q[0] + p[1] * q[2]) % n, (p[0] * q[1] + p[1] * q[3]) % n,
                                    (p[2] * q[0] + p[3] * q[2]) % n, (p[2] * q[1] + p[3] * q[3]) % n},
                                   n);
}

inline ProjectiveResidueMatrix operator*(const ProjectiveResidueMatrix& x, const ProjectiveResidueMatrix& y) {
    return multiply(x, y);
}

inline ProjectiveResidueMatrix inverse(const ProjectiveResidueMatrix& x) {
    const i64 n = x.level_;
    return ProjectiveResidueMatrix(ProjectiveResidueMatrix::Trusted{},
                                   {x.e_[3], mod(-x.e_[1], n), mod(-x.e_[2], n), x.e_[0]}, n);
}

inline ProjectiveResidueMatrix power(const ProjectiveResidueMatrix& x, u64 e) {
    auto result = ProjectiveResidueMatrix::identity(x.level());
    auto base = x;
    while (e) {
        if (e & 1U) result = result * base;
        e >>= 1U;
        if (e) base = base * base;
    }
    return result;
}

/// Projection SL2(Z) -> Xi.
inline ProjectiveResidueMatrix reduce_mod(const IntegerMatrix& m, i64 level) {
    auto r = [level](i128 v) {
        i128 x = v % level;
        return static_cast<i64>(x < 0 ? x + level : x);
    };
    return {r(m.a()), r(m.b()), r(m.c()), r(m.d()), level};
}

/// Least m >= 1 with g^m = I in Xi.
inline i64 order_in_xi(const ProjectiveResidueMatrix& g) {
    i64 m = 1;
    auto x = g;
    while (!x.is_identity()) {
        x = x * g;
        ++m;
    }
    return m;
}

/// Images of S = [[0,-1],[1,0]] and T = [[1,1],[0,1]].
inline ProjectiveResidueMatrix generator_s(i64 level) { return {0, -1, 1, 0, level}; }
inline ProjectiveResidueMatrix generator_t(i64 level) { return {1, 1, 0, 1, level}; }

}  // namespace geosplit

template <>
struct std::hash<geosplit::ProjectiveResidueMatrix> {
    std::size_t operator()(const geosplit::ProjectiveResidueMatrix& m) const noexcept {
        return std::hash<geosplit::u64>{}(m.encode());
    }
};
