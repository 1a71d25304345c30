#pragma once

// Indefinite binary quadratic forms ax^2 + bxy + cy^2 of non-square
// discriminant, Gauss reduction and reduction cycles.

#include "geosplit/arith.hpp"
#include "geosplit/errors.hpp"
#include "geosplit/matrix.hpp"

#include <algorithm>
#include <compare>
#include <string>
#include <vector>

namespace geosplit {

struct QuadraticForm {
    i64 a = 0, b = 0, c = 0;

    i64 discriminant() const { return b * b - 4 * a * c; }
    auto operator<=>(const QuadraticForm&) const = default;
    std::string to_string() const {
        return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
    }
};

/// Reduced iff 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b. With
/// s = floor(sqrt(D)) and D non-square this is 1 <= b <= s,
/// 2|a| + b >= s + 1 and 2|a| - b <= s.
inline bool is_reduced(const QuadraticForm& f) {
    const i64 s = isqrt(f.discriminant());
    const i64 a2 = 2 * (f.a < 0 ? -f.a : f.a);
    return f.b >= 1 && f.b <= s && a2 + f.b >= s + 1 && a2 - f.b <= s;
}

namespace detail {

/// The representative r of x mod 2|c| used by the reduction step.
inline i64 reduction_normalize(i64 x, i64 c, i64 D, i64 s) {
    const i64 ac = c < 0 ? -c : c;
    const i64 m = 2 * ac;
    const i64 low = ac * ac > D ? -ac + 1 : s - m + 1;
    return low + mod(x - low, m);
}

}  // namespace detail

/// One reduction step (a, b, c) -> (c, b', (b'^2 - D) / 4c), a proper equivalence.
inline QuadraticForm rho(const QuadraticForm& f) {
    const i64 D = f.discriminant();
    if (f.c == 0) throw ConsistencyError("rho: form " + f.to_string() + " represents zero");
    const i64 b = detail::reduction_normalize(-f.b, f.c, D, isqrt(D));
    return {f.c, b, (b * b - D) / (4 * f.c)};
}

/// Applies rho until the form is reduced.
inline QuadraticForm reduce(QuadraticForm f) {
    for (int step = 0; step < 100000; ++step) {
        if (is_reduced(f)) return f;
        f = rho(f);
    }
    throw ConsistencyError("reduce: no reduced form reached from " + f.to_string());
}

/// All reduced forms of discriminant D, sorted.
inline std::vector<QuadraticForm> reduced_forms(i64 D) {
    const i64 s = isqrt(D);
    if (s * s == D) throw std::invalid_argument("reduced_forms: square discriminant");
    std::vector<QuadraticForm> out;
    for (i64 b = 1; b <= s; ++b) {
        if ((b - D) % 2 != 0) continue;
        const i64 ac = (b * b - D) / 4;
        for (i64 a = (s + 2 - b) / 2; 2 * a - b <= s; ++a) {
            if (a <= 0 || ac % a != 0) continue;
            out.push_back({a, b, ac / a});
            out.push_back({-a, b, -ac / a});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// The reduction cycle through a reduced form, starting at its least element.
inline std::vector<QuadraticForm> reduction_cycle(const QuadraticForm& f) {
    std::vector<QuadraticForm> cycle{f};
    for (QuadraticForm g = rho(f); g != f; g = rho(g)) {
        cycle.push_back(g);
        if (cycle.size() > 1000000) throw ConsistencyError("reduction_cycle: runaway at " + f.to_string());
    }
    std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
    return cycle;
}

/// Form attached to a hyperbolic matrix [[x,y],[z,w]]: (z, w - x, -y).
inline QuadraticForm form_of(const IntegerMatrix& m) {
    return {static_cast<i64>(m.c()), static_cast<i64>(m.d() - m.a()), static_cast<i64>(-m.b())};
}

/// Matrix of trace t attached to a form of discriminant t^2 - 4.
inline IntegerMatrix matrix_of(const QuadraticForm& f, i64 t) {
    if (f.discriminant() != t * t - 4) throw std::invalid_argument("matrix_of: discriminant is not t^2 - 4");
    return {(t - f.b) / 2, -f.c, f.a, (t + f.b) / 2};
}

}  // namespace geosplit
