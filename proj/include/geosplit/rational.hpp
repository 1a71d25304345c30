#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace geosplit {

/// Exact rational, always normalized (den > 0, gcd(num, den) = 1).
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// "num/den" with den always printed, e.g. "1/1", "16/75".
inline std::string to_string(const Rational& q) {
    return boost::multiprecision::numerator(q).str() + "/" +
           boost::multiprecision::denominator(q).str();
}

inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) throw std::invalid_argument("rational without '/': " + s);
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + s);
    return Rational(num, den);
}

/// Exact value of a decimal literal ("7", "6.86", "1e6", "2.5E-3") or "num/den".
inline Rational parse_number(const std::string& s) {
    if (s.find('/') != std::string::npos) return parse_rational(s);
    std::size_t i = 0;
    bool negative = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) negative = s[i++] == '-';
    std::string digits;
    long exponent = 0;
    bool seen_digit = false, seen_point = false;
    for (; i < s.size() && s[i] != 'e' && s[i] != 'E'; ++i) {
        if (s[i] == '.' && !seen_point) {
            seen_point = true;
        } else if (s[i] >= '0' && s[i] <= '9') {
            digits += s[i];
            seen_digit = true;
            if (seen_point) --exponent;
        } else {
            throw std::invalid_argument("not a number: " + s);
        }
    }
    if (!seen_digit) throw std::invalid_argument("not a number: " + s);
    if (i < s.size()) {
        const std::string e = s.substr(i + 1);
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(e, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("not a number: " + s);
        }
        if (used != e.size() || v > 4000 || v < -4000) throw std::invalid_argument("not a number: " + s);
        exponent += v;
    }
    BigInt num(digits);
    if (negative) num = -num;
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
    return exponent < 0 ? Rational(num, scale) : Rational(num * scale);
}

}  // namespace geosplit
