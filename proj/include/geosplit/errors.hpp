#pragma once

#include <stdexcept>
#include <string>

namespace geosplit {

/// A configured size cap (|Xi|, coset index) would be exceeded.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two computations that must agree did not; always an implementation bug.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline constexpr std::size_t kDefaultCap = 10'000'000;

}  // namespace geosplit
