#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace comem {

/// Malformed or inconsistent input data (bad records, unknown ids, broken
/// artifact files).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative solver exhausted its iteration budget. Carries the last
/// iterate so callers can inspect how far the solve got.
class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string &what, std::vector<double> lastIterate)
        : std::runtime_error(what), lastIterate_(std::move(lastIterate)) {}

    const std::vector<double> &lastIterate() const noexcept { return lastIterate_; }

private:
    std::vector<double> lastIterate_;
};

} // namespace comem
