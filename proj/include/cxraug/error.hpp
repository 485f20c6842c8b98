/**
 * @file error.hpp
 * @brief Exception types shared by every cxraug module
 */
#pragma once

#include <stdexcept>
#include <string>

namespace cxraug {

/// Bad caller input: out-of-range configuration, mismatched shapes.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed or unreadable data: image files, manifests, feature files, results tables.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cxraug
