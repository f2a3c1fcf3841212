#pragma once

#include <stdexcept>
#include <string>

namespace ldls {

/// Raised for malformed input data: bad files, inconsistent sizes, invalid
/// parameters. The CLI maps this to exit code 1.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ldls
