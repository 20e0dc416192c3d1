#pragma once

#include <stdexcept>
#include <string>

namespace uqline {

// data-dependent failures: malformed input lines, invalid records, degenerate
// datasets. distinct from std::invalid_argument, which is reserved for caller
// errors such as out-of-range parameters or unknown enum names.
struct data_error : std::runtime_error {
    explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

// files or fits that do not line up with each other: unsupported model version,
// measure or degree mismatch, misaligned dataset keys between reports.
struct schema_error : std::runtime_error {
    explicit schema_error(const std::string& what) : std::runtime_error(what) {}
};

struct missing_input_error : std::runtime_error {
    explicit missing_input_error(const std::string& path)
        : std::runtime_error("input file not found: " + path) {}
};

}  // namespace uqline
