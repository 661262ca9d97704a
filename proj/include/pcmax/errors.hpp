#pragma once

#include <stdexcept>
#include <string>

namespace pcmax {

/// Bad user-facing input: malformed files, invalid flag combinations,
/// precondition violations on public entry points.
class InvalidInputError : public std::runtime_error {
public:
    explicit InvalidInputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Data that is syntactically fine but statistically unusable
/// (constant columns, singular conditioning sets, rank deficiency).
class DegenerateDataError : public std::runtime_error {
public:
    explicit DegenerateDataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A broken internal invariant, e.g. a missing sepset entry for an
/// unshielded triple. Indicates a bug, not bad input.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace pcmax
