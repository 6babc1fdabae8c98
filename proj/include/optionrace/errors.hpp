// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace optionrace {

/// Input outside the mathematical domain of an operation (negative time,
/// probability of one where ruin must be possible, and so on).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A root-finder could not bracket or converge.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite state encountered while stepping a path.
class SimulationError : public std::runtime_error {
public:
    SimulationError(const std::string& what, std::size_t path_index, std::size_t step)
        : std::runtime_error(what + " (path " + std::to_string(path_index) + ", step " +
                             std::to_string(step) + ")"),
          path_index_(path_index),
          step_(step) {}

    std::size_t path_index() const noexcept { return path_index_; }
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t path_index_;
    std::size_t step_;
};

/// Malformed configuration file, unknown key or invalid value.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace optionrace
