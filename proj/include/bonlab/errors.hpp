#pragma once

#include <stdexcept>
#include <string>

namespace bonlab {

// Invalid inputs to constructors (bad masses, unsorted ids, bad parameters).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Absolute-continuity violation: target puts mass where the base has none.
class domination_error : public std::runtime_error {
public:
    explicit domination_error(const std::string& what) : std::runtime_error(what) {}
};

// An outcome id is missing from a distribution support or reward table.
class unknown_outcome_error : public std::runtime_error {
public:
    explicit unknown_outcome_error(const std::string& what) : std::runtime_error(what) {}
};

// Selector/config strings or job specs that do not parse or do not apply.
class configuration_error : public std::runtime_error {
public:
    explicit configuration_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure (non-convergence, infeasible bracket) with context.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace bonlab
