#pragma once

#include <stdexcept>
#include <string>

namespace hawkes {

// Configuration that cannot be run at all (bad parameters, missing fields).
// The CLI maps this to exit code 2.
class config_error : public std::invalid_argument {
public:
    explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

// A computation that started but failed to reach its accuracy/stability
// contract (non-convergence, NaN, unstable kernel where a stable one is
// required).  The CLI maps this to exit code 3.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Branching ratio >= 1 where a subcritical kernel is required.
class criticality_error : public numerical_error {
public:
    explicit criticality_error(const std::string& what) : numerical_error(what) {}
};

// Evaluation outside the representable grid horizon.
class horizon_error : public numerical_error {
public:
    explicit horizon_error(const std::string& what) : numerical_error(what) {}
};

}  // namespace hawkes
