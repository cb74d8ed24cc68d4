#pragma once

#include <stdexcept>
#include <string>

namespace malab {

// Evaluation outside the mathematical domain of an operation
// (log of a nonpositive value, division by a zero jet, singular Hessian, ...).
struct domain_error : std::domain_error {
    explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// A constructor or solver precondition was violated (parameter outside the
// admissible range of the family being built).  Maps to CLI exit code 2.
struct precondition_error : std::invalid_argument {
    explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

// An iterative method failed to converge or produced an inconsistent state.
// Maps to CLI exit code 3.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace malab
