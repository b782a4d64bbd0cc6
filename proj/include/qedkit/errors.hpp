#ifndef QEDKIT_ERRORS_HPP
#define QEDKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qedkit {

// Thrown when input violates a precondition (bad parameter, wrong range).
struct domain_error : std::domain_error {
    explicit domain_error(const std::string& msg) : std::domain_error(msg) {}
};

// Thrown when a model is asked to do something outside its stability region.
struct instability_error : std::runtime_error {
    explicit instability_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a method's applicability test fails (e.g. series outside its
// convergence strip, contraction bound violated).
struct method_inapplicable : std::runtime_error {
    explicit method_inapplicable(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when an iteration fails to converge within its budget.
struct convergence_error : std::runtime_error {
    explicit convergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a numerical result fails an internal consistency check
// (quadrature failure, imaginary residue, route disagreement).
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace qedkit

#endif
