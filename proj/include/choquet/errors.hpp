#ifndef CHOQUET_ERRORS_HPP
#define CHOQUET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace choquet {

// Subset refers to attribute indices outside the measure's ground set.
struct InvalidSubsetError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Ground set too large for an exhaustive (2^m) operation.
struct CapacityError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Vector lengths do not match the measure's ground size.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Parameter outside its mathematical domain (alpha, bound D, negative features).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Dependency measures need at least two decision classes.
struct DegenerateDecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Not enough instances to fit (e.g. covariance on n < 2).
struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace choquet

#endif
