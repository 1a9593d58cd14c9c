#pragma once

#include <stdexcept>
#include <string>

namespace rldp {

// Input outside an operation's domain (bad digit, point outside [0,1), ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An enumeration would exceed the configured word budget.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Moebius action hit a pole.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Root search found no sign change in its scan range.
class SearchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateInputError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Bad command line or configuration value.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace rldp
