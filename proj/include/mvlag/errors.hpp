#pragma once

#include <stdexcept>
#include <string>

namespace mvlag {

// A parameter lies outside the stated domain of an operation. The message
// names the violated constraint.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A vanishing (c)_s denominator is reachable by a hypergeometric sum.
class PoleError : public std::domain_error {
public:
    explicit PoleError(const std::string& what) : std::domain_error(what) {}
};

// An exact computation was asked for beyond its configured size cap.
class CapExceededError : public std::length_error {
public:
    explicit CapExceededError(const std::string& what) : std::length_error(what) {}
};

// An infinite series was requested without a truncation degree.
class MissingTruncationError : public std::invalid_argument {
public:
    explicit MissingTruncationError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace mvlag
