#pragma once

#include <stdexcept>
#include <string>

namespace pathvar {

/// Invalid argument or parameter outside the documented domain.
class domain_error : public std::invalid_argument {
public:
    explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A mathematical precondition fails (e.g. integrand and integrator share a
/// discontinuity time, so the Riemann-Stieltjes integral need not exist).
class precondition_error : public std::runtime_error {
public:
    explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

/// An iteration or refinement budget ran out before the requested tolerance
/// was met. Subclasses carry the best result obtained so far.
class budget_error : public std::runtime_error {
public:
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pathvar
