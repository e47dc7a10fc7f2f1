#pragma once

#include <stdexcept>
#include <string>

namespace corners {

// Error taxonomy shared by the whole library.  Every failure mode that a
// caller can recover from gets its own type; anything else is a plain
// logic_error and means the library itself is broken.

struct budget_exceeded : std::runtime_error {
    explicit budget_exceeded(const std::string& what) : std::runtime_error(what) {}
};

struct precondition_violated : std::runtime_error {
    explicit precondition_violated(const std::string& what) : std::runtime_error(what) {}
};

struct not_found : std::runtime_error {
    explicit not_found(const std::string& what) : std::runtime_error(what) {}
};

struct modulus_too_small : std::runtime_error {
    explicit modulus_too_small(const std::string& what) : std::runtime_error(what) {}
};

struct not_nonuniform : std::runtime_error {
    explicit not_nonuniform(const std::string& what) : std::runtime_error(what) {}
};

struct search_budget_exceeded : std::runtime_error {
    explicit search_budget_exceeded(const std::string& what) : std::runtime_error(what) {}
};

struct no_large_coefficient : std::runtime_error {
    explicit no_large_coefficient(const std::string& what) : std::runtime_error(what) {}
};

struct infeasible_profile : std::runtime_error {
    explicit infeasible_profile(const std::string& what) : std::runtime_error(what) {}
};

struct no_increment_found : std::runtime_error {
    explicit no_increment_found(const std::string& what) : std::runtime_error(what) {}
};

struct step_budget_exceeded : std::runtime_error {
    explicit step_budget_exceeded(const std::string& what) : std::runtime_error(what) {}
};

struct bad_input : std::runtime_error {
    explicit bad_input(const std::string& what) : std::runtime_error(what) {}
};

} // namespace corners
