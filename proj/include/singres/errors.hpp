#pragma once

#include <stdexcept>
#include <string>

namespace singres {

/// Base class of every library error. Input errors (bad arguments,
/// parse failures) and computation errors (a pipeline that cannot
/// proceed over the rationals) both derive from it; the CLI maps the
/// former to exit code 2 and the latter to exit code 3.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct input_error : error {
    explicit input_error(const std::string& msg) : error(msg) {}
};

struct computation_error : error {
    explicit computation_error(const std::string& msg) : error(msg) {}
};

// ---- exact arithmetic ----
struct non_coprime_error : input_error {
    explicit non_coprime_error(const std::string& msg) : input_error(msg) {}
};
struct range_error : input_error {
    explicit range_error(const std::string& msg) : input_error(msg) {}
};
struct not_invertible_error : input_error {
    explicit not_invertible_error(const std::string& msg) : input_error(msg) {}
};

// ---- polynomials ----
struct syntax_error : input_error {
    size_t position;
    syntax_error(const std::string& msg, size_t pos)
        : input_error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};
struct unknown_variable_error : input_error {
    explicit unknown_variable_error(const std::string& msg) : input_error(msg) {}
};
struct not_unitary_error : input_error {
    explicit not_unitary_error(const std::string& msg) : input_error(msg) {}
};
struct zero_polynomial_error : input_error {
    explicit zero_polynomial_error(const std::string& msg) : input_error(msg) {}
};

// ---- Puiseux expansion / curve resolution ----
struct irrational_coefficient_error : computation_error {
    /// Characteristic polynomial whose root would leave the rationals,
    /// in the canonical text form of the poly module.
    std::string characteristic;
    irrational_coefficient_error(const std::string& msg, std::string char_poly)
        : computation_error(msg + ": " + char_poly), characteristic(std::move(char_poly)) {}
};
struct not_squarefree_error : input_error {
    explicit not_squarefree_error(const std::string& msg) : input_error(msg) {}
};
struct truncation_insufficient_error : computation_error {
    explicit truncation_insufficient_error(const std::string& msg) : computation_error(msg) {}
};
struct irrational_center_error : computation_error {
    /// Minimal polynomial of the offending center.
    std::string minimal_polynomial;
    irrational_center_error(const std::string& msg, std::string min_poly)
        : computation_error(msg + ": " + min_poly), minimal_polynomial(std::move(min_poly)) {}
};
struct not_reduced_error : input_error {
    explicit not_reduced_error(const std::string& msg) : input_error(msg) {}
};
struct inconsistent_input_error : input_error {
    explicit inconsistent_input_error(const std::string& msg) : input_error(msg) {}
};

// ---- graphs ----
struct unknown_vertex_error : input_error {
    explicit unknown_vertex_error(const std::string& msg) : input_error(msg) {}
};
struct not_symmetric_error : input_error {
    explicit not_symmetric_error(const std::string& msg) : input_error(msg) {}
};
struct missing_decoration_error : input_error {
    explicit missing_decoration_error(const std::string& msg) : input_error(msg) {}
};
struct unsupported_contraction_error : computation_error {
    explicit unsupported_contraction_error(const std::string& msg) : computation_error(msg) {}
};

// ---- Jung pipeline ----
struct unsupported_covering_error : computation_error {
    explicit unsupported_covering_error(const std::string& msg) : computation_error(msg) {}
};
struct internal_inconsistency_error : error {
    explicit internal_inconsistency_error(const std::string& msg) : error(msg) {}
};

} // namespace singres
