#pragma once

#include <stdexcept>
#include <string>

namespace fptqv {

// Error taxonomy mirrors the CLI exit contract: validation-type failures
// map to exit 2, assumption failures to exit 3, non-convergence to exit 4.

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside a function's mathematical domain (negative time, p >= 1, ...).
class domain_error : public error {
public:
    using error::error;
};

/// Structurally invalid input: unsorted grid, bad weights, malformed file.
class validation_error : public error {
public:
    using error::error;
};

/// Input so close to a boundary of the valid range that the result would be
/// numerically meaningless (e.g. cdf values within 1e-14 of 1). Raised instead
/// of silently returning huge or infinite values.
class saturation_error : public error {
public:
    using error::error;
};

/// A solvability assumption of the inverse problem fails (cdf reaches 1 in
/// finite time, variance not locally integrable at the support onset).
class assumption_error : public error {
public:
    using error::error;
};

/// An iteration or series failed to converge within its budget.
class convergence_error : public error {
public:
    using error::error;
};

} // namespace fptqv
