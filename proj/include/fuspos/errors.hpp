#pragma once

#include <stdexcept>
#include <string>

namespace fuspos {

/// Invalid user-supplied data: malformed tables, bad length functions,
/// unparseable documents. Maps to CLI exit code 4.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical invariant that should hold for valid inputs failed:
/// non-integral fusion entry, eigensolver non-convergence, imaginary
/// residue above tolerance. Maps to CLI exit code 5.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fuspos
