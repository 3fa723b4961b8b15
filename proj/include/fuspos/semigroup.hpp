#pragma once

#include <span>
#include <vector>

#include "fuspos/characters.hpp"

namespace fuspos {

/// A nonnegative class function l on G with l(e) = 0 and l(g) = l(g^{-1}),
/// stored per conjugacy class. Rates are compared exactly: classes get
/// merged into one exponential term only when their lengths are bitwise
/// equal, never by epsilon.
struct LengthFunction {
    GroupPtr group;
    std::vector<double> class_lengths;
    std::vector<double> distinct_rates;  ///< sorted ascending, exact dedup
};

/// Validates per-element values: constant on conjugacy classes (within
/// 1e-12), l(e) = 0, l(g) = l(g^{-1}), all values finite and >= 0.
LengthFunction validate_length_per_element(GroupPtr g, std::span<const double> values);

/// Same checks for values already given per conjugacy class.
LengthFunction validate_length_per_class(GroupPtr g, std::span<const double> values);

/// t -> sum_k coeff_k * exp(-rate_k * t), rates strictly increasing.
struct ExpSum {
    struct Term {
        double coeff = 0.0;
        double rate = 0.0;
        bool operator==(const Term&) const = default;
    };
    std::vector<Term> terms;
    bool operator==(const ExpSum&) const = default;
};

/// Evaluate at t >= 0; rejects negative or non-finite t.
double eval(const ExpSum& s, double t);

/// m-th derivative at t = 0, computed exactly from the stored terms:
/// sum_k coeff_k * (-rate_k)^m. Requires 0 <= m <= 8.
double derivative_at_zero(const ExpSum& s, int m);

/// The coefficients p_r(t) of the diagonal semigroup P_t written in the
/// character-multiplier basis: P_t = sum_r p_r(t) sigma_r. Every p_r carries
/// one term per distinct rate of the length function (coefficients may be 0).
struct Decomposition {
    TablePtr table;
    std::vector<ExpSum> p;       ///< per irrep
    std::vector<double> rates;   ///< shared rate grid (the length's distinct rates)
};

/// p_r(t) = (1/|G|) sum_k |C_k| conj(chi_r(k)) exp(-t l_k). Classes with
/// equal length merge into one term. Throws NumericalError if a summed
/// coefficient keeps an imaginary part >= 1e-9.
Decomposition decompose(TablePtr ct, const LengthFunction& ell);

}  // namespace fuspos
