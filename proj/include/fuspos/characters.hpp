#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "fuspos/group.hpp"

namespace fuspos {

using cdouble = std::complex<double>;

/// Complex character table of a finite group. Rows are irreps (row 0 is the
/// trivial irrep), columns are conjugacy classes in the group's class order.
///
/// Groups built as products of cyclic factors get the exact closed form
/// chi[i][j] = prod_f q_f^{i_f j_f}; everything else goes through the
/// class-sum eigenvector method (see character_table in characters.cpp).
struct CharacterTable {
    GroupPtr group;
    int n_irreps = 0;
    std::vector<cdouble> chi;     ///< n_irreps x n_classes, row-major
    std::vector<int> dims;        ///< d_r = chi[r][0]
    std::vector<int> class_sizes;

    cdouble at(int r, int k) const { return chi[static_cast<std::size_t>(r) * n_irreps + k]; }
};

using TablePtr = std::shared_ptr<const CharacterTable>;

TablePtr character_table(GroupPtr g);

/// Binary fusion multiplicities n[a][b][c] = multiplicity of irrep c in a (x) b.
struct FusionTensor {
    int n_irreps = 0;
    std::vector<int> n;  ///< a*R^2 + b*R + c

    int at(int a, int b, int c) const {
        const auto r = static_cast<std::size_t>(n_irreps);
        return n[(static_cast<std::size_t>(a) * r + b) * r + c];
    }
};

/// n[a][b][c] = (1/|G|) sum_k |C_k| chi_a(k) chi_b(k) conj(chi_c(k)), rounded.
/// Throws NumericalError if an entry is farther than 1e-6 from a nonnegative
/// integer. OpenMP-parallel over (a, b).
FusionTensor fusion_coefficients(const CharacterTable& ct);

/// n-ary multiplicity n_{a_1...a_n}^b by the direct character sum.
/// Same integrality/negativity checks as fusion_coefficients.
long fusion_multi(const CharacterTable& ct, std::span<const int> irreps, int b);

struct OrthogonalityReport {
    double row_residual = 0.0;  ///< max |(1/|G|) sum_k |C_k| chi_r conj(chi_s) - delta_rs|
    double col_residual = 0.0;  ///< max |sum_r chi_r(k) conj(chi_r(l)) - delta_kl |G|/|C_k||
};

OrthogonalityReport verify_orthogonality(const CharacterTable& ct);

namespace reference {
/// Serial reference for the fusion kernel; agrees exactly with the parallel one.
FusionTensor fusion_coefficients(const CharacterTable& ct);
}

}  // namespace fuspos
