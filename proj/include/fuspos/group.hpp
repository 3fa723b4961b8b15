#pragma once

#include <memory>
#include <vector>

namespace fuspos {

/// A finite group as a dense Cayley table with conjugacy-class structure.
///
/// Element 0 is always the identity. Conjugacy classes are ordered by
/// (class size, smallest member index), so class 0 is {e}. Immutable after
/// construction; unrestricted concurrent reads are safe.
struct FiniteGroup {
    int order = 0;
    std::vector<int> mul;                    ///< order x order, row-major: mul[a*order+b] = a*b
    std::vector<int> inv;                    ///< inv[a] = a^{-1}
    std::vector<std::vector<int>> classes;   ///< conjugacy classes, each sorted
    std::vector<int> class_of;               ///< element -> class index
    std::vector<int> inverse_class;          ///< class k -> class holding the inverses of k
    std::vector<int> cyclic_factors;         ///< nonempty iff built as a product of cyclic groups

    int at(int a, int b) const { return mul[static_cast<std::size_t>(a) * order + b]; }
    int n_classes() const { return static_cast<int>(classes.size()); }
};

/// Largest order a dense Cayley table is allowed to reach (|S_7| = 5040).
inline constexpr int kMaxGroupOrder = 5040;

using GroupPtr = std::shared_ptr<const FiniteGroup>;

inline GroupPtr share(FiniteGroup g) { return std::make_shared<const FiniteGroup>(std::move(g)); }

/// Z_n with mul[a][b] = (a+b) mod n. Rejects n < 1.
FiniteGroup build_cyclic(int n);

/// Dihedral group D_n of order 2n: indices 0..n-1 are rotations r^k,
/// indices n..2n-1 are reflections s*r^k. Rejects n < 3.
FiniteGroup build_dihedral(int n);

/// Symmetric group S_n, elements enumerated as permutations in lexicographic
/// rank order, composition (a*b)(x) = a(b(x)). Rejects n outside [1, 7].
FiniteGroup build_symmetric(int n);

/// Direct product with componentwise multiplication; index = a*|h| + b.
FiniteGroup build_product(const FiniteGroup& g, const FiniteGroup& h);

/// Validates all group axioms on the table (identity at index 0,
/// associativity, invertibility) and derives the class structure.
/// Throws InputError naming the specific failure, with a witness triple
/// for associativity.
FiniteGroup from_table(const std::vector<std::vector<int>>& mul);

/// Result of an associativity scan; on failure (a, b, c) is the first
/// witness triple in lexicographic order.
struct AssocResult {
    bool ok = true;
    int a = -1, b = -1, c = -1;
};

/// Exhaustive O(|G|^3) associativity scan, OpenMP-parallel over the first index.
AssocResult associativity_exhaustive(const FiniteGroup& g);

/// Seeded random-triple associativity scan (used above the exhaustive cutoff).
AssocResult associativity_sampled(const FiniteGroup& g, long samples, std::uint64_t seed);

namespace reference {
/// Serial reference for the exhaustive scan; must agree with the parallel kernel.
AssocResult associativity_exhaustive(const FiniteGroup& g);
}

}  // namespace fuspos
