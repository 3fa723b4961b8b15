#include "fuspos/group.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>

#include "fuspos/errors.hpp"
#include "fuspos/parallel.hpp"
#include "fuspos/rng.hpp"

namespace fuspos {

namespace {

void check_order_bound(long long order, const char* what) {
    if (order > kMaxGroupOrder) {
        std::ostringstream os;
        os << what << ": order " << order << " exceeds the dense-table bound " << kMaxGroupOrder;
        throw InputError(os.str());
    }
}

// Derives inv, classes, class_of, inverse_class from a complete table.
// Assumes identity at index 0 and associativity already hold.
void finalize(FiniteGroup& g) {
    const int n = g.order;

    g.inv.assign(n, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (g.at(a, b) == 0) {
                if (g.at(b, a) != 0) {
                    throw InputError("non-invertible element " + std::to_string(a) +
                                     ": right inverse " + std::to_string(b) +
                                     " is not a left inverse");
                }
                g.inv[a] = b;
                break;
            }
        }
        if (g.inv[a] < 0) {
            throw InputError("non-invertible element " + std::to_string(a) +
                             ": row contains no identity");
        }
    }

    // Conjugacy classes by orbit enumeration.
    std::vector<char> seen(n, 0);
    std::vector<char> in_orbit(n, 0);
    std::vector<std::vector<int>> classes;
    for (int a = 0; a < n; ++a) {
        if (seen[a]) continue;
        std::vector<int> orbit;
        for (int x = 0; x < n; ++x) {
            int c = g.at(g.at(x, a), g.inv[x]);
            if (!in_orbit[c]) {
                in_orbit[c] = 1;
                orbit.push_back(c);
            }
        }
        std::sort(orbit.begin(), orbit.end());
        for (int e : orbit) {
            seen[e] = 1;
            in_orbit[e] = 0;
        }
        classes.push_back(std::move(orbit));
    }
    std::sort(classes.begin(), classes.end(),
              [](const std::vector<int>& x, const std::vector<int>& y) {
                  if (x.size() != y.size()) return x.size() < y.size();
                  return x.front() < y.front();
              });

    g.classes = std::move(classes);
    const int k = g.n_classes();
    g.class_of.assign(n, -1);
    for (int c = 0; c < k; ++c)
        for (int e : g.classes[c]) g.class_of[e] = c;
    g.inverse_class.resize(k);
    for (int c = 0; c < k; ++c) g.inverse_class[c] = g.class_of[g.inv[g.classes[c].front()]];
}

AssocResult assoc_scan_row(const FiniteGroup& g, int a) {
    const int n = g.order;
    for (int b = 0; b < n; ++b) {
        const int ab = g.at(a, b);
        for (int c = 0; c < n; ++c) {
            if (g.at(ab, c) != g.at(a, g.at(b, c))) return {false, a, b, c};
        }
    }
    return {};
}

// Permutation helpers for S_n.

int lehmer_rank(const int* p, int n, const int* factorial) {
    int rank = 0;
    for (int i = 0; i < n; ++i) {
        int smaller = 0;
        for (int j = i + 1; j < n; ++j)
            if (p[j] < p[i]) ++smaller;
        rank += smaller * factorial[n - 1 - i];
    }
    return rank;
}

}  // namespace

AssocResult reference::associativity_exhaustive(const FiniteGroup& g) {
    for (int a = 0; a < g.order; ++a) {
        AssocResult r = assoc_scan_row(g, a);
        if (!r.ok) return r;
    }
    return {};
}

AssocResult associativity_exhaustive(const FiniteGroup& g) {
    const int n = g.order;
    std::vector<AssocResult> per_row(n);
    const int nt = parallel::effective_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (int a = 0; a < n; ++a) per_row[a] = assoc_scan_row(g, a);
    for (int a = 0; a < n; ++a)
        if (!per_row[a].ok) return per_row[a];
    return {};
}

AssocResult associativity_sampled(const FiniteGroup& g, long samples, std::uint64_t seed) {
    const auto n = static_cast<std::uint64_t>(g.order);
    std::uint64_t state = seed;
    for (long i = 0; i < samples; ++i) {
        int a = static_cast<int>(splitmix64(state) % n);
        int b = static_cast<int>(splitmix64(state) % n);
        int c = static_cast<int>(splitmix64(state) % n);
        if (g.at(g.at(a, b), c) != g.at(a, g.at(b, c))) return {false, a, b, c};
    }
    return {};
}

FiniteGroup build_cyclic(int n) {
    if (n < 1) throw InputError("build_cyclic: n must be >= 1");
    check_order_bound(n, "build_cyclic");
    FiniteGroup g;
    g.order = n;
    g.mul.resize(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) g.mul[static_cast<std::size_t>(a) * n + b] = (a + b) % n;
    g.cyclic_factors = {n};
    finalize(g);
    return g;
}

FiniteGroup build_dihedral(int n) {
    if (n < 3) throw InputError("build_dihedral: n must be >= 3");
    check_order_bound(2LL * n, "build_dihedral");
    const int order = 2 * n;
    FiniteGroup g;
    g.order = order;
    g.mul.resize(static_cast<std::size_t>(order) * order);
    // element f*n + k represents s^f r^k; s r^k s = r^{-k}
    for (int f = 0; f < 2; ++f) {
        for (int k = 0; k < n; ++k) {
            for (int h = 0; h < 2; ++h) {
                for (int m = 0; m < n; ++m) {
                    int rot = h == 0 ? (k + m) % n : ((m - k) % n + n) % n;
                    int a = f * n + k, b = h * n + m;
                    g.mul[static_cast<std::size_t>(a) * order + b] = ((f + h) % 2) * n + rot;
                }
            }
        }
    }
    finalize(g);
    return g;
}

FiniteGroup build_symmetric(int n) {
    if (n < 1 || n > 7) throw InputError("build_symmetric: n must be in [1, 7]");
    int factorial[8] = {1, 1, 2, 6, 24, 120, 720, 5040};
    const int order = factorial[n];

    std::vector<int> perms(static_cast<std::size_t>(order) * n);
    {
        std::vector<int> p(n);
        for (int i = 0; i < n; ++i) p[i] = i;
        for (int r = 0; r < order; ++r) {
            std::copy(p.begin(), p.end(), perms.begin() + static_cast<std::size_t>(r) * n);
            std::next_permutation(p.begin(), p.end());
        }
    }

    FiniteGroup g;
    g.order = order;
    g.mul.resize(static_cast<std::size_t>(order) * order);
    const int nt = parallel::effective_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (int a = 0; a < order; ++a) {
        int prod[7];
        const int* pa = perms.data() + static_cast<std::size_t>(a) * n;
        for (int b = 0; b < order; ++b) {
            const int* pb = perms.data() + static_cast<std::size_t>(b) * n;
            for (int x = 0; x < n; ++x) prod[x] = pa[pb[x]];
            g.mul[static_cast<std::size_t>(a) * order + b] = lehmer_rank(prod, n, factorial);
        }
    }
    if (n <= 2) g.cyclic_factors = {order};  // S_1, S_2 are cyclic
    finalize(g);
    return g;
}

FiniteGroup build_product(const FiniteGroup& a, const FiniteGroup& b) {
    check_order_bound(static_cast<long long>(a.order) * b.order, "build_product");
    const int order = a.order * b.order;
    FiniteGroup g;
    g.order = order;
    g.mul.resize(static_cast<std::size_t>(order) * order);
    for (int a1 = 0; a1 < a.order; ++a1)
        for (int b1 = 0; b1 < b.order; ++b1)
            for (int a2 = 0; a2 < a.order; ++a2)
                for (int b2 = 0; b2 < b.order; ++b2) {
                    int x = a1 * b.order + b1, y = a2 * b.order + b2;
                    g.mul[static_cast<std::size_t>(x) * order + y] =
                        a.at(a1, a2) * b.order + b.at(b1, b2);
                }
    if (!a.cyclic_factors.empty() && !b.cyclic_factors.empty()) {
        g.cyclic_factors = a.cyclic_factors;
        g.cyclic_factors.insert(g.cyclic_factors.end(), b.cyclic_factors.begin(),
                                b.cyclic_factors.end());
    }
    finalize(g);
    return g;
}

FiniteGroup from_table(const std::vector<std::vector<int>>& mul) {
    const int n = static_cast<int>(mul.size());
    if (n == 0) throw InputError("from_table: empty table");
    check_order_bound(n, "from_table");
    for (int a = 0; a < n; ++a) {
        if (static_cast<int>(mul[a].size()) != n)
            throw InputError("from_table: table is not square (row " + std::to_string(a) +
                             " has " + std::to_string(mul[a].size()) + " entries, expected " +
                             std::to_string(n) + ")");
        for (int b = 0; b < n; ++b)
            if (mul[a][b] < 0 || mul[a][b] >= n)
                throw InputError("from_table: entry mul[" + std::to_string(a) + "][" +
                                 std::to_string(b) + "] = " + std::to_string(mul[a][b]) +
                                 " out of range");
    }

    FiniteGroup g;
    g.order = n;
    g.mul.resize(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) g.mul[static_cast<std::size_t>(a) * n + b] = mul[a][b];

    for (int a = 0; a < n; ++a)
        if (g.at(0, a) != a || g.at(a, 0) != a)
            throw InputError("from_table: index 0 is not a two-sided identity (fails at element " +
                             std::to_string(a) + ")");

    // Exhaustive associativity up to 256 elements, sampled above that.
    AssocResult ar = n <= 256 ? associativity_exhaustive(g)
                              : associativity_sampled(g, 1'000'000,
                                                      0x5ca1ab1eull ^ static_cast<std::uint64_t>(n));
    if (!ar.ok) {
        std::ostringstream os;
        os << "from_table: associativity fails at witness triple (" << ar.a << ", " << ar.b
           << ", " << ar.c << ")";
        throw InputError(os.str());
    }

    finalize(g);
    return g;
}

}  // namespace fuspos
