#include "fuspos/characters.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fuspos/errors.hpp"
#include "fuspos/parallel.hpp"
#include "fuspos/rng.hpp"

namespace fuspos {

namespace {

constexpr double kIntegralityTol = 1e-6;
constexpr double kOrthoTol = 1e-9;

// Values that are exact at the special angles (multiples of 30 and 45
// degrees) come out of libm a few ulp off; snapping them keeps cyclic
// tables exactly conjugate-symmetric and their fusion sums exact.
double snap(double x) {
    for (double v : {-1.0, -0.5, 0.0, 0.5, 1.0})
        if (std::abs(x - v) < 1e-15) return v;
    return x;
}

// q^m for m = 0..n-1 with q = exp(2*pi*i/n), built so that
// roots[n-m] == conj(roots[m]) holds bitwise.
std::vector<cdouble> unit_roots(int n) {
    std::vector<cdouble> roots(n);
    for (int m = 0; m <= n / 2; ++m) {
        double angle = 2.0 * std::numbers::pi * m / n;
        roots[m] = {snap(std::cos(angle)), snap(std::sin(angle))};
    }
    for (int m = n / 2 + 1; m < n; ++m) roots[m] = std::conj(roots[n - m]);
    return roots;
}

// Exact character table for a product of cyclic groups. Irrep i and class j
// share the same mixed-radix index decomposition as the element index.
CharacterTable cyclic_product_table(GroupPtr g) {
    const auto& factors = g->cyclic_factors;
    const int order = g->order;

    std::vector<std::vector<cdouble>> roots;
    roots.reserve(factors.size());
    for (int n : factors) roots.push_back(unit_roots(n));

    CharacterTable ct;
    ct.group = std::move(g);
    ct.n_irreps = order;
    ct.chi.resize(static_cast<std::size_t>(order) * order);
    ct.dims.assign(order, 1);
    ct.class_sizes.assign(order, 1);

    std::vector<int> idig(factors.size()), jdig(factors.size());
    auto digits = [&](int x, std::vector<int>& out) {
        for (std::size_t f = factors.size(); f-- > 0;) {
            out[f] = x % factors[f];
            x /= factors[f];
        }
    };
    for (int i = 0; i < order; ++i) {
        digits(i, idig);
        for (int j = 0; j < order; ++j) {
            digits(j, jdig);
            cdouble v{1.0, 0.0};
            for (std::size_t f = 0; f < factors.size(); ++f)
                v *= roots[f][(idig[f] * jdig[f]) % factors[f]];
            ct.chi[static_cast<std::size_t>(i) * order + j] = v;
        }
    }
    return ct;
}

struct TableCheck {
    bool ok = false;
    std::string why;
};

// Validates dims/orthogonality/conjugation on a candidate table whose rows
// are still in eigensolver order; fills ct.dims on success.
TableCheck validate_candidate(CharacterTable& ct) {
    const FiniteGroup& g = *ct.group;
    const int order = g.order;
    const int k = ct.n_irreps;

    ct.dims.assign(k, 0);
    long long dim2 = 0;
    for (int r = 0; r < k; ++r) {
        double d = ct.at(r, 0).real();
        double rd = std::round(d);
        if (std::abs(ct.at(r, 0).imag()) > kIntegralityTol ||
            std::abs(d - rd) > kIntegralityTol || rd < 1.0)
            return {false, "irrep dimension " + std::to_string(d) + " is not a positive integer"};
        ct.dims[r] = static_cast<int>(rd);
        dim2 += ct.dims[r] * ct.dims[r];
    }
    if (dim2 != order) return {false, "sum of squared dimensions != group order"};

    for (int r = 0; r < k; ++r) {
        for (int s = 0; s < k; ++s) {
            cdouble acc{0.0, 0.0};
            for (int c = 0; c < k; ++c)
                acc += static_cast<double>(ct.class_sizes[c]) * ct.at(r, c) *
                       std::conj(ct.at(s, c));
            acc /= static_cast<double>(order);
            if (std::abs(acc - (r == s ? 1.0 : 0.0)) > kOrthoTol)
                return {false, "row orthogonality residual above tolerance"};
        }
        for (int c = 0; c < k; ++c)
            if (std::abs(ct.at(r, g.inverse_class[c]) - std::conj(ct.at(r, c))) > kOrthoTol)
                return {false, "conjugation symmetry residual above tolerance"};
    }
    return {true, {}};
}

// Class-sum eigenvector method: the common right eigenvectors of the
// structure-constant matrices A_j (A_j)_{k,l} = a_{jk}^l are the vectors of
// central characters w_r(l) = |C_l| chi_r(l) / d_r. A random real
// combination of the A_j separates them generically.
CharacterTable class_sum_table(GroupPtr gp) {
    const FiniteGroup& g = *gp;
    const int order = g.order;
    const int k = g.n_classes();

    CharacterTable ct;
    ct.group = gp;
    ct.n_irreps = k;
    ct.class_sizes.resize(k);
    for (int c = 0; c < k; ++c) ct.class_sizes[c] = static_cast<int>(g.classes[c].size());

    if (k == 1) {
        ct.chi = {cdouble{1.0, 0.0}};
        ct.dims = {1};
        return ct;
    }

    // a_{jk}^l = #{x in C_j : x^{-1} z_l in C_k} for the class representative z_l.
    std::vector<Eigen::MatrixXd> a(k, Eigen::MatrixXd::Zero(k, k));
    for (int l = 0; l < k; ++l) {
        const int z = g.classes[l].front();
        for (int x = 0; x < order; ++x) {
            int j = g.class_of[x];
            int kk = g.class_of[g.at(g.inv[x], z)];
            a[j](kk, l) += 1.0;
        }
    }

    std::uint64_t state = 0xd1c7a7ab1e5eedull ^ static_cast<std::uint64_t>(order);
    std::string last_error = "eigenvalue separation below 1e-8";
    for (int attempt = 0; attempt < 20; ++attempt) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
        for (int j = 0; j < k; ++j) m += (2.0 * u01(splitmix64(state)) - 1.0) * a[j];

        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m.cast<cdouble>());
        if (solver.info() != Eigen::Success) {
            last_error = "eigensolver did not converge";
            continue;
        }

        const auto& eigenvalues = solver.eigenvalues();
        double min_sep = std::numeric_limits<double>::infinity();
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                min_sep = std::min(min_sep, std::abs(eigenvalues[i] - eigenvalues[j]));
        if (min_sep < 1e-8) {
            last_error = "eigenvalue separation " + std::to_string(min_sep) + " below 1e-8";
            continue;
        }

        ct.chi.assign(static_cast<std::size_t>(k) * k, cdouble{});
        bool bad = false;
        for (int r = 0; r < k && !bad; ++r) {
            Eigen::VectorXcd w = solver.eigenvectors().col(r);
            if (std::abs(w[0]) < 1e-12 * w.norm()) {
                bad = true;
                last_error = "degenerate eigenvector (vanishing identity component)";
                break;
            }
            w /= w[0];  // w_r(0) = 1 for the identity class
            double inv_d2 = 0.0;
            for (int c = 0; c < k; ++c) inv_d2 += std::norm(w[c]) / ct.class_sizes[c];
            double d = std::sqrt(static_cast<double>(order) / inv_d2);
            d = std::round(d);  // dimensions are integers; validation re-checks
            if (d < 1.0) {
                bad = true;
                last_error = "non-positive irrep dimension";
                break;
            }
            for (int c = 0; c < k; ++c)
                ct.chi[static_cast<std::size_t>(r) * k + c] = d * w[c] / static_cast<double>(ct.class_sizes[c]);
        }
        if (bad) continue;

        TableCheck check = validate_candidate(ct);
        if (!check.ok) {
            last_error = check.why;
            continue;
        }

        // Normalized row order: trivial irrep first, then by (dimension,
        // quantized (Re, Im) signature) so output is stable across runs.
        int trivial = -1;
        for (int r = 0; r < k; ++r) {
            double dev = 0.0;
            for (int c = 0; c < k; ++c) dev = std::max(dev, std::abs(ct.at(r, c) - 1.0));
            if (dev < kIntegralityTol) {
                trivial = r;
                break;
            }
        }
        if (trivial < 0) {
            last_error = "no trivial row found";
            continue;
        }

        auto signature = [&](int r) {
            std::vector<long long> sig;
            sig.reserve(2 * k + 1);
            sig.push_back(ct.dims[r]);
            for (int c = 0; c < k; ++c) {
                sig.push_back(std::llround(ct.at(r, c).real() * 1e8));
                sig.push_back(std::llround(ct.at(r, c).imag() * 1e8));
            }
            return sig;
        };
        std::vector<int> rows;
        for (int r = 0; r < k; ++r)
            if (r != trivial) rows.push_back(r);
        std::vector<std::vector<long long>> sigs(k);
        for (int r : rows) sigs[r] = signature(r);
        std::sort(rows.begin(), rows.end(),
                  [&](int x, int y) { return sigs[x] < sigs[y]; });
        rows.insert(rows.begin(), trivial);

        CharacterTable out;
        out.group = ct.group;
        out.n_irreps = k;
        out.class_sizes = ct.class_sizes;
        out.chi.resize(static_cast<std::size_t>(k) * k);
        out.dims.resize(k);
        for (int r = 0; r < k; ++r) {
            out.dims[r] = ct.dims[rows[r]];
            for (int c = 0; c < k; ++c)
                out.chi[static_cast<std::size_t>(r) * k + c] = ct.at(rows[r], c);
        }
        return out;
    }

    throw NumericalError("character_table: class-sum eigenvector method failed after 20 attempts: " +
                         last_error);
}

long round_fusion_entry(cdouble value, int a, int b_or_minus1, int c, const char* what) {
    double re = value.real();
    long n = std::lround(re);
    if (std::abs(value.imag()) > kIntegralityTol || std::abs(re - static_cast<double>(n)) > kIntegralityTol) {
        std::ostringstream os;
        os << what << ": entry (" << a;
        if (b_or_minus1 >= 0) os << ", " << b_or_minus1;
        os << " -> " << c << ") = " << re << " + " << value.imag()
           << "i is not an integer within 1e-6 (corrupted character table?)";
        throw NumericalError(os.str());
    }
    if (n < 0) {
        std::ostringstream os;
        os << what << ": entry (" << a;
        if (b_or_minus1 >= 0) os << ", " << b_or_minus1;
        os << " -> " << c << ") = " << n << " is negative";
        throw NumericalError(os.str());
    }
    return n;
}

}  // namespace

TablePtr character_table(GroupPtr g) {
    if (!g) throw InputError("character_table: null group");
    CharacterTable ct =
        g->cyclic_factors.empty() ? class_sum_table(g) : cyclic_product_table(g);
    if (ct.class_sizes.empty()) {
        ct.class_sizes.resize(g->n_classes());
        for (int c = 0; c < g->n_classes(); ++c)
            ct.class_sizes[c] = static_cast<int>(g->classes[c].size());
    }
    return std::make_shared<const CharacterTable>(std::move(ct));
}

namespace {

FusionTensor fusion_impl(const CharacterTable& ct, bool parallel) {
    const int r = ct.n_irreps;
    const int order = ct.group->order;
    std::vector<double> weight(r);
    for (int c = 0; c < r; ++c)
        weight[c] = static_cast<double>(ct.class_sizes[c]) / static_cast<double>(order);

    FusionTensor ft;
    ft.n_irreps = r;
    ft.n.assign(static_cast<std::size_t>(r) * r * r, 0);

    std::atomic<bool> failed{false};
    std::string message;

    const int nt = parallel ? parallel::effective_threads() : 1;
#pragma omp parallel for collapse(2) schedule(static) num_threads(nt)
    for (int a = 0; a < r; ++a) {
        for (int b = 0; b < r; ++b) {
            if (failed.load(std::memory_order_relaxed)) continue;
            for (int c = 0; c < r; ++c) {
                cdouble acc{0.0, 0.0};
                for (int k = 0; k < r; ++k)
                    acc += weight[k] * ct.at(a, k) * ct.at(b, k) * std::conj(ct.at(c, k));
                try {
                    long v = round_fusion_entry(acc, a, b, c, "fusion_coefficients");
                    ft.n[(static_cast<std::size_t>(a) * r + b) * r + c] = static_cast<int>(v);
                } catch (const NumericalError& e) {
#pragma omp critical(fuspos_fusion_error)
                    {
                        if (!failed.exchange(true)) message = e.what();
                    }
                    break;
                }
            }
        }
    }
    if (failed.load()) throw NumericalError(message);
    return ft;
}

}  // namespace

FusionTensor fusion_coefficients(const CharacterTable& ct) { return fusion_impl(ct, true); }

FusionTensor reference::fusion_coefficients(const CharacterTable& ct) {
    return fusion_impl(ct, false);
}

long fusion_multi(const CharacterTable& ct, std::span<const int> irreps, int b) {
    if (irreps.empty()) throw InputError("fusion_multi: empty irrep sequence");
    const int r = ct.n_irreps;
    const int order = ct.group->order;
    cdouble acc{0.0, 0.0};
    for (int k = 0; k < r; ++k) {
        cdouble prod{1.0, 0.0};
        for (int a : irreps) prod *= ct.at(a, k);
        acc += static_cast<double>(ct.class_sizes[k]) * prod * std::conj(ct.at(b, k));
    }
    acc /= static_cast<double>(order);
    return round_fusion_entry(acc, irreps[0], irreps.size() > 1 ? irreps[1] : -1, b,
                              "fusion_multi");
}

OrthogonalityReport verify_orthogonality(const CharacterTable& ct) {
    const int r = ct.n_irreps;
    const int order = ct.group->order;
    OrthogonalityReport rep;
    for (int x = 0; x < r; ++x) {
        for (int y = 0; y < r; ++y) {
            cdouble acc{0.0, 0.0};
            for (int k = 0; k < r; ++k)
                acc += static_cast<double>(ct.class_sizes[k]) * ct.at(x, k) *
                       std::conj(ct.at(y, k));
            acc /= static_cast<double>(order);
            rep.row_residual =
                std::max(rep.row_residual, std::abs(acc - (x == y ? 1.0 : 0.0)));
        }
    }
    for (int k = 0; k < r; ++k) {
        for (int l = 0; l < r; ++l) {
            cdouble acc{0.0, 0.0};
            for (int x = 0; x < r; ++x) acc += ct.at(x, k) * std::conj(ct.at(x, l));
            double expect = k == l ? static_cast<double>(order) / ct.class_sizes[k] : 0.0;
            rep.col_residual = std::max(rep.col_residual, std::abs(acc - expect));
        }
    }
    return rep;
}

}  // namespace fuspos
