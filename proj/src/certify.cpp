#include "fuspos/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fuspos/errors.hpp"

namespace fuspos {

namespace {

constexpr double kSignTol = 1e-12;
constexpr double kScanNegTol = -1e-15;

double max_rate(const ExpSum& s) {
    double m = 0.0;
    for (const auto& t : s.terms) m = std::max(m, t.rate);
    return m;
}

bool identically_zero(const ExpSum& s) {
    return std::all_of(s.terms.begin(), s.terms.end(),
                       [](const ExpSum::Term& t) { return std::abs(t.coeff) <= kSignTol; });
}

// Minimum over a small uniform+geometric grid on (0, eps]; the value at 0 is
// known (|p(0)| <= tol) so the open interval is what matters.
double scan_min_on_interval(const ExpSum& s, double eps) {
    constexpr int kUniform = 512;
    constexpr int kGeometric = 256;
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= kUniform; ++i) lo = std::min(lo, eval(s, eps * i / kUniform));
    const double t0 = eps * 1e-9;
    const double step = std::log(eps / t0) / (kGeometric - 1);
    for (int i = 0; i < kGeometric; ++i) lo = std::min(lo, eval(s, t0 * std::exp(step * i)));
    return lo;
}

}  // namespace

const char* to_string(IrrepStatus s) {
    switch (s) {
        case IrrepStatus::Pass: return "PASS";
        case IrrepStatus::Fail: return "FAIL";
        case IrrepStatus::Boundary: return "BOUNDARY";
    }
    return "?";
}

const char* to_string(Conclusion c) {
    switch (c) {
        case Conclusion::CertifiedPositive: return "CERTIFIED_POSITIVE";
        case Conclusion::NotCertified: return "NOT_CERTIFIED";
        case Conclusion::BoundaryNumeric: return "BOUNDARY_NUMERIC";
    }
    return "?";
}

CertificateReport certify(const Decomposition& d) {
    CertificateReport report;
    report.per_irrep.reserve(d.p.size());

    bool any_negative = false;
    bool any_numeric = false;

    for (int r = 0; r < static_cast<int>(d.p.size()); ++r) {
        const ExpSum& p = d.p[r];
        IrrepVerdict v;
        v.irrep = r;
        v.value_at_zero = eval(p, 0.0);
        v.derivative_at_zero = derivative_at_zero(p, 1);

        if (r == 0) {
            // Trivial irrep: orthogonality forces p_0(0) = 1.
            if (std::abs(v.value_at_zero - 1.0) <= kSignTol) {
                v.status = IrrepStatus::Pass;
                v.resolution = "trivial-value";
            } else {
                v.status = IrrepStatus::Fail;
                v.resolution = "trivial-value-mismatch";
                any_negative = true;
            }
            report.per_irrep.push_back(std::move(v));
            continue;
        }

        if (v.value_at_zero < -kSignTol) {
            v.status = IrrepStatus::Fail;
            v.resolution = "negative-value-at-zero";
            any_negative = true;
        } else if (v.value_at_zero > kSignTol) {
            // Strictly positive at t = 0: positive on a neighborhood
            // regardless of the derivative.
            v.status = IrrepStatus::Pass;
            v.resolution = "positive-value-at-zero";
        } else if (v.derivative_at_zero > kSignTol) {
            v.status = IrrepStatus::Pass;
            v.resolution = "strict";
        } else if (v.derivative_at_zero < -kSignTol) {
            v.status = IrrepStatus::Fail;
            v.resolution = "strict";
            any_negative = true;
        } else {
            // Boundary: p(0) = p'(0) = 0 up to rounding. The first nonzero
            // higher derivative decides the sign near 0 exactly.
            bool decided = false;
            for (int m = 2; m <= 8 && !decided; ++m) {
                double dm = derivative_at_zero(p, m);
                if (std::abs(dm) > kSignTol) {
                    decided = true;
                    if (dm > 0.0) {
                        v.status = IrrepStatus::Pass;
                        v.resolution = "derivative-order-" + std::to_string(m);
                    } else {
                        v.status = IrrepStatus::Boundary;
                        v.resolution = "derivative-order-" + std::to_string(m) + "-negative";
                        any_negative = true;
                    }
                }
            }
            if (!decided) {
                if (identically_zero(p)) {
                    v.status = IrrepStatus::Pass;
                    v.resolution = "zero-function";
                } else {
                    double eps = 1e-3 / std::max(1.0, max_rate(p));
                    report.epsilon_used = eps;
                    if (scan_min_on_interval(p, eps) < kScanNegTol) {
                        v.status = IrrepStatus::Boundary;
                        v.resolution = "numeric-scan-negative";
                        any_negative = true;
                    } else {
                        v.status = IrrepStatus::Boundary;
                        v.resolution = "numeric-scan-clean";
                        any_numeric = true;
                    }
                }
            }
        }
        report.per_irrep.push_back(std::move(v));
    }

    report.conclusion = any_negative  ? Conclusion::NotCertified
                        : any_numeric ? Conclusion::BoundaryNumeric
                                      : Conclusion::CertifiedPositive;
    return report;
}

InequalitySystem inequality_system(const CharacterTable& ct) {
    const int n = ct.n_irreps;
    InequalitySystem sys;

    // One variable per nontrivial inverse-closed class pair.
    std::vector<int> var_of_class(n, -1);
    const auto& g = *ct.group;
    for (int k = 1; k < n; ++k) {
        if (var_of_class[k] >= 0) continue;
        int ki = g.inverse_class[k];
        InequalitySystem::Variable var;
        int idx = static_cast<int>(sys.variables.size());
        var.name = idx < 26 ? std::string(1, static_cast<char>('a' + idx))
                            : "v" + std::to_string(idx);
        var.classes = ki == k ? std::vector<int>{k} : std::vector<int>{k, ki};
        var_of_class[k] = idx;
        var_of_class[ki] = idx;
        sys.variables.push_back(std::move(var));
    }

    for (int r = 1; r < n; ++r) {
        std::vector<double> coeffs(sys.variables.size(), 0.0);
        for (std::size_t v = 0; v < sys.variables.size(); ++v) {
            cdouble acc{0.0, 0.0};
            for (int k : sys.variables[v].classes)
                acc += static_cast<double>(ct.class_sizes[k]) * std::conj(ct.at(r, k));
            if (std::abs(acc.imag()) >= 1e-9)
                throw NumericalError(
                    "inequality_system: non-real row coefficient for irrep " + std::to_string(r));
            coeffs[v] = acc.real();
        }
        // Conjugate irrep pairs produce identical rows; merge them.
        bool merged = false;
        for (auto& row : sys.rows) {
            double dev = 0.0;
            for (std::size_t v = 0; v < coeffs.size(); ++v)
                dev = std::max(dev, std::abs(row.coeffs[v] - coeffs[v]));
            if (dev <= 1e-12) {
                row.irreps.push_back(r);
                merged = true;
                break;
            }
        }
        if (!merged) sys.rows.push_back({std::move(coeffs), {r}});
    }
    return sys;
}

PointCheck check_point(const InequalitySystem& sys,
                       const std::map<std::string, double>& assignment) {
    std::vector<double> x(sys.variables.size());
    std::size_t used = 0;
    for (std::size_t v = 0; v < sys.variables.size(); ++v) {
        auto it = assignment.find(sys.variables[v].name);
        if (it == assignment.end())
            throw InputError("check_point: missing variable '" + sys.variables[v].name + "'");
        if (!std::isfinite(it->second) || it->second < 0.0)
            throw InputError("check_point: variable '" + sys.variables[v].name +
                             "' must be finite and >= 0");
        x[v] = it->second;
        ++used;
    }
    if (used != assignment.size()) {
        for (const auto& [name, value] : assignment) {
            (void)value;
            bool known = std::any_of(sys.variables.begin(), sys.variables.end(),
                                     [&](const auto& var) { return var.name == name; });
            if (!known) throw InputError("check_point: unknown variable '" + name + "'");
        }
    }

    PointCheck result;
    for (std::size_t i = 0; i < sys.rows.size(); ++i) {
        double val = 0.0;
        for (std::size_t v = 0; v < x.size(); ++v) val += sys.rows[i].coeffs[v] * x[v];
        if (val > 1e-12) {
            result.satisfied = false;
            result.violated_rows.push_back(static_cast<int>(i));
        }
    }
    return result;
}

}  // namespace fuspos
