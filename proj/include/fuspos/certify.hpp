#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fuspos/semigroup.hpp"

namespace fuspos {

enum class IrrepStatus { Pass, Fail, Boundary };
enum class Conclusion { CertifiedPositive, NotCertified, BoundaryNumeric };

const char* to_string(IrrepStatus s);
const char* to_string(Conclusion c);

/// Per-irrep verdict. `resolution` records how the verdict was reached:
/// "strict", "positive-value-at-zero", "derivative-order-<m>",
/// "derivative-order-<m>-negative", "zero-function", "numeric-scan-clean",
/// "numeric-scan-negative", "trivial-value", "trivial-value-mismatch",
/// "negative-value-at-zero".
struct IrrepVerdict {
    int irrep = 0;
    double value_at_zero = 0.0;
    double derivative_at_zero = 0.0;
    IrrepStatus status = IrrepStatus::Pass;
    std::string resolution;
};

/// Finite positivity certificate: values and first derivatives at t = 0,
/// with exact higher-derivative resolution of boundary cases and a numeric
/// epsilon-interval scan as the last resort. A conclusion that needed the
/// numeric scan is reported as BoundaryNumeric, never CertifiedPositive.
struct CertificateReport {
    std::vector<IrrepVerdict> per_irrep;
    Conclusion conclusion = Conclusion::NotCertified;
    std::optional<double> epsilon_used;  ///< set only when the numeric fallback ran
};

CertificateReport certify(const Decomposition& d);

/// The linear inequality system over class-length variables whose
/// feasibility is the certificate: one variable per nontrivial
/// inverse-closed class pair, one row -|G| p_r'(0) <= 0 per nontrivial
/// irrep, with identical rows (conjugate irrep pairs) deduplicated.
struct InequalitySystem {
    struct Variable {
        std::string name;
        std::vector<int> classes;  ///< the inverse-closed class pair it covers
    };
    struct Row {
        std::vector<double> coeffs;  ///< one per variable; row is sum coeffs*x <= 0
        std::vector<int> irreps;     ///< irreps sharing this row
    };
    std::vector<Variable> variables;
    std::vector<Row> rows;
};

InequalitySystem inequality_system(const CharacterTable& ct);

struct PointCheck {
    bool satisfied = true;
    std::vector<int> violated_rows;
};

/// Evaluates every row at the assignment; satisfied iff all rows <= 1e-12.
/// The assignment must cover exactly the system's variables, values >= 0.
PointCheck check_point(const InequalitySystem& sys,
                       const std::map<std::string, double>& assignment);

}  // namespace fuspos
