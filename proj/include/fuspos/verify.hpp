#pragma once

#include <cstdint>
#include <optional>

#include "fuspos/certify.hpp"

namespace fuspos {

/// Grid-scan evidence for p_r(t) >= 0. The grid is the sorted union of a
/// uniform grid on [0, t_max] and a geometric grid on [1e-6/maxrate, t_max];
/// the geometric points catch sign dips at very small t.
struct ScanReport {
    struct Extremum {
        double min_value = 0.0;
        double argmin_t = 0.0;
    };
    struct Violation {
        int irrep = 0;
        double t = 0.0;
        double value = 0.0;
    };

    std::vector<double> grid;
    std::vector<Extremum> minima;            ///< per irrep, over the whole grid
    std::vector<Extremum> geometric_minima;  ///< per irrep, geometric points only
    std::optional<Violation> first_violation;  ///< first value < -1e-9, smallest t
};

/// samples points per grid family (so roughly 2*samples points total).
ScanReport positivity_scan(const Decomposition& d, double t_max, int samples);

/// Checks the power identity: for every irrep b,
///   p_b(t) = sum_{a_1..a_n} p_{a_1}(t/n) ... p_{a_n}(t/n) * n_{a_1...a_n}^b
/// with the n-ary multiplicities computed tuple-by-tuple via fusion_multi's
/// character sum. Returns the max residual over b. Requires 1 <= n <= 4 and
/// n_irreps^n <= 1e6.
double power_expansion_check(const Decomposition& d, const FusionTensor& ft, double t, int n);

/// Materializes each sigma_r as the per-element diagonal (chi_r(g))_g and
/// returns max_{r,s} |Tr(sigma_r^* sigma_s) - |G| delta_rs|.
double sigma_orthogonality_check(const CharacterTable& ct);

struct SweepOptions {
    double t_max_factor = 50.0;  ///< per-trial t_max = factor / min positive rate
    int samples = 5000;          ///< per grid family, as in positivity_scan
    double length_max = 10.0;    ///< class lengths drawn uniform on [0, length_max]
    bool keep_trials = true;     ///< retain per-trial records (needed for CSV export)
};

struct TrialRecord {
    std::int64_t index = 0;
    std::vector<double> class_lengths;
    Conclusion conclusion = Conclusion::NotCertified;
    double min_p = 0.0;    ///< min over irreps and grid points
    double argmin_t = 0.0;
    bool violation = false;       ///< scan found a value < -1e-9
    bool has_fail = false;        ///< certificate FAILed some irrep
    bool fail_witnessed = true;   ///< every FAIL irrep dips below -1e-15 on the geometric grid
};

/// Counts of (certificate, scan) outcomes over seeded random length
/// functions. The theorems say certified_violating must stay 0; a nonzero
/// count is an implementation bug, reproducible from (seed, index).
struct SweepSummary {
    std::uint64_t seed = 0;
    std::int64_t trials = 0;
    std::int64_t certified_clean = 0;
    std::int64_t certified_violating = 0;
    std::int64_t uncertified_clean = 0;
    std::int64_t uncertified_violating = 0;
    std::int64_t boundary_numeric = 0;  ///< trials whose conclusion was BOUNDARY_NUMERIC
    std::int64_t fail_unwitnessed = 0;  ///< trials with a FAIL irrep lacking a scan witness
    std::vector<TrialRecord> records;   ///< empty unless keep_trials
};

SweepSummary theorem_sweep(GroupPtr g, std::int64_t trials, std::uint64_t seed,
                           const SweepOptions& options = {});

namespace reference {
ScanReport positivity_scan(const Decomposition& d, double t_max, int samples);
double power_expansion_check(const Decomposition& d, const FusionTensor& ft, double t, int n);
SweepSummary theorem_sweep(GroupPtr g, std::int64_t trials, std::uint64_t seed,
                           const SweepOptions& options = {});
}

}  // namespace fuspos
