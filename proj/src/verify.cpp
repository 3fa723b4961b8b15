#include "fuspos/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

#include "fuspos/errors.hpp"
#include "fuspos/parallel.hpp"
#include "fuspos/rng.hpp"

namespace fuspos {

namespace {

constexpr double kViolationTol = -1e-9;
constexpr double kWitnessTol = -1e-15;

// Shared-rate evaluation plan: all p_r are combined against one rate grid so
// each grid point costs one exp() per distinct rate.
struct EvalPlan {
    int n_irreps = 0;
    std::vector<double> rates;   // ascending union over all terms
    std::vector<double> coeffs;  // n_irreps x n_rates, row-major
};

EvalPlan build_plan(const Decomposition& d) {
    EvalPlan plan;
    plan.n_irreps = static_cast<int>(d.p.size());
    for (const auto& p : d.p)
        for (const auto& term : p.terms) plan.rates.push_back(term.rate);
    std::sort(plan.rates.begin(), plan.rates.end());
    plan.rates.erase(std::unique(plan.rates.begin(), plan.rates.end()), plan.rates.end());

    const int j = static_cast<int>(plan.rates.size());
    plan.coeffs.assign(static_cast<std::size_t>(plan.n_irreps) * j, 0.0);
    for (int r = 0; r < plan.n_irreps; ++r)
        for (const auto& term : d.p[r].terms) {
            auto it = std::lower_bound(plan.rates.begin(), plan.rates.end(), term.rate);
            plan.coeffs[static_cast<std::size_t>(r) * j + (it - plan.rates.begin())] += term.coeff;
        }
    return plan;
}

struct Grid {
    std::vector<double> t;
    std::vector<std::uint8_t> geometric;  // flag per point
};

Grid build_grid(const Decomposition& d, double t_max, int samples) {
    if (!(t_max > 0.0) || !std::isfinite(t_max))
        throw InputError("positivity_scan: t_max must be positive and finite");
    if (samples < 2) throw InputError("positivity_scan: samples must be >= 2");

    double maxrate = 0.0;
    for (const auto& p : d.p)
        for (const auto& term : p.terms) maxrate = std::max(maxrate, term.rate);

    std::vector<std::pair<double, std::uint8_t>> pts;
    pts.reserve(2 * static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i)
        pts.emplace_back(t_max * i / (samples - 1), 0);
    if (maxrate > 0.0) {
        double t0 = 1e-6 / maxrate;
        if (t0 >= t_max) t0 = t_max * 1e-9;
        const double step = std::log(t_max / t0) / (samples - 1);
        for (int i = 0; i < samples; ++i)
            pts.emplace_back(i + 1 == samples ? t_max : t0 * std::exp(step * i), 1);
    }
    std::sort(pts.begin(), pts.end());

    Grid grid;
    grid.t.reserve(pts.size());
    grid.geometric.reserve(pts.size());
    for (const auto& [t, geo] : pts) {
        if (!grid.t.empty() && grid.t.back() == t) {
            grid.geometric.back() |= geo;
        } else {
            grid.t.push_back(t);
            grid.geometric.push_back(geo);
        }
    }
    return grid;
}

struct BlockResult {
    std::vector<double> min_v, min_t;
    std::vector<double> geo_min_v, geo_min_t;
    std::optional<ScanReport::Violation> violation;
};

// Scans grid points [begin, end) in order. Running minima use strict <, so
// the earliest t wins ties; consecutive blocks merged in order reproduce a
// single serial pass exactly.
BlockResult scan_block(const EvalPlan& plan, const Grid& grid, std::size_t begin,
                       std::size_t end) {
    const int r = plan.n_irreps;
    const int j = static_cast<int>(plan.rates.size());
    BlockResult res;
    res.min_v.assign(r, std::numeric_limits<double>::infinity());
    res.min_t.assign(r, 0.0);
    res.geo_min_v.assign(r, std::numeric_limits<double>::infinity());
    res.geo_min_t.assign(r, 0.0);

    std::vector<double> expv(j);
    for (std::size_t i = begin; i < end; ++i) {
        const double t = grid.t[i];
        for (int x = 0; x < j; ++x) expv[x] = std::exp(-plan.rates[x] * t);
        const bool geo = grid.geometric[i] != 0;
        for (int rr = 0; rr < r; ++rr) {
            const double* c = plan.coeffs.data() + static_cast<std::size_t>(rr) * j;
            double v = 0.0;
            for (int x = 0; x < j; ++x) v += c[x] * expv[x];
            if (v < res.min_v[rr]) {
                res.min_v[rr] = v;
                res.min_t[rr] = t;
            }
            if (geo && v < res.geo_min_v[rr]) {
                res.geo_min_v[rr] = v;
                res.geo_min_t[rr] = t;
            }
            if (!res.violation && v < kViolationTol)
                res.violation = ScanReport::Violation{rr, t, v};
        }
    }
    return res;
}

void merge_into(BlockResult& acc, const BlockResult& next) {
    for (std::size_t r = 0; r < acc.min_v.size(); ++r) {
        if (next.min_v[r] < acc.min_v[r]) {
            acc.min_v[r] = next.min_v[r];
            acc.min_t[r] = next.min_t[r];
        }
        if (next.geo_min_v[r] < acc.geo_min_v[r]) {
            acc.geo_min_v[r] = next.geo_min_v[r];
            acc.geo_min_t[r] = next.geo_min_t[r];
        }
    }
    if (!acc.violation && next.violation) acc.violation = next.violation;
}

ScanReport to_report(const Grid& grid, BlockResult res, bool has_geometric) {
    ScanReport rep;
    rep.grid = grid.t;
    const std::size_t r = res.min_v.size();
    rep.minima.resize(r);
    for (std::size_t i = 0; i < r; ++i) rep.minima[i] = {res.min_v[i], res.min_t[i]};
    if (has_geometric) {
        rep.geometric_minima.resize(r);
        for (std::size_t i = 0; i < r; ++i)
            rep.geometric_minima[i] = {res.geo_min_v[i], res.geo_min_t[i]};
    }
    rep.first_violation = res.violation;
    return rep;
}

ScanReport scan_impl(const Decomposition& d, double t_max, int samples, bool parallel) {
    const EvalPlan plan = build_plan(d);
    const Grid grid = build_grid(d, t_max, samples);
    const bool has_geometric =
        std::any_of(grid.geometric.begin(), grid.geometric.end(), [](auto g) { return g != 0; });

    constexpr std::size_t kBlock = 4096;
    const std::size_t n = grid.t.size();

    if (!parallel || n <= kBlock) {
        return to_report(grid, scan_block(plan, grid, 0, n), has_geometric);
    }

    const std::size_t blocks = (n + kBlock - 1) / kBlock;
    std::vector<BlockResult> partial(blocks);
    const int nt = parallel::effective_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (std::size_t b = 0; b < blocks; ++b)
        partial[b] = scan_block(plan, grid, b * kBlock, std::min(n, (b + 1) * kBlock));
    BlockResult acc = std::move(partial[0]);
    for (std::size_t b = 1; b < blocks; ++b) merge_into(acc, partial[b]);
    return to_report(grid, std::move(acc), has_geometric);
}

}  // namespace

ScanReport positivity_scan(const Decomposition& d, double t_max, int samples) {
    return scan_impl(d, t_max, samples, true);
}

ScanReport reference::positivity_scan(const Decomposition& d, double t_max, int samples) {
    return scan_impl(d, t_max, samples, false);
}

namespace {

// Everything with first tuple digit a1: walks the remaining digits as an
// odometer, keeping prefix character products per depth so a leaf costs one
// class-sum per target irrep.
void power_partial(const CharacterTable& ct, const std::vector<double>& weight,
                   const std::vector<cdouble>& conj_chi, const std::vector<double>& p_share,
                   int n, int a1, std::vector<double>& out) {
    const int r = ct.n_irreps;
    const int k = r;

    std::vector<std::vector<cdouble>> prefix(n, std::vector<cdouble>(k));
    std::vector<double> pprod(n);
    std::vector<int> digit(n, 0);

    for (int c = 0; c < k; ++c) prefix[0][c] = ct.at(a1, c);
    pprod[0] = p_share[a1];
    digit[0] = a1;

    int depth = 1;
    for (int d = 1; d < n; ++d) digit[d] = -1;
    while (depth > 0) {
        if (depth == n) {
            // complete tuple: add m_{a_1..a_n}^b * prod p_{a_i}(t/n) for every b
            const auto& pref = prefix[n - 1];
            const double pp = pprod[n - 1];
            for (int b = 0; b < r; ++b) {
                cdouble acc{0.0, 0.0};
                const cdouble* cc = conj_chi.data() + static_cast<std::size_t>(b) * k;
                for (int c = 0; c < k; ++c) acc += weight[c] * pref[c] * cc[c];
                const double re = acc.real();
                const long m = std::lround(re);
                if (std::abs(acc.imag()) > 1e-6 || std::abs(re - static_cast<double>(m)) > 1e-6 ||
                    m < 0) {
                    std::ostringstream os;
                    os << "power_expansion_check: n-ary multiplicity for tuple (";
                    for (int d = 0; d < n; ++d) os << digit[d] << (d + 1 < n ? "," : "");
                    os << ") -> " << b << " is " << re << " + " << acc.imag()
                       << "i, not a nonnegative integer";
                    throw NumericalError(os.str());
                }
                out[b] += pp * static_cast<double>(m);
            }
            --depth;
            continue;
        }
        if (++digit[depth] >= r) {
            digit[depth] = -1;
            --depth;
            continue;
        }
        const int a = digit[depth];
        for (int c = 0; c < k; ++c) prefix[depth][c] = prefix[depth - 1][c] * ct.at(a, c);
        pprod[depth] = pprod[depth - 1] * p_share[a];
        ++depth;
    }
}

double power_impl(const Decomposition& d, const FusionTensor& ft, double t, int n,
                  bool parallel) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw InputError("power_expansion_check: t must be positive and finite");
    if (n < 1 || n > 4)
        throw InputError("power_expansion_check: n must be in [1, 4], got " + std::to_string(n));
    const CharacterTable& ct = *d.table;
    const int r = ct.n_irreps;
    if (ft.n_irreps != r)
        throw InputError("power_expansion_check: fusion tensor has " +
                         std::to_string(ft.n_irreps) + " irreps, table has " + std::to_string(r));
    double tuples = 1.0;
    for (int i = 0; i < n; ++i) tuples *= r;
    if (tuples > 1e6)
        throw InputError("power_expansion_check: n_irreps^n = " + std::to_string(tuples) +
                         " exceeds the 1e6 tuple bound");

    // Cheap consistency guard tying the supplied tensor to this table.
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) {
            long long lhs = 0;
            for (int c = 0; c < r; ++c)
                lhs += static_cast<long long>(ft.at(a, b, c)) * ct.dims[c];
            if (lhs != static_cast<long long>(ct.dims[a]) * ct.dims[b])
                throw InputError(
                    "power_expansion_check: fusion tensor fails the dimension identity at (" +
                    std::to_string(a) + ", " + std::to_string(b) + ")");
        }

    std::vector<double> weight(r);
    for (int c = 0; c < r; ++c)
        weight[c] = static_cast<double>(ct.class_sizes[c]) / ct.group->order;
    std::vector<cdouble> conj_chi(static_cast<std::size_t>(r) * r);
    for (int b = 0; b < r; ++b)
        for (int c = 0; c < r; ++c)
            conj_chi[static_cast<std::size_t>(b) * r + c] = std::conj(ct.at(b, c));

    const double t_share = t / n;
    std::vector<double> p_share(r), p_target(r);
    for (int i = 0; i < r; ++i) {
        p_share[i] = eval(d.p[i], t_share);
        p_target[i] = eval(d.p[i], t);
    }

    std::vector<std::vector<double>> partial(r, std::vector<double>(r, 0.0));
    std::atomic<bool> failed{false};
    std::string message;
    const int nt = parallel ? parallel::effective_threads() : 1;
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (int a1 = 0; a1 < r; ++a1) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            power_partial(ct, weight, conj_chi, p_share, n, a1, partial[a1]);
        } catch (const NumericalError& e) {
#pragma omp critical(fuspos_power_error)
            {
                if (!failed.exchange(true)) message = e.what();
            }
        }
    }
    if (failed.load()) throw NumericalError(message);

    double residual = 0.0;
    for (int b = 0; b < r; ++b) {
        double s = 0.0;
        for (int a1 = 0; a1 < r; ++a1) s += partial[a1][b];
        residual = std::max(residual, std::abs(s - p_target[b]));
    }
    return residual;
}

}  // namespace

double power_expansion_check(const Decomposition& d, const FusionTensor& ft, double t, int n) {
    return power_impl(d, ft, t, n, true);
}

double reference::power_expansion_check(const Decomposition& d, const FusionTensor& ft, double t,
                                        int n) {
    return power_impl(d, ft, t, n, false);
}

double sigma_orthogonality_check(const CharacterTable& ct) {
    const FiniteGroup& g = *ct.group;
    const int r = ct.n_irreps;
    double residual = 0.0;
    for (int x = 0; x < r; ++x) {
        for (int y = 0; y < r; ++y) {
            cdouble acc{0.0, 0.0};
            for (int e = 0; e < g.order; ++e)
                acc += std::conj(ct.at(x, g.class_of[e])) * ct.at(y, g.class_of[e]);
            double expect = x == y ? static_cast<double>(g.order) : 0.0;
            residual = std::max(residual, std::abs(acc - expect));
        }
    }
    return residual;
}

namespace {

TrialRecord run_trial(GroupPtr g, const TablePtr& ct, const std::vector<int>& pair_rep,
                      std::int64_t index, std::uint64_t seed, const SweepOptions& options) {
    const int k = g->n_classes();
    std::uint64_t state = trial_seed(seed, index);

    std::vector<double> lengths(k, 0.0);
    for (int rep : pair_rep) {
        double v = u01(splitmix64(state)) * options.length_max;
        lengths[rep] = v;
        lengths[g->inverse_class[rep]] = v;
    }

    LengthFunction ell = validate_length_per_class(g, lengths);
    Decomposition d = decompose(ct, ell);
    CertificateReport cert = certify(d);

    double min_pos = 0.0;
    for (double rate : ell.distinct_rates)
        if (rate > 0.0) {
            min_pos = rate;
            break;
        }
    const double t_max = min_pos > 0.0 ? options.t_max_factor / min_pos : options.t_max_factor;
    ScanReport scan = scan_impl(d, t_max, options.samples, false);

    TrialRecord rec;
    rec.index = index;
    rec.class_lengths = std::move(lengths);
    rec.conclusion = cert.conclusion;
    rec.min_p = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < scan.minima.size(); ++r) {
        if (scan.minima[r].min_value < rec.min_p) {
            rec.min_p = scan.minima[r].min_value;
            rec.argmin_t = scan.minima[r].argmin_t;
        }
    }
    rec.violation = scan.first_violation.has_value();
    for (const auto& verdict : cert.per_irrep) {
        if (verdict.status != IrrepStatus::Fail) continue;
        rec.has_fail = true;
        const bool witnessed =
            !scan.geometric_minima.empty() &&
            scan.geometric_minima[verdict.irrep].min_value < kWitnessTol;
        if (!witnessed) rec.fail_witnessed = false;
    }
    return rec;
}

SweepSummary sweep_impl(GroupPtr g, std::int64_t trials, std::uint64_t seed,
                        const SweepOptions& options, bool parallel) {
    if (trials < 1) throw InputError("theorem_sweep: trials must be >= 1");
    TablePtr ct = character_table(g);

    std::vector<int> pair_rep;  // one representative class per nontrivial inverse pair
    for (int k = 1; k < g->n_classes(); ++k)
        if (g->inverse_class[k] >= k) pair_rep.push_back(k);

    std::vector<TrialRecord> records(static_cast<std::size_t>(trials));
    std::atomic<bool> failed{false};
    std::string message;
    const int nt = parallel ? parallel::effective_threads() : 1;
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (std::int64_t i = 0; i < trials; ++i) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            records[static_cast<std::size_t>(i)] = run_trial(g, ct, pair_rep, i, seed, options);
        } catch (const std::exception& e) {
#pragma omp critical(fuspos_sweep_error)
            {
                if (!failed.exchange(true)) message = e.what();
            }
        }
    }
    if (failed.load()) throw NumericalError("theorem_sweep: trial failed: " + message);

    SweepSummary summary;
    summary.seed = seed;
    summary.trials = trials;
    for (const auto& rec : records) {
        const bool certified = rec.conclusion == Conclusion::CertifiedPositive;
        if (certified && rec.violation) ++summary.certified_violating;
        else if (certified) ++summary.certified_clean;
        else if (rec.violation) ++summary.uncertified_violating;
        else ++summary.uncertified_clean;
        if (rec.conclusion == Conclusion::BoundaryNumeric) ++summary.boundary_numeric;
        if (rec.has_fail && !rec.fail_witnessed) ++summary.fail_unwitnessed;
    }
    if (options.keep_trials) summary.records = std::move(records);
    return summary;
}

}  // namespace

SweepSummary theorem_sweep(GroupPtr g, std::int64_t trials, std::uint64_t seed,
                           const SweepOptions& options) {
    return sweep_impl(std::move(g), trials, seed, options, true);
}

SweepSummary reference::theorem_sweep(GroupPtr g, std::int64_t trials, std::uint64_t seed,
                                      const SweepOptions& options) {
    return sweep_impl(std::move(g), trials, seed, options, false);
}

}  // namespace fuspos
