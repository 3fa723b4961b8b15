#include "fuspos/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "fuspos/errors.hpp"
#include "fuspos/io.hpp"

namespace fuspos {

namespace {

using io::ojson;

struct CommonArgs {
    std::string group;
    std::string lengths;
    std::string out;
    std::string format = "json";
};

GroupPtr load_group(const CommonArgs& args) {
    if (args.group.empty()) throw InputError("group: missing --group");
    return share(io::parse_group_spec(io::load_json_arg(args.group, "group")));
}

LengthFunction load_lengths(const CommonArgs& args, GroupPtr g) {
    if (args.lengths.empty()) throw InputError("lengths: missing --lengths");
    return io::parse_length_doc(io::load_json_arg(args.lengths, "lengths"), std::move(g));
}

// Human-readable summary goes to stdout; machine output goes to --out
// (with "--out -" meaning: machine JSON to stdout instead of the summary).
void emit(const CommonArgs& args, const ojson& machine, const std::string& human) {
    if (args.out == "-") {
        std::cout << machine.dump(2) << "\n";
        return;
    }
    std::cout << human;
    if (!args.out.empty()) {
        std::ofstream out(args.out);
        if (!out) throw InputError("out: cannot write file '" + args.out + "'");
        out << machine.dump(2) << "\n";
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw InputError("out: cannot write file '" + path + "'");
    out << text;
}

std::string render_row(const InequalitySystem& sys, const InequalitySystem::Row& row) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t v = 0; v < sys.variables.size(); ++v) {
        double c = row.coeffs[v];
        if (c == 0.0) continue;
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        double mag = std::abs(c);
        if (mag != 1.0) os << mag << " ";
        os << sys.variables[v].name;
        first = false;
    }
    if (first) os << "0";
    os << " <= 0";
    return os.str();
}

int cmd_table(const CommonArgs& args) {
    GroupPtr g = load_group(args);
    TablePtr ct = character_table(g);
    OrthogonalityReport orth = verify_orthogonality(*ct);

    std::ostringstream os;
    os << "group of order " << g->order << " with " << g->n_classes() << " conjugacy classes\n";
    os << "irrep dimensions:";
    for (int d : ct->dims) os << " " << d;
    os << "\northogonality residuals: row " << orth.row_residual << ", column "
       << orth.col_residual << "\n";
    emit(args, io::table_json(*ct), os.str());
    return 0;
}

int cmd_fusion(const CommonArgs& args) {
    GroupPtr g = load_group(args);
    TablePtr ct = character_table(g);
    FusionTensor ft = fusion_coefficients(*ct);
    long nonzero = 0;
    for (int v : ft.n) nonzero += v != 0;
    std::ostringstream os;
    os << "fusion tensor over " << ft.n_irreps << " irreps: " << nonzero
       << " nonzero multiplicities\n";
    emit(args, io::fusion_json(ft), os.str());
    return 0;
}

int cmd_decompose(const CommonArgs& args) {
    GroupPtr g = load_group(args);
    TablePtr ct = character_table(g);
    LengthFunction ell = load_lengths(args, g);
    Decomposition d = decompose(ct, ell);

    std::ostringstream os;
    os.precision(12);
    for (std::size_t r = 0; r < d.p.size(); ++r) {
        os << "p_" << r << "(t) =";
        bool first = true;
        for (const auto& term : d.p[r].terms) {
            os << (first ? " " : " + ") << term.coeff << "*exp(-" << term.rate << "*t)";
            first = false;
        }
        os << "\n";
    }
    emit(args, io::decomposition_json(d), os.str());
    return 0;
}

int cmd_certify(const CommonArgs& args) {
    GroupPtr g = load_group(args);
    TablePtr ct = character_table(g);
    LengthFunction ell = load_lengths(args, g);
    CertificateReport report = certify(decompose(ct, ell));

    std::ostringstream os;
    os.precision(12);
    os << "conclusion: " << to_string(report.conclusion) << "\n";
    for (const auto& v : report.per_irrep)
        os << "  r=" << v.irrep << "  p(0)=" << v.value_at_zero << "  p'(0)="
           << v.derivative_at_zero << "  " << to_string(v.status) << " (" << v.resolution
           << ")\n";
    if (report.epsilon_used) os << "  numeric fallback interval: [0, " << *report.epsilon_used << "]\n";
    emit(args, io::certificate_json(report), os.str());
    switch (report.conclusion) {
        case Conclusion::CertifiedPositive: return 0;
        case Conclusion::NotCertified: return 2;
        case Conclusion::BoundaryNumeric: return 3;
    }
    return 5;
}

int cmd_ineq(const CommonArgs& args) {
    GroupPtr g = load_group(args);
    TablePtr ct = character_table(g);
    InequalitySystem sys = inequality_system(*ct);

    std::ostringstream os;
    os << "variables:";
    for (const auto& v : sys.variables) {
        os << " " << v.name << "=l(classes";
        for (int k : v.classes) os << " " << k;
        os << ")";
    }
    os << "\n";
    for (const auto& row : sys.rows) {
        os << render_row(sys, row) << "   [irreps";
        for (int r : row.irreps) os << " " << r;
        os << "]\n";
    }
    emit(args, io::inequality_json(sys), os.str());
    return 0;
}

int cmd_scan(const CommonArgs& args, double t_max, int samples) {
    GroupPtr g = load_group(args);
    TablePtr ct = character_table(g);
    LengthFunction ell = load_lengths(args, g);
    Decomposition d = decompose(ct, ell);

    if (t_max <= 0.0) {  // auto: 50 / min positive rate
        double min_pos = 0.0;
        for (double r : ell.distinct_rates)
            if (r > 0.0) {
                min_pos = r;
                break;
            }
        t_max = min_pos > 0.0 ? 50.0 / min_pos : 50.0;
    }
    ScanReport rep = positivity_scan(d, t_max, samples);

    std::ostringstream os;
    os.precision(12);
    os << "scanned " << rep.grid.size() << " grid points on [0, " << t_max << "]\n";
    for (std::size_t r = 0; r < rep.minima.size(); ++r)
        os << "  min p_" << r << " = " << rep.minima[r].min_value << " at t="
           << rep.minima[r].argmin_t << "\n";
    if (rep.first_violation)
        os << "violation: p_" << rep.first_violation->irrep << "(" << rep.first_violation->t
           << ") = " << rep.first_violation->value << "\n";
    else
        os << "no violation below -1e-9\n";
    emit(args, io::scan_json(rep, t_max, samples), os.str());
    return 0;
}

int cmd_power(const CommonArgs& args, double t, int n) {
    GroupPtr g = load_group(args);
    TablePtr ct = character_table(g);
    LengthFunction ell = load_lengths(args, g);
    Decomposition d = decompose(ct, ell);
    FusionTensor ft = fusion_coefficients(*ct);
    double residual = power_expansion_check(d, ft, t, n);

    std::ostringstream os;
    os << "power expansion residual (n=" << n << ", t=" << t << "): " << residual << "\n";
    emit(args, io::power_json(residual, t, n), os.str());
    return 0;
}

int cmd_sweep(const CommonArgs& args, long trials, std::uint64_t seed, int samples,
              double t_factor, const std::string& csv_path) {
    GroupPtr g = load_group(args);
    SweepOptions options;
    options.samples = samples;
    options.t_max_factor = t_factor;
    SweepSummary s = theorem_sweep(g, trials, seed, options);

    std::ostringstream os;
    os << "sweep: " << s.trials << " trials, seed " << s.seed << "\n"
       << "  certified & clean:      " << s.certified_clean << "\n"
       << "  certified & violating:  " << s.certified_violating << "\n"
       << "  uncertified & clean:    " << s.uncertified_clean << "\n"
       << "  uncertified & violating:" << s.uncertified_violating << "\n"
       << "  boundary-numeric:       " << s.boundary_numeric << "\n"
       << "  FAIL without witness:   " << s.fail_unwitnessed << "\n";

    if (!csv_path.empty()) write_text(csv_path, io::sweep_csv(s));
    if (args.format == "csv") {
        std::cout << os.str();
        if (!args.out.empty()) write_text(args.out, io::sweep_csv(s));
    } else {
        emit(args, io::sweep_json(s), os.str());
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"positivity certificates for heat-semigroup coefficients on finite groups"};
    app.require_subcommand(1);

    CommonArgs common;
    double t_max = 0.0;
    int samples = 5000;
    double t = 1.0;
    int n = 2;
    long trials = 100;
    std::uint64_t seed = 0;
    double t_factor = 50.0;
    std::string csv_path;

    auto add_common = [&](CLI::App* cmd, bool needs_lengths) {
        cmd->add_option("--group", common.group, "group spec (inline JSON or @file)")
            ->required();
        if (needs_lengths)
            cmd->add_option("--lengths", common.lengths, "length document (inline JSON or @file)")
                ->required();
        cmd->add_option("--out", common.out, "machine output path ('-' for stdout)");
        cmd->add_option("--format", common.format, "machine output format")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    CLI::App* table = app.add_subcommand("table", "character table of a group");
    add_common(table, false);
    CLI::App* fusion = app.add_subcommand("fusion", "binary fusion multiplicities");
    add_common(fusion, false);
    CLI::App* dec = app.add_subcommand("decompose", "semigroup coefficients p_r(t)");
    add_common(dec, true);
    CLI::App* certify_cmd = app.add_subcommand("certify", "positivity certificate at t=0");
    add_common(certify_cmd, true);
    CLI::App* ineq = app.add_subcommand("ineq", "linear inequality system over class lengths");
    add_common(ineq, false);
    CLI::App* scan = app.add_subcommand("scan", "grid scan of all p_r for negativity");
    add_common(scan, true);
    scan->add_option("--t-max", t_max, "scan upper bound (default: 50/min positive rate)");
    scan->add_option("--samples", samples, "grid points per family")->check(CLI::PositiveNumber);
    CLI::App* power = app.add_subcommand("power-check", "semigroup power-expansion identity");
    add_common(power, true);
    power->add_option("--n", n, "power to expand");
    power->add_option("--t", t, "time at which to check");
    CLI::App* sweep = app.add_subcommand("sweep", "random length functions: certify vs scan");
    add_common(sweep, false);
    sweep->add_option("--trials", trials, "number of random length functions")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--seed", seed, "sweep seed");
    sweep->add_option("--samples", samples, "grid points per family")->check(CLI::PositiveNumber);
    sweep->add_option("--t-max", t_factor, "scan factor: t_max = factor/min positive rate")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--csv", csv_path, "also write the per-trial CSV here");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("fuspos");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 4;
    }

    try {
        if (common.format == "csv" && !sweep->parsed())
            throw InputError("format: csv output is only available for sweep");
        if (table->parsed()) return cmd_table(common);
        if (fusion->parsed()) return cmd_fusion(common);
        if (dec->parsed()) return cmd_decompose(common);
        if (certify_cmd->parsed()) return cmd_certify(common);
        if (ineq->parsed()) return cmd_ineq(common);
        if (scan->parsed()) return cmd_scan(common, t_max, samples);
        if (power->parsed()) return cmd_power(common, t, n);
        if (sweep->parsed()) return cmd_sweep(common, trials, seed, samples, t_factor, csv_path);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 4;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 5;
    }
    return 4;
}

}  // namespace fuspos
