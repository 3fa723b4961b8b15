#include "fuspos/io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fuspos/errors.hpp"

namespace fuspos::io {

namespace {

void require_object(const ojson& j, const std::string& path) {
    if (!j.is_object()) throw InputError(path + ": expected an object");
}

void reject_unknown(const ojson& j, std::initializer_list<const char*> allowed,
                    const std::string& path) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw InputError(path + "." + key + ": unknown field");
    }
}

int positive_int(const ojson& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 1)
        throw InputError(path + ": expected a positive integer");
    long long v = j.get<long long>();
    if (v > kMaxGroupOrder) throw InputError(path + ": value " + std::to_string(v) + " too large");
    return static_cast<int>(v);
}

double real_value(const ojson& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        char* end = nullptr;
        double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0')
            throw InputError(path + ": '" + s + "' is not a decimal number");
        return v;
    }
    throw InputError(path + ": expected a number or a decimal string");
}

ojson complex_json(cdouble v) { return ojson{{"re", v.real()}, {"im", v.imag()}}; }

}  // namespace

FiniteGroup parse_group_spec(const ojson& spec, const std::string& path) {
    require_object(spec, path);
    if (!spec.contains("kind") || !spec["kind"].is_string())
        throw InputError(path + ".kind: missing or not a string");
    const std::string kind = spec["kind"].get<std::string>();

    if (kind == "cyclic" || kind == "dihedral" || kind == "symmetric") {
        reject_unknown(spec, {"kind", "n"}, path);
        if (!spec.contains("n")) throw InputError(path + ".n: missing");
        int n = positive_int(spec["n"], path + ".n");
        if (kind == "cyclic") return build_cyclic(n);
        if (kind == "dihedral") return build_dihedral(n);
        return build_symmetric(n);
    }
    if (kind == "product") {
        reject_unknown(spec, {"kind", "factors"}, path);
        if (!spec.contains("factors") || !spec["factors"].is_array() ||
            spec["factors"].size() != 2)
            throw InputError(path + ".factors: expected an array of exactly 2 group specs");
        FiniteGroup a = parse_group_spec(spec["factors"][0], path + ".factors[0]");
        FiniteGroup b = parse_group_spec(spec["factors"][1], path + ".factors[1]");
        return build_product(a, b);
    }
    if (kind == "table") {
        reject_unknown(spec, {"kind", "mul"}, path);
        if (!spec.contains("mul") || !spec["mul"].is_array())
            throw InputError(path + ".mul: missing or not an array");
        std::vector<std::vector<int>> mul;
        mul.reserve(spec["mul"].size());
        for (std::size_t a = 0; a < spec["mul"].size(); ++a) {
            const auto& row = spec["mul"][a];
            if (!row.is_array())
                throw InputError(path + ".mul[" + std::to_string(a) + "]: expected an array");
            std::vector<int> r;
            r.reserve(row.size());
            for (std::size_t b = 0; b < row.size(); ++b) {
                if (!row[b].is_number_integer())
                    throw InputError(path + ".mul[" + std::to_string(a) + "][" +
                                     std::to_string(b) + "]: expected an integer");
                r.push_back(row[b].get<int>());
            }
            mul.push_back(std::move(r));
        }
        return from_table(mul);
    }
    throw InputError(path + ".kind: unknown kind '" + kind + "'");
}

LengthFunction parse_length_doc(const ojson& doc, GroupPtr g, const std::string& path) {
    require_object(doc, path);
    const ojson* body = &doc;
    std::string p = path;
    if (doc.size() == 1 && doc.contains("lengths")) {
        body = &doc["lengths"];
        p += ".lengths";
        require_object(*body, p);
    }
    reject_unknown(*body, {"per_element", "per_class"}, p);
    const bool per_element = body->contains("per_element");
    const bool per_class = body->contains("per_class");
    if (per_element == per_class)
        throw InputError(p + ": expected exactly one of per_element, per_class");

    const std::string key = per_element ? "per_element" : "per_class";
    const ojson& arr = (*body)[key];
    if (!arr.is_array()) throw InputError(p + "." + key + ": expected an array");
    std::vector<double> values;
    values.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i)
        values.push_back(real_value(arr[i], p + "." + key + "[" + std::to_string(i) + "]"));

    return per_element ? validate_length_per_element(std::move(g), values)
                       : validate_length_per_class(std::move(g), values);
}

ojson table_json(const CharacterTable& ct) {
    ojson j;
    j["order"] = ct.group->order;
    j["n_irreps"] = ct.n_irreps;
    j["dims"] = ct.dims;
    j["class_sizes"] = ct.class_sizes;
    j["classes"] = ct.group->classes;
    ojson chi = ojson::array();
    for (int r = 0; r < ct.n_irreps; ++r) {
        ojson row = ojson::array();
        for (int k = 0; k < ct.n_irreps; ++k) row.push_back(complex_json(ct.at(r, k)));
        chi.push_back(std::move(row));
    }
    j["chi"] = std::move(chi);
    return j;
}

ojson fusion_json(const FusionTensor& ft) {
    ojson j;
    j["n_irreps"] = ft.n_irreps;
    ojson entries = ojson::array();
    for (int a = 0; a < ft.n_irreps; ++a)
        for (int b = 0; b < ft.n_irreps; ++b)
            for (int c = 0; c < ft.n_irreps; ++c)
                if (int v = ft.at(a, b, c); v != 0)
                    entries.push_back(ojson{{"a", a}, {"b", b}, {"c", c}, {"n", v}});
    j["entries"] = std::move(entries);
    return j;
}

ojson decomposition_json(const Decomposition& d) {
    ojson j;
    j["n_irreps"] = static_cast<int>(d.p.size());
    j["rates"] = d.rates;
    ojson p = ojson::array();
    for (const auto& s : d.p) {
        ojson terms = ojson::array();
        for (const auto& term : s.terms)
            terms.push_back(ojson{{"coeff", term.coeff}, {"rate", term.rate}});
        p.push_back(std::move(terms));
    }
    j["p"] = std::move(p);
    return j;
}

std::vector<ExpSum> parse_expsums(const ojson& j) {
    require_object(j, "decomposition");
    if (!j.contains("p") || !j["p"].is_array())
        throw InputError("decomposition.p: missing or not an array");
    std::vector<ExpSum> out;
    out.reserve(j["p"].size());
    for (std::size_t r = 0; r < j["p"].size(); ++r) {
        const auto& terms = j["p"][r];
        if (!terms.is_array())
            throw InputError("decomposition.p[" + std::to_string(r) + "]: expected an array");
        ExpSum s;
        s.terms.reserve(terms.size());
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const auto& term = terms[i];
            const std::string path =
                "decomposition.p[" + std::to_string(r) + "][" + std::to_string(i) + "]";
            require_object(term, path);
            reject_unknown(term, {"coeff", "rate"}, path);
            if (!term.contains("coeff") || !term.contains("rate"))
                throw InputError(path + ": needs coeff and rate");
            s.terms.push_back({real_value(term["coeff"], path + ".coeff"),
                               real_value(term["rate"], path + ".rate")});
        }
        out.push_back(std::move(s));
    }
    return out;
}

ojson certificate_json(const CertificateReport& rep) {
    ojson j;
    j["conclusion"] = to_string(rep.conclusion);
    if (rep.epsilon_used) j["epsilon_used"] = *rep.epsilon_used;
    ojson irreps = ojson::array();
    for (const auto& v : rep.per_irrep)
        irreps.push_back(ojson{{"r", v.irrep},
                               {"p0", v.value_at_zero},
                               {"dp0", v.derivative_at_zero},
                               {"status", to_string(v.status)},
                               {"resolution", v.resolution}});
    j["irreps"] = std::move(irreps);
    return j;
}

ojson inequality_json(const InequalitySystem& sys) {
    ojson j;
    ojson vars = ojson::array();
    for (const auto& v : sys.variables)
        vars.push_back(ojson{{"name", v.name}, {"classes", v.classes}});
    j["variables"] = std::move(vars);
    ojson rows = ojson::array();
    for (const auto& row : sys.rows) {
        ojson coeffs = ojson::object();
        for (std::size_t v = 0; v < sys.variables.size(); ++v)
            coeffs[sys.variables[v].name] = row.coeffs[v];
        rows.push_back(
            ojson{{"coeffs", std::move(coeffs)}, {"sense", "<="}, {"rhs", 0}, {"irreps", row.irreps}});
    }
    j["rows"] = std::move(rows);
    return j;
}

ojson scan_json(const ScanReport& rep, double t_max, int samples) {
    ojson j;
    j["t_max"] = t_max;
    j["samples"] = samples;
    j["grid_points"] = static_cast<long long>(rep.grid.size());
    ojson minima = ojson::array();
    for (std::size_t r = 0; r < rep.minima.size(); ++r)
        minima.push_back(ojson{{"r", static_cast<int>(r)},
                               {"min", rep.minima[r].min_value},
                               {"argmin_t", rep.minima[r].argmin_t}});
    j["minima"] = std::move(minima);
    if (rep.geometric_minima.empty()) {
        j["geometric_minima"] = nullptr;
    } else {
        ojson geo = ojson::array();
        for (std::size_t r = 0; r < rep.geometric_minima.size(); ++r)
            geo.push_back(ojson{{"r", static_cast<int>(r)},
                                {"min", rep.geometric_minima[r].min_value},
                                {"argmin_t", rep.geometric_minima[r].argmin_t}});
        j["geometric_minima"] = std::move(geo);
    }
    if (rep.first_violation) {
        j["first_violation"] = ojson{{"r", rep.first_violation->irrep},
                                     {"t", rep.first_violation->t},
                                     {"value", rep.first_violation->value}};
    } else {
        j["first_violation"] = nullptr;
    }
    return j;
}

ojson power_json(double residual, double t, int n) {
    return ojson{{"n", n}, {"t", t}, {"max_residual", residual}};
}

ojson sweep_json(const SweepSummary& s) {
    ojson j;
    j["seed"] = s.seed;
    j["trials"] = s.trials;
    j["certified_clean"] = s.certified_clean;
    j["certified_violating"] = s.certified_violating;
    j["uncertified_clean"] = s.uncertified_clean;
    j["uncertified_violating"] = s.uncertified_violating;
    j["boundary_numeric"] = s.boundary_numeric;
    j["fail_unwitnessed"] = s.fail_unwitnessed;
    return j;
}

std::string sweep_csv(const SweepSummary& s) {
    std::ostringstream os;
    os.precision(17);
    os << "trial,lengths,conclusion,min_p,argmin_t\n";
    for (const auto& rec : s.records) {
        os << rec.index << ",";
        for (std::size_t k = 0; k < rec.class_lengths.size(); ++k)
            os << (k ? ";" : "") << rec.class_lengths[k];
        os << "," << to_string(rec.conclusion) << "," << rec.min_p << "," << rec.argmin_t
           << "\n";
    }
    return os.str();
}

ojson load_json_arg(const std::string& arg, const std::string& what) {
    std::string text = arg;
    if (!arg.empty() && arg.front() == '@') {
        std::ifstream in(arg.substr(1));
        if (!in) throw InputError(what + ": cannot read file '" + arg.substr(1) + "'");
        std::ostringstream buffer;
        buffer << in.rdbuf();
        text = buffer.str();
    }
    ojson j = ojson::parse(text, nullptr, false);
    if (j.is_discarded()) throw InputError(what + ": invalid JSON");
    return j;
}

}  // namespace fuspos::io
