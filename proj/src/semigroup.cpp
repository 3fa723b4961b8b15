#include "fuspos/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fuspos/errors.hpp"

namespace fuspos {

namespace {

constexpr double kClassConstancyTol = 1e-12;
constexpr double kImagTol = 1e-9;

void check_value(double v, const std::string& where) {
    if (!std::isfinite(v)) throw InputError(where + ": value is not finite");
    if (v < 0.0) throw InputError(where + ": negative value " + std::to_string(v));
}

LengthFunction finish(GroupPtr g, std::vector<double> class_lengths) {
    const FiniteGroup& grp = *g;
    if (class_lengths[0] != 0.0)
        throw InputError("length function: l(e) = " + std::to_string(class_lengths[0]) +
                         ", must be exactly 0");
    for (int k = 0; k < grp.n_classes(); ++k) {
        int ki = grp.inverse_class[k];
        if (class_lengths[k] != class_lengths[ki]) {
            std::ostringstream os;
            os << "length function: inversion symmetry fails, class " << k << " has length "
               << class_lengths[k] << " but its inverse class " << ki << " has "
               << class_lengths[ki];
            throw InputError(os.str());
        }
    }
    LengthFunction ell;
    ell.group = std::move(g);
    ell.distinct_rates = class_lengths;
    std::sort(ell.distinct_rates.begin(), ell.distinct_rates.end());
    ell.distinct_rates.erase(std::unique(ell.distinct_rates.begin(), ell.distinct_rates.end()),
                             ell.distinct_rates.end());
    ell.class_lengths = std::move(class_lengths);
    return ell;
}

}  // namespace

LengthFunction validate_length_per_element(GroupPtr g, std::span<const double> values) {
    if (!g) throw InputError("length function: null group");
    if (static_cast<int>(values.size()) != g->order)
        throw InputError("length function: got " + std::to_string(values.size()) +
                         " per-element values for a group of order " + std::to_string(g->order));
    for (std::size_t i = 0; i < values.size(); ++i)
        check_value(values[i], "length function (element " + std::to_string(i) + ")");

    std::vector<double> class_lengths(g->n_classes());
    for (int k = 0; k < g->n_classes(); ++k) {
        double ref = values[g->classes[k].front()];
        for (int e : g->classes[k]) {
            if (std::abs(values[e] - ref) > kClassConstancyTol) {
                std::ostringstream os;
                os << "length function: not a class function, elements "
                   << g->classes[k].front() << " and " << e << " are conjugate but have lengths "
                   << ref << " and " << values[e];
                throw InputError(os.str());
            }
        }
        class_lengths[k] = ref == 0.0 ? 0.0 : ref;
    }
    return finish(std::move(g), std::move(class_lengths));
}

LengthFunction validate_length_per_class(GroupPtr g, std::span<const double> values) {
    if (!g) throw InputError("length function: null group");
    if (static_cast<int>(values.size()) != g->n_classes())
        throw InputError("length function: got " + std::to_string(values.size()) +
                         " per-class values for a group with " + std::to_string(g->n_classes()) +
                         " classes");
    std::vector<double> class_lengths(values.begin(), values.end());
    for (int k = 0; k < g->n_classes(); ++k) {
        check_value(class_lengths[k], "length function (class " + std::to_string(k) + ")");
        if (class_lengths[k] == 0.0) class_lengths[k] = 0.0;  // normalize -0.0
    }
    return finish(std::move(g), std::move(class_lengths));
}

double eval(const ExpSum& s, double t) {
    if (!std::isfinite(t) || t < 0.0)
        throw InputError("ExpSum eval: t must be finite and >= 0, got " + std::to_string(t));
    double acc = 0.0;
    for (const auto& term : s.terms) acc += term.coeff * std::exp(-term.rate * t);
    return acc;
}

double derivative_at_zero(const ExpSum& s, int m) {
    if (m < 0 || m > 8)
        throw InputError("ExpSum derivative_at_zero: order must be in [0, 8], got " +
                         std::to_string(m));
    double acc = 0.0;
    for (const auto& term : s.terms) {
        double p = 1.0;
        for (int i = 0; i < m; ++i) p *= -term.rate;
        acc += term.coeff * p;
    }
    return acc;
}

Decomposition decompose(TablePtr ct, const LengthFunction& ell) {
    if (!ct) throw InputError("decompose: null character table");
    if (ell.group.get() != ct->group.get())
        throw InputError("decompose: length function and character table belong to different groups");

    const int n_irreps = ct->n_irreps;
    const int n_classes = ct->group->n_classes();
    const int n_rates = static_cast<int>(ell.distinct_rates.size());
    const double order = static_cast<double>(ct->group->order);

    // class -> rate slot, exact match by construction
    std::vector<int> rate_of_class(n_classes);
    for (int k = 0; k < n_classes; ++k) {
        auto it = std::lower_bound(ell.distinct_rates.begin(), ell.distinct_rates.end(),
                                   ell.class_lengths[k]);
        rate_of_class[k] = static_cast<int>(it - ell.distinct_rates.begin());
    }

    Decomposition d;
    d.table = ct;
    d.rates = ell.distinct_rates;
    d.p.resize(n_irreps);
    for (int r = 0; r < n_irreps; ++r) {
        std::vector<cdouble> acc(n_rates, cdouble{0.0, 0.0});
        for (int k = 0; k < n_classes; ++k)
            acc[rate_of_class[k]] +=
                static_cast<double>(ct->class_sizes[k]) * std::conj(ct->at(r, k));
        ExpSum& p = d.p[r];
        p.terms.resize(n_rates);
        for (int j = 0; j < n_rates; ++j) {
            cdouble c = acc[j] / order;
            if (std::abs(c.imag()) >= kImagTol) {
                std::ostringstream os;
                os << "decompose: coefficient of irrep " << r << " at rate "
                   << ell.distinct_rates[j] << " has imaginary part " << c.imag()
                   << " (invalid length function slipped validation?)";
                throw NumericalError(os.str());
            }
            p.terms[j] = {c.real(), ell.distinct_rates[j]};
        }
    }
    return d;
}

}  // namespace fuspos
