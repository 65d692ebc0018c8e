#include "ringdyn/quantize.hpp"

#include "ringdyn/errors.hpp"

#include <cmath>
#include <limits>

namespace ringdyn {

namespace {

bool depends_on_phase_space(const Expr& e, const PhaseSpaceRegistry& reg) {
    std::set<VariableId> vars;
    e.collect_variables(vars);
    for (VariableId v : vars)
        if (reg.is_coordinate(v) || reg.is_momentum(v) || reg.is_function_deriv(v)) return true;
    return false;
}

CommutatorEntry make_entry(VariableId left, VariableId right, const ConstraintAnalysis& analysis) {
    const RegistryPtr& reg = analysis.registry;
    CommutatorEntry entry;
    entry.left = reg->name(left);
    entry.right = reg->name(right);
    entry.coefficient =
        commutator(Expr::variable(reg, left), Expr::variable(reg, right), analysis);
    entry.ordering_ambiguous = depends_on_phase_space(entry.coefficient, *reg);
    return entry;
}

} // namespace

Expr commutator(const Expr& f, const Expr& g, const ConstraintAnalysis& analysis) {
    return dirac(f, g, analysis);
}

std::vector<CommutatorEntry> commutator_table(const ConstraintAnalysis& analysis,
                                              bool include_bath) {
    const RegistryPtr& reg = analysis.registry;
    std::vector<VariableId> vars;
    for (int i = 1; i <= reg->dimension(); ++i) vars.push_back(reg->x(i));
    for (int i = 1; i <= reg->dimension(); ++i) vars.push_back(reg->p(i));
    vars.push_back(reg->Q());
    vars.push_back(reg->P());
    if (include_bath) {
        for (int j = 1; j <= reg->bath_modes(); ++j) vars.push_back(reg->q(j));
        for (int j = 1; j <= reg->bath_modes(); ++j) vars.push_back(reg->pq(j));
    }
    std::vector<CommutatorEntry> table;
    table.reserve(vars.size() * (vars.size() - 1) / 2);
    for (std::size_t a = 0; a < vars.size(); ++a)
        for (std::size_t b = a + 1; b < vars.size(); ++b)
            table.push_back(make_entry(vars[a], vars[b], analysis));
    return table;
}

Expr noncommutativity_witness(const Expr& h_system, const Expr& h_environment,
                              const ConstraintAnalysis& analysis) {
    return dirac(h_system, h_environment, analysis);
}

Expr jacobi_cycle(const Expr& f, const Expr& g, const Expr& h,
                  const ConstraintAnalysis& analysis) {
    const Expr sum = dirac(f, dirac(g, h, analysis), analysis) +
                     dirac(g, dirac(h, f, analysis), analysis) +
                     dirac(h, dirac(f, g, analysis), analysis);
    return analysis.weak(sum);
}

std::vector<double> jacobi_residual(const Expr& f, const Expr& g, const Expr& h,
                                    const ConstraintAnalysis& analysis,
                                    const std::vector<std::map<VariableId, double>>& points) {
    const Expr cycle = jacobi_cycle(f, g, h, analysis);
    std::vector<double> residuals;
    residuals.reserve(points.size());
    for (const auto& point : points) {
        try {
            residuals.push_back(evaluate(cycle, point));
        } catch (const symalg_error&) {
            residuals.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    }
    return residuals;
}

Expr leading_term_in(const Expr& e, VariableId v) {
    const RegistryPtr& reg = e.registry();
    if (e.is_zero()) return e;
    auto leading_part = [&](const Poly& p) {
        const int deg = p.degree_in(v);
        auto coeffs = p.coefficients_in(v);
        return coeffs[static_cast<std::size_t>(deg)];
    };
    return Expr::ratio(reg, leading_part(e.num()), leading_part(e.den()));
}

} // namespace ringdyn
