#include "ringdyn/bracket.hpp"

#include "ringdyn/errors.hpp"

namespace ringdyn {

namespace {

// An expression depends on coordinate v either directly or through a
// derivative symbol of a declared function with v among its arguments.
bool depends_on(const Expr& e, VariableId v, const PhaseSpaceRegistry& reg) {
    if (e.contains(v)) return true;
    if (!reg.is_coordinate(v) || reg.info(v).family != VarFamily::SystemX) return false;
    std::set<VariableId> vars;
    e.collect_variables(vars);
    for (VariableId w : vars)
        if (reg.is_function_deriv(w)) return true;
    return false;
}

} // namespace

Expr poisson(const Expr& f, const Expr& g) {
    const RegistryPtr& reg = f.registry() ? f.registry() : g.registry();
    if (!reg) return Expr();
    if (g.registry() && f.registry() && g.registry() != f.registry())
        throw symalg_error("poisson: operands belong to different registries");
    Expr sum = Expr::zero(reg);
    for (const auto& [coord, mom] : reg->canonical_pairs()) {
        const bool f_c = depends_on(f, coord, *reg), f_m = f.contains(mom);
        const bool g_c = depends_on(g, coord, *reg), g_m = g.contains(mom);
        if (f_c && g_m)
            sum = sum + differentiate(f, coord) * differentiate(g, mom);
        if (f_m && g_c)
            sum = sum - differentiate(f, mom) * differentiate(g, coord);
    }
    return sum;
}

} // namespace ringdyn
