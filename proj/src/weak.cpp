#include "ringdyn/weak.hpp"

#include "ringdyn/errors.hpp"
#include "ringdyn/parser.hpp"

namespace ringdyn {

namespace {

bool is_phase_variable(const PhaseSpaceRegistry& reg, VariableId v) {
    return reg.is_coordinate(v) || reg.is_momentum(v);
}

// phase-space part of a monomial (parameters and derivative symbols stripped)
Monomial core_of(const Monomial& mon, const PhaseSpaceRegistry& reg) {
    Monomial core;
    for (const auto& [v, e] : mon.powers)
        if (is_phase_variable(reg, v)) core.powers.emplace_back(v, e);
    return core;
}

Monomial coeff_part_of(const Monomial& mon, const PhaseSpaceRegistry& reg) {
    Monomial rest;
    for (const auto& [v, e] : mon.powers)
        if (!is_phase_variable(reg, v)) rest.powers.emplace_back(v, e);
    return rest;
}

// pure lexicographic order by variable precedence (degree plays no role):
// the monomial with the higher exponent at the first differing high-precedence
// variable is greater
bool lex_greater(const Monomial& a, const Monomial& b) {
    std::size_t i = 0, j = 0;
    while (i < a.powers.size() && j < b.powers.size()) {
        const auto& [va, ea] = a.powers[i];
        const auto& [vb, eb] = b.powers[j];
        if (va == vb) {
            if (ea != eb) return ea > eb;
            ++i;
            ++j;
        } else {
            return va < vb;
        }
    }
    return i < a.powers.size();
}

// A rule compiled into a canonicalizing operation. Patterns v (or v*w with
// both exponents 1) eliminate one variable by substitution; patterns v^k
// reduce the v-degree below k. Together these give a canonical form on the
// surface: substituted variables are absent and power-variable degrees are
// bounded, so an element is weakly zero iff its reduced numerator is zero.
struct CompiledRule {
    enum class Kind { Substitution, Power };
    Kind kind;
    VariableId var;
    int exponent{1};
    Expr value;
};

CompiledRule compile_rule(const RewriteRule& rule) {
    const auto& powers = rule.pattern.powers;
    const RegistryPtr& reg = rule.replacement.registry();
    if (powers.size() == 1) {
        const auto [v, e] = powers[0];
        if (rule.replacement.contains(v))
            throw engine_error("weak_reduce: solved form re-introduces its own variable");
        if (e == 1) return {CompiledRule::Kind::Substitution, v, 1, rule.replacement};
        return {CompiledRule::Kind::Power, v, e, rule.replacement};
    }
    if (powers.size() == 2 && powers[0].second == 1 && powers[1].second == 1) {
        // pattern v*w: solve for the lower-precedence factor, w := value / v
        const VariableId keep = powers[0].first;
        const VariableId elim = powers[1].first;
        const Expr value = rule.replacement / Expr::variable(reg, keep);
        if (value.contains(elim))
            throw engine_error("weak_reduce: solved form re-introduces its own variable");
        return {CompiledRule::Kind::Substitution, elim, 1, value};
    }
    throw engine_error("weak_reduce: unsupported constraint pattern shape");
}

// Rewrites v^(qk+s) -> value^q v^s in numerator and denominator.
Expr reduce_power(const Expr& e, const CompiledRule& rule) {
    const RegistryPtr& reg = e.registry();
    auto reduce_side = [&](const Poly& poly) {
        Expr out = Expr::zero(reg);
        const auto coeffs = poly.coefficients_in(rule.var);
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            const int q = static_cast<int>(j) / rule.exponent;
            const int s = static_cast<int>(j) % rule.exponent;
            Expr piece = Expr::from_poly(reg, coeffs[j]) * rule.value.pow(q);
            if (s > 0) piece = piece * Expr::from_poly(reg, Poly::variable(rule.var, s));
            out = out + piece;
        }
        return out;
    };
    return reduce_side(e.num()) / reduce_side(e.den());
}

bool power_reducible(const Expr& e, const CompiledRule& rule) {
    return e.num().degree_in(rule.var) >= rule.exponent ||
           e.den().degree_in(rule.var) >= rule.exponent;
}

} // namespace

RewriteRule solve_constraint(const Expr& constraint) {
    const RegistryPtr& reg = constraint.registry();
    if (!reg || constraint.is_zero())
        throw engine_error("solve_constraint: constraint is identically zero");
    const Poly& num = constraint.num();

    // lex-greatest phase-space core of the numerator
    Monomial pattern;
    bool found = false;
    for (const auto& term : num.terms()) {
        Monomial core = core_of(term.mon, *reg);
        if (core.is_one()) continue;
        if (!found || lex_greater(core, pattern)) {
            pattern = core;
            found = true;
        }
    }
    if (!found)
        throw engine_error("solve_constraint: constraint has no phase-space content");

    // split numerator: coeff(pattern) * pattern + remainder
    Poly coeff, remainder;
    for (const auto& term : num.terms()) {
        Poly single;
        {
            std::map<Monomial, Rational, GrlexGreater> one;
            one[term.mon] = term.coeff;
            single = Poly::from_map(std::move(one));
        }
        if (core_of(term.mon, *reg) == pattern) {
            std::map<Monomial, Rational, GrlexGreater> one;
            one[coeff_part_of(term.mon, *reg)] = term.coeff;
            coeff = coeff + Poly::from_map(std::move(one));
        } else {
            remainder = remainder + single;
        }
    }
    for (const auto& term : coeff.terms())
        for (const auto& [v, e] : term.mon.powers)
            if (is_phase_variable(*reg, v))
                throw engine_error(
                    "solve_constraint: leading coefficient depends on phase-space variables");

    RewriteRule rule;
    rule.pattern = pattern;
    rule.replacement = Expr::ratio(reg, -remainder, coeff);

    // the solved value must not be reducible by its own pattern
    for (const auto& term : rule.replacement.num().terms())
        if (pattern.divides(term.mon))
            throw engine_error("solve_constraint: non-terminating solved form");
    for (const auto& term : rule.replacement.den().terms())
        if (pattern.divides(term.mon))
            throw engine_error("solve_constraint: non-terminating solved form");
    return rule;
}

std::vector<RewriteRule> solved_rules(const std::vector<Expr>& constraints) {
    std::vector<RewriteRule> rules;
    rules.reserve(constraints.size());
    for (const auto& c : constraints) rules.push_back(solve_constraint(c));
    return rules;
}

Expr weak_reduce(const Expr& e, const std::vector<RewriteRule>& rules, std::size_t step_budget) {
    if (rules.empty() || e.is_zero()) return e;
    std::vector<CompiledRule> compiled;
    compiled.reserve(rules.size());
    for (const auto& rule : rules) compiled.push_back(compile_rule(rule));

    Expr out = e;
    for (std::size_t step = 0;; ++step) {
        if (step >= step_budget)
            throw engine_error("weak_reduce: step budget exhausted (unsupported constraint shape)");
        bool changed = false;
        for (const auto& rule : compiled) {
            if (rule.kind == CompiledRule::Kind::Substitution) {
                if (!out.contains(rule.var)) continue;
                out = substitute(out, {{rule.var, rule.value}});
                changed = true;
            } else if (power_reducible(out, rule)) {
                out = reduce_power(out, rule);
                changed = true;
            }
        }
        if (!changed) break;
    }
    return out;
}

} // namespace ringdyn
