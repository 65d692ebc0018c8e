// weak.hpp — weak equality: monomial rewriting modulo the constraint surface
//
// Each second-class constraint in solved form contributes one rule replacing
// its leading phase-space monomial, e.g. Q^2 -> x.x and Q*P -> (M/m) x.p.
// Reduction canonicalizes: a product pattern v*w eliminates its lower-
// precedence factor by substitution (w := value/v) and a power pattern v^k
// bounds the v-degree below k, so weakly equal expressions share one normal
// form; derivative symbols are never rewritten.

#pragma once

#include "ringdyn/expr.hpp"

#include <vector>

namespace ringdyn {

struct RewriteRule {
    Monomial pattern; // phase-space (core) monomial being eliminated
    Expr replacement; // solved value; already in reduced form
};

// Extracts a rule from a constraint by solving it for its lex-greatest
// phase-space monomial. Throws engine_error for shapes that cannot be
// solved this way (non-monomial leading part, parameter-dependent pattern
// mixing, or a replacement that would not terminate).
RewriteRule solve_constraint(const Expr& constraint);

std::vector<RewriteRule> solved_rules(const std::vector<Expr>& constraints);

// Fixpoint reduction; idempotent. Throws engine_error if the step budget is
// exhausted (signals an unsupported constraint shape).
Expr weak_reduce(const Expr& e, const std::vector<RewriteRule>& rules,
                 std::size_t step_budget = 100000);

inline bool weakly_zero(const Expr& e, const std::vector<RewriteRule>& rules) {
    return equals_zero(weak_reduce(e, rules));
}

inline bool weak_equal(const Expr& a, const Expr& b, const std::vector<RewriteRule>& rules) {
    return weakly_zero(a - b, rules);
}

} // namespace ringdyn
