// dirac_bergmann.hpp — consistency algorithm, multipliers, Dirac brackets

#pragma once

#include "ringdyn/bracket.hpp"
#include "ringdyn/weak.hpp"

#include <map>
#include <vector>

namespace ringdyn {

enum class ConstraintClass { Unclassified, FirstClass, SecondClass };

struct Constraint {
    Expr expr;
    int generation{0}; // 0 = primary
    ConstraintClass cls{ConstraintClass::Unclassified};
};

struct ConstraintAnalysis {
    RegistryPtr registry;
    Expr hamiltonian;
    std::vector<Constraint> constraints;
    std::size_t primary_count{0};
    std::vector<RewriteRule> rules; // solved forms of all constraints
    // constraint_matrix[a][b] = weak({phi_a, phi_b}); antisymmetric
    std::vector<std::vector<Expr>> constraint_matrix;
    std::vector<std::vector<Expr>> inverse_matrix;
    std::vector<Expr> multipliers; // one per primary constraint

    Expr weak(const Expr& e) const { return weak_reduce(e, rules); }
    bool weakly_zero(const Expr& e) const { return equals_zero(weak(e)); }
    // H + sum_k lambda_k phi_k over the primary constraints
    Expr total_hamiltonian() const;
};

// Iterates the consistency conditions {H + sum lambda_k phi_k, phi_j} ~ 0,
// appending new constraints until stable, then classifies, inverts the
// constraint matrix, and solves the multipliers.
ConstraintAnalysis run_dirac_bergmann(const Expr& hamiltonian, const std::vector<Expr>& primary,
                                      int max_generations = 10);

// Exact solve of the multiplier system by fraction-free elimination; requires
// all constraints second-class. Throws engine_error("singular multiplier
// system") when the system does not determine every multiplier.
std::vector<Expr> solve_multipliers(const ConstraintAnalysis& analysis);

// {f,g}_D = {f,g} - sum_ab {f,phi_a} (C^-1)_ab {phi_b,g}, weakly reduced.
Expr dirac(const Expr& f, const Expr& g, const ConstraintAnalysis& analysis);

// dA/dt = {A, H}_D per requested variable, weakly reduced.
std::map<VariableId, Expr> equations_of_motion(const ConstraintAnalysis& analysis,
                                               const std::vector<VariableId>& variables);

} // namespace ringdyn
