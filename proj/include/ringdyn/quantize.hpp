// quantize.hpp — commutator promotion of the Dirac-bracket algebra
//
// Entries report the coefficient of i*hbar, i.e. the weakly reduced Dirac
// bracket. Operator ordering is deliberately not resolved: any entry whose
// coefficient depends on coordinates or momenta is flagged ordering-ambiguous.

#pragma once

#include "ringdyn/dirac_bergmann.hpp"

#include <string>
#include <vector>

namespace ringdyn {

struct CommutatorEntry {
    std::string left;
    std::string right;
    Expr coefficient;
    bool ordering_ambiguous{false};
};

// Coefficient of i*hbar in [f^, g^]: the weakly reduced Dirac bracket.
Expr commutator(const Expr& f, const Expr& g, const ConstraintAnalysis& analysis);

// All ordered pairs over {x_i, p_i, Q, P}, optionally extended by the bath
// variables (which keep their canonical brackets).
std::vector<CommutatorEntry> commutator_table(const ConstraintAnalysis& analysis,
                                              bool include_bath = false);

// {H_S, H_E}_D, weakly reduced; nonzero whenever the constraint genuinely
// couples the two sectors.
Expr noncommutativity_witness(const Expr& h_system, const Expr& h_environment,
                              const ConstraintAnalysis& analysis);

// Jacobi cyclic sum of nested Dirac brackets, evaluated at each on-surface
// point. A pole at one point is reported as NaN; other points proceed.
std::vector<double> jacobi_residual(const Expr& f, const Expr& g, const Expr& h,
                                    const ConstraintAnalysis& analysis,
                                    const std::vector<std::map<VariableId, double>>& points);

// Symbolic Jacobi cyclic sum, weakly reduced (exact-zero check for variables).
Expr jacobi_cycle(const Expr& f, const Expr& g, const Expr& h,
                  const ConstraintAnalysis& analysis);

// Formal M -> infinity limit: ratio of the leading-in-M parts of numerator
// and denominator.
Expr leading_term_in(const Expr& e, VariableId v);

} // namespace ringdyn
