#include "ringdyn/dirac_bergmann.hpp"

#include "ringdyn/errors.hpp"
#include "ringdyn/parser.hpp"

#include <algorithm>

namespace ringdyn {

namespace {

// flip sign so the numerator's grlex-leading coefficient is positive
Expr sign_normalized(const Expr& e) {
    if (e.is_zero()) return e;
    if (e.num().leading().coeff < 0) return -e;
    return e;
}

std::vector<Expr> constraint_exprs(const std::vector<Constraint>& cs) {
    std::vector<Expr> out;
    out.reserve(cs.size());
    for (const auto& c : cs) out.push_back(c.expr);
    return out;
}

std::vector<std::vector<Expr>> bracket_matrix(const std::vector<Constraint>& cs,
                                              const std::vector<RewriteRule>& rules) {
    const std::size_t n = cs.size();
    std::vector<std::vector<Expr>> mat(n, std::vector<Expr>(n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            if (a == b) {
                mat[a][b] = Expr::zero(cs[a].expr.registry());
                continue;
            }
            mat[a][b] = weak_reduce(poisson(cs[a].expr, cs[b].expr), rules);
            mat[b][a] = -mat[a][b];
        }
    }
    return mat;
}

// Gauss-Jordan inverse over the rational-function field; entries are weakly
// reduced after every update. Pivot choice: weakly nonzero entry of lowest
// numerator total degree.
std::vector<std::vector<Expr>> invert_matrix(const std::vector<std::vector<Expr>>& mat,
                                             const std::vector<RewriteRule>& rules,
                                             const RegistryPtr& reg) {
    const std::size_t n = mat.size();
    for (const auto& row : mat) {
        bool all_zero = true;
        for (const auto& e : row)
            if (!e.is_zero()) { all_zero = false; break; }
        if (all_zero)
            throw engine_error("constraint matrix is structurally singular (zero row); "
                               "a constraint appears to be first-class");
    }

    std::vector<std::vector<Expr>> a = mat;
    std::vector<std::vector<Expr>> inv(n, std::vector<Expr>(n, Expr::zero(reg)));
    const Expr one = Expr::constant(reg, Rational(1));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = one;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = n;
        int best_degree = 0;
        for (std::size_t row = col; row < n; ++row) {
            if (a[row][col].is_zero()) continue;
            const int deg = a[row][col].num().total_degree();
            if (pivot == n || deg < best_degree) {
                pivot = row;
                best_degree = deg;
            }
        }
        if (pivot == n)
            throw engine_error("constraint matrix is weakly singular (no usable pivot); "
                               "the surface point may be degenerate");
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        const Expr p = a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] = weak_reduce(a[col][j] / p, rules);
            inv[col][j] = weak_reduce(inv[col][j] / p, rules);
        }
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col].is_zero()) continue;
            const Expr factor = a[row][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[row][j] = weak_reduce(a[row][j] - factor * a[col][j], rules);
                inv[row][j] = weak_reduce(inv[row][j] - factor * inv[col][j], rules);
            }
        }
    }
    return inv;
}

} // namespace

Expr ConstraintAnalysis::total_hamiltonian() const {
    Expr h = hamiltonian;
    for (std::size_t k = 0; k < primary_count; ++k)
        h = h + multipliers[k] * constraints[k].expr;
    return h;
}

ConstraintAnalysis run_dirac_bergmann(const Expr& hamiltonian, const std::vector<Expr>& primary,
                                      int max_generations) {
    if (primary.empty()) throw engine_error("run_dirac_bergmann: no primary constraints");
    const RegistryPtr reg = hamiltonian.registry();

    ConstraintAnalysis analysis;
    analysis.registry = reg;
    analysis.hamiltonian = hamiltonian;
    analysis.primary_count = primary.size();
    for (const auto& c : primary) {
        if (c.is_zero())
            throw engine_error("run_dirac_bergmann: primary constraint is identically zero");
        // keep the caller's sign so the multipliers refer to the given function
        analysis.constraints.push_back({c, 0, ConstraintClass::Unclassified});
    }

    for (int generation = 1;; ++generation) {
        if (generation > max_generations)
            throw engine_error("run_dirac_bergmann: generation budget exceeded");
        const auto rules = solved_rules(constraint_exprs(analysis.constraints));
        bool added = false;
        const std::size_t count = analysis.constraints.size();
        for (std::size_t j = 0; j < count; ++j) {
            const Expr& phi_j = analysis.constraints[j].expr;
            // lambda coefficients in {H + sum lambda_k phi_k, phi_j}
            bool lambda_involved = false;
            for (std::size_t k = 0; k < analysis.primary_count && !lambda_involved; ++k) {
                if (!weakly_zero(poisson(analysis.constraints[k].expr, phi_j), rules))
                    lambda_involved = true;
            }
            if (lambda_involved) continue; // fixes a multiplier, no new constraint
            const Expr residual = weak_reduce(poisson(hamiltonian, phi_j), rules);
            if (residual.is_zero()) continue;
            analysis.constraints.push_back(
                {sign_normalized(residual), generation, ConstraintClass::Unclassified});
            added = true;
        }
        if (!added) break;
    }

    analysis.rules = solved_rules(constraint_exprs(analysis.constraints));
    analysis.constraint_matrix = bracket_matrix(analysis.constraints, analysis.rules);

    for (std::size_t a = 0; a < analysis.constraints.size(); ++a) {
        bool row_nonzero = false;
        for (const auto& e : analysis.constraint_matrix[a])
            if (!e.is_zero()) { row_nonzero = true; break; }
        analysis.constraints[a].cls =
            row_nonzero ? ConstraintClass::SecondClass : ConstraintClass::FirstClass;
    }

    const bool all_second_class =
        std::all_of(analysis.constraints.begin(), analysis.constraints.end(),
                    [](const Constraint& c) { return c.cls == ConstraintClass::SecondClass; });
    if (all_second_class) {
        analysis.inverse_matrix =
            invert_matrix(analysis.constraint_matrix, analysis.rules, reg);
        analysis.multipliers = solve_multipliers(analysis);
    }
    return analysis;
}

std::vector<Expr> solve_multipliers(const ConstraintAnalysis& analysis) {
    for (const auto& c : analysis.constraints)
        if (c.cls == ConstraintClass::FirstClass)
            throw engine_error("solve_multipliers: first-class constraint present");

    const RegistryPtr& reg = analysis.registry;
    const std::size_t np = analysis.primary_count;
    const std::size_t n = analysis.constraints.size();

    // equations: sum_k lambda_k {phi_k, phi_j} = -{H, phi_j}, one per
    // constraint j whose row involves a multiplier
    struct Row {
        std::vector<Expr> coeff;
        Expr rhs;
    };
    std::vector<Row> rows;
    for (std::size_t j = 0; j < n; ++j) {
        Row row;
        bool nonzero = false;
        for (std::size_t k = 0; k < np; ++k) {
            row.coeff.push_back(analysis.constraint_matrix[k][j]);
            if (!row.coeff.back().is_zero()) nonzero = true;
        }
        row.rhs = -analysis.weak(poisson(analysis.hamiltonian, analysis.constraints[j].expr));
        if (nonzero) {
            rows.push_back(std::move(row));
        } else if (!row.rhs.is_zero()) {
            throw engine_error("solve_multipliers: inconsistent consistency condition "
                               "(residual survived the algorithm)");
        }
    }
    if (rows.empty())
        throw engine_error("solve_multipliers: singular multiplier system "
                           "(no equation involves a multiplier)");

    // exact elimination over the rational-function field, lowest-degree pivots
    std::vector<Expr> solution(np, Expr::zero(reg));
    std::vector<bool> solved(np, false);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < np; ++col) {
        std::size_t pivot = rows.size();
        int best_degree = 0;
        for (std::size_t r = rank; r < rows.size(); ++r) {
            if (rows[r].coeff[col].is_zero()) continue;
            const int deg = rows[r].coeff[col].num().total_degree();
            if (pivot == rows.size() || deg < best_degree) {
                pivot = r;
                best_degree = deg;
            }
        }
        if (pivot == rows.size()) continue;
        std::swap(rows[pivot], rows[rank]);
        const Expr p = rows[rank].coeff[col];
        for (std::size_t c = 0; c < np; ++c)
            rows[rank].coeff[c] = analysis.weak(rows[rank].coeff[c] / p);
        rows[rank].rhs = analysis.weak(rows[rank].rhs / p);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r].coeff[col].is_zero()) continue;
            const Expr factor = rows[r].coeff[col];
            for (std::size_t c = 0; c < np; ++c)
                rows[r].coeff[c] = analysis.weak(rows[r].coeff[c] - factor * rows[rank].coeff[c]);
            rows[r].rhs = analysis.weak(rows[r].rhs - factor * rows[rank].rhs);
        }
        ++rank;
    }

    // back-read: after Gauss-Jordan each pivot row has a single unit coefficient
    std::size_t solved_count = 0;
    for (const auto& row : rows) {
        std::size_t unit_col = np;
        bool clean = true;
        for (std::size_t c = 0; c < np; ++c) {
            if (row.coeff[c].is_zero()) continue;
            if (unit_col != np) { clean = false; break; }
            unit_col = c;
        }
        if (unit_col == np) {
            if (!row.rhs.is_zero())
                throw engine_error("solve_multipliers: inconsistent multiplier system");
            continue;
        }
        if (!clean) continue;
        solution[unit_col] = analysis.weak(row.rhs / row.coeff[unit_col]);
        solved[unit_col] = true;
        ++solved_count;
    }
    if (solved_count < np)
        throw engine_error("solve_multipliers: singular multiplier system "
                           "(undetermined multiplier; first-class content)");
    return solution;
}

Expr dirac(const Expr& f, const Expr& g, const ConstraintAnalysis& analysis) {
    if (analysis.inverse_matrix.empty())
        throw engine_error("dirac: analysis lacks an invertible constraint matrix");
    const std::size_t n = analysis.constraints.size();
    Expr out = poisson(f, g);
    for (std::size_t a = 0; a < n; ++a) {
        const Expr fa = poisson(f, analysis.constraints[a].expr);
        if (fa.is_zero()) continue;
        for (std::size_t b = 0; b < n; ++b) {
            if (analysis.inverse_matrix[a][b].is_zero()) continue;
            const Expr bg = poisson(analysis.constraints[b].expr, g);
            if (bg.is_zero()) continue;
            out = out - fa * analysis.inverse_matrix[a][b] * bg;
        }
    }
    return analysis.weak(out);
}

std::map<VariableId, Expr> equations_of_motion(const ConstraintAnalysis& analysis,
                                               const std::vector<VariableId>& variables) {
    std::map<VariableId, Expr> out;
    for (VariableId v : variables)
        out.emplace(v, dirac(Expr::variable(analysis.registry, v), analysis.hamiltonian, analysis));
    return out;
}

} // namespace ringdyn
