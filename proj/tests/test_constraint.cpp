#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ringdyn/errors.hpp"
#include "ringdyn/model.hpp"
#include "ringdyn/parser.hpp"

using namespace ringdyn;

namespace {

ModelContext ring_context(int modes = 0) {
    ModelSpec spec;
    spec.potential = PotentialKind::Harmonic;
    spec.bath.mode_count = modes;
    spec.bath.eta = modes > 0 ? 0.5 : 0.0;
    return build_model_context(spec);
}

Expr var(const RegistryPtr& reg, VariableId v) { return Expr::variable(reg, v); }

} // namespace

TEST_CASE("canonical Poisson brackets") {
    auto reg = PhaseSpaceRegistry::make(2, 1);
    CHECK(poisson(var(reg, reg->x(1)), var(reg, reg->p(1))) == Expr::integer(reg, 1));
    CHECK(poisson(var(reg, reg->x(1)), var(reg, reg->p(2))).is_zero());
    CHECK(poisson(var(reg, reg->Q()), var(reg, reg->P())) == Expr::integer(reg, 1));
    CHECK(poisson(var(reg, reg->q(1)), var(reg, reg->pq(1))) == Expr::integer(reg, 1));
    CHECK(poisson(var(reg, reg->q(1)), var(reg, reg->P())).is_zero());
    // opaque potential follows the chain rule
    CHECK(poisson(parse("V(x)", reg), var(reg, reg->p(1))) == parse("dV_1", reg));
}

TEST_CASE("poisson is antisymmetric, bilinear, Leibniz") {
    auto reg = PhaseSpaceRegistry::make(2, 0);
    const Expr f = parse("x1^2*p2 + Q*P/m", reg);
    const Expr g = parse("dot(x,p) + V(x)", reg);
    const Expr h = parse("Q^2 - dot(x,x)", reg);
    CHECK(poisson(f, g) == -poisson(g, f));
    CHECK(poisson(f + g, h) == poisson(f, h) + poisson(g, h));
    CHECK(poisson(f * g, h) == f * poisson(g, h) + poisson(f, h) * g);
    CHECK(poisson(f, f).is_zero());
}

TEST_CASE("constraint solving produces rewrite rules") {
    auto reg = PhaseSpaceRegistry::make(2, 0);
    const Expr phi = parse("dot(x,x) - Q^2", reg);
    const RewriteRule rule = solve_constraint(phi);
    CHECK(rule.pattern == Monomial::variable(reg->Q(), 2));
    CHECK(rule.replacement == parse("dot(x,x)", reg));

    const Expr chi = parse("2*dot(x,p)/m - 2*Q*P/M", reg);
    const RewriteRule rule2 = solve_constraint(chi);
    CHECK(rule2.pattern == Monomial::variable(reg->Q()) * Monomial::variable(reg->P()));
    CHECK(rule2.replacement == parse("(M/m)*dot(x,p)", reg));
}

TEST_CASE("weak reduction examples") {
    auto reg = PhaseSpaceRegistry::make(2, 0);
    const auto rules = solved_rules({parse("dot(x,x) - Q^2", reg),
                                     parse("2*dot(x,p)/m - 2*Q*P/M", reg)});
    CHECK(weak_reduce(parse("M*dot(x,x) + m*Q^2", reg), rules) ==
          parse("(M+m)*dot(x,x)", reg));
    CHECK(weak_reduce(parse("2*dot(x,p)/m - 2*Q*P/M", reg), rules).is_zero());
    const Expr l3 = parse("x1*p2 - x2*p1", reg);
    CHECK(weak_reduce(l3, rules) == l3);
    // idempotent
    const Expr e = parse("Q^3*P + x1*Q^2", reg);
    CHECK(weak_reduce(weak_reduce(e, rules), rules) == weak_reduce(e, rules));
}

TEST_CASE("unsupported constraint shapes are rejected") {
    auto reg = PhaseSpaceRegistry::make(2, 0);
    // no phase-space content to solve for
    CHECK_THROWS_AS((void)solve_constraint(parse("m - 2", reg)), engine_error);
    CHECK_THROWS_AS((void)solve_constraint(Expr::zero(reg)), engine_error);
}

TEST_CASE("Dirac-Bergmann run on the ring model") {
    const ModelContext ctx = ring_context();
    const auto analysis = run_dirac_bergmann(ctx.h_total, {ctx.primary_constraint});
    REQUIRE(analysis.constraints.size() == 2);
    CHECK(analysis.primary_count == 1);
    CHECK(analysis.constraints[0].generation == 0);
    CHECK(analysis.constraints[1].generation == 1);
    CHECK(analysis.constraints[0].cls == ConstraintClass::SecondClass);
    CHECK(analysis.constraints[1].cls == ConstraintClass::SecondClass);

    const Expr chi = parse("2*dot(x,p)/m - 2*Q*P/M", ctx.registry);
    const Expr ratio = analysis.constraints[1].expr / chi;
    CHECK(ratio.is_constant());
    CHECK(!ratio.is_zero());

    // C_{phi,chi} entry
    CHECK(poisson(ctx.primary_constraint, chi) ==
          parse("4*(dot(x,x)/m + Q^2/M)", ctx.registry));

    // C * C^-1 = 1 weakly
    const auto& c = analysis.constraint_matrix;
    const auto& inv = analysis.inverse_matrix;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            Expr sum = Expr::zero(ctx.registry);
            for (std::size_t k = 0; k < 2; ++k) sum = sum + c[i][k] * inv[k][j];
            const Expr want = i == j ? Expr::integer(ctx.registry, 1) : Expr::zero(ctx.registry);
            CHECK(analysis.weakly_zero(sum - want));
        }
}

TEST_CASE("multiplier matches the independent hand route") {
    const ModelContext ctx = ring_context(2);
    const auto analysis = run_dirac_bergmann(ctx.h_total, {ctx.primary_constraint});
    REQUIRE(analysis.multipliers.size() == 1);
    const Expr& chi = analysis.constraints[1].expr;
    const Expr expected =
        analysis.weak(-poisson(ctx.h_total, chi) / poisson(ctx.primary_constraint, chi));
    CHECK(analysis.weakly_zero(analysis.multipliers[0] - expected));
    // the total-Hamiltonian flow preserves both constraints
    const Expr total = analysis.total_hamiltonian();
    CHECK(analysis.weakly_zero(poisson(total, ctx.primary_constraint)));
    CHECK(analysis.weakly_zero(poisson(total, chi)));
}

TEST_CASE("hyperplane toy model") {
    auto reg = PhaseSpaceRegistry::make(2, 0);
    const Expr h = parse("dot(p,p)/(2*m)", reg);
    const auto analysis = run_dirac_bergmann(h, {parse("x1", reg)});
    REQUIRE(analysis.constraints.size() == 2);
    const Expr ratio = analysis.constraints[1].expr / parse("p1/m", reg);
    CHECK(ratio.is_constant());
    CHECK(analysis.constraints[0].cls == ConstraintClass::SecondClass);
    CHECK(analysis.constraints[1].cls == ConstraintClass::SecondClass);
    REQUIRE(analysis.multipliers.size() == 1);
    CHECK(analysis.multipliers[0].is_zero());
    // the flow keeps p1 frozen
    CHECK(analysis.weakly_zero(dirac(parse("p1", reg), h, analysis)));
}

TEST_CASE("complete second-class pair given up front adds nothing") {
    const ModelContext ctx = ring_context();
    const Expr chi = parse("2*dot(x,p)/m - 2*Q*P/M", ctx.registry);
    const auto analysis = run_dirac_bergmann(ctx.h_total, {ctx.primary_constraint, chi});
    CHECK(analysis.constraints.size() == 2);
    CHECK(analysis.primary_count == 2);
}

TEST_CASE("degenerate inputs are reported") {
    auto reg = PhaseSpaceRegistry::make(2, 0);
    const Expr h = parse("dot(p,p)/(2*m)", reg);
    CHECK_THROWS_AS((void)run_dirac_bergmann(h, {}), engine_error);
    // first-class constraint: p1 commutes with everything generated
    const auto analysis = run_dirac_bergmann(h, {parse("p1", reg)});
    CHECK(analysis.constraints.size() == 1);
    CHECK(analysis.constraints[0].cls == ConstraintClass::FirstClass);
    CHECK(analysis.multipliers.empty());
    CHECK_THROWS_AS((void)solve_multipliers(analysis), engine_error);
    CHECK_THROWS_AS((void)dirac(parse("x1", reg), h, analysis), engine_error);
}

TEST_CASE("Dirac bracket values and structure") {
    const ModelContext ctx = ring_context();
    const auto reg = ctx.registry;
    const auto analysis = run_dirac_bergmann(ctx.h_total, {ctx.primary_constraint});
    auto dir = [&](const char* a, const char* b) {
        return dirac(parse(a, reg), parse(b, reg), analysis);
    };
    auto weq = [&](const Expr& a, const char* b) {
        return analysis.weakly_zero(a - parse(b, reg));
    };
    CHECK(weq(dir("x1", "p1"), "1 - (M/(m+M))*x1^2/dot(x,x)"));
    CHECK(weq(dir("Q", "P"), "M/(m+M)"));
    CHECK(weq(dir("P", "p1"), "(M*Q*p1 - m*x1*P)/((m+M)*dot(x,x))"));
    CHECK(weq(dir("P", "x1"), "-(M/(m+M))*x1/Q"));

    // constraints are central
    for (const auto& c : analysis.constraints) {
        CHECK(analysis.weakly_zero(dirac(c.expr, parse("p1", reg), analysis)));
        CHECK(analysis.weakly_zero(dirac(c.expr, ctx.h_total, analysis)));
    }

    // antisymmetry and Leibniz after weak reduction
    const Expr f = parse("x1*P + Q*p2", reg);
    const Expr g = parse("dot(x,p)", reg);
    const Expr h = parse("Q^2 + x2", reg);
    CHECK(analysis.weakly_zero(dirac(f, g, analysis) + dirac(g, f, analysis)));
    CHECK(analysis.weakly_zero(dirac(f * g, h, analysis) -
                               analysis.weak(f * dirac(g, h, analysis) +
                                             dirac(f, h, analysis) * g)));
}

TEST_CASE("equations of motion") {
    const ModelContext ctx = ring_context();
    const auto reg = ctx.registry;
    const auto analysis = run_dirac_bergmann(ctx.h_total, {ctx.primary_constraint});
    const auto eom = equations_of_motion(analysis, {reg->x(1), reg->Q()});
    CHECK(analysis.weakly_zero(eom.at(reg->x(1)) - parse("p1/m", reg)));
    CHECK(analysis.weakly_zero(eom.at(reg->Q()) - parse("P/M", reg)));
    // angular momentum is conserved once the central form of V is supplied
    const Expr l3_dot = dirac(parse("x1*p2 - x2*p1", reg), ctx.h_total, analysis);
    const std::map<VariableId, Expr> harmonic = {
        {reg->derivative_symbol("V", {1}), parse("k*x1", reg)},
        {reg->derivative_symbol("V", {2}), parse("k*x2", reg)},
    };
    CHECK(analysis.weakly_zero(substitute(l3_dot, harmonic)));
}
