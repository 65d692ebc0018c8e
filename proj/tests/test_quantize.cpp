#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ringdyn/model.hpp"
#include "ringdyn/parser.hpp"
#include "ringdyn/quantize.hpp"

#include <cmath>

using namespace ringdyn;

namespace {

struct Fixture {
    ModelContext ctx;
    ConstraintAnalysis analysis;

    explicit Fixture(int modes = 0) {
        ModelSpec spec;
        spec.potential = PotentialKind::Harmonic;
        spec.bath.mode_count = modes;
        spec.bath.eta = modes > 0 ? 0.5 : 0.0;
        ctx = build_model_context(spec);
        analysis = run_dirac_bergmann(ctx.h_total, {ctx.primary_constraint});
    }

    Expr e(const char* text) const { return parse(text, ctx.registry); }
    bool weq(const Expr& a, const char* b) const { return analysis.weakly_zero(a - e(b)); }
};

} // namespace

TEST_CASE("commutator coefficients reproduce the bracket algebra") {
    const Fixture f;
    CHECK(commutator(f.e("x1"), f.e("x2"), f.analysis).is_zero());
    CHECK(f.weq(commutator(f.e("x1"), f.e("p1"), f.analysis),
                "1 - (M/(m+M))*x1^2/dot(x,x)"));
    CHECK(f.weq(commutator(f.e("p1"), f.e("p2"), f.analysis),
                "-(M/(m+M))*(x1*p2 - x2*p1)/dot(x,x)"));
    CHECK(f.weq(commutator(f.e("Q"), f.e("P"), f.analysis), "M/(m+M)"));
    CHECK(f.weq(commutator(f.e("Q"), f.e("p1"), f.analysis), "(m/(m+M))*x1*Q/dot(x,x)"));
    CHECK(f.weq(commutator(f.e("P"), f.e("x1"), f.analysis), "-(M/(m+M))*x1/Q"));
    CHECK(f.weq(commutator(f.e("P"), f.e("p1"), f.analysis),
                "(M*Q*p1 - m*x1*P)/((m+M)*dot(x,x))"));
    // constraints become identities
    CHECK(commutator(f.ctx.primary_constraint, f.e("dot(x,p) + P"), f.analysis).is_zero());
}

TEST_CASE("table covers all pairs, is antisymmetric, and flags ordering") {
    const Fixture f;
    const auto table = commutator_table(f.analysis, false);
    CHECK(table.size() == 15); // 6 variables, unordered pairs
    for (const auto& entry : table) {
        const Expr reversed =
            commutator(f.e(entry.right.c_str()), f.e(entry.left.c_str()), f.analysis);
        CHECK(f.analysis.weakly_zero(entry.coefficient + reversed));
        CHECK(!entry.coefficient.contains(f.ctx.registry->param("hbar")));
        if (entry.left == "Q" && entry.right == "P") {
            CHECK(!entry.ordering_ambiguous); // pure parameter coefficient
        }
        if (entry.left == "x1" && entry.right == "p1") {
            CHECK(entry.ordering_ambiguous); // coefficient contains x_i x_j / x^2
        }
    }
}

TEST_CASE("bath variables keep canonical brackets") {
    const Fixture f(2);
    CHECK(commutator(f.e("q1"), f.e("pq1"), f.analysis) == Expr::integer(f.ctx.registry, 1));
    CHECK(commutator(f.e("q1"), f.e("pq2"), f.analysis).is_zero());
    CHECK(commutator(f.e("q1"), f.e("p1"), f.analysis).is_zero());
    CHECK(commutator(f.e("q1"), f.e("Q"), f.analysis).is_zero());
    const auto table = commutator_table(f.analysis, true);
    CHECK(table.size() == 45); // 10 variables
}

TEST_CASE("noncommutativity witness") {
    const Fixture f;
    // without the constraint the sectors commute outright
    CHECK(poisson(f.ctx.h_system, f.ctx.h_environment).is_zero());
    const Expr witness =
        noncommutativity_witness(f.ctx.h_system, f.ctx.h_environment, f.analysis);
    CHECK(!equals_zero(witness));
    const auto points = sample_surface_points(f.ctx, 5, 99);
    for (const auto& point : points) CHECK(std::abs(evaluate(witness, point)) > 1e-12);
}

TEST_CASE("Jacobi identity") {
    const Fixture f;
    CHECK(equals_zero(jacobi_cycle(f.e("x1"), f.e("x2"), f.e("Q"), f.analysis)));
    CHECK(equals_zero(jacobi_cycle(f.e("x1"), f.e("p1"), f.e("Q"), f.analysis)));
    CHECK(equals_zero(jacobi_cycle(f.e("p1"), f.e("Q"), f.e("P"), f.analysis)));
    CHECK(equals_zero(
        jacobi_cycle(f.ctx.primary_constraint, f.e("dot(x,p)"), f.e("P"), f.analysis)));

    const auto points = sample_surface_points(f.ctx, 20, 123);
    const auto residuals =
        jacobi_residual(f.e("x1"), f.e("p1"), f.ctx.h_total, f.analysis, points);
    REQUIRE(residuals.size() == points.size());
    for (double r : residuals) {
        CHECK(!std::isnan(r));
        CHECK(std::abs(r) <= 1e-9);
    }
}

TEST_CASE("rigid limit: leading term in M") {
    const Fixture f;
    const VariableId M = f.ctx.registry->param("M");
    CHECK(leading_term_in(commutator(f.e("x1"), f.e("p1"), f.analysis), M) ==
          f.e("1 - x1^2/dot(x,x)"));
    CHECK(leading_term_in(commutator(f.e("x1"), f.e("p2"), f.analysis), M) ==
          f.e("-x1*x2/dot(x,x)"));
    CHECK(leading_term_in(commutator(f.e("Q"), f.e("P"), f.analysis), M) ==
          Expr::integer(f.ctx.registry, 1));
    // M-free input is its own leading part
    CHECK(leading_term_in(f.e("x1*p2/Q"), M) == f.e("x1*p2/Q"));
}
