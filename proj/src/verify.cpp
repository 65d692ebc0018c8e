#include "ringdyn/verify.hpp"

#include "ringdyn/dynamics.hpp"
#include "ringdyn/errors.hpp"
#include "ringdyn/parser.hpp"
#include "ringdyn/quantize.hpp"
#include "ringdyn/report.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

namespace ringdyn {

namespace {

struct TimedCheck {
    int id;
    std::string name;
    std::function<std::pair<bool, std::string>()> body;
};

ModelSpec harmonic_spec(int dimension, int modes, double eta) {
    ModelSpec spec;
    spec.dimension = dimension;
    spec.potential = PotentialKind::Harmonic;
    spec.k = 1.0;
    spec.bath.mode_count = modes;
    spec.bath.eta = eta;
    spec.bath.omega_c = 1.0;
    spec.bath.omega_max = 2.0;
    return spec;
}

ModelSpec free_spec(int modes = 0, double eta = 0.0) {
    ModelSpec spec;
    spec.potential = PotentialKind::Free;
    spec.bath.mode_count = modes;
    spec.bath.eta = eta;
    return spec;
}

Expr expected_chi(const ModelContext& ctx) {
    return parse("2*dot(x,p)/m - 2*Q*P/M", ctx.registry);
}

// The expected table over {x_i, p_i, Q, P} as expression strings, in the same
// pair order as commutator_table.
std::vector<std::pair<std::string, std::string>> expected_table_strings(int d) {
    auto xs = [](int i) { return "x" + std::to_string(i); };
    auto ps = [](int i) { return "p" + std::to_string(i); };
    std::vector<std::string> vars;
    for (int i = 1; i <= d; ++i) vars.push_back(xs(i));
    for (int i = 1; i <= d; ++i) vars.push_back(ps(i));
    vars.push_back("Q");
    vars.push_back("P");

    auto expected = [&](const std::string& a, const std::string& b) -> std::string {
        auto is_x = [](const std::string& v) { return v[0] == 'x'; };
        auto is_p = [](const std::string& v) { return v[0] == 'p' && v != "pq"; };
        const std::string xx = "dot(x,x)";
        if (a == "Q" && b == "P") return "M/(m+M)";
        if (is_x(a) && is_x(b)) return "0";
        if (is_x(a) && is_p(b)) {
            const std::string diag = a.substr(1) == b.substr(1) ? "1 - " : "-";
            return diag + "(M/(m+M))*" + a + "*x" + b.substr(1) + "/" + xx;
        }
        if (is_p(a) && is_p(b))
            return "-(M/(m+M))*(x" + a.substr(1) + "*" + b + " - x" + b.substr(1) + "*" + a +
                   ")/" + xx;
        if (is_x(a) && b == "Q") return "0";
        if (is_x(a) && b == "P") return "(M/(m+M))*" + a + "/Q";
        if (is_p(a) && b == "Q") return "-(m/(m+M))*x" + a.substr(1) + "*Q/" + xx;
        if (is_p(a) && b == "P")
            return "(m*x" + a.substr(1) + "*P - M*Q*" + a + ")/((m+M)*" + xx + ")";
        throw engine_error("expected_table_strings: unreachable pair");
    };

    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i < vars.size(); ++i)
        for (std::size_t j = i + 1; j < vars.size(); ++j)
            out.emplace_back(vars[i] + "," + vars[j], expected(vars[i], vars[j]));
    return out;
}

// Compares the computed table against the expected strings under weak
// equality; returns the first mismatching pair name, or empty on full match.
std::string first_table_mismatch(const ConstraintAnalysis& analysis, int d) {
    const auto table = commutator_table(analysis, false);
    const auto expected = expected_table_strings(d);
    if (table.size() != expected.size()) return "(table size mismatch)";
    for (std::size_t i = 0; i < table.size(); ++i) {
        const Expr want = parse(expected[i].second, analysis.registry);
        if (!analysis.weakly_zero(table[i].coefficient - want))
            return "[" + table[i].left + ", " + table[i].right + "]";
    }
    return {};
}

double max_phi_drift(const ConstraintAnalysis& analysis, const ModelContext& ctx,
                     const InitialState& ic, double dt, double t_final) {
    IntegrateOptions opt;
    opt.scheme = Scheme::DiracRk4;
    opt.dt = dt;
    opt.t_final = t_final;
    const Trajectory traj = integrate(analysis, ctx, ic, opt);
    const ObservableSeries obs = measure(traj, ctx);
    return obs.phi.cwiseAbs().maxCoeff();
}

double sup_gap(const Trajectory& a, const Trajectory& b) {
    return (a.states - b.states).cwiseAbs().maxCoeff();
}

std::pair<bool, std::string> check_secondary_discovery() {
    const ModelContext ctx = build_model_context(harmonic_spec(2, 16, 0.5));
    const auto analysis = run_dirac_bergmann(ctx.h_total, {ctx.primary_constraint});
    std::ostringstream detail;
    if (analysis.constraints.size() != 2)
        return {false, "expected 2 constraints, got " + std::to_string(analysis.constraints.size())};
    const Expr ratio = analysis.constraints[1].expr / expected_chi(ctx);
    const bool proportional = ratio.is_constant() && !ratio.is_zero();
    const bool classes = analysis.constraints[0].cls == ConstraintClass::SecondClass &&
                         analysis.constraints[1].cls == ConstraintClass::SecondClass;
    detail << "secondary = " << print(analysis.constraints[1].expr)
           << "; proportional to expected: " << (proportional ? "yes" : "no")
           << "; both second-class: " << (classes ? "yes" : "no");
    return {proportional && classes, detail.str()};
}

std::pair<bool, std::string> check_constraint_matrix() {
    const ModelContext ctx = build_model_context(harmonic_spec(2, 16, 0.5));
    const Expr chi = expected_chi(ctx);
    const Expr computed = poisson(ctx.primary_constraint, chi);
    const Expr want = parse("4*(dot(x,x)/m + Q^2/M)", ctx.registry);
    return {computed == want, "poisson(phi, chi) = " + print(computed)};
}

std::pair<bool, std::string> check_commutator_table() {
    for (int d : {2, 3}) {
        const ModelContext ctx = build_model_context(harmonic_spec(d, 0, 0.0));
        const auto analysis = run_dirac_bergmann(ctx.h_total, {ctx.primary_constraint});
        const std::string mismatch = first_table_mismatch(analysis, d);
        if (!mismatch.empty())
            return {false, "d=" + std::to_string(d) + ": first mismatch at " + mismatch};
    }
    return {true, "all entries match for d=2 and d=3"};
}

std::pair<bool, std::string> check_noncommutativity() {
    const ModelContext ctx = build_model_context(harmonic_spec(2, 2, 0.5));
    const auto analysis = run_dirac_bergmann(ctx.h_total, {ctx.primary_constraint});
    const Expr witness = noncommutativity_witness(ctx.h_system, ctx.h_environment, analysis);
    if (equals_zero(witness)) return {false, "witness is identically zero"};
    const auto points = sample_surface_points(ctx, 10, 20240901);
    double min_abs = std::numeric_limits<double>::infinity();
    for (const auto& point : points) min_abs = std::min(min_abs, std::abs(evaluate(witness, point)));
    std::ostringstream detail;
    detail << "min |{H_S,H_E}_D| over 10 surface points = " << min_abs;
    return {min_abs > 1e-12, detail.str()};
}

std::pair<bool, std::string> check_jacobi() {
    const ModelContext ctx = build_model_context(harmonic_spec(2, 2, 0.5));
    const auto analysis = run_dirac_bergmann(ctx.h_total, {ctx.primary_constraint});
    const auto& reg = *ctx.registry;
    std::vector<Expr> vars;
    for (VariableId v : {reg.x(1), reg.x(2), reg.p(1), reg.p(2), reg.Q(), reg.P()})
        vars.push_back(Expr::variable(ctx.registry, v));
    for (std::size_t a = 0; a < vars.size(); ++a)
        for (std::size_t b = a + 1; b < vars.size(); ++b)
            for (std::size_t c = b + 1; c < vars.size(); ++c)
                if (!equals_zero(jacobi_cycle(vars[a], vars[b], vars[c], analysis)))
                    return {false, "symbolic residual nonzero for a variable triple"};

    const auto points = sample_surface_points(ctx, 100, 20240902);
    std::vector<Expr> core = {Expr::variable(ctx.registry, reg.x(1)),
                              Expr::variable(ctx.registry, reg.p(1)),
                              Expr::variable(ctx.registry, reg.Q()),
                              Expr::variable(ctx.registry, reg.P())};
    double worst = 0.0;
    for (std::size_t a = 0; a < core.size(); ++a)
        for (std::size_t b = a + 1; b < core.size(); ++b) {
            const auto residuals =
                jacobi_residual(core[a], core[b], ctx.h_total, analysis, points);
            for (double r : residuals) {
                if (std::isnan(r)) return {false, "pole encountered at a surface point"};
                worst = std::max(worst, std::abs(r));
            }
        }
    std::ostringstream detail;
    detail << "20 variable triples weakly zero; max |residual| with H_tot over 100 points = "
           << worst;
    return {worst <= 1e-9, detail.str()};
}

std::pair<bool, std::string> check_dual_route() {
    const ModelContext ctx = build_model_context(harmonic_spec(2, 2, 0.5));
    const auto analysis = run_dirac_bergmann(ctx.h_total, {ctx.primary_constraint});
    const Expr total = analysis.total_hamiltonian();
    const auto& reg = *ctx.registry;
    std::vector<VariableId> vars;
    for (int i = 1; i <= reg.dimension(); ++i) vars.push_back(reg.x(i));
    for (int i = 1; i <= reg.dimension(); ++i) vars.push_back(reg.p(i));
    vars.push_back(reg.Q());
    vars.push_back(reg.P());
    for (int j = 1; j <= reg.bath_modes(); ++j) vars.push_back(reg.q(j));
    for (int j = 1; j <= reg.bath_modes(); ++j) vars.push_back(reg.pq(j));
    for (VariableId v : vars) {
        const Expr a = Expr::variable(ctx.registry, v);
        const Expr via_dirac = dirac(a, ctx.h_total, analysis);
        const Expr via_multiplier = analysis.weak(poisson(a, total));
        if (!analysis.weakly_zero(via_dirac - via_multiplier))
            return {false, "routes disagree for " + reg.name(v)};
    }
    return {true, "both routes agree for all " + std::to_string(vars.size()) + " variables"};
}

std::pair<bool, std::string> check_rigid_limit() {
    const ModelContext ctx = build_model_context(harmonic_spec(2, 0, 0.0));
    const auto analysis = run_dirac_bergmann(ctx.h_total, {ctx.primary_constraint});
    const auto& reg = *ctx.registry;
    const VariableId M = reg.param("M");
    auto var = [&](VariableId v) { return Expr::variable(ctx.registry, v); };
    const Expr xp11 = leading_term_in(dirac(var(reg.x(1)), var(reg.p(1)), analysis), M);
    const Expr xp12 = leading_term_in(dirac(var(reg.x(1)), var(reg.p(2)), analysis), M);
    const Expr qp = leading_term_in(dirac(var(reg.Q()), var(reg.P()), analysis), M);
    const bool ok11 = xp11 == parse("1 - x1*x1/dot(x,x)", ctx.registry);
    const bool ok12 = xp12 == parse("-x1*x2/dot(x,x)", ctx.registry);
    const bool okqp = qp == parse("1", ctx.registry);
    std::ostringstream detail;
    detail << "(x1,p1) -> " << print(xp11) << "; (Q,P) -> " << print(qp);
    return {ok11 && ok12 && okqp, detail.str()};
}

std::pair<bool, std::string> check_conservation() {
    const ModelContext ctx = build_model_context(free_spec());
    const auto analysis = run_dirac_bergmann(ctx.h_total, {ctx.primary_constraint});
    Eigen::VectorXd x0(2), p0(2);
    x0 << 1.0, 0.0;
    p0 << 0.0, 1.0;
    const InitialState ic = sample_initial(ctx.spec, ctx.modes, x0, p0, 0.0, 42);
    IntegrateOptions opt;
    opt.scheme = Scheme::DiracRk4;
    const Trajectory traj = integrate(analysis, ctx, ic, opt);
    const ObservableSeries obs = measure(traj, ctx);
    const double h0 = obs.h_total[0];
    const double drift = (obs.h_total.array() - h0).abs().maxCoeff() / std::abs(h0);
    const double max_phi = obs.phi.cwiseAbs().maxCoeff();

    // the order measurement needs a generic orbit: the default momentum gives
    // uniform circular motion whose drift super-converges, and at dt = 1e-3 the
    // drift sits at the rounding floor, so measure sup|phi| at coarser steps
    Eigen::VectorXd pg(2);
    pg << 0.4, 1.1;
    const InitialState generic = sample_initial(ctx.spec, ctx.modes, x0, pg, 0.0, 42);
    const double coarse = max_phi_drift(analysis, ctx, generic, 2e-2, 10.0);
    const double fine = max_phi_drift(analysis, ctx, generic, 1e-2, 10.0);
    const double ratio = fine > 0 ? coarse / fine : std::numeric_limits<double>::infinity();
    std::ostringstream detail;
    detail << "relative H_tot drift = " << drift << "; max |phi| = " << max_phi
           << "; dt-halving phi ratio = " << ratio;
    const bool ok = drift <= 1e-6 && max_phi <= 1e-6 && ratio >= 8.0 && ratio <= 32.0;
    return {ok, detail.str()};
}

std::pair<bool, std::string> check_scheme_agreement() {
    const ModelContext ctx = build_model_context(free_spec());
    const auto analysis = run_dirac_bergmann(ctx.h_total, {ctx.primary_constraint});
    Eigen::VectorXd x0(2), p0(2);
    x0 << 1.0, 0.0;
    p0 << 0.0, 1.0;
    const InitialState ic = sample_initial(ctx.spec, ctx.modes, x0, p0, 0.0, 42);
    IntegrateOptions opt;
    opt.scheme = Scheme::DiracRk4;
    const Trajectory rk = integrate(analysis, ctx, ic, opt);
    opt.scheme = Scheme::Rattle;
    const Trajectory rt = integrate(analysis, ctx, ic, opt);
    const double gap = sup_gap(rk, rt);
    const double max_phi = measure(rt, ctx).phi.cwiseAbs().maxCoeff();
    std::ostringstream detail;
    detail << "sup-norm gap = " << gap << "; rattle max |phi| = " << max_phi;
    return {gap <= 1e-4 && max_phi <= 1e-8, detail.str()};
}

std::pair<bool, std::string> check_penalty_convergence() {
    std::ostringstream detail;
    for (const ModelSpec& spec : {free_spec(), harmonic_spec(2, 0, 0.0)}) {
        const ModelContext ctx = build_model_context(spec);
        const auto analysis = run_dirac_bergmann(ctx.h_total, {ctx.primary_constraint});
        Eigen::VectorXd x0(2), p0(2);
        x0 << 1.0, 0.0;
        p0 << 0.0, 1.0;
        const InitialState ic = sample_initial(ctx.spec, ctx.modes, x0, p0, 0.0, 42);
        IntegrateOptions opt;
        opt.scheme = Scheme::Rattle;
        opt.dt = 5e-4;
        opt.t_final = 5.0;
        const Trajectory reference = integrate(analysis, ctx, ic, opt);
        std::vector<double> gaps;
        for (double k : {1e2, 1e3, 1e4}) {
            opt.scheme = Scheme::Penalty;
            opt.penalty_k = k;
            gaps.push_back(sup_gap(integrate(analysis, ctx, ic, opt), reference));
        }
        detail << (spec.potential == PotentialKind::Free ? "free" : "harmonic") << " gaps: "
               << gaps[0] << " > " << gaps[1] << " > " << gaps[2] << "; ";
        if (!(gaps[0] > gaps[1] && gaps[1] > gaps[2])) return {false, detail.str()};
    }
    return {true, detail.str()};
}

std::pair<bool, std::string> check_bath_sanity() {
    const ModelContext ctx = build_model_context(free_spec(16, 0.0));
    const auto analysis = run_dirac_bergmann(ctx.h_total, {ctx.primary_constraint});
    Eigen::VectorXd x0(2), p0(2);
    x0 << 1.0, 0.0;
    p0 << 0.0, 1.0;
    const InitialState ic = sample_initial(ctx.spec, ctx.modes, x0, p0, 0.5, 7);
    IntegrateOptions opt;
    opt.scheme = Scheme::DiracRk4;
    const Trajectory traj = integrate(analysis, ctx, ic, opt);

    const StateLayout& layout = traj.layout;
    const Eigen::Index last = traj.times.size() - 1;
    const double t = traj.times[last];
    double worst_phase = 0.0;
    for (int j = 1; j <= 16; ++j) {
        const double mj = ctx.modes.mass[static_cast<std::size_t>(j - 1)];
        const double wj = ctx.modes.omega[static_cast<std::size_t>(j - 1)];
        const double q0 = ic.q[j - 1], v0 = ic.pq[j - 1] / (mj * wj);
        const double amp = std::hypot(q0, v0);
        if (amp < 1e-12) continue;
        const double q_exact = q0 * std::cos(wj * t) + v0 * std::sin(wj * t);
        const double p_exact = mj * wj * (-q0 * std::sin(wj * t) + v0 * std::cos(wj * t));
        const double err = std::max(std::abs(traj.states(last, layout.q(j)) - q_exact),
                                    std::abs(traj.states(last, layout.pq(j)) - p_exact) / (mj * wj));
        worst_phase = std::max(worst_phase, err / amp);
    }

    // system + collective energy, conserved separately when the bath decouples
    auto system_energy = [&](Eigen::Index row) {
        Eigen::VectorXd x(2), p(2);
        for (int i = 1; i <= 2; ++i) {
            x[i - 1] = traj.states(row, layout.x(i));
            p[i - 1] = traj.states(row, layout.p(i));
        }
        const double Q = traj.states(row, layout.Q()), P = traj.states(row, layout.P());
        return p.squaredNorm() / (2 * ctx.spec.m) + potential_derivative(ctx.spec, {}, x) +
               P * P / (2 * ctx.spec.M) + 0.5 * ctx.spec.M * ctx.spec.Omega * ctx.spec.Omega * Q * Q;
    };
    const double e0 = system_energy(0);
    double drift = 0.0;
    for (Eigen::Index row = 0; row <= last; ++row)
        drift = std::max(drift, std::abs(system_energy(row) - e0));
    drift /= std::abs(e0);
    std::ostringstream detail;
    detail << "max mode phase error = " << worst_phase << "; relative system-energy drift = "
           << drift;
    return {worst_phase <= 1e-5 && drift <= 1e-6, detail.str()};
}

std::pair<bool, std::string> check_negative_control() {
    const ModelContext ctx = build_model_context(harmonic_spec(2, 0, 0.0));
    const auto& reg = *ctx.registry;
    const Expr corrupted = parse("dot(x,x) - 2*Q^2", ctx.registry);
    (void)reg;
    const auto analysis = run_dirac_bergmann(ctx.h_total, {corrupted});
    const std::string mismatch = first_table_mismatch(analysis, 2);
    if (mismatch.empty()) return {false, "corrupted constraint was not detected"};
    return {true, "corrupted constraint detected; first mismatch at " + mismatch};
}

} // namespace

std::vector<CheckResult> run_verification() {
    const std::vector<TimedCheck> checks = {
        {1, "secondary-constraint discovery", check_secondary_discovery},
        {2, "constraint matrix entry", check_constraint_matrix},
        {3, "commutator table reproduction", check_commutator_table},
        {4, "noncommutativity witness", check_noncommutativity},
        {5, "Jacobi identity", check_jacobi},
        {6, "dual-route equations of motion", check_dual_route},
        {7, "rigid-ring limit", check_rigid_limit},
        {8, "dynamics conservation", check_conservation},
        {9, "scheme cross-validation", check_scheme_agreement},
        {10, "penalty convergence", check_penalty_convergence},
        {11, "bath sanity", check_bath_sanity},
        {12, "negative control", check_negative_control},
    };
    std::vector<CheckResult> results;
    results.reserve(checks.size());
    for (const auto& check : checks) {
        CheckResult result;
        result.id = check.id;
        result.name = check.name;
        const auto start = std::chrono::steady_clock::now();
        try {
            auto [pass, detail] = check.body();
            result.pass = pass;
            result.detail = detail;
        } catch (const std::exception& err) {
            result.pass = false;
            result.detail = std::string("exception: ") + err.what();
        }
        const auto elapsed = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
        std::ostringstream timed;
        timed << result.detail << " [" << elapsed << " s]";
        result.detail = timed.str();
        results.push_back(std::move(result));
    }
    return results;
}

std::string verification_report_json(const std::vector<CheckResult>& results) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& result : results)
        items.push_back({{"id", result.id},
                         {"name", result.name},
                         {"pass", result.pass},
                         {"detail", result.detail}});
    return items.dump(2) + "\n";
}

} // namespace ringdyn
