#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ringdyn/dynamics.hpp"
#include "ringdyn/errors.hpp"
#include "ringdyn/parser.hpp"

#include <cmath>

using namespace ringdyn;

namespace {

ModelSpec free_spec(int modes = 0, double eta = 0.0) {
    ModelSpec spec;
    spec.potential = PotentialKind::Free;
    spec.bath.mode_count = modes;
    spec.bath.eta = eta;
    return spec;
}

struct Sim {
    ModelContext ctx;
    ConstraintAnalysis analysis;

    explicit Sim(const ModelSpec& spec)
        : ctx(build_model_context(spec)),
          analysis(run_dirac_bergmann(ctx.h_total, {ctx.primary_constraint})) {}

    InitialState standard_ic(double temperature = 0.0, std::uint64_t seed = 42) const {
        Eigen::VectorXd x0(2), p0(2);
        x0 << 1.0, 0.0;
        p0 << 0.0, 1.0;
        return sample_initial(ctx.spec, ctx.modes, x0, p0, temperature, seed);
    }

    Trajectory run(Scheme scheme, double dt = 1e-3, double t_final = 10.0,
                   double penalty_k = 1e4) const {
        IntegrateOptions opt;
        opt.scheme = scheme;
        opt.dt = dt;
        opt.t_final = t_final;
        opt.penalty_k = penalty_k;
        return integrate(analysis, ctx, standard_ic(), opt);
    }
};

} // namespace

TEST_CASE("bath discretization") {
    BathSpec bath;
    bath.eta = 1.0;
    bath.omega_c = 1.0;
    bath.omega_max = 2.0;

    bath.mode_count = 0;
    CHECK(discretize_bath(bath).size() == 0);

    bath.mode_count = 4;
    const ModeSet grid = discretize_bath(bath);
    REQUIRE(grid.size() == 4);
    CHECK(grid.omega[0] == doctest::Approx(0.5));
    CHECK(grid.omega[3] == doctest::Approx(2.0));
    const double dw = 0.5;
    for (int j = 0; j < 4; ++j) {
        const double w = grid.omega[static_cast<std::size_t>(j)];
        const double expected = std::sqrt(2.0 / M_PI * w * spectral_density(bath, w) * dw);
        CHECK(grid.coupling[static_cast<std::size_t>(j)] == doctest::Approx(expected));
    }

    bath.eta = 0.0;
    for (double c : discretize_bath(bath).coupling) CHECK(c == 0.0);
}

TEST_CASE("reorganization sum matches the quadrature oracle within 10%") {
    BathSpec bath;
    bath.eta = 1.0;
    bath.omega_c = 1.0;
    bath.omega_max = 2.0;
    bath.mode_count = 16;
    const ModeSet grid = discretize_bath(bath);
    double sum = 0.0;
    for (int j = 0; j < grid.size(); ++j) {
        const std::size_t k = static_cast<std::size_t>(j);
        sum += grid.coupling[k] * grid.coupling[k] / (2.0 * grid.mass[k] * grid.omega[k] * grid.omega[k]);
    }
    // (1/pi) integral of J(w)/w dw = (eta*omega_c/pi)(1 - exp(-omega_max/omega_c))
    const double oracle = bath.eta * bath.omega_c / M_PI * (1.0 - std::exp(-bath.omega_max / bath.omega_c));
    CHECK(std::abs(sum - oracle) / oracle < 0.10);
}

TEST_CASE("initial-state sampling") {
    const ModelSpec spec = free_spec(3, 0.5);
    const ModeSet modes = discretize_bath(spec.bath);
    Eigen::VectorXd x0(2), p0(2);
    x0 << 1.0, 0.0;
    p0 << 0.0, 1.0;

    const InitialState cold = sample_initial(spec, modes, x0, p0, 0.0, 42);
    CHECK(cold.Q == doctest::Approx(1.0));
    CHECK(cold.P == doctest::Approx(0.0));
    CHECK(std::abs(cold.x.squaredNorm() - cold.Q * cold.Q) <= 1e-12);
    CHECK(std::abs(cold.x.dot(cold.p) / spec.m - cold.Q * cold.P / spec.M) <= 1e-12);
    for (int j = 0; j < 3; ++j) {
        const std::size_t k = static_cast<std::size_t>(j);
        const double mean = -modes.coupling[k] * cold.Q / (modes.mass[k] * modes.omega[k] * modes.omega[k]);
        CHECK(cold.q[j] == doctest::Approx(mean)); // T = 0: exactly at the shifted mean
        CHECK(cold.pq[j] == 0.0);
    }

    const InitialState warm_a = sample_initial(spec, modes, x0, p0, 0.3, 7);
    const InitialState warm_b = sample_initial(spec, modes, x0, p0, 0.3, 7);
    CHECK((warm_a.q.array() == warm_b.q.array()).all()); // deterministic in the seed
    CHECK((warm_a.pq.array() == warm_b.pq.array()).all());
    const InitialState warm_c = sample_initial(spec, modes, x0, p0, 0.3, 8);
    CHECK(!(warm_a.q.array() == warm_c.q.array()).all());

    CHECK_THROWS_AS((void)sample_initial(spec, modes, Eigen::VectorXd::Zero(2), p0, 0.0, 1),
                    dynamics_error);
}

TEST_CASE("compiled field matches the symbolic flow and stays tangent") {
    const Sim sim(free_spec());
    const CompiledField field = compile_eom(sim.analysis, sim.ctx);
    const StateLayout& layout = field.layout;
    const Eigen::VectorXd s = pack_state(sim.standard_ic(), layout);
    const Eigen::VectorXd ds = field(s);
    // weakly reduced flow: xdot = p/m, Qdot = P/M
    CHECK(ds[layout.x(1)] == doctest::Approx(s[layout.p(1)]).epsilon(1e-12));
    CHECK(ds[layout.x(2)] == doctest::Approx(s[layout.p(2)]).epsilon(1e-12));
    CHECK(ds[layout.Q()] == doctest::Approx(s[layout.P()]).epsilon(1e-12));
    // tangency: d(phi)/dt = 2 x.xdot - 2 Q Qdot = 0 on the surface
    const double dphi = 2.0 * (s[layout.x(1)] * ds[layout.x(1)] + s[layout.x(2)] * ds[layout.x(2)]) -
                        2.0 * s[layout.Q()] * ds[layout.Q()];
    CHECK(std::abs(dphi) <= 1e-12);
}

TEST_CASE("dirac-rk4 conserves energy and angular momentum") {
    const Sim sim(free_spec());
    const Trajectory traj = sim.run(Scheme::DiracRk4);
    const ObservableSeries obs = measure(traj, sim.ctx);
    const double h0 = obs.h_total[0];
    CHECK((obs.h_total.array() - h0).abs().maxCoeff() / std::abs(h0) <= 1e-6);
    CHECK(obs.phi.cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(obs.chi.cwiseAbs().maxCoeff() <= 1e-6);

    const StateLayout& layout = traj.layout;
    for (Eigen::Index row = 0; row < traj.times.size(); ++row) {
        const double l3 = traj.states(row, layout.x(1)) * traj.states(row, layout.p(2)) -
                          traj.states(row, layout.x(2)) * traj.states(row, layout.p(1));
        CHECK(std::abs(l3 - 1.0) <= 1e-8);
    }
}

TEST_CASE("convergence order of the constraint drift") {
    const Sim sim(free_spec());
    // generic momentum: the default (0,1) gives uniform circular motion, a
    // super-convergent special case whose drift shrinks faster than dt^4
    Eigen::VectorXd x0(2), p0(2);
    x0 << 1.0, 0.0;
    p0 << 0.4, 1.1;
    const InitialState ic = sample_initial(sim.ctx.spec, sim.ctx.modes, x0, p0, 0.0, 42);
    auto max_phi = [&](double dt) {
        IntegrateOptions opt;
        opt.scheme = Scheme::DiracRk4;
        opt.dt = dt;
        opt.t_final = 10.0;
        const ObservableSeries obs = measure(integrate(sim.analysis, sim.ctx, ic, opt), sim.ctx);
        return obs.phi.cwiseAbs().maxCoeff();
    };
    const double coarse = max_phi(2e-2);
    const double fine = max_phi(1e-2);
    REQUIRE(fine > 0.0);
    const double ratio = coarse / fine;
    CHECK(ratio >= 8.0);
    CHECK(ratio <= 32.0);
}

TEST_CASE("rattle projects onto the surface and tracks the Dirac flow") {
    const Sim sim(free_spec());
    const Trajectory rk = sim.run(Scheme::DiracRk4);
    const Trajectory rt = sim.run(Scheme::Rattle);
    CHECK((rk.states - rt.states).cwiseAbs().maxCoeff() <= 1e-4);
    const ObservableSeries obs = measure(rt, sim.ctx);
    CHECK(obs.phi.cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("penalty trajectories approach the projected one as k grows") {
    const Sim sim(free_spec());
    const Trajectory reference = sim.run(Scheme::Rattle, 5e-4, 5.0);
    double previous = std::numeric_limits<double>::infinity();
    for (double k : {1e2, 1e3, 1e4}) {
        const Trajectory pen = sim.run(Scheme::Penalty, 5e-4, 5.0, k);
        const double gap = (pen.states - reference.states).cwiseAbs().maxCoeff();
        CHECK(gap < previous);
        previous = gap;
    }
}

TEST_CASE("integration is deterministic and metadata is recorded") {
    const Sim sim(free_spec(2, 0.5));
    const Trajectory a = sim.run(Scheme::DiracRk4, 1e-3, 0.5);
    const Trajectory b = sim.run(Scheme::DiracRk4, 1e-3, 0.5);
    CHECK((a.states.array() == b.states.array()).all()); // bit-identical
    CHECK(a.times.size() == 501);
    CHECK(a.dt == 1e-3);
    CHECK(a.scheme == Scheme::DiracRk4);
    CHECK(a.model_hash == model_hash(sim.ctx.spec));
    CHECK(model_hash(sim.ctx.spec) != model_hash(free_spec()));
}

TEST_CASE("measure reports the advertised observables") {
    const Sim sim(free_spec());
    const Trajectory traj = sim.run(Scheme::DiracRk4, 1e-3, 1.0);
    const ObservableSeries obs = measure(traj, sim.ctx);
    CHECK(obs.t.size() == traj.times.size());
    const StateLayout& layout = traj.layout;
    const Eigen::Index row = obs.t.size() / 2;
    Eigen::Vector2d x(traj.states(row, layout.x(1)), traj.states(row, layout.x(2)));
    Eigen::Vector2d p(traj.states(row, layout.p(1)), traj.states(row, layout.p(2)));
    CHECK(obs.abs_x[row] == doctest::Approx(x.norm()));
    CHECK(obs.x_dot_p[row] == doctest::Approx(x.dot(p)));
    CHECK(obs.Q[row] == doctest::Approx(traj.states(row, layout.Q())));
    CHECK(obs.h_total[row] == doctest::Approx(obs.h_system[row] + obs.h_environment[row]));
}

TEST_CASE("ensemble autocorrelation averages over seeds") {
    const Sim sim(free_spec(2, 0.5));
    std::vector<Trajectory> ensemble;
    IntegrateOptions opt;
    opt.dt = 1e-3;
    opt.t_final = 0.2;
    Eigen::VectorXd x0(2), p0(2);
    x0 << 1.0, 0.0;
    p0 << 0.0, 1.0;
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const InitialState ic = sample_initial(sim.ctx.spec, sim.ctx.modes, x0, p0, 0.4, seed);
        ensemble.push_back(integrate(sim.analysis, sim.ctx, ic, opt));
    }
    const Eigen::VectorXd acf = ensemble_autocorrelation(ensemble);
    REQUIRE(acf.size() == ensemble.front().times.size());
    double manual = 0.0;
    for (const auto& traj : ensemble)
        manual += traj.states(0, traj.layout.Q()) * traj.states(0, traj.layout.Q());
    CHECK(acf[0] == doctest::Approx(manual / 3.0));
}

TEST_CASE("scheme names round-trip and bad inputs are rejected") {
    for (Scheme s : {Scheme::DiracRk4, Scheme::Rattle, Scheme::Penalty})
        CHECK(scheme_from_name(scheme_name(s)) == s);
    CHECK_THROWS_AS((void)scheme_from_name("euler"), config_error);

    const Sim sim(free_spec());
    IntegrateOptions opt;
    opt.dt = -1.0;
    CHECK_THROWS_AS((void)integrate(sim.analysis, sim.ctx, sim.standard_ic(), opt),
                    dynamics_error);
}
