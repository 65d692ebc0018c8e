#include "ringdyn/dynamics.hpp"

#include "ringdyn/errors.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ringdyn {

std::string scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::DiracRk4: return "dirac-rk4";
        case Scheme::Rattle: return "rattle";
        case Scheme::Penalty: return "penalty";
    }
    return "unknown";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "dirac-rk4") return Scheme::DiracRk4;
    if (name == "rattle") return Scheme::Rattle;
    if (name == "penalty") return Scheme::Penalty;
    throw config_error("unknown scheme '" + name + "'");
}

Eigen::VectorXd pack_state(const InitialState& state, const StateLayout& layout) {
    Eigen::VectorXd s(layout.size());
    for (int i = 1; i <= layout.dimension; ++i) {
        s[layout.x(i)] = state.x[i - 1];
        s[layout.p(i)] = state.p[i - 1];
    }
    s[layout.Q()] = state.Q;
    s[layout.P()] = state.P;
    for (int j = 1; j <= layout.modes; ++j) {
        s[layout.q(j)] = state.q[j - 1];
        s[layout.pq(j)] = state.pq[j - 1];
    }
    return s;
}

// ------------------------------ CompiledExpr ---------------------------------

CompiledExpr::CompiledExpr(const Expr& e, const ModelContext& ctx, const StateLayout& layout)
    : model_(ctx.spec), layout_(layout) {
    const auto& reg = *ctx.registry;
    const auto params = ctx.parameter_values();

    auto slot_of = [&](VariableId v) -> int {
        const VarInfo& info = reg.info(v);
        switch (info.family) {
            case VarFamily::SystemX: return layout.x(info.index);
            case VarFamily::SystemP: return layout.p(info.index);
            case VarFamily::CollectiveQ: return layout.Q();
            case VarFamily::CollectiveP: return layout.P();
            case VarFamily::BathQ: return layout.q(info.index);
            case VarFamily::BathP: return layout.pq(info.index);
            default: return -1;
        }
    };

    auto compile_poly = [&](const Poly& poly) {
        std::vector<CompiledTerm> out;
        out.reserve(poly.terms().size());
        for (const auto& term : poly.terms()) {
            CompiledTerm ct;
            ct.coeff = to_double(term.coeff);
            for (const auto& [v, exp] : term.mon.powers) {
                if (reg.is_parameter(v)) {
                    ct.coeff *= std::pow(params.at(v), exp);
                } else if (reg.is_function_deriv(v)) {
                    Factor f;
                    f.slot = -1;
                    f.multi = reg.info(v).multi_index;
                    f.exponent = exp;
                    ct.factors.push_back(std::move(f));
                } else {
                    Factor f;
                    f.slot = slot_of(v);
                    f.exponent = exp;
                    ct.factors.push_back(std::move(f));
                }
            }
            out.push_back(std::move(ct));
        }
        return out;
    };

    num_ = compile_poly(e.num());
    den_ = compile_poly(e.den());
    den_is_one_ = e.is_polynomial();
    if (den_is_one_ && !e.den().is_constant()) den_is_one_ = false;
    if (den_is_one_ && e.den().constant_value() != 1) {
        // fold the constant denominator into the numerator coefficients
        const double d = to_double(e.den().constant_value());
        for (auto& t : num_) t.coeff /= d;
        den_.clear();
    }
}

double CompiledExpr::eval_terms(const std::vector<CompiledTerm>& terms,
                                const Eigen::VectorXd& state) const {
    double sum = 0.0;
    for (const auto& term : terms) {
        double val = term.coeff;
        for (const auto& f : term.factors) {
            double base;
            if (f.slot >= 0) {
                base = state[f.slot];
            } else {
                Eigen::VectorXd x(layout_.dimension);
                for (int i = 1; i <= layout_.dimension; ++i) x[i - 1] = state[layout_.x(i)];
                base = potential_derivative(model_, f.multi, x);
            }
            val *= (f.exponent == 1) ? base : std::pow(base, f.exponent);
        }
        sum += val;
    }
    return sum;
}

double CompiledExpr::operator()(const Eigen::VectorXd& state) const {
    const double n = eval_terms(num_, state);
    if (den_is_one_ || den_.empty()) return n;
    const double d = eval_terms(den_, state);
    if (d == 0.0) throw dynamics_error("compiled field: pole encountered during evaluation");
    return n / d;
}

Eigen::VectorXd CompiledField::operator()(const Eigen::VectorXd& state) const {
    Eigen::VectorXd out(state.size());
    for (int i = 0; i < state.size(); ++i) out[i] = derivative[static_cast<std::size_t>(i)](state);
    return out;
}

CompiledField compile_eom(const ConstraintAnalysis& analysis, const ModelContext& ctx) {
    const auto& reg = *ctx.registry;
    StateLayout layout{ctx.spec.dimension, ctx.spec.bath.mode_count};

    std::vector<VariableId> vars;
    for (int i = 1; i <= layout.dimension; ++i) vars.push_back(reg.x(i));
    for (int i = 1; i <= layout.dimension; ++i) vars.push_back(reg.p(i));
    vars.push_back(reg.Q());
    vars.push_back(reg.P());
    for (int j = 1; j <= layout.modes; ++j) vars.push_back(reg.q(j));
    for (int j = 1; j <= layout.modes; ++j) vars.push_back(reg.pq(j));
    const auto eom = equations_of_motion(analysis, vars);

    CompiledField field;
    field.layout = layout;
    field.derivative.resize(static_cast<std::size_t>(layout.size()));
    auto slot_of = [&](VariableId v) -> int {
        const VarInfo& info = reg.info(v);
        switch (info.family) {
            case VarFamily::SystemX: return layout.x(info.index);
            case VarFamily::SystemP: return layout.p(info.index);
            case VarFamily::CollectiveQ: return layout.Q();
            case VarFamily::CollectiveP: return layout.P();
            case VarFamily::BathQ: return layout.q(info.index);
            case VarFamily::BathP: return layout.pq(info.index);
            default: return -1;
        }
    };
    for (const auto& [v, expr] : eom)
        field.derivative[static_cast<std::size_t>(slot_of(v))] = CompiledExpr(expr, ctx, layout);
    return field;
}

// ------------------------------- integrators ---------------------------------

namespace {

struct NumericModel {
    const ModelSpec& spec;
    const ModeSet& modes;
    StateLayout layout;

    double potential_energy(const Eigen::VectorXd& s) const {
        Eigen::VectorXd x(layout.dimension);
        for (int i = 1; i <= layout.dimension; ++i) x[i - 1] = s[layout.x(i)];
        double u = potential_derivative(spec, {}, x);
        const double Q = s[layout.Q()];
        u += 0.5 * spec.M * spec.Omega * spec.Omega * Q * Q;
        for (int j = 1; j <= layout.modes; ++j) {
            const double mj = modes.mass[static_cast<std::size_t>(j - 1)];
            const double wj = modes.omega[static_cast<std::size_t>(j - 1)];
            const double cj = modes.coupling[static_cast<std::size_t>(j - 1)];
            const double qj = s[layout.q(j)];
            u += 0.5 * mj * wj * wj * qj * qj + cj * Q * qj;
        }
        return u;
    }

    // gradient of the potential part of H_tot over configuration slots
    void potential_gradient(const Eigen::VectorXd& s, Eigen::VectorXd& grad) const {
        grad.setZero();
        Eigen::VectorXd x(layout.dimension);
        for (int i = 1; i <= layout.dimension; ++i) x[i - 1] = s[layout.x(i)];
        for (int i = 1; i <= layout.dimension; ++i)
            grad[layout.x(i)] = potential_derivative(spec, {i}, x);
        const double Q = s[layout.Q()];
        double gq = spec.M * spec.Omega * spec.Omega * Q;
        for (int j = 1; j <= layout.modes; ++j) {
            const double mj = modes.mass[static_cast<std::size_t>(j - 1)];
            const double wj = modes.omega[static_cast<std::size_t>(j - 1)];
            const double cj = modes.coupling[static_cast<std::size_t>(j - 1)];
            const double qj = s[layout.q(j)];
            grad[layout.q(j)] = mj * wj * wj * qj + cj * Q;
            gq += cj * qj;
        }
        grad[layout.Q()] = gq;
    }

    double inv_mass(int config_slot) const {
        if (config_slot < layout.dimension) return 1.0 / spec.m;
        if (config_slot == layout.Q()) return 1.0 / spec.M;
        const int j = config_slot - (2 * layout.dimension + 2);
        return 1.0 / modes.mass[static_cast<std::size_t>(j)];
    }

    // configuration slots in state order: x(1..d), Q, q(1..N)
    std::vector<int> config_slots() const {
        std::vector<int> slots;
        for (int i = 1; i <= layout.dimension; ++i) slots.push_back(layout.x(i));
        slots.push_back(layout.Q());
        for (int j = 1; j <= layout.modes; ++j) slots.push_back(layout.q(j));
        return slots;
    }
    int momentum_slot(int config_slot) const {
        if (config_slot < layout.dimension) return config_slot + layout.dimension;
        if (config_slot == layout.Q()) return layout.P();
        return config_slot + layout.modes;
    }

    double constraint(const Eigen::VectorXd& s) const {
        double xx = 0.0;
        for (int i = 1; i <= layout.dimension; ++i) xx += s[layout.x(i)] * s[layout.x(i)];
        return xx - s[layout.Q()] * s[layout.Q()];
    }

    void constraint_gradient(const Eigen::VectorXd& s, Eigen::VectorXd& grad) const {
        grad.setZero();
        for (int i = 1; i <= layout.dimension; ++i) grad[layout.x(i)] = 2.0 * s[layout.x(i)];
        grad[layout.Q()] = -2.0 * s[layout.Q()];
    }

    void check_away_from_origin(const Eigen::VectorXd& s) const {
        double xx = 0.0;
        for (int i = 1; i <= layout.dimension; ++i) xx += s[layout.x(i)] * s[layout.x(i)];
        if (xx < 1e-16)
            throw dynamics_error("trajectory reached the singular locus |x| -> 0");
    }
};

// one velocity-Verlet step with optional holonomic projection (RATTLE) or an
// extra penalty force
Eigen::VectorXd verlet_step(const NumericModel& nm, const Eigen::VectorXd& s0, double dt,
                            bool project, double penalty_k, double tol, int max_iter) {
    const auto slots = nm.config_slots();
    const int nc = static_cast<int>(slots.size());
    Eigen::VectorXd grad(s0.size()), gcon(s0.size());

    auto total_force = [&](const Eigen::VectorXd& s, Eigen::VectorXd& force) {
        nm.potential_gradient(s, grad);
        force = -grad;
        if (penalty_k > 0.0) {
            nm.constraint_gradient(s, gcon);
            force -= penalty_k * nm.constraint(s) * gcon;
        }
    };

    Eigen::VectorXd force(s0.size());
    total_force(s0, force);

    Eigen::VectorXd s1 = s0;
    if (!project) {
        // plain velocity Verlet; forces are indexed by the paired config slot
        for (int c = 0; c < nc; ++c) {
            const int cs = slots[static_cast<std::size_t>(c)];
            const int ms = nm.momentum_slot(cs);
            s1[ms] = s0[ms] + 0.5 * dt * force[cs];
            s1[cs] = s0[cs] + dt * nm.inv_mass(cs) * s1[ms];
        }
        total_force(s1, force);
        for (int c = 0; c < nc; ++c) {
            const int cs = slots[static_cast<std::size_t>(c)];
            const int ms = nm.momentum_slot(cs);
            s1[ms] += 0.5 * dt * force[cs];
        }
        nm.check_away_from_origin(s1);
        return s1;
    }

    // RATTLE: half kick + drift with position-level multiplier
    Eigen::VectorXd gcon0(s0.size());
    nm.constraint_gradient(s0, gcon0);
    double lambda = 0.0;
    Eigen::VectorXd p_half(s0.size()), q1(s0.size());
    int iter = 0;
    for (;; ++iter) {
        if (iter >= max_iter)
            throw dynamics_error("rattle: position projection failed to converge");
        p_half = s0;
        q1 = s0;
        for (int c = 0; c < nc; ++c) {
            const int cs = slots[static_cast<std::size_t>(c)];
            const int ms = nm.momentum_slot(cs);
            p_half[ms] = s0[ms] + 0.5 * dt * (force[cs] - lambda * gcon0[cs]);
            q1[cs] = s0[cs] + dt * nm.inv_mass(cs) * p_half[ms];
        }
        const double g = nm.constraint(q1);
        if (std::abs(g) <= tol) break;
        // Newton on the scalar multiplier
        nm.constraint_gradient(q1, gcon);
        double dg_dlambda = 0.0;
        for (int c = 0; c < nc; ++c) {
            const int cs = slots[static_cast<std::size_t>(c)];
            dg_dlambda += gcon[cs] * (-0.5 * dt * dt * nm.inv_mass(cs)) * gcon0[cs];
        }
        if (dg_dlambda == 0.0)
            throw dynamics_error("rattle: degenerate constraint gradient");
        lambda -= g / dg_dlambda;
    }

    // second half kick with velocity-level projection
    Eigen::VectorXd s1r = q1;
    for (int c = 0; c < nc; ++c) {
        const int cs = slots[static_cast<std::size_t>(c)];
        const int ms = nm.momentum_slot(cs);
        s1r[ms] = p_half[ms];
    }
    total_force(q1, force);
    nm.constraint_gradient(q1, gcon);
    double num = 0.0, den = 0.0;
    for (int c = 0; c < nc; ++c) {
        const int cs = slots[static_cast<std::size_t>(c)];
        const int ms = nm.momentum_slot(cs);
        s1r[ms] += 0.5 * dt * force[cs];
        num += gcon[cs] * nm.inv_mass(cs) * s1r[ms];
        den += gcon[cs] * nm.inv_mass(cs) * gcon[cs];
    }
    if (den == 0.0) throw dynamics_error("rattle: degenerate velocity projection");
    const double mu = num / (0.5 * dt * den);
    for (int c = 0; c < nc; ++c) {
        const int cs = slots[static_cast<std::size_t>(c)];
        const int ms = nm.momentum_slot(cs);
        s1r[ms] -= 0.5 * dt * mu * gcon[cs];
    }
    nm.check_away_from_origin(s1r);
    return s1r;
}

} // namespace

Trajectory integrate(const ConstraintAnalysis& analysis, const ModelContext& ctx,
                     const InitialState& initial, const IntegrateOptions& options) {
    if (options.dt <= 0) throw dynamics_error("integrate: dt must be > 0");
    if (options.t_final < options.dt)
        throw dynamics_error("integrate: t_final must be >= dt");

    const StateLayout layout{ctx.spec.dimension, ctx.spec.bath.mode_count};
    const NumericModel nm{ctx.spec, ctx.modes, layout};
    const auto steps = static_cast<int>(std::llround(options.t_final / options.dt));

    Trajectory traj;
    traj.layout = layout;
    traj.scheme = options.scheme;
    traj.dt = options.dt;
    traj.seed = initial.seed;
    traj.penalty_k = options.scheme == Scheme::Penalty ? options.penalty_k : 0.0;
    traj.model_hash = model_hash(ctx.spec);
    traj.times = Eigen::VectorXd::LinSpaced(steps + 1, 0.0, steps * options.dt);
    traj.states.resize(steps + 1, layout.size());

    Eigen::VectorXd s = pack_state(initial, layout);
    traj.states.row(0) = s;

    if (options.scheme == Scheme::DiracRk4) {
        const CompiledField field = compile_eom(analysis, ctx);
        const double h = options.dt;
        for (int n = 1; n <= steps; ++n) {
            const Eigen::VectorXd k1 = field(s);
            const Eigen::VectorXd k2 = field(s + 0.5 * h * k1);
            const Eigen::VectorXd k3 = field(s + 0.5 * h * k2);
            const Eigen::VectorXd k4 = field(s + h * k3);
            s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            nm.check_away_from_origin(s);
            traj.states.row(n) = s;
        }
    } else {
        const bool project = options.scheme == Scheme::Rattle;
        const double penalty = options.scheme == Scheme::Penalty ? options.penalty_k : 0.0;
        for (int n = 1; n <= steps; ++n) {
            s = verlet_step(nm, s, options.dt, project, penalty, options.projection_tol,
                            options.projection_max_iter);
            traj.states.row(n) = s;
        }
    }
    return traj;
}

ObservableSeries measure(const Trajectory& traj, const ModelContext& ctx) {
    const StateLayout& layout = traj.layout;
    const NumericModel nm{ctx.spec, ctx.modes, layout};
    const auto n = traj.times.size();
    ObservableSeries obs;
    obs.t = traj.times;
    obs.phi.resize(n);
    obs.chi.resize(n);
    obs.h_system.resize(n);
    obs.h_environment.resize(n);
    obs.h_total.resize(n);
    obs.abs_x.resize(n);
    obs.Q.resize(n);
    obs.x_dot_p.resize(n);
    for (Eigen::Index row = 0; row < n; ++row) {
        const Eigen::VectorXd s = traj.states.row(row);
        Eigen::VectorXd x(layout.dimension), p(layout.dimension);
        for (int i = 1; i <= layout.dimension; ++i) {
            x[i - 1] = s[layout.x(i)];
            p[i - 1] = s[layout.p(i)];
        }
        const double Q = s[layout.Q()], P = s[layout.P()];
        obs.phi[row] = x.squaredNorm() - Q * Q;
        obs.chi[row] = 2.0 * x.dot(p) / ctx.spec.m - 2.0 * Q * P / ctx.spec.M;
        obs.abs_x[row] = x.norm();
        obs.Q[row] = Q;
        obs.x_dot_p[row] = x.dot(p);
        const double hs = p.squaredNorm() / (2.0 * ctx.spec.m) +
                          potential_derivative(ctx.spec, {}, x);
        double he = P * P / (2.0 * ctx.spec.M) +
                    0.5 * ctx.spec.M * ctx.spec.Omega * ctx.spec.Omega * Q * Q;
        for (int j = 1; j <= layout.modes; ++j) {
            const double mj = ctx.modes.mass[static_cast<std::size_t>(j - 1)];
            const double wj = ctx.modes.omega[static_cast<std::size_t>(j - 1)];
            const double cj = ctx.modes.coupling[static_cast<std::size_t>(j - 1)];
            const double qj = s[layout.q(j)], pj = s[layout.pq(j)];
            he += pj * pj / (2.0 * mj) + 0.5 * mj * wj * wj * qj * qj + cj * Q * qj;
        }
        obs.h_system[row] = hs;
        obs.h_environment[row] = he;
        obs.h_total[row] = hs + he;
    }
    return obs;
}

Eigen::VectorXd ensemble_autocorrelation(const std::vector<Trajectory>& ensemble) {
    if (ensemble.empty()) return {};
    const auto n = ensemble.front().times.size();
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
    for (const auto& traj : ensemble) {
        if (traj.times.size() != n)
            throw dynamics_error("ensemble_autocorrelation: mismatched time grids");
        const double q0 = traj.states(0, traj.layout.Q());
        for (Eigen::Index row = 0; row < n; ++row)
            acc[row] += traj.states(row, traj.layout.Q()) * q0;
    }
    return acc / static_cast<double>(ensemble.size());
}

std::string model_hash(const ModelSpec& spec) {
    std::ostringstream os;
    os.precision(17);
    os << spec.dimension << '|' << spec.m << '|' << spec.M << '|' << spec.Omega << '|'
       << static_cast<int>(spec.potential) << '|' << spec.k << '|' << spec.a << '|' << spec.b
       << '|' << spec.bath.eta << '|' << spec.bath.omega_c << '|' << spec.bath.mode_count << '|'
       << spec.bath.omega_max << '|' << spec.bath.mode_mass << '|' << spec.hbar;
    const std::string text = os.str();
    std::uint64_t h = 1469598103934665603ull; // FNV-1a
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace ringdyn
