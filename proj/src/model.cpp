#include "ringdyn/model.hpp"

#include "ringdyn/errors.hpp"

#include <cmath>

namespace ringdyn {

void ModelSpec::validate() const {
    if (dimension < 1) throw config_error("model.dimension must be >= 1");
    if (m <= 0) throw config_error("model.m must be > 0");
    if (M <= 0) throw config_error("model.M must be > 0");
    if (Omega < 0) throw config_error("model.Omega must be >= 0");
    if (potential == PotentialKind::Harmonic && k < 0)
        throw config_error("model.k must be >= 0");
    if (potential == PotentialKind::DoubleWell && (a <= 0 || b <= 0))
        throw config_error("model.a and model.b must be > 0");
    if (bath.eta < 0) throw config_error("model.bath.eta must be >= 0");
    if (bath.omega_c <= 0) throw config_error("model.bath.omega_c must be > 0");
    if (bath.mode_count < 0) throw config_error("model.bath.N must be >= 0");
    if (bath.omega_max <= 0) throw config_error("model.bath.omega_max must be > 0");
    if (bath.mode_mass <= 0) throw config_error("model.bath.mode_mass must be > 0");
    if (hbar <= 0) throw config_error("model.hbar must be > 0");
}

double spectral_density(const BathSpec& spec, double omega) {
    return spec.eta * omega * std::exp(-omega / spec.omega_c);
}

ModeSet discretize_bath(const BathSpec& spec) {
    ModeSet modes;
    if (spec.mode_count == 0) return modes;
    const double dw = spec.omega_max / spec.mode_count;
    modes.omega.reserve(spec.mode_count);
    for (int j = 1; j <= spec.mode_count; ++j) {
        const double w = j * dw;
        modes.omega.push_back(w);
        modes.mass.push_back(spec.mode_mass);
        modes.coupling.push_back(
            std::sqrt(2.0 / M_PI * spec.mode_mass * w * spectral_density(spec, w) * dw));
    }
    return modes;
}

InitialState sample_initial(const ModelSpec& model, const ModeSet& modes,
                            const Eigen::VectorXd& x0, const Eigen::VectorXd& p0, double temperature,
                            std::uint64_t seed) {
    if (x0.size() != model.dimension || p0.size() != model.dimension)
        throw dynamics_error("sample_initial: x0/p0 dimension mismatch");
    const double norm = x0.norm();
    if (norm == 0.0)
        throw dynamics_error("sample_initial: x0 = 0 is a singular surface point (Q would vanish)");
    if (temperature < 0) throw dynamics_error("sample_initial: negative temperature");

    InitialState state;
    state.x = x0;
    state.p = p0;
    state.Q = norm;                                     // positive branch
    state.P = model.M * x0.dot(p0) / (model.m * norm);  // places the state on chi = 0
    state.temperature = temperature;
    state.seed = seed;

    const int n = modes.size();
    state.q = Eigen::VectorXd::Zero(n);
    state.pq = Eigen::VectorXd::Zero(n);
    GaussianSource gauss(seed);
    for (int j = 0; j < n; ++j) {
        const double mj = modes.mass[static_cast<std::size_t>(j)];
        const double wj = modes.omega[static_cast<std::size_t>(j)];
        const double cj = modes.coupling[static_cast<std::size_t>(j)];
        const double mean = -cj * state.Q / (mj * wj * wj); // coupled equilibrium
        double dq = 0.0, dp = 0.0;
        if (temperature > 0) {
            dq = std::sqrt(temperature / (mj * wj * wj)) * gauss.next();
            dp = std::sqrt(mj * temperature) * gauss.next();
        }
        state.q[j] = mean + dq;
        state.pq[j] = dp;
    }
    return state;
}

double GaussianSource::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller on explicitly constructed uniforms for cross-platform
    // reproducibility (std::normal_distribution is implementation-defined)
    double u1 = 0.0;
    do {
        u1 = static_cast<double>(engine_()) / static_cast<double>(std::mt19937_64::max());
    } while (u1 <= 0.0);
    const double u2 = static_cast<double>(engine_()) / static_cast<double>(std::mt19937_64::max());
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

ModelContext build_model_context(const ModelSpec& spec) {
    spec.validate();
    ModelContext ctx;
    ctx.spec = spec;
    ctx.modes = discretize_bath(spec.bath);
    const auto reg = PhaseSpaceRegistry::make(spec.dimension, spec.bath.mode_count);
    ctx.registry = reg;

    const Expr two = Expr::integer(reg, 2);
    auto var = [&](VariableId v) { return Expr::variable(reg, v); };
    const Expr m = var(reg->param("m"));
    const Expr M = var(reg->param("M"));
    const Expr Omega = var(reg->param("Omega"));
    const Expr Q = var(reg->Q());
    const Expr P = var(reg->P());

    // H_S = p.p/(2m) + V(x)
    Expr p_sq = Expr::zero(reg);
    Expr x_sq = Expr::zero(reg);
    for (int i = 1; i <= spec.dimension; ++i) {
        p_sq = p_sq + var(reg->p(i)).pow(2);
        x_sq = x_sq + var(reg->x(i)).pow(2);
    }
    ctx.h_system = p_sq / (two * m) + var(reg->derivative_symbol("V", {}));

    // H_E = P^2/(2M) + M Omega^2 Q^2/2 + sum_j pq^2/(2 mb) + mb w^2 q^2/2 + c Q q
    Expr h_env = P.pow(2) / (two * M) + M * Omega.pow(2) * Q.pow(2) / two;
    for (int j = 1; j <= spec.bath.mode_count; ++j) {
        const Expr mb = var(reg->param("mb" + std::to_string(j)));
        const Expr w = var(reg->param("w" + std::to_string(j)));
        const Expr c = var(reg->param("c" + std::to_string(j)));
        const Expr qj = var(reg->q(j));
        h_env = h_env + var(reg->pq(j)).pow(2) / (two * mb) + mb * w.pow(2) * qj.pow(2) / two +
                c * Q * qj;
    }
    ctx.h_environment = h_env;
    ctx.h_total = ctx.h_system + ctx.h_environment;
    ctx.primary_constraint = x_sq - Q.pow(2);
    return ctx;
}

std::map<VariableId, double> ModelContext::parameter_values() const {
    std::map<VariableId, double> values;
    const auto& reg = *registry;
    values[reg.param("m")] = spec.m;
    values[reg.param("M")] = spec.M;
    values[reg.param("Omega")] = spec.Omega;
    values[reg.param("hbar")] = spec.hbar;
    values[reg.param("k")] = spec.k;
    values[reg.param("a")] = spec.a;
    values[reg.param("b")] = spec.b;
    for (int j = 1; j <= spec.bath.mode_count; ++j) {
        values[reg.param("mb" + std::to_string(j))] = modes.mass[static_cast<std::size_t>(j - 1)];
        values[reg.param("w" + std::to_string(j))] = modes.omega[static_cast<std::size_t>(j - 1)];
        values[reg.param("c" + std::to_string(j))] = modes.coupling[static_cast<std::size_t>(j - 1)];
    }
    return values;
}

double potential_derivative(const ModelSpec& model, const std::vector<int>& multi_index,
                            const Eigen::VectorXd& x) {
    const std::size_t order = multi_index.size();
    switch (model.potential) {
        case PotentialKind::Free:
            return 0.0;
        case PotentialKind::Harmonic: {
            // V = (k/2) x.x
            if (order == 0) return 0.5 * model.k * x.squaredNorm();
            if (order == 1) return model.k * x[multi_index[0] - 1];
            if (order == 2) return multi_index[0] == multi_index[1] ? model.k : 0.0;
            return 0.0;
        }
        case PotentialKind::DoubleWell: {
            // V = a (x.x - b)^2
            const double s = x.squaredNorm() - model.b;
            auto xi = [&](std::size_t slot) { return x[multi_index[slot] - 1]; };
            auto delta = [&](std::size_t i, std::size_t j) {
                return multi_index[i] == multi_index[j] ? 1.0 : 0.0;
            };
            if (order == 0) return model.a * s * s;
            if (order == 1) return 4.0 * model.a * s * xi(0);
            if (order == 2) return 4.0 * model.a * (s * delta(0, 1) + 2.0 * xi(0) * xi(1));
            if (order == 3)
                return 8.0 * model.a *
                       (delta(0, 1) * xi(2) + delta(0, 2) * xi(1) + delta(1, 2) * xi(0));
            if (order == 4)
                return 8.0 * model.a *
                       (delta(0, 1) * delta(2, 3) + delta(0, 2) * delta(1, 3) +
                        delta(0, 3) * delta(1, 2));
            return 0.0;
        }
    }
    return 0.0;
}

std::vector<std::map<VariableId, double>> sample_surface_points(const ModelContext& ctx,
                                                                int count, std::uint64_t seed) {
    const auto& reg = *ctx.registry;
    const int d = ctx.spec.dimension;
    GaussianSource gauss(seed);
    std::vector<std::map<VariableId, double>> points;
    points.reserve(static_cast<std::size_t>(count));
    while (static_cast<int>(points.size()) < count) {
        Eigen::VectorXd x(d), p(d);
        for (int i = 0; i < d; ++i) x[i] = gauss.next();
        for (int i = 0; i < d; ++i) p[i] = gauss.next();
        const double norm = x.norm();
        if (norm < 0.3) continue; // stay away from the singular locus
        auto point = ctx.parameter_values();
        for (int i = 1; i <= d; ++i) {
            point[reg.x(i)] = x[i - 1];
            point[reg.p(i)] = p[i - 1];
        }
        point[reg.Q()] = norm;
        point[reg.P()] = ctx.spec.M * x.dot(p) / (ctx.spec.m * norm);
        for (int j = 1; j <= ctx.spec.bath.mode_count; ++j) {
            point[reg.q(j)] = gauss.next();
            point[reg.pq(j)] = gauss.next();
        }
        // bind derivative symbols of the selected potential as they exist
        for (std::size_t v = 0; v < reg.size(); ++v) {
            const auto id = static_cast<VariableId>(v);
            if (!reg.is_function_deriv(id)) continue;
            point[id] = potential_derivative(ctx.spec, reg.info(id).multi_index, x);
        }
        points.push_back(std::move(point));
    }
    return points;
}

} // namespace ringdyn
