// dynamics.hpp — numeric integration of the constrained flow
//
// Three mutually checking schemes: RK4 on the compiled Dirac vector field,
// RATTLE (velocity Verlet with position/velocity projection onto the
// constraint pair), and a quadratic-penalty velocity Verlet.

#pragma once

#include "ringdyn/model.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace ringdyn {

enum class Scheme { DiracRk4, Rattle, Penalty };

std::string scheme_name(Scheme scheme);
Scheme scheme_from_name(const std::string& name); // throws config_error

// State layout: [x(1..d), p(1..d), Q, P, q(1..N), pq(1..N)].
struct StateLayout {
    int dimension{0};
    int modes{0};
    int size() const { return 2 * dimension + 2 + 2 * modes; }
    int x(int i) const { return i - 1; }
    int p(int i) const { return dimension + i - 1; }
    int Q() const { return 2 * dimension; }
    int P() const { return 2 * dimension + 1; }
    int q(int j) const { return 2 * dimension + 2 + j - 1; }
    int pq(int j) const { return 2 * dimension + 2 + modes + j - 1; }
};

Eigen::VectorXd pack_state(const InitialState& state, const StateLayout& layout);

// A single rational function compiled against the state layout: parameters
// folded into double coefficients, potential-derivative symbols evaluated
// from the x block on demand.
class CompiledExpr {
public:
    CompiledExpr() = default;
    CompiledExpr(const Expr& e, const ModelContext& ctx, const StateLayout& layout);
    double operator()(const Eigen::VectorXd& state) const; // throws dynamics_error on a pole

private:
    struct Factor {
        int slot{-1};               // >= 0: state slot
        std::vector<int> multi;     // slot < 0: potential derivative multi-index
        int exponent{1};
    };
    struct CompiledTerm {
        double coeff{0.0};
        std::vector<Factor> factors;
    };
    double eval_terms(const std::vector<CompiledTerm>& terms, const Eigen::VectorXd& state) const;

    std::vector<CompiledTerm> num_, den_;
    bool den_is_one_{true};
    ModelSpec model_;
    StateLayout layout_;
};

// The weakly reduced Dirac equations of motion as a callable field.
struct CompiledField {
    StateLayout layout;
    std::vector<CompiledExpr> derivative; // one per state slot
    Eigen::VectorXd operator()(const Eigen::VectorXd& state) const;
};

CompiledField compile_eom(const ConstraintAnalysis& analysis, const ModelContext& ctx);

struct Trajectory {
    Eigen::VectorXd times;   // uniform grid, t_0 = 0
    Eigen::MatrixXd states;  // one row per time, layout columns
    StateLayout layout;
    Scheme scheme{Scheme::DiracRk4};
    double dt{0.0};
    std::uint64_t seed{0};
    double penalty_k{0.0};
    std::string model_hash;
};

struct IntegrateOptions {
    Scheme scheme{Scheme::DiracRk4};
    double dt{1e-3};
    double t_final{10.0};
    double penalty_k{1e4};
    double projection_tol{1e-12};
    int projection_max_iter{50};
};

Trajectory integrate(const ConstraintAnalysis& analysis, const ModelContext& ctx,
                     const InitialState& initial, const IntegrateOptions& options);

// Per-time observables.
struct ObservableSeries {
    Eigen::VectorXd t, phi, chi, h_system, h_environment, h_total, abs_x, Q, x_dot_p;
};

ObservableSeries measure(const Trajectory& traj, const ModelContext& ctx);

// <Q(t) Q(0)> averaged over an ensemble of trajectories on a common grid.
Eigen::VectorXd ensemble_autocorrelation(const std::vector<Trajectory>& ensemble);

std::string model_hash(const ModelSpec& spec);

} // namespace ringdyn
