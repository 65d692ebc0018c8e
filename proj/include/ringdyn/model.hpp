// model.hpp — declarative model description and its symbolic realization

#pragma once

#include "ringdyn/dirac_bergmann.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ringdyn {

enum class PotentialKind { Free, Harmonic, DoubleWell };

enum class SpectralForm { OhmicExponential };

struct BathSpec {
    SpectralForm form{SpectralForm::OhmicExponential};
    double eta{0.0};      // coupling strength, mass/time
    double omega_c{1.0};  // cutoff, 1/time
    int mode_count{0};
    double omega_max{2.0};
    double mode_mass{1.0};
};

struct ModeSet {
    std::vector<double> omega; // strictly increasing
    std::vector<double> coupling;
    std::vector<double> mass;
    int size() const { return static_cast<int>(omega.size()); }
};

struct ModelSpec {
    int dimension{2};
    double m{1.0};
    double M{1.0};
    double Omega{1.0};
    PotentialKind potential{PotentialKind::Free};
    double k{1.0}; // harmonic stiffness
    double a{1.0}; // double-well height scale
    double b{1.0}; // double-well radius-squared offset
    BathSpec bath;
    double hbar{1.0}; // reporting only

    void validate() const; // throws config_error
};

// J(w) = eta * w * exp(-w/omega_c); linear grid w_j = j*omega_max/N with
// c_j = sqrt((2/pi) m_j w_j J(w_j) dw).
ModeSet discretize_bath(const BathSpec& spec);

double spectral_density(const BathSpec& spec, double omega);

// On-surface full state: |x^2 - Q^2| and |x.p/m - QP/M| within 1e-12, Q > 0.
struct InitialState {
    Eigen::VectorXd x, p;
    double Q{0.0}, P{0.0};
    Eigen::VectorXd q, pq;
    double temperature{0.0};
    std::uint64_t seed{0};
};

// Q = |x0| (positive branch), P = M (x0.p0)/(m Q); bath Gaussian at
// temperature T, shifted to the coupled minimum, deterministic in the seed.
InitialState sample_initial(const ModelSpec& model, const ModeSet& modes,
                            const Eigen::VectorXd& x0, const Eigen::VectorXd& p0, double temperature,
                            std::uint64_t seed);

// Symbolic realization: registry plus H_S, H_E (parameters symbolic, V opaque).
struct ModelContext {
    ModelSpec spec;
    ModeSet modes;
    RegistryPtr registry;
    Expr h_system;
    Expr h_environment;
    Expr h_total;
    Expr primary_constraint; // x.x - Q^2

    // numeric values for every declared parameter variable
    std::map<VariableId, double> parameter_values() const;
};

ModelContext build_model_context(const ModelSpec& spec);

// Closed-form partial derivatives of the selected potential; multi_index
// holds 1-based component indices (empty = the value itself).
double potential_derivative(const ModelSpec& model, const std::vector<int>& multi_index,
                            const Eigen::VectorXd& x);

// Deterministic portable gaussians (Box-Muller over mt19937_64 uniforms).
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}
    double next(); // standard normal

private:
    std::mt19937_64 engine_;
    bool have_spare_{false};
    double spare_{0.0};
};

// Random on-surface phase-space points (system + collective sector, bath at
// the origin), used by numeric audits.
std::vector<std::map<VariableId, double>> sample_surface_points(const ModelContext& ctx,
                                                                int count, std::uint64_t seed);

} // namespace ringdyn
