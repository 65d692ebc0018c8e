// config.hpp — declarative run configuration (JSON, versioned)

#pragma once

#include "ringdyn/dynamics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ringdyn {

struct RunConfig {
    int version{1};
    ModelSpec model;
    Scheme scheme{Scheme::DiracRk4};
    double dt{1e-3};
    double t_final{10.0};
    std::vector<std::uint64_t> seeds{42};
    std::vector<double> penalty_k{1e4};
    double temperature{0.0};
    std::vector<double> x0; // defaults to (1, 0, ...)
    std::vector<double> p0; // defaults to (0, 1, 0, ...)
    std::string output_dir{"."};

    void validate() const; // throws config_error naming the offending field
    Eigen::VectorXd x0_vector() const;
    Eigen::VectorXd p0_vector() const;
};

// Parses and validates, applying defaults. Parse failures carry the byte
// position; schema failures name the field.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);

// Full serialization with defaults applied; parse_config(serialize_config(c))
// round-trips to an identical serialization.
std::string serialize_config(const RunConfig& config);

} // namespace ringdyn
