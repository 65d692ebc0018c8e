// registry.hpp — phase-space variable declarations and canonical pairing
//
// Variable ids double as the monomial-order precedence: smaller id = higher
// precedence. Creation order is Q, P, x1..xd, p1..pd, q1..qN, pq1..pqN,
// named parameters, then lazily interned function-derivative symbols.

#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ringdyn {

using VariableId = std::uint32_t;

enum class VarKind { Coordinate, Momentum, Parameter, FunctionDeriv };

enum class VarFamily {
    SystemX,
    SystemP,
    CollectiveQ,
    CollectiveP,
    BathQ,
    BathP,
    NamedParameter,
    FunctionDeriv,
};

struct VarInfo {
    std::string name;
    VarKind kind{VarKind::Parameter};
    VarFamily family{VarFamily::NamedParameter};
    int index{0};            // component/mode index (1-based) or parameter slot
    std::int64_t pair{-1};   // canonical partner id, -1 when unpaired
    std::string function;    // FunctionDeriv: owning function name
    std::vector<int> multi_index; // FunctionDeriv: sorted differentiation indices
};

// A declared opaque scalar function of the system coordinates (e.g. the
// potential). Derivative symbols are interned on demand; mixed partials are
// symmetric because multi-indices are kept sorted.
struct FunctionSymbol {
    std::string name;
    std::vector<VariableId> args;
};

class PhaseSpaceRegistry {
public:
    // Standard layout: d system components, N bath modes, parameters
    // m, M, Omega, hbar, k, a, b, then per-mode mb_j, w_j, c_j, and the
    // declared potential V(x1..xd).
    static std::shared_ptr<const PhaseSpaceRegistry> make(int dimension, int bath_modes);

    int dimension() const { return dimension_; }
    int bath_modes() const { return bath_modes_; }

    VariableId Q() const { return 0; }
    VariableId P() const { return 1; }
    VariableId x(int i) const;   // i in [1, d]
    VariableId p(int i) const;
    VariableId q(int j) const;   // j in [1, N]
    VariableId pq(int j) const;
    VariableId param(const std::string& name) const;

    // Resolves declared names, including function names ("V") and derivative
    // symbols ("dV_1_2", interned on first sight).
    std::optional<VariableId> find(const std::string& name) const;

    const VarInfo& info(VariableId v) const;
    const std::string& name(VariableId v) const { return info(v).name; }
    std::size_t size() const;

    bool is_coordinate(VariableId v) const { return info(v).kind == VarKind::Coordinate; }
    bool is_momentum(VariableId v) const { return info(v).kind == VarKind::Momentum; }
    bool is_parameter(VariableId v) const { return info(v).kind == VarKind::Parameter; }
    bool is_function_deriv(VariableId v) const { return info(v).kind == VarKind::FunctionDeriv; }

    const std::vector<std::pair<VariableId, VariableId>>& canonical_pairs() const {
        return pairs_;
    }

    bool has_function(const std::string& name) const;
    const FunctionSymbol& function(const std::string& name) const;

    // Interns D^{multi}f; an empty multi-index denotes the function itself.
    VariableId derivative_symbol(const std::string& func, std::vector<int> multi_index) const;
    // Derivative of an existing derivative symbol with respect to x_component.
    VariableId bump_derivative(VariableId deriv, int component) const;

private:
    PhaseSpaceRegistry() = default;
    VariableId add(VarInfo info);

    int dimension_{0};
    int bath_modes_{0};
    std::vector<std::pair<VariableId, VariableId>> pairs_;
    std::map<std::string, FunctionSymbol> functions_;

    // Frozen after make() except for lazily interned derivative symbols.
    // deque keeps references stable while derivative symbols are interned.
    mutable std::mutex mutex_;
    mutable std::deque<VarInfo> vars_;
    mutable std::unordered_map<std::string, VariableId> by_name_;
};

using RegistryPtr = std::shared_ptr<const PhaseSpaceRegistry>;

} // namespace ringdyn
