#include "ringdyn/registry.hpp"

#include "ringdyn/errors.hpp"

#include <algorithm>
#include <cctype>

namespace ringdyn {

namespace {

std::string deriv_name(const std::string& func, const std::vector<int>& multi) {
    if (multi.empty()) return func;
    std::string s = "d" + func;
    for (int i : multi) s += "_" + std::to_string(i);
    return s;
}

} // namespace

VariableId PhaseSpaceRegistry::add(VarInfo info) {
    auto id = static_cast<VariableId>(vars_.size());
    by_name_.emplace(info.name, id);
    vars_.push_back(std::move(info));
    return id;
}

std::shared_ptr<const PhaseSpaceRegistry> PhaseSpaceRegistry::make(int dimension,
                                                                   int bath_modes) {
    if (dimension < 1) throw symalg_error("registry: dimension must be >= 1");
    if (bath_modes < 0) throw symalg_error("registry: bath mode count must be >= 0");

    auto reg = std::shared_ptr<PhaseSpaceRegistry>(new PhaseSpaceRegistry());
    reg->dimension_ = dimension;
    reg->bath_modes_ = bath_modes;

    auto qid = reg->add({"Q", VarKind::Coordinate, VarFamily::CollectiveQ, 0, -1, {}, {}});
    auto pid = reg->add({"P", VarKind::Momentum, VarFamily::CollectiveP, 0, -1, {}, {}});
    reg->vars_[qid].pair = pid;
    reg->vars_[pid].pair = qid;
    reg->pairs_.emplace_back(qid, pid);

    for (int i = 1; i <= dimension; ++i)
        reg->add({"x" + std::to_string(i), VarKind::Coordinate, VarFamily::SystemX, i, -1, {}, {}});
    for (int i = 1; i <= dimension; ++i) {
        auto mom = reg->add({"p" + std::to_string(i), VarKind::Momentum, VarFamily::SystemP, i, -1, {}, {}});
        auto coord = reg->x(i);
        reg->vars_[coord].pair = mom;
        reg->vars_[mom].pair = coord;
        reg->pairs_.emplace_back(coord, mom);
    }
    for (int j = 1; j <= bath_modes; ++j)
        reg->add({"q" + std::to_string(j), VarKind::Coordinate, VarFamily::BathQ, j, -1, {}, {}});
    for (int j = 1; j <= bath_modes; ++j) {
        auto mom = reg->add({"pq" + std::to_string(j), VarKind::Momentum, VarFamily::BathP, j, -1, {}, {}});
        auto coord = reg->q(j);
        reg->vars_[coord].pair = mom;
        reg->vars_[mom].pair = coord;
        reg->pairs_.emplace_back(coord, mom);
    }

    for (const char* name : {"m", "M", "Omega", "hbar", "k", "a", "b"})
        reg->add({name, VarKind::Parameter, VarFamily::NamedParameter, 0, -1, {}, {}});
    for (int j = 1; j <= bath_modes; ++j) {
        reg->add({"mb" + std::to_string(j), VarKind::Parameter, VarFamily::NamedParameter, j, -1, {}, {}});
        reg->add({"w" + std::to_string(j), VarKind::Parameter, VarFamily::NamedParameter, j, -1, {}, {}});
        reg->add({"c" + std::to_string(j), VarKind::Parameter, VarFamily::NamedParameter, j, -1, {}, {}});
    }

    FunctionSymbol v;
    v.name = "V";
    for (int i = 1; i <= dimension; ++i) v.args.push_back(reg->x(i));
    reg->functions_.emplace("V", std::move(v));

    return reg;
}

VariableId PhaseSpaceRegistry::x(int i) const {
    if (i < 1 || i > dimension_) throw symalg_error("registry: x index out of range");
    return static_cast<VariableId>(2 + (i - 1));
}

VariableId PhaseSpaceRegistry::p(int i) const {
    if (i < 1 || i > dimension_) throw symalg_error("registry: p index out of range");
    return static_cast<VariableId>(2 + dimension_ + (i - 1));
}

VariableId PhaseSpaceRegistry::q(int j) const {
    if (j < 1 || j > bath_modes_) throw symalg_error("registry: q index out of range");
    return static_cast<VariableId>(2 + 2 * dimension_ + (j - 1));
}

VariableId PhaseSpaceRegistry::pq(int j) const {
    if (j < 1 || j > bath_modes_) throw symalg_error("registry: pq index out of range");
    return static_cast<VariableId>(2 + 2 * dimension_ + bath_modes_ + (j - 1));
}

VariableId PhaseSpaceRegistry::param(const std::string& name) const {
    auto v = find(name);
    if (!v || info(*v).kind != VarKind::Parameter)
        throw symalg_error("registry: unknown parameter '" + name + "'");
    return *v;
}

std::optional<VariableId> PhaseSpaceRegistry::find(const std::string& name) const {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = by_name_.find(name);
        if (it != by_name_.end()) return it->second;
    }
    // Declared function -> its zeroth derivative symbol.
    if (functions_.count(name)) return derivative_symbol(name, {});
    // "d<func>_<i>_<j>..." -> interned derivative symbol.
    if (name.size() > 1 && name[0] == 'd') {
        for (const auto& [fname, fsym] : functions_) {
            const std::string prefix = "d" + fname + "_";
            if (name.rfind(prefix, 0) != 0) continue;
            std::vector<int> multi;
            std::size_t pos = prefix.size() - 1; // at '_'
            bool ok = true;
            while (pos < name.size()) {
                if (name[pos] != '_') { ok = false; break; }
                std::size_t end = ++pos;
                while (end < name.size() && std::isdigit(static_cast<unsigned char>(name[end]))) ++end;
                if (end == pos) { ok = false; break; }
                int idx = std::stoi(name.substr(pos, end - pos));
                if (idx < 1 || idx > dimension_) { ok = false; break; }
                multi.push_back(idx);
                pos = end;
            }
            if (ok && !multi.empty()) return derivative_symbol(fname, std::move(multi));
        }
    }
    return std::nullopt;
}

const VarInfo& PhaseSpaceRegistry::info(VariableId v) const {
    std::lock_guard<std::mutex> lock(mutex_);
    if (v >= vars_.size()) throw symalg_error("registry: invalid variable id");
    return vars_[v];
}

std::size_t PhaseSpaceRegistry::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return vars_.size();
}

bool PhaseSpaceRegistry::has_function(const std::string& name) const {
    return functions_.count(name) != 0;
}

const FunctionSymbol& PhaseSpaceRegistry::function(const std::string& name) const {
    auto it = functions_.find(name);
    if (it == functions_.end()) throw symalg_error("registry: unknown function '" + name + "'");
    return it->second;
}

VariableId PhaseSpaceRegistry::derivative_symbol(const std::string& func,
                                                 std::vector<int> multi_index) const {
    if (!functions_.count(func))
        throw symalg_error("registry: unknown function '" + func + "'");
    std::sort(multi_index.begin(), multi_index.end());
    for (int i : multi_index)
        if (i < 1 || i > dimension_)
            throw symalg_error("registry: derivative index out of range for '" + func + "'");
    const std::string name = deriv_name(func, multi_index);
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = by_name_.find(name);
    if (it != by_name_.end()) return it->second;
    auto id = static_cast<VariableId>(vars_.size());
    VarInfo vi;
    vi.name = name;
    vi.kind = VarKind::FunctionDeriv;
    vi.family = VarFamily::FunctionDeriv;
    vi.index = static_cast<int>(multi_index.size());
    vi.function = func;
    vi.multi_index = std::move(multi_index);
    by_name_.emplace(name, id);
    vars_.push_back(std::move(vi));
    return id;
}

VariableId PhaseSpaceRegistry::bump_derivative(VariableId deriv, int component) const {
    VarInfo vi = info(deriv);
    if (vi.kind != VarKind::FunctionDeriv)
        throw symalg_error("registry: bump_derivative expects a derivative symbol");
    auto multi = vi.multi_index;
    multi.push_back(component);
    return derivative_symbol(vi.function, std::move(multi));
}

} // namespace ringdyn
