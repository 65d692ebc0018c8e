#include "ringdyn/config.hpp"

#include "ringdyn/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace ringdyn {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& scope,
                  const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key))
            throw config_error("unknown field '" + (scope.empty() ? key : scope + "." + key) + "'");
    }
}

double get_number(const json& obj, const std::string& scope, const std::string& key,
                  double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number())
        throw config_error("field '" + scope + "." + key + "' must be a number");
    return v.get<double>();
}

int get_int(const json& obj, const std::string& scope, const std::string& key, int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        throw config_error("field '" + scope + "." + key + "' must be an integer");
    return v.get<int>();
}

PotentialKind potential_from_name(const std::string& name) {
    if (name == "free") return PotentialKind::Free;
    if (name == "harmonic") return PotentialKind::Harmonic;
    if (name == "double-well") return PotentialKind::DoubleWell;
    throw config_error("field 'model.potential.kind' must be one of free, harmonic, double-well");
}

std::string potential_name(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::Free: return "free";
        case PotentialKind::Harmonic: return "harmonic";
        case PotentialKind::DoubleWell: return "double-well";
    }
    return "free";
}

RunConfig from_json(const json& root) {
    if (!root.is_object()) throw config_error("top-level config must be an object");
    require_keys(root, "", {"version", "model", "run", "output"});
    if (!root.contains("version")) throw config_error("missing required field 'version'");
    if (!root.at("version").is_number_integer() || root.at("version").get<int>() != 1)
        throw config_error("field 'version' must be the integer 1");

    RunConfig config;
    config.version = 1;

    const json model = root.value("model", json::object());
    if (!model.is_object()) throw config_error("field 'model' must be an object");
    require_keys(model, "model",
                 {"dimension", "m", "M", "Omega", "potential", "bath", "hbar"});
    config.model.dimension = get_int(model, "model", "dimension", 2);
    config.model.m = get_number(model, "model", "m", 1.0);
    config.model.M = get_number(model, "model", "M", 1.0);
    config.model.Omega = get_number(model, "model", "Omega", 1.0);
    config.model.hbar = get_number(model, "model", "hbar", 1.0);

    const json potential = model.value("potential", json::object());
    if (!potential.is_object()) throw config_error("field 'model.potential' must be an object");
    require_keys(potential, "model.potential", {"kind", "k", "a", "b"});
    std::string kind = "free";
    if (potential.contains("kind")) {
        if (!potential.at("kind").is_string())
            throw config_error("field 'model.potential.kind' must be a string");
        kind = potential.at("kind").get<std::string>();
    }
    config.model.potential = potential_from_name(kind);
    config.model.k = get_number(potential, "model.potential", "k", 1.0);
    config.model.a = get_number(potential, "model.potential", "a", 1.0);
    config.model.b = get_number(potential, "model.potential", "b", 1.0);

    const json bath = model.value("bath", json::object());
    if (!bath.is_object()) throw config_error("field 'model.bath' must be an object");
    require_keys(bath, "model.bath", {"eta", "omega_c", "N", "omega_max", "mode_mass"});
    config.model.bath.eta = get_number(bath, "model.bath", "eta", 0.0);
    config.model.bath.omega_c = get_number(bath, "model.bath", "omega_c", 1.0);
    config.model.bath.mode_count = get_int(bath, "model.bath", "N", 0);
    config.model.bath.omega_max = get_number(bath, "model.bath", "omega_max", 2.0);
    config.model.bath.mode_mass = get_number(bath, "model.bath", "mode_mass", 1.0);

    const json run = root.value("run", json::object());
    if (!run.is_object()) throw config_error("field 'run' must be an object");
    require_keys(run, "run",
                 {"scheme", "dt", "t_final", "seeds", "penalty_k", "temperature", "x0", "p0"});
    if (run.contains("scheme")) {
        if (!run.at("scheme").is_string())
            throw config_error("field 'run.scheme' must be a string");
        config.scheme = scheme_from_name(run.at("scheme").get<std::string>());
    }
    config.dt = get_number(run, "run", "dt", 1e-3);
    config.t_final = get_number(run, "run", "t_final", 10.0);
    config.temperature = get_number(run, "run", "temperature", 0.0);
    if (run.contains("seeds")) {
        if (!run.at("seeds").is_array())
            throw config_error("field 'run.seeds' must be an array of integers");
        config.seeds.clear();
        for (const auto& s : run.at("seeds")) {
            if (!s.is_number_unsigned() && !s.is_number_integer())
                throw config_error("field 'run.seeds' must be an array of integers");
            config.seeds.push_back(s.get<std::uint64_t>());
        }
    }
    if (run.contains("penalty_k")) {
        if (!run.at("penalty_k").is_array())
            throw config_error("field 'run.penalty_k' must be an array of numbers");
        config.penalty_k.clear();
        for (const auto& v : run.at("penalty_k")) {
            if (!v.is_number())
                throw config_error("field 'run.penalty_k' must be an array of numbers");
            config.penalty_k.push_back(v.get<double>());
        }
    }
    auto read_vec = [&](const char* key, std::vector<double>& out) {
        if (!run.contains(key)) return;
        const json& arr = run.at(key);
        if (!arr.is_array())
            throw config_error(std::string("field 'run.") + key + "' must be an array of numbers");
        out.clear();
        for (const auto& v : arr) {
            if (!v.is_number())
                throw config_error(std::string("field 'run.") + key +
                                   "' must be an array of numbers");
            out.push_back(v.get<double>());
        }
    };
    read_vec("x0", config.x0);
    read_vec("p0", config.p0);

    if (root.contains("output")) {
        if (!root.at("output").is_string())
            throw config_error("field 'output' must be a string");
        config.output_dir = root.at("output").get<std::string>();
    }

    config.validate();
    return config;
}

} // namespace

void RunConfig::validate() const {
    model.validate();
    if (dt <= 0) throw config_error("run.dt must be > 0");
    if (t_final < dt) throw config_error("run.t_final must be >= run.dt");
    if (seeds.empty()) throw config_error("run.seeds must be nonempty");
    if (penalty_k.empty()) throw config_error("run.penalty_k must be nonempty");
    for (double k : penalty_k)
        if (k <= 0) throw config_error("run.penalty_k entries must be > 0");
    if (temperature < 0) throw config_error("run.temperature must be >= 0");
    const auto d = static_cast<std::size_t>(model.dimension);
    if (!x0.empty() && x0.size() != d)
        throw config_error("run.x0 must have model.dimension entries");
    if (!p0.empty() && p0.size() != d)
        throw config_error("run.p0 must have model.dimension entries");
}

Eigen::VectorXd RunConfig::x0_vector() const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(model.dimension);
    if (x0.empty()) {
        v[0] = 1.0;
    } else {
        for (int i = 0; i < model.dimension; ++i) v[i] = x0[static_cast<std::size_t>(i)];
    }
    return v;
}

Eigen::VectorXd RunConfig::p0_vector() const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(model.dimension);
    if (p0.empty()) {
        if (model.dimension > 1) v[1] = 1.0;
    } else {
        for (int i = 0; i < model.dimension; ++i) v[i] = p0[static_cast<std::size_t>(i)];
    }
    return v;
}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& err) {
        throw config_error("config parse error at byte " + std::to_string(err.byte) + ": " +
                           err.what());
    }
    return from_json(root);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string serialize_config(const RunConfig& config) {
    json root;
    root["version"] = 1;
    json model;
    model["dimension"] = config.model.dimension;
    model["m"] = config.model.m;
    model["M"] = config.model.M;
    model["Omega"] = config.model.Omega;
    model["hbar"] = config.model.hbar;
    model["potential"] = {{"kind", potential_name(config.model.potential)},
                          {"k", config.model.k},
                          {"a", config.model.a},
                          {"b", config.model.b}};
    model["bath"] = {{"eta", config.model.bath.eta},
                     {"omega_c", config.model.bath.omega_c},
                     {"N", config.model.bath.mode_count},
                     {"omega_max", config.model.bath.omega_max},
                     {"mode_mass", config.model.bath.mode_mass}};
    root["model"] = model;

    json run;
    run["scheme"] = scheme_name(config.scheme);
    run["dt"] = config.dt;
    run["t_final"] = config.t_final;
    run["seeds"] = config.seeds;
    run["penalty_k"] = config.penalty_k;
    run["temperature"] = config.temperature;
    const Eigen::VectorXd x0 = config.x0_vector();
    const Eigen::VectorXd p0 = config.p0_vector();
    run["x0"] = std::vector<double>(x0.data(), x0.data() + x0.size());
    run["p0"] = std::vector<double>(p0.data(), p0.data() + p0.size());
    root["run"] = run;
    root["output"] = config.output_dir;
    return root.dump(2) + "\n";
}

} // namespace ringdyn
