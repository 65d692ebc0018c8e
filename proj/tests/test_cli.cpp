#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ringdyn/config.hpp"
#include "ringdyn/errors.hpp"
#include "ringdyn/report.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ringdyn;
namespace fs = std::filesystem;

namespace {

fs::path make_temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("ringdyn_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& body) {
    const fs::path path = dir / name;
    std::ofstream out(path);
    out << body;
    return path;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(RINGDYN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

TEST_CASE("minimal config applies all defaults") {
    const RunConfig config = parse_config(R"({"version": 1, "model": {}})");
    CHECK(config.model.dimension == 2);
    CHECK(config.model.m == 1.0);
    CHECK(config.model.M == 1.0);
    CHECK(config.model.Omega == 1.0);
    CHECK(config.model.potential == PotentialKind::Free);
    CHECK(config.model.bath.mode_count == 0);
    CHECK(config.dt == 1e-3);
    CHECK(config.t_final == 10.0);
    REQUIRE(config.seeds.size() == 1);
    CHECK(config.seeds[0] == 42);
    CHECK(config.scheme == Scheme::DiracRk4);
}

TEST_CASE("config errors name the offending field") {
    CHECK_THROWS_AS((void)parse_config(R"({"model": {}})"), config_error);
    CHECK_THROWS_AS((void)parse_config(R"({"version": 2, "model": {}})"), config_error);
    CHECK_THROWS_AS((void)parse_config("{nope"), config_error);

    try {
        (void)parse_config(R"({"version": 1, "model": {"m": -1}})");
        FAIL("expected config_error");
    } catch (const config_error& err) {
        CHECK(std::string(err.what()).find("model.m") != std::string::npos);
    }
    try {
        (void)parse_config(R"({"version": 1, "model": {"mass": 2}})");
        FAIL("expected config_error");
    } catch (const config_error& err) {
        CHECK(std::string(err.what()).find("model.mass") != std::string::npos);
    }
    try {
        (void)parse_config(R"({"version": 1, "run": {"dt": 0}})");
        FAIL("expected config_error");
    } catch (const config_error& err) {
        CHECK(std::string(err.what()).find("run.dt") != std::string::npos);
    }
}

TEST_CASE("serialization is idempotent after defaults") {
    const RunConfig config = parse_config(
        R"({"version": 1, "model": {"potential": {"kind": "harmonic", "k": 2}},
            "run": {"scheme": "rattle", "seeds": [1, 2]}, "output": "out"})");
    const std::string once = serialize_config(config);
    const std::string twice = serialize_config(parse_config(once));
    CHECK(once == twice);
}

TEST_CASE("format helper prints 17 significant digits") {
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.1) == "0.10000000000000001");
    for (double v : {-2.5e-13, 3.141592653589793, 1.0 / 3.0, 6.02e23})
        CHECK(std::stod(format_double(v)) == v); // lossless round trip
}

TEST_CASE("analyze and table commands write their reports") {
    const fs::path dir = make_temp_dir("analyze");
    const fs::path config = write_config(dir, "config.json",
                                         R"({"version": 1, "model": {"potential": {"kind": "harmonic"}}})");
    CHECK(run_cli("analyze --config " + config.string() + " --output " + dir.string()) == 0);
    const std::string report = slurp(dir / "analysis.json");
    CHECK(report.find("\"constraints\"") != std::string::npos);
    CHECK(report.find("second-class") != std::string::npos);

    CHECK(run_cli("table --config " + config.string() + " --output " + dir.string()) == 0);
    CHECK(slurp(dir / "commutator_table.json").find("ordering_ambiguous") != std::string::npos);
    CHECK(slurp(dir / "commutator_table.txt").find("i*hbar") != std::string::npos);
}

TEST_CASE("simulate writes CSVs and honors flag overrides") {
    const fs::path dir = make_temp_dir("simulate");
    const fs::path config = write_config(dir, "config.json", R"({"version": 1, "model": {}})");
    CHECK(run_cli("simulate --config " + config.string() + " --output " + dir.string() +
                  " --scheme rattle --dt 0.001 --t-final 0.05 --seed 9") == 0);
    const std::string traj = slurp(dir / "trajectory_rattle_seed9.csv");
    CHECK(traj.rfind("t,x1,x2,p1,p2,Q,P\n", 0) == 0);
    const std::string obs = slurp(dir / "observables_rattle_seed9.csv");
    CHECK(obs.rfind("t,phi,chi,H_S,H_E,H_tot,absx,Q,xdotp\n", 0) == 0);

    // byte-identical on a repeated identical run
    const std::string before = traj;
    CHECK(run_cli("simulate --config " + config.string() + " --output " + dir.string() +
                  " --scheme rattle --dt 0.001 --t-final 0.05 --seed 9") == 0);
    CHECK(slurp(dir / "trajectory_rattle_seed9.csv") == before);
}

TEST_CASE("exit codes distinguish failure classes") {
    const fs::path dir = make_temp_dir("exitcodes");
    const fs::path bad_model =
        write_config(dir, "bad_model.json", R"({"version": 1, "model": {"m": -1}})");
    CHECK(run_cli("analyze --config " + bad_model.string()) == 4);

    const fs::path bad_dt =
        write_config(dir, "bad_dt.json", R"({"version": 1, "run": {"dt": 0}})");
    CHECK(run_cli("simulate --config " + bad_dt.string()) == 4);

    CHECK(run_cli("analyze --config " + (dir / "missing.json").string()) == 4);
    CHECK(run_cli("bogus-command --config " + bad_model.string()) != 0);
}
