#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "regrowth/commands.hpp"
#include "regrowth/io.hpp"

using namespace regrowth;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) {
        std::random_device rd;
        dir = fs::temp_directory_path() / ("regrowth_cmd_" + name + "_" + std::to_string(rd()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
};

RunConfig small_config() {
    RunConfig c;
    c.numerics.x_count = 41;
    c.simulation.T = 20000;
    c.output.formats = {"csv", "svg"};
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("check writes the assumption table") {
    Scratch s("check");
    std::ostringstream log;
    CHECK(cmd_check(small_config(), {s.dir, false}, log) == kExitOk);
    const CsvFile f = read_csv(s.dir / "assumptions.csv");
    CHECK(f.rows.size() >= 5);
    CHECK(log.str().find("alpha*beta") != std::string::npos);
}

TEST_CASE("a violating calibration exits with the assumption code") {
    Scratch s("violation");
    RunConfig c = small_config();
    c.model.r = 1.0;
    std::ostringstream log;
    CHECK(cmd_check(c, {s.dir, false}, log) == kExitAssumption);
    CHECK(log.str().find("raise r") != std::string::npos);
    CHECK(cmd_solve(c, {s.dir, false}, log) == kExitAssumption);
    CHECK_FALSE(fs::exists(s.dir / "value.csv"));
    CHECK(cmd_solve(c, {s.dir, true}, log) == kExitOk);
    CHECK(fs::exists(s.dir / "value.csv"));
}

TEST_CASE("full pipeline, reuse and byte-identical reruns") {
    Scratch s("pipeline");
    const RunConfig c = small_config();
    std::ostringstream log;
    REQUIRE(cmd_solve(c, {s.dir, false}, log) == kExitOk);
    for (const char* name : {"value.csv", "policy.csv", "report.csv", "baseline_value.csv", "baseline_policy.csv",
                             "baseline_report.csv", "value_function.svg", "investment_ratio.svg"}) {
        CHECK_MESSAGE(fs::exists(s.dir / name), name);
    }

    const CsvFile policy = read_csv(s.dir / "policy.csv");
    CHECK(policy.meta.at("solve_hash") == solve_hash(c));
    const auto cx = policy.column("x");
    const auto cr = policy.column("invest_ratio");
    for (const auto& row : policy.rows) {
        if (std::stod(row[cx]) == 0.0) {
            CHECK(row[cr].empty());
        } else {
            const double ratio = std::stod(row[cr]);
            CHECK(ratio >= 0.0);
            CHECK(ratio <= 1.0);
        }
    }
    CHECK(read_csv(s.dir / "report.csv").meta.at("converged") == "true");

    std::ostringstream euler_log;
    CHECK(cmd_euler(c, {s.dir, false}, euler_log) == kExitOk);
    CHECK(euler_log.str().find("using solve outputs") != std::string::npos);
    CHECK(fs::exists(s.dir / "residuals.csv"));

    std::ostringstream sim_log;
    CHECK(cmd_simulate(c, {s.dir, false}, sim_log) == kExitOk);
    const CsvFile drift = read_csv(s.dir / "drift.csv");
    CHECK(drift.meta.at("satisfied") == "true");
    CHECK(read_csv(s.dir / "regimes.csv").rows.size() == 3);
    CHECK_FALSE(fs::exists(s.dir / "path.csv"));

    std::map<std::string, std::string> first;
    for (const auto& entry : fs::directory_iterator(s.dir)) first[entry.path().filename().string()] = slurp(entry.path());

    Scratch again("pipeline_again");
    std::ostringstream quiet;
    CHECK(cmd_solve(c, {again.dir, false}, quiet) == kExitOk);
    CHECK(cmd_euler(c, {again.dir, false}, quiet) == kExitOk);
    CHECK(cmd_simulate(c, {again.dir, false}, quiet) == kExitOk);
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(again.dir)) {
        const std::string name = entry.path().filename().string();
        REQUIRE(first.count(name));
        CHECK_MESSAGE(first[name] == slurp(entry.path()), name);
        ++compared;
    }
    CHECK(compared == first.size());
}

TEST_CASE("a different seed changes only the simulation outputs") {
    Scratch s("seed");
    RunConfig c = small_config();
    c.simulation.T = 5000;
    c.simulation.write_path = true;
    std::ostringstream log;
    REQUIRE(cmd_simulate(c, {s.dir, false}, log) == kExitOk);
    CHECK(log.str().find("solving") != std::string::npos);
    const std::string path_a = slurp(s.dir / "path.csv");
    c.simulation.seed += 1;
    REQUIRE(cmd_simulate(c, {s.dir, false}, log) == kExitOk);
    CHECK(slurp(s.dir / "path.csv") != path_a);
    CHECK_FALSE(fs::exists(s.dir / "value.csv"));
}

TEST_CASE("stale solve outputs are not reused") {
    Scratch s("stale");
    RunConfig c = small_config();
    std::ostringstream log;
    REQUIRE(cmd_solve(c, {s.dir, false}, log) == kExitOk);
    c.model.gamma = 2.0;
    CHECK_FALSE(load_solution(s.dir, c, c.model_spec()).has_value());
    c.model.gamma = 1.0;
    CHECK(load_solution(s.dir, c, c.model_spec()).has_value());
}

TEST_CASE("plot needs solve outputs") {
    Scratch s("plot");
    std::ostringstream log;
    try {
        cmd_plot(small_config(), {s.dir, false}, log);
        FAIL("expected MissingArtifact");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingArtifact);
        CHECK(exit_code_for(e.code()) == kExitConfig);
    }
}

TEST_CASE("exit code mapping") {
    CHECK(exit_code_for(ErrorCode::ConfigError) == kExitConfig);
    CHECK(exit_code_for(ErrorCode::InfiniteMoment) == kExitAssumption);
    CHECK(exit_code_for(ErrorCode::NonFiniteIntegrand) == kExitNumeric);
    CHECK(exit_code_for(ErrorCode::InvalidValueTag) == kExitNumeric);
}
