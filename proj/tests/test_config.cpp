#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "regrowth/config.hpp"
#include "regrowth/error.hpp"
#include "regrowth/io.hpp"
#include "regrowth/plot.hpp"

using namespace regrowth;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(const std::string& text, std::string* message = nullptr) {
    try {
        parse_config(text, "t.cfg");
    } catch (const Error& e) {
        if (message) *message = e.what();
        return e.code();
    }
    FAIL("no error for: " << text);
    return ErrorCode::ConfigError;
}

fs::path scratch_dir(const std::string& name) {
    std::random_device rd;
    const fs::path dir = fs::temp_directory_path() / ("regrowth_" + name + "_" + std::to_string(rd()));
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("an empty config is the default") {
    const RunConfig c = parse_config("");
    CHECK(c.model.beta == 0.9);
    CHECK(c.model.omega == std::vector<double>{0.3, 0.5, 0.9});
    CHECK(c.model.transition(0, 1) == 0.4);
    CHECK(c.numerics.x_count == 121);
    CHECK(c.numerics.y_count == 30);
    CHECK(c.simulation.seed == 20240601u);
    CHECK(c.output.formats == std::vector<std::string>{"csv"});
    CHECK_NOTHROW(c.validate());
    CHECK(c.model_spec().n_regimes() == 3);
    CHECK(c.baseline_spec().omega == std::vector<double>{0.5});
    CHECK(c.grid().count() == 121);
}

TEST_CASE("the shipped default file matches the built-in defaults") {
    RunConfig file = load_config(REGROWTH_SOURCE_DIR "/configs/default.cfg");
    RunConfig builtin;
    builtin.simulation.theta0 = 2;
    builtin.output.formats = {"csv", "svg"};
    CHECK(canonical_text(file) == canonical_text(builtin));
}

TEST_CASE("values, comments and multi-line matrices") {
    const RunConfig c = parse_config(R"(
# leading comment
[model]
gamma = 2.5   # trailing comment
omega = [0.4, 0.6]
transition = [[0.9, 0.1],
              [0.2, 0.8]]
baseline_regime = 1

[numerics]
x_spacing = log
x_min = 0.01
refine = true

[simulation]
seed = 7
theta0 = 2

[output]
directory = results
formats = [csv, svg]
)");
    CHECK(c.model.gamma == 2.5);
    CHECK(c.model.transition.rows() == 2);
    CHECK(c.model.transition(1, 0) == 0.2);
    CHECK(c.numerics.x_spacing == GridSpacing::LogLinear);
    CHECK(c.numerics.refine);
    CHECK(c.simulation.seed == 7u);
    CHECK(c.simulation_config().theta0 == 1);
    CHECK(c.output.wants("svg"));
    CHECK(c.output.directory == "results");
    CHECK_NOTHROW(c.validate());
    CHECK(c.grid()[1] == doctest::Approx(0.01));
}

TEST_CASE("errors name the offending line") {
    std::string msg;
    CHECK(code_of("[model]\nbeta = 0.9\nbogus = 1\n", &msg) == ErrorCode::ConfigError);
    CHECK(msg.find("t.cfg:3") != std::string::npos);
    CHECK(code_of("[nonsense]\n", &msg) == ErrorCode::ConfigError);
    CHECK(msg.find("t.cfg:1") != std::string::npos);
    CHECK(code_of("[model]\nbeta = 0.9\nbeta = 0.8\n", &msg) == ErrorCode::ConfigError);
    CHECK(msg.find("t.cfg:3") != std::string::npos);
    CHECK(code_of("[model]\nbeta = abc\n") == ErrorCode::ConfigError);
    CHECK(code_of("[model]\nomega = [0.3, 0.5\n") == ErrorCode::ConfigError);
    CHECK(code_of("beta = 0.9\n") == ErrorCode::ConfigError);
    CHECK(code_of("[numerics]\nx_count = -3\n") == ErrorCode::ConfigError);
    CHECK(code_of("[numerics]\nrefine = maybe\n") == ErrorCode::ConfigError);
    CHECK(code_of("[output]\nformats = [csv, pdf]\n") == ErrorCode::ConfigError);
}

TEST_CASE("inconsistent settings fail validation") {
    auto invalid = [](const std::string& text) {
        CHECK_THROWS_AS(parse_config(text).validate(), Error);
    };
    invalid("[model]\nomega = [0.3, 0.5]\n");  // 3x3 transition
    invalid("[model]\nbeta = 1.5\n");
    invalid("[simulation]\ntheta0 = 4\n");
    invalid("[simulation]\nburn_in = 200000\n");
    invalid("[model]\nbaseline_regime = 5\n");
}

TEST_CASE("canonical text round-trips and hashes are stable") {
    RunConfig c;
    c.model.gamma = 0.1 + 0.2;
    c.numerics.tol_w = 1e-12;
    c.simulation.seed = 99;
    const std::string text = canonical_text(c);
    const RunConfig back = parse_config(text);
    CHECK(canonical_text(back) == text);
    CHECK(back.model.gamma == c.model.gamma);
    CHECK(config_hash(back) == config_hash(c));
    CHECK(config_hash(c).size() == 16);

    RunConfig reseeded = c;
    reseeded.simulation.seed = 100;
    CHECK(config_hash(reseeded) != config_hash(c));
    CHECK(solve_hash(reseeded) == solve_hash(c));
    reseeded.numerics.y_count = 60;
    CHECK(solve_hash(reseeded) != solve_hash(c));
}

TEST_CASE("number formatting is shortest round-trip") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(633) == "633");
    CHECK(std::stod(format_number(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("csv render and read") {
    const fs::path dir = scratch_dir("csv");
    ArtifactMeta meta{"abc", "def", 42, {{"converged", "true"}}};
    const std::string text = render_csv(meta, {"x", "v"}, {{"0", "1.5"}, {"2", "3"}});
    CHECK(text.rfind(std::string("# regrowth ") + version(), 0) == 0);
    write_atomic(dir / "t.csv", text);
    CHECK(slurp(dir / "t.csv") == text);
    CHECK_FALSE(fs::exists(dir / "t.csv.tmp"));

    const CsvFile f = read_csv(dir / "t.csv");
    CHECK(f.meta.at("config_hash") == "abc");
    CHECK(f.meta.at("solve_hash") == "def");
    CHECK(f.meta.at("seed") == "42");
    CHECK(f.meta.at("converged") == "true");
    CHECK(f.header == CsvRow{"x", "v"});
    REQUIRE(f.rows.size() == 2);
    CHECK(f.rows[1][f.column("v")] == "3");
    CHECK_THROWS_AS(f.column("missing"), Error);
    CHECK_THROWS_AS(read_csv(dir / "absent.csv"), Error);
    fs::remove_all(dir);
}

TEST_CASE("artifact sets write everything or nothing") {
    const fs::path dir = scratch_dir("set");
    ArtifactSet ok(dir);
    ok.add("a.csv", "1\n");
    ok.add("b.csv", "2\n");
    CHECK(ok.commit().size() == 2);
    CHECK(slurp(dir / "b.csv") == "2\n");

    // The second target is a directory, so its rename fails.
    fs::create_directories(dir / "blocked.csv" / "inner");
    ArtifactSet bad(dir);
    bad.add("c.csv", "3\n");
    bad.add("blocked.csv", "4\n");
    CHECK_THROWS(bad.commit());
    CHECK_FALSE(fs::exists(dir / "c.csv"));
    fs::remove_all(dir);
}

TEST_CASE("svg rendering") {
    LineChart chart{"Value <V>", "x", "V", {}, "note & more"};
    chart.series.push_back({"regime 1", {0, 1, 2}, {0, 1, 1.5}, "red", false});
    chart.series.push_back({"baseline", {0, 1, 2}, {0, 0.9, std::nan("")}, "black", true});
    const std::string svg = render_svg(chart);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("Value &lt;V&gt;") != std::string::npos);
    CHECK(svg.find("note &amp; more") != std::string::npos);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
    std::size_t polylines = 0;
    for (std::size_t p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++polylines;
    CHECK(polylines == 2);
    CHECK(svg.find("nan") == std::string::npos);
    CHECK(render_svg(chart) == svg);

    const auto ticks = nice_ticks(0.0, 10.0);
    CHECK(ticks.front() == 0.0);
    CHECK(ticks.back() == 10.0);
}
