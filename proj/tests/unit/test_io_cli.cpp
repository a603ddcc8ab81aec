#include "fptqv/cli.hpp"
#include "fptqv/errors.hpp"
#include "fptqv/grid_io.hpp"

#include "constants.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <unistd.h>

using namespace fptqv;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("fptqv_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("grid csv round trip is exact") {
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    GridTable table;
    table.columns = {"t", "value"};
    table.data.assign(2, {});
    double t = 0.0;
    for (int i = 0; i < 200; ++i) {
        t += std::abs(u(gen)) + 1e-9;
        table.data[0].push_back(t);
        table.data[1].push_back(u(gen) * std::pow(10.0, static_cast<int>(u(gen))));
    }
    const std::string text = format_grid_csv(table);
    std::istringstream in(text);
    const GridTable back = read_grid_csv(in, "mem");
    CHECK(back.columns == table.columns);
    CHECK(back.data == table.data); // bit-exact through 17 significant digits
    // and idempotent formatting
    CHECK(format_grid_csv(back) == text);
}

TEST_CASE("grid csv parse errors carry line numbers") {
    const auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_grid_csv(in, "mem");
    };
    CHECK_THROWS_WITH_AS(parse(""), "mem:1: empty file, expected a header row",
                         validation_error);
    CHECK_THROWS_AS(parse("x,value\n1,2\n"), validation_error);
    try {
        parse("t,value\n0,1\n0.5,oops\n");
        FAIL("expected validation_error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("mem:3") != std::string::npos);
    }
    try {
        parse("t,value\n0,1\n0,2\n");
        FAIL("expected validation_error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("strictly increasing") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("t,value\n0,1,9\n"), validation_error);
    CHECK_THROWS_AS(parse("t,value\n0,inf\n"), validation_error);
}

TEST_CASE("config json: unknown keys and bad values are rejected") {
    TempDir dir;
    const std::string path = dir.file("config.json");

    write_file(path, R"({"bogus": 1})");
    CHECK_THROWS_AS(cli::load_config_json(path), validation_error);

    write_file(path, R"({"sim": {"paths": 0}})");
    CHECK_THROWS_AS(cli::load_config_json(path), validation_error);

    write_file(path, R"({"sim": {"walkers": 10}})");
    CHECK_THROWS_AS(cli::load_config_json(path), validation_error);

    write_file(path, R"({"series": {"term_tol": -1.0}})");
    CHECK_THROWS_AS(cli::load_config_json(path), validation_error);

    write_file(path, R"(not json)");
    CHECK_THROWS_AS(cli::load_config_json(path), validation_error);

    write_file(path,
               R"({"boundary": {"upper": 1.0, "lower": -2.0},
                   "sim": {"paths": 50, "seed": 9},
                   "scenarios": [{"weight": 1.0, "clock": "linear:2"}]})");
    const cli::RunConfig c = cli::load_config_json(path);
    CHECK(c.boundary_upper == 1.0);
    CHECK(c.boundary_lower == -2.0);
    CHECK(c.sim.n_paths == 50);
    CHECK(c.scenarios.size() == 1);
    CHECK(c.scenarios[0].clock == "linear:2");
}

TEST_CASE("exit code mapping") {
    CHECK(cli::exit_code_for(validation_error("x")) == 2);
    CHECK(cli::exit_code_for(domain_error("x")) == 2);
    CHECK(cli::exit_code_for(saturation_error("x")) == 2);
    CHECK(cli::exit_code_for(assumption_error("x")) == 3);
    CHECK(cli::exit_code_for(convergence_error("x")) == 4);
}

TEST_CASE("cmd_forward writes the oracle value on a singleton grid") {
    TempDir dir;
    write_file(dir.file("grid.csv"), "t\n1\n");
    cli::RunConfig cfg;
    cfg.boundary_upper = 1.0;
    cfg.clock = "identity";
    cfg.grid = dir.file("grid.csv");
    cfg.out = dir.file("out.csv");
    CHECK(cli::cmd_forward(cfg) == 0);

    const GridTable out = read_grid_csv(cfg.out);
    CHECK(out.columns == std::vector<std::string>{"t", "cdf", "pdf"});
    CHECK(out.column("cdf")[0] == doctest::Approx(ref::levy_cdf_1_1).epsilon(1e-15));
    CHECK(out.column("pdf")[0] == doctest::Approx(ref::levy_pdf_1_1).epsilon(1e-15));
}

TEST_CASE("cmd_forward at t = 0 yields zero mass") {
    TempDir dir;
    write_file(dir.file("grid.csv"), "t\n0\n");
    cli::RunConfig cfg;
    cfg.boundary_upper = 1.0;
    cfg.grid = dir.file("grid.csv");
    cfg.out = dir.file("out.csv");
    CHECK(cli::cmd_forward(cfg) == 0);
    const GridTable out = read_grid_csv(cfg.out);
    CHECK(out.column("cdf")[0] == 0.0);
    CHECK(out.column("pdf")[0] == 0.0);
}

TEST_CASE("cmd_forward on malformed input exits 2 and writes nothing") {
    TempDir dir;
    write_file(dir.file("grid.csv"), "t\n1\n0.5\n"); // unsorted
    cli::RunConfig cfg;
    cfg.boundary_upper = 1.0;
    cfg.grid = dir.file("grid.csv");
    cfg.out = dir.file("out.csv");
    CHECK(cli::cmd_forward(cfg) == 2);
    CHECK(!fs::exists(cfg.out));

    cfg.grid = dir.file("missing.csv");
    CHECK(cli::cmd_forward(cfg) == 2);
    CHECK(!fs::exists(cfg.out));
}

TEST_CASE("cmd_inverse recovers the clock from a forward run") {
    TempDir dir;
    std::string grid = "t\n";
    for (int i = 0; i <= 40; ++i) grid += format_number(0.25 * i) + "\n";
    write_file(dir.file("grid.csv"), grid);

    cli::RunConfig fwd;
    fwd.boundary_upper = 1.0;
    fwd.clock = "linear:2";
    fwd.grid = dir.file("grid.csv");
    fwd.out = dir.file("fwd.csv");
    REQUIRE(cli::cmd_forward(fwd) == 0);

    cli::RunConfig inv;
    inv.boundary_upper = 1.0;
    inv.target = dir.file("fwd.csv");
    inv.out = dir.file("inv.csv");
    REQUIRE(cli::cmd_inverse(inv) == 0);

    const GridTable out = read_grid_csv(inv.out);
    const auto& t = out.column("t");
    const auto& v = out.column("v");
    for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(v[i] == doctest::Approx(2.0 * t[i]).epsilon(1e-8));
    CHECK(fs::exists(inv.out + ".report.json"));
}

TEST_CASE("cmd_inverse rejects a target reaching 1 with exit 3 and a report") {
    TempDir dir;
    write_file(dir.file("target.csv"), "t,value\n0,0\n1,0.5\n2,1\n");
    cli::RunConfig inv;
    inv.boundary_upper = 1.0;
    inv.target = dir.file("target.csv");
    inv.out = dir.file("inv.csv");
    CHECK(cli::cmd_inverse(inv) == 3);
    CHECK(!fs::exists(inv.out));
    const std::string report = read_file(inv.out + ".report.json");
    CHECK(report.find("\"assumption_k1_infinite\": false") != std::string::npos);
    CHECK(report.find("\"k1\": 2.0") != std::string::npos);
}

TEST_CASE("cmd_inverse exponential target matches the frozen quantile") {
    TempDir dir;
    std::string target = "t,value\n";
    const double ln2 = std::log(2.0);
    std::vector<double> ts;
    for (int i = 0; i <= 400; ++i) ts.push_back(i * 0.05);
    ts.push_back(ln2);
    std::sort(ts.begin(), ts.end());
    for (double t : ts) target += format_number(t) + "," + format_number(-std::expm1(-t)) + "\n";
    write_file(dir.file("target.csv"), target);

    cli::RunConfig inv;
    inv.boundary_upper = 1.0;
    inv.target = dir.file("target.csv");
    inv.out = dir.file("inv.csv");
    REQUIRE(cli::cmd_inverse(inv) == 0);

    const GridTable out = read_grid_csv(inv.out);
    for (std::size_t i = 0; i < out.column("t").size(); ++i)
        if (out.column("t")[i] == ln2)
            CHECK(out.column("v")[i] ==
                  doctest::Approx(ref::levy_quantile_1_half).epsilon(1e-12));
}

TEST_CASE("cmd_inverse pdf route emits variance and clock columns") {
    TempDir dir;
    std::string target = "t,pdf\n";
    for (int i = 0; i <= 2000; ++i) {
        const double t = i * 0.005;
        target += format_number(t) + "," + format_number(std::exp(-t)) + "\n";
    }
    write_file(dir.file("pdf.csv"), target);

    cli::RunConfig inv;
    inv.boundary_upper = 1.0;
    inv.pdf_target = dir.file("pdf.csv");
    inv.out = dir.file("inv.csv");
    REQUIRE(cli::cmd_inverse(inv) == 0);

    const GridTable out = read_grid_csv(inv.out);
    CHECK(out.columns == std::vector<std::string>{"t", "v", "sigma2"});
    // trapezoidal integral of sigma2 reproduces the v column
    const auto& t = out.column("t");
    const auto& v = out.column("v");
    const auto& s2 = out.column("sigma2");
    double acc = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        acc += 0.5 * (s2[i] + s2[i - 1]) * (t[i] - t[i - 1]);
        CHECK(acc == doctest::Approx(v[i]).epsilon(1e-12));
    }
}

TEST_CASE("cmd_simulate is deterministic and writes a summary") {
    TempDir dir;
    cli::RunConfig sim;
    sim.boundary_upper = 1.0;
    sim.clock = "identity";
    sim.sim.n_paths = 5000;
    sim.sim.horizon = 2.0;
    sim.sim.seed = 99;
    sim.compare = true;
    sim.out = dir.file("a.csv");
    REQUIRE(cli::cmd_simulate(sim) == 0);
    sim.out = dir.file("b.csv");
    REQUIRE(cli::cmd_simulate(sim) == 0);
    CHECK(read_file(dir.file("a.csv")) == read_file(dir.file("b.csv")));
    const std::string summary = read_file(dir.file("a.csv") + ".summary.json");
    CHECK(summary.find("ks_vs_analytic") != std::string::npos);
}

TEST_CASE("cmd_simulate with one path writes a one-step function") {
    TempDir dir;
    cli::RunConfig sim;
    sim.boundary_upper = 0.05; // crossed almost immediately
    sim.sim.n_paths = 1;
    sim.sim.horizon = 4.0;
    sim.sim.seed = 3;
    sim.out = dir.file("one.csv");
    REQUIRE(cli::cmd_simulate(sim) == 0);
    const GridTable out = read_grid_csv(sim.out);
    CHECK(out.rows() == 1);
    CHECK(out.column("empirical_cdf")[0] == 1.0);
}

TEST_CASE("cmd_forward maps series non-convergence to exit 4") {
    TempDir dir;
    write_file(dir.file("grid.csv"), "t\n1\n");
    cli::RunConfig cfg;
    cfg.boundary_upper = 1.0;
    cfg.boundary_lower = -1.0;
    cfg.grid = dir.file("grid.csv");
    cfg.out = dir.file("out.csv");
    cfg.series.max_terms = 1;
    CHECK(cli::cmd_forward(cfg) == 4);
    CHECK(!fs::exists(cfg.out));
}

TEST_CASE("cmd_forward scenario mixture through the config surface") {
    TempDir dir;
    write_file(dir.file("grid.csv"), "t\n1\n");
    cli::RunConfig cfg;
    cfg.grid = dir.file("grid.csv");
    cfg.out = dir.file("mix.csv");
    cfg.scenarios = {cli::ScenarioSpec{0.5, "identity", 1.0, {}, {}, {}},
                     cli::ScenarioSpec{0.5, "linear:4", 1.0, {}, {}, {}}};
    REQUIRE(cli::cmd_forward(cfg) == 0);
    const GridTable out = read_grid_csv(cfg.out);
    CHECK(out.column("cdf")[0] ==
          doctest::Approx(0.5 * (ref::levy_cdf_1_1 + ref::levy_cdf_1_4)).epsilon(1e-15));
}
