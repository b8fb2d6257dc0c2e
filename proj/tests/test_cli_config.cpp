#include <catch2/catch_amalgamated.hpp>

#include <modcyl/config.hpp>
#include <modcyl/io.hpp>
#include <modcyl/svg.hpp>

#include <filesystem>
#include <fstream>

using namespace modcyl;
using nlohmann::json;

TEST_CASE("config parsing") {
    json j = json::parse(R"({
        "geometry": {"L": 4.0, "ell": 1.0},
        "state": {"preset": "massive-vacuum"},
        "grid": {"N": 128, "seed": 7},
        "times": [0.1, 0.4],
        "output": {"directory": "outdir", "formats": ["csv", "svg"]}
    })");
    RunConfig c = parse_config(j);
    CHECK(c.L == 4.0);
    CHECK(c.grid_n == 128);
    CHECK(c.times.size() == 2);
    CHECK(c.formats.count("svg") == 1);
    CHECK(validate(c).empty());
    CHECK(classify(c.state(), c.geometry()) == StateClass::PureRim);
}

TEST_CASE("unknown keys are rejected") {
    json j = json::parse(R"({"geometry": {"L": 4.0, "circumference": 4.0}})");
    CHECK_THROWS_AS(parse_config(j), std::invalid_argument);
    json j2 = json::parse(R"({"geomtry": {"L": 4.0}})");
    CHECK_THROWS_AS(parse_config(j2), std::invalid_argument);
}

TEST_CASE("validation is total and names the field") {
    RunConfig c;
    c.L = 4.0;
    c.ell = 2.5;  // violates 2 ell < L
    c.grid_n = 33;
    c.preset = "no-such-state";
    auto diags = validate(c);
    REQUIRE(diags.size() >= 3);
    bool geo = false, grid = false, preset = false;
    for (const auto& d : diags) {
        if (d.field == "geometry") geo = true;
        if (d.field == "grid.N") grid = true;
        if (d.field == "state.preset") preset = true;
    }
    CHECK(geo);
    CHECK(grid);
    CHECK(preset);
}

TEST_CASE("explicit state fields") {
    RunConfig c;
    c.bc = "R";
    c.h1 = 0.1;
    c.h2 = -0.05;
    c.psi = 0.4;
    c.phi = 1.0;
    CHECK(validate(c).empty());
    StateParams st = c.state();
    CHECK(st.is_ramond());
    CHECK(st.h1 == Catch::Approx(0.1));

    c.h1 = 0.2;  // exceeds 1/(2L) = 0.125
    auto diags = validate(c);
    REQUIRE_FALSE(diags.empty());
    CHECK(diags.front().field == "state.h1");

    RunConfig ns;
    ns.bc = "NS";
    ns.h1 = 0.1;
    CHECK_FALSE(validate(ns).empty());
}

TEST_CASE("shortest round-trip float formatting") {
    for (double v : {0.1, 1.0 / 3.0, 1e-17, -2.5e300, 0.0}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    // determinism of the CSV emitter
    std::vector<KernelRow> rows = {{1, 2, 0.125, -0.5, "pv", complex(1.0 / 3.0, -0.7)}};
    CHECK(kernel_rows_csv(rows) == kernel_rows_csv(rows));
    CHECK(kernel_rows_csv(rows) ==
          "a,b,x,y,part,re,im\n1,2,0.125,-0.5,pv,0.3333333333333333,-0.7\n");
}

TEST_CASE("atomic file writes land complete") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "modcyl_io_test";
    fs::remove_all(dir);
    const fs::path p = dir / "a" / "b.txt";
    write_file_atomic(p, "payload");
    std::ifstream in(p);
    std::string s;
    std::getline(in, s);
    CHECK(s == "payload");
    CHECK_FALSE(fs::exists(p.string() + ".tmp"));
    fs::remove_all(dir);
}

TEST_CASE("svg emitters are deterministic") {
    std::vector<KernelRow> rows;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            rows.push_back({1, 1, i * 0.25, j * 0.25, "pv", complex(std::sin(i + 2.0 * j), 0.0)});
    const std::string a = kernel_heatmap_svg(rows, "pv", "t");
    const std::string b = kernel_heatmap_svg(rows, "pv", "t");
    CHECK(a == b);
    CHECK(a.find("<svg") == 0);
    // empty layer renders a placeholder rather than failing
    const std::string e = kernel_heatmap_svg(rows, "mirror", "t");
    CHECK(e.find("empty layer") != std::string::npos);

    const std::string c = convergence_svg({128, 256, 512}, {4e-2, 2e-2, 1e-2}, "conv");
    CHECK(c.find("fitted order") != std::string::npos);
}
