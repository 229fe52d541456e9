#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vtbem/jobs.hpp"
#include "vtbem/oracles.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace vtbem;

namespace {

const char* kDiskConfig = R"({
  "physics": {"wavelength": 1.1, "deltaV": 0.00625, "deltaT": 0.00625, "gamma": 1.4},
  "components": [
    {"kind": "star",
     "curve": {"type": "circle", "center": [0.0, 0.0], "radius": 1.0},
     "bc": {"type": "point-source", "position": [6.0, 0.0]}}
  ],
  "targets": {"bounds": [-0.4, -0.4, 0.4, 0.4], "nx": 5, "ny": 5},
  "outputs": {"field": "disk_field.csv", "diagnostics": "disk_diag.txt"}
})";

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("config round-trips through serialization") {
    JobConfig cfg = parse_config(kDiskConfig);
    CHECK(cfg.mode() == JobConfig::Mode::CaseI);
    CHECK(cfg.order == 16);
    CHECK(cfg.corner_depth == 7);
    CHECK(cfg.panels_per_wavelength == 4.0);
    std::string text = serialize_config(cfg);
    JobConfig cfg2 = parse_config(text);
    CHECK(serialize_config(cfg2) == text);
    CHECK(cfg2.components.size() == 1);
    CHECK(cfg2.nx == 5);
}

TEST_CASE("unknown and wrong-case keys are rejected") {
    std::string bad = kDiskConfig;
    // wrong case: deltav
    size_t pos = bad.find("deltaV");
    bad.replace(pos, 6, "deltav");
    CHECK_THROWS_AS(parse_config(bad), Error);
    try {
        parse_config(bad);
    } catch (const Error& e) {
        CHECK(e.code() == Err::UnknownKey);
    }

    CHECK_THROWS_AS(parse_config("{not json"), Error);
    CHECK_THROWS_AS(parse_config(R"({"physics": {"wavelength": 1.1}})"), Error);
}

TEST_CASE("zero-data case I job writes an all-zero field grid") {
    JobConfig cfg = parse_config(R"({
      "physics": {"wavelength": 1.1, "deltaV": 0.00625, "deltaT": 0.00625, "gamma": 1.4},
      "components": [{"kind": "star", "curve": {"type": "circle", "center": [0,0], "radius": 1.0}}],
      "targets": {"bounds": [-0.3, -0.3, 0.3, 0.3], "nx": 3, "ny": 3},
      "outputs": {"field": "zfield.csv", "diagnostics": "zdiag.txt"}
    })");
    JobOptions opt;
    opt.output_dir = "/tmp";
    auto sum = run_job(cfg, opt);
    CHECK(sum.unknowns > 0);
    std::string csv = slurp("/tmp/zfield.csv");
    CHECK(csv.find("x,y,re_u,im_u,flag") == 0);
    std::istringstream ss(csv);
    std::string line;
    std::getline(ss, line);
    int rows = 0;
    while (std::getline(ss, line)) {
        double x, y, re, im;
        int flag;
        CHECK(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%d", &x, &y, &re, &im, &flag) == 5);
        CHECK(re == 0.0);
        CHECK(im == 0.0);
        ++rows;
    }
    CHECK(rows == 9);
    CHECK(slurp("/tmp/zdiag.txt").find("unknowns:") != std::string::npos);
}

TEST_CASE("waveguide config runs end-to-end against the analytic field") {
    // straight duct with flat caps, point-source data everywhere; shallow
    // corners keep the test quick, the acceptance suite runs the full depth
    const char* cfg_text = R"({
      "physics": {"wavelength": 1.1, "deltaV": 0.00625, "deltaT": 0.00625, "gamma": 1.4},
      "robin": {"a": "incoming"},
      "components": [
        {"kind": "star", "curve": {"type": "graph-trig", "x0": 0.0, "x1": 1.8, "cos": []},
         "bc": {"type": "point-source", "position": [-1.1, 2.4]}},
        {"kind": "star",
         "curve": {"type": "graph-trig", "x0": 0.0, "x1": 1.8, "cos": [0.6], "reversed": true},
         "bc": {"type": "point-source", "position": [-1.1, 2.4]}},
        {"kind": "circ", "curve": {"type": "line", "from": [0.0, 0.6], "to": [0.0, 0.0]},
         "bc": {"type": "point-source", "position": [-1.1, 2.4]}},
        {"kind": "circ", "curve": {"type": "line", "from": [1.8, 0.0], "to": [1.8, 0.6]},
         "bc": {"type": "point-source", "position": [-1.1, 2.4]}}
      ],
      "discretization": {"corner-depth": 4},
      "targets": {"bounds": [0.45, 0.2, 1.35, 0.4], "nx": 4, "ny": 2},
      "outputs": {"field": "wg_field.csv", "diagnostics": "wg_diag.txt"}
    })";
    JobConfig cfg = parse_config(cfg_text);
    CHECK(cfg.mode() == JobConfig::Mode::CaseII);
    JobOptions opt;
    opt.output_dir = "/tmp";
    opt.threads = 2;
    auto sum = run_job(cfg, opt);
    CHECK(sum.solve_residual <= 1e-12);
    CHECK(sum.unknowns > 500);

    std::string csv = slurp("/tmp/wg_field.csv");
    std::istringstream ss(csv);
    std::string line;
    std::getline(ss, line);
    double k = 2.0 * PI / 1.1, worst = 0.0;
    int rows = 0;
    while (std::getline(ss, line)) {
        double x, y, re, im;
        int flag;
        std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%d", &x, &y, &re, &im, &flag);
        worst = std::max(worst, std::abs(Complex(re, im) - point_source(k, {x, y}, {-1.1, 2.4})));
        ++rows;
    }
    CHECK(rows == 8);
    CHECK(worst <= 1e-4); // shallow corner depth bounds the accuracy here
    MESSAGE("waveguide config field error: ", worst);
    CHECK(slurp("/tmp/wg_diag.txt").find("condition_estimate:") != std::string::npos);
}

TEST_CASE("disk job reproduces the analytic point-source field") {
    JobConfig cfg = parse_config(kDiskConfig);
    JobOptions opt;
    opt.output_dir = "/tmp";
    auto sum = run_job(cfg, opt);
    CHECK(sum.solve_residual <= 1e-13);

    std::string csv = slurp("/tmp/disk_field.csv");
    std::istringstream ss(csv);
    std::string line;
    std::getline(ss, line);
    double k = 2.0 * PI / 1.1;
    double worst = 0.0;
    while (std::getline(ss, line)) {
        double x, y, re, im;
        int flag;
        std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%d", &x, &y, &re, &im, &flag);
        Complex want = point_source(k, {x, y}, {6.0, 0.0});
        worst = std::max(worst, std::abs(Complex(re, im) - want));
    }
    CHECK(worst <= 1e-8);

    // determinism: the same job yields bitwise-identical output
    JobOptions opt2 = opt;
    opt2.threads = 2;
    JobConfig cfg2 = parse_config(kDiskConfig);
    cfg2.field_path = "disk_field_2.csv";
    cfg2.diagnostics_path = "disk_diag_2.txt";
    run_job(cfg2, opt2);
    CHECK(slurp("/tmp/disk_field_2.csv") == csv);
}
