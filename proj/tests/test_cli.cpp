// Copyright 2026 The fisherlens authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace fisherlens::cli;

namespace {
constexpr double kPi = std::numbers::pi;

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("fisherlens_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// the built binary, when the ctest environment provides it
const char* binary() { return std::getenv("FISHERLENS_BIN"); }

int run_binary(const std::string& args) {
    const std::string cmd = std::string(binary()) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("angle expressions") {
    CHECK(parse_angle_expr("pi/6") == kPi / 6.0);
    CHECK(parse_angle_expr("3*pi/4") == 3.0 * kPi / 4.0);
    CHECK(parse_angle_expr("pi*0.25") == kPi * 0.25);
    CHECK(parse_angle_expr("0.5") == 0.5);
    CHECK(parse_angle_expr("-pi/2") == -kPi / 2.0);
    CHECK(parse_angle_expr(" pi / 6 ") == kPi / 6.0);
    CHECK_THROWS_AS(parse_angle_expr("tau/2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_angle_expr("pi+1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_angle_expr(""), std::invalid_argument);
}

TEST_CASE("config file parsing and unknown keys") {
    const fs::path dir = temp_dir("config");
    const fs::path cfg_path = dir / "run.cfg";
    std::ofstream(cfg_path) << "# comment line\n"
                               "sigma = 2.0\n"
                               "alpha = pi/8   # trailing comment\n"
                               "points = 11\n";
    RunConfig cfg;
    for (const auto& [k, v] : load_config_file(cfg_path.string()))
        apply_config_pair(cfg, k, v);
    CHECK(cfg.sigma == 2.0);
    CHECK(cfg.alpha == kPi / 8.0);
    CHECK(cfg.points == 11);

    CHECK_THROWS_AS(apply_config_pair(cfg, "sigmaa", "1.0"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_pair(cfg, "points", "eleven"), std::invalid_argument);

    std::ofstream(dir / "bad.cfg") << "sigma 2.0\n";
    CHECK_THROWS_AS(load_config_file((dir / "bad.cfg").string()), std::invalid_argument);
}

TEST_CASE("compute_sweep returns ordered samples with the oracle column on demand") {
    RunConfig cfg;
    cfg.command = "sweep";
    cfg.r = 0.0;
    cfg.points = 9;
    cfg.s_max = 2.0;
    const SweepResult plain = compute_sweep(cfg);
    CHECK(plain.rows.size() == 9);
    CHECK(plain.rows.front().s == 0.0);
    CHECK(plain.rows.back().s == 2.0);
    for (std::size_t i = 1; i < plain.rows.size(); ++i)
        CHECK(plain.rows[i].s > plain.rows[i - 1].s);
    for (const SweepRow& row : plain.rows) {
        CHECK(row.f_tot == 0.25);
        CHECK_FALSE(row.f_oracle.has_value());
    }

    cfg.with_oracle = true;
    const SweepResult with = compute_sweep(cfg);
    for (const SweepRow& row : with.rows) {
        REQUIRE(row.f_oracle.has_value());
        CHECK(*row.f_oracle == doctest::Approx(0.25).epsilon(1e-6));
    }

    cfg.points = 1;
    CHECK_THROWS_AS(compute_sweep(cfg), std::invalid_argument);
}

TEST_CASE("sweep CSV: determinism, header, r = 0 flatness") {
    const fs::path dir = temp_dir("sweep");
    RunConfig cfg;
    cfg.command = "sweep";
    cfg.r = 0.0;
    cfg.points = 21;
    cfg.s_max = 4.0;
    cfg.out = (dir / "a.csv").string();
    CHECK(run_sweep(cfg) == 0);
    cfg.out = (dir / "b.csv").string();
    CHECK(run_sweep(cfg) == 0);

    const std::string a = slurp(dir / "a.csv");
    const std::string b = slurp(dir / "b.csv");
    CHECK(a == b);

    std::istringstream lines(a);
    std::string line;
    std::getline(lines, line);
    CHECK(line.rfind("# fisherlens ", 0) == 0);
    CHECK(line.find("config=") != std::string::npos);
    CHECK(line.find("command=sweep") != std::string::npos);
    std::getline(lines, line);
    CHECK(line == "s,f_tot,f_unentangled");
    int rows = 0;
    while (std::getline(lines, line)) {
        CHECK(line.find(",0.25,0.25") != std::string::npos); // flat single source
        ++rows;
    }
    CHECK(rows == 21);
    CHECK(a.find('\r') == std::string::npos); // LF endings only
}

TEST_CASE("sweep with the oracle column stays within 1e-6") {
    const fs::path dir = temp_dir("sweep_oracle");
    RunConfig cfg;
    cfg.command = "sweep";
    cfg.r = 1.0;
    cfg.alpha = kPi / 6.0;
    cfg.points = 9;
    cfg.s_min = 0.5;
    cfg.s_max = 4.0;
    cfg.with_oracle = true;
    cfg.out = (dir / "o.csv").string();
    CHECK(run_sweep(cfg) == 0);

    std::istringstream lines(slurp(dir / "o.csv"));
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    CHECK(line == "s,f_tot,f_unentangled,f_oracle");
    while (std::getline(lines, line)) {
        std::istringstream cells(line);
        std::string c;
        std::getline(cells, c, ',');
        std::getline(cells, c, ',');
        const double ft = std::stod(c);
        std::getline(cells, c, ',');
        std::getline(cells, c, ',');
        const double fo = std::stod(c);
        CHECK(std::abs(ft - fo) / std::max(ft, 1e-3) <= 1e-6);
    }
}

TEST_CASE("sweep finds the least-separation dip near 1.5233") {
    const fs::path dir = temp_dir("sweep_dip");
    RunConfig cfg;
    cfg.command = "sweep";
    cfg.r = 1.0;
    cfg.alpha = kPi / 6.0;
    cfg.points = 501;
    cfg.s_max = 5.0;
    cfg.out = (dir / "dip.csv").string();
    CHECK(run_sweep(cfg) == 0);

    std::istringstream lines(slurp(dir / "dip.csv"));
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    double best_s = -1.0, best_f = 1e9;
    while (std::getline(lines, line)) {
        std::istringstream cells(line);
        std::string sc, fc;
        std::getline(cells, sc, ',');
        std::getline(cells, fc, ',');
        if (std::stod(fc) < best_f) {
            best_f = std::stod(fc);
            best_s = std::stod(sc);
        }
    }
    CHECK(best_s == doctest::Approx(1.5233271467757372).epsilon(0.01));
    CHECK(best_f == doctest::Approx(0.14503284975649427).epsilon(1e-4));
}

TEST_CASE("sleast table rows") {
    const fs::path dir = temp_dir("sleast");
    RunConfig cfg;
    cfg.command = "sleast";
    cfg.r = 1.0;
    cfg.out = (dir / "t.csv").string();
    CHECK(run_sleast(cfg) == 0);

    std::istringstream lines(slurp(dir / "t.csv"));
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    CHECK(line == "alpha,r,phi,s_least_analytic,s_least_numeric,f_min,residual_eq9");
    bool saw_pi_6 = false, saw_pi_4 = false;
    while (std::getline(lines, line)) {
        std::istringstream cells(line);
        std::string alpha, r, phi, ana, num, fmin, res;
        std::getline(cells, alpha, ',');
        std::getline(cells, r, ',');
        std::getline(cells, phi, ',');
        std::getline(cells, ana, ',');
        std::getline(cells, num, ',');
        std::getline(cells, fmin, ',');
        std::getline(cells, res, ',');
        CHECK(!ana.empty()); // r = 1: analytic column always populated
        if (std::abs(std::stod(alpha) - kPi / 6.0) < 1e-12) {
            saw_pi_6 = true;
            CHECK(std::stod(ana) == doctest::Approx(1.5233271467757372).epsilon(1e-9));
            CHECK(std::abs(std::stod(ana) - std::stod(num)) < 1e-6);
            CHECK(std::abs(std::stod(res)) < 1e-8);
        }
        if (std::abs(std::stod(alpha) - kPi / 4.0) < 1e-12) {
            saw_pi_4 = true;
            CHECK(std::stod(ana) == 0.0);
            CHECK(std::stod(num) == 0.0);
        }
    }
    CHECK(saw_pi_6);
    CHECK(saw_pi_4);

    // phi = pi/2: the analytic column is exactly 2 sigma
    RunConfig cfg2 = cfg;
    cfg2.phi = kPi / 2.0;
    cfg2.out = (dir / "t2.csv").string();
    CHECK(run_sleast(cfg2) == 0);
    std::istringstream lines2(slurp(dir / "t2.csv"));
    std::getline(lines2, line);
    std::getline(lines2, line);
    while (std::getline(lines2, line)) {
        std::istringstream cells(line);
        std::string c;
        for (int i = 0; i < 4; ++i) std::getline(cells, c, ',');
        CHECK(std::stod(c) == 2.0);
    }
}

TEST_CASE("reproduce emits the figure CSV families") {
    const fs::path dir = temp_dir("repro");
    RunConfig cfg;
    cfg.command = "reproduce";
    cfg.figure = "fig3a";
    cfg.out = dir.string();
    cfg.emit_svg = true;
    CHECK(run_reproduce(cfg) == 0);
    for (const char* name : {"fig3a_alpha_pi_12.csv", "fig3a_alpha_pi_8.csv",
                             "fig3a_alpha_pi_6.csv", "fig3a_alpha_pi_4.csv", "fig3a.svg"})
        CHECK(fs::exists(dir / name));
    const std::string svg = slurp(dir / "fig3a.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("binary: exit codes") {
    if (!binary()) return; // only meaningful under ctest
    CHECK(run_binary("--version") == 0);
    CHECK(run_binary("definitely-not-a-command") == 2);
    CHECK(run_binary("sweep --points 1") == 2);          // invalid range
    CHECK(run_binary("sweep --alpha pi+pi") == 2);       // bad angle expression
    CHECK(run_binary("reproduce fig9z") == 2);           // unknown figure
    CHECK(run_binary("oracle-check --grid-n 201") == 4); // negative control
}

TEST_CASE("binary: config file precedence") {
    if (!binary()) return;
    const fs::path dir = temp_dir("binary_cfg");
    const fs::path cfg_path = dir / "run.cfg";
    std::ofstream(cfg_path) << "r = 0\npoints = 7\ns_max = 2.0\n";

    const fs::path out1 = dir / "from_file.csv";
    CHECK(run_binary("sweep --config " + cfg_path.string() + " --out " + out1.string()) == 0);
    const std::string csv1 = slurp(out1);
    CHECK(csv1.find("r=0") != std::string::npos);
    CHECK(csv1.find("points=7") != std::string::npos);

    // command line overrides the file
    const fs::path out2 = dir / "flag_wins.csv";
    CHECK(run_binary("sweep --config " + cfg_path.string() + " --points 5 --out " +
                     out2.string()) == 0);
    CHECK(slurp(out2).find("points=5") != std::string::npos);

    // unknown config keys fail fast
    std::ofstream(dir / "bad.cfg") << "sigmaz = 1\n";
    CHECK(run_binary("sweep --config " + (dir / "bad.cfg").string()) == 2);
}
