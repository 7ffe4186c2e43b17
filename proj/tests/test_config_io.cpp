/*
 Copyright 2026 The sidare-control Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "sidare/config.hpp"
#include "sidare/errors.hpp"
#include "sidare/io.hpp"

using namespace sidare;

TEST_CASE("default config") {
    const RunConfig cfg = parse_config("{}");
    CHECK(cfg.model.beta == 0.251);
    CHECK(cfg.model.h_bar == 0.00333);
    CHECK(cfg.model.mu_hat == doctest::Approx(0.0425));
    CHECK(cfg.grid().nodes() == 3651);
    CHECK(cfg.discretize.n_levels == 4);
    CHECK(cfg.discretize.n_switches == 6);
    CHECK(cfg.discretize.catalog.size() == 81);
    CHECK(cfg.frontier.grid.theta_e.size() == 41);
    CHECK(cfg.uncertainty.r0_points == 8);
}

TEST_CASE("config sections") {
    const RunConfig cfg = parse_config(R"({
        "model": {"nu": 0.05, "mu": 0.01},
        "initial_state": {"s": 0.99, "i": 0.01},
        "grid": {"horizon": 100, "step": 0.5},
        "weights": {"theta_a": 5e4, "theta_e": 1000},
        "solver": {"max_iterations": 50, "start_fractions": [0.5, 1.0]},
        "discretize": {"levels": 7, "switches": 12, "delta": 2, "catalog": [0, 0.2, 0.4, 0.8]},
        "frontier": {"nu": [0], "theta_e_points": 5, "cost_axis": "intervention"},
        "uncertainty": {"r0_points": 3},
        "threads": 2,
        "output_dir": "results"
    })");
    CHECK(cfg.model.nu == 0.05);
    CHECK(cfg.model.mu_hat == doctest::Approx(0.05));
    CHECK(cfg.initial.r == doctest::Approx(0.0));
    CHECK(cfg.grid().cells() == 200);
    CHECK(cfg.weights.theta_a == 5e4);
    CHECK(cfg.solver.max_iterations == 50);
    CHECK(cfg.solver.extra_start_fractions == std::vector<double>{0.5, 1.0});
    CHECK(cfg.discretize.catalog.size() == 4);
    CHECK(cfg.discretize.delta_steps(cfg.grid()) == 4);
    CHECK(cfg.frontier.grid.theta_e.size() == 6);
    CHECK(cfg.frontier.axis == CostAxis::Intervention);
    CHECK(cfg.frontier.threads == 2);
    CHECK(cfg.output_dir == "results");

    const RunConfig explicit_hat = parse_config(R"({"model": {"mu": 0.01, "mu_hat": 0.02}})");
    CHECK(explicit_hat.model.mu_hat == 0.02);
}

TEST_CASE("config rejects bad input") {
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config("[]"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"unknown": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": {"betta": 0.3}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": {"beta": "fast"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": {"mu_hat": 0.001}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"initial_state": {"s": 1.5}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"grid": {"step": 0.3}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"discretize": {"levels": 0}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"discretize": {"levels": -1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"discretize": {"catalog": [0, 0.1], "catalog_step": 0.1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"frontier": {"cost_axis": "total"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"frontier": {"theta_a": [1e6]}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"solver": {"damping": 1.0}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"weights": {"theta_e": -1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"uncertainty": {"nominal_ifr": 0.5}})"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("dumped config parses back to the same config") {
    const RunConfig a = parse_config(R"({"model": {"nu": 0.1}, "weights": {"theta_e": 1e4},
                                        "discretize": {"levels": 7}})");
    const std::string text = dump_config(a);
    const RunConfig b = parse_config(text);
    CHECK(dump_config(b) == text);
    CHECK(b.model.nu == 0.1);
    CHECK(b.discretize.catalog.levels() == a.discretize.catalog.levels());
}

TEST_CASE("strategy files round-trip exactly") {
    const TimeGrid g(365.0, 0.1);
    Strategy u = Strategy::constant(g, 0.0);
    for (std::size_t k = 0; k < g.nodes(); ++k) u.u[k] = 0.8 * std::pow(std::sin(0.01 * k), 2) / 3.0;

    std::stringstream file;
    write_strategy(file, u, g);
    const std::string text = file.str();
    CHECK(text.rfind("# sidare-strategy 1\n", 0) == 0);
    CHECK(text.find('\r') == std::string::npos);
    const Strategy back = read_strategy(file, g, 0.8);
    CHECK(back == u);
}

TEST_CASE("sparse strategy files hold values") {
    const TimeGrid g(10.0, 0.5);
    std::istringstream in("# comment\nt,u\n0,0.1\n2.5,0.4\n7,0\n10,0\n");
    const Strategy u = read_strategy(in, g, 0.8);
    CHECK(u.u[0] == 0.1);
    CHECK(u.u[4] == 0.1);
    CHECK(u.u[5] == 0.4);
    CHECK(u.u[13] == 0.4);
    CHECK(u.u[14] == 0.0);
    CHECK(u.u[20] == 0.0);
}

TEST_CASE("malformed strategy files") {
    const TimeGrid g(10.0, 0.5);
    auto read = [&](const std::string& s) {
        std::istringstream in(s);
        return read_strategy(in, g, 0.8);
    };
    CHECK_THROWS_AS(read("0,0.1\n10,0.1\n"), UsageError);
    CHECK_THROWS_AS(read("t,u\n"), UsageError);
    CHECK_THROWS_AS(read("t,u\n1,0.1\n10,0.1\n"), UsageError);
    CHECK_THROWS_AS(read("t,u\n0,0.1\n9,0.1\n"), UsageError);
    CHECK_THROWS_AS(read("t,u\n0,0.1\n5,0.2\n5,0.3\n10,0\n"), UsageError);
    CHECK_THROWS_AS(read("t,u\n0,abc\n10,0\n"), UsageError);
    CHECK_THROWS_AS(read("t,u\n0,0.1,3\n10,0\n"), UsageError);
    CHECK_THROWS_AS(read("t,u\n0,0.9\n10,0\n"), DomainError);
    CHECK_NOTHROW(read("t,u\r\n0,0.1\r\n10,0.1\r\n"));
}

TEST_CASE("discrete strategy files") {
    const TimeGrid g(365.0, 0.1);
    const PolicyCatalog c = PolicyCatalog::uniform(0.8, 0.01);
    const DiscreteStrategy s{{454, 535, 616, 1032}, {1, 16, 50, 34, 1}};
    std::stringstream file;
    write_discrete_strategy(file, s, g, c);
    const std::string text = file.str();
    CHECK(text.find("\n45.4,0.16\n") != std::string::npos);
    CHECK(text.find("\n365,0.01\n") != std::string::npos);
    CHECK(read_discrete_strategy(file, g, c) == s);

    std::istringstream as_plain(text);
    CHECK(read_strategy(as_plain, g, 0.8) == s.to_strategy(g, c));

    std::istringstream off_catalog("t,u\n0,0.123\n365,0.123\n");
    CHECK_THROWS_AS(read_discrete_strategy(off_catalog, g, c), UsageError);
}

TEST_CASE("csv number format") {
    CHECK(format_csv_number(0.1) == "0.1");
    CHECK(format_csv_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_csv_number(1.5e-7) == "1.5e-07");
    CHECK(format_csv_number(365.0) == "365");
}
