// Copyright 2026 The drccmdp Authors
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

#include "drccmdp/errors.hpp"
#include "drccmdp/json_io.hpp"
#include "drccmdp/machine_replacement.hpp"
#include "drccmdp/sweep.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>

using namespace drccmdp;

TEST_CASE("benchmark tables") {
    const auto bench = build_benchmark();
    const auto& mdp = bench.mdp;
    CHECK(mdp.num_states() == 10);
    CHECK(mdp.num_pairs() == 20);
    CHECK(mdp.discount() == doctest::Approx(0.9));
    for (int s = 0; s < 10; ++s)
        CHECK(mdp.initial()(s) == doctest::Approx(0.1));

    // state 9 (0-based 8), do-not-repair: means (-85, -200, -80)
    const int pair = mdp.pair_index(8, 1);
    CHECK(machine_replacement_mean(0)(pair) == doctest::Approx(-85.0));
    CHECK(machine_replacement_mean(1)(pair) == doctest::Approx(-200.0));
    CHECK(machine_replacement_mean(2)(pair) == doctest::Approx(-80.0));

    // covariance diagonals
    CHECK(machine_replacement_cov_diagonal(2)(15) == doctest::Approx(4.0));
    CHECK(machine_replacement_cov_diagonal(0)(14) == doctest::Approx(0.3));
    CHECK(machine_replacement_cov_diagonal(0)(19) == doctest::Approx(9.0));
    CHECK(machine_replacement_cov_diagonal(1)(16) == doctest::Approx(8.0));

    CHECK(bench.constraints.size() == 2);
    CHECK(bench.constraints[0].threshold == doctest::Approx(-40.0));
    CHECK(bench.constraints[1].confidence == doctest::Approx(0.8));
    CHECK(bench.epsilon_hat == doctest::Approx(0.8));

    // default kernel: repair resets, do-not-repair ages, last state absorbs
    CHECK(mdp.transition()(mdp.pair_index(4, 0), 0) == doctest::Approx(1.0));
    CHECK(mdp.transition()(mdp.pair_index(4, 1), 5) == doctest::Approx(0.9));
    CHECK(mdp.transition()(mdp.pair_index(4, 1), 4) == doctest::Approx(0.1));
    CHECK(mdp.transition()(mdp.pair_index(9, 1), 9) == doctest::Approx(1.0));
}

TEST_CASE("instance JSON round-trip and validation") {
    const auto bench = build_benchmark();
    const std::string path = "bench_instance_test.json";
    save_instance_json(bench.mdp, path);
    const MdpInstance loaded = load_instance_json(path);
    CHECK(loaded.num_states() == bench.mdp.num_states());
    CHECK(loaded.discount() == doctest::Approx(bench.mdp.discount()));
    CHECK((loaded.transition() - bench.mdp.transition()).cwiseAbs().maxCoeff() <
          1e-15);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(parse_instance_json("{ not json"), ValidationError);
    CHECK_THROWS_AS(parse_instance_json("{\"states\": 2}"), ValidationError);
    // invalid kernel inside an otherwise complete document
    CHECK_THROWS_AS(
        parse_instance_json(R"({"states":1,"actions":[1],
          "transition":[[[0.9]]],"initial":[1.0],"discount":0.9})"),
        ValidationError);
}

TEST_CASE("solve config JSON") {
    const std::string path = "solve_config_test.json";
    {
        std::ofstream out(path);
        out << R"({
          "objective": {"mean": [0, 0], "cov_diag": [1, 1], "radius": 0.1},
          "constraints": [
            {"name": "ops", "mean": [-1, -1], "cov_diag": [0.5, 0.5],
             "xi": -3, "epsilon": 0.85, "radius": 0.2,
             "generator": "laplace"}
          ],
          "epsilon_hat": 0.9,
          "joint_constraint_form": "sum",
          "joint_solver": {"y0": [0.95], "max_iterations": 20, "step_length": 0.8},
          "workers": 2
        })";
    }
    const SolveConfigFile cfg = load_solve_config_json(path);
    std::filesystem::remove(path);
    REQUIRE(cfg.objective.has_value());
    CHECK(cfg.objective->radius == doctest::Approx(0.1));
    REQUIRE(cfg.constraints.size() == 1);
    CHECK(cfg.constraints[0].name == "ops");
    CHECK(cfg.constraints[0].reference.generator.kind == GeneratorKind::Laplace);
    CHECK(cfg.constraints[0].threshold == doctest::Approx(-3.0));
    CHECK(cfg.epsilon_hat.value() == doctest::Approx(0.9));
    CHECK(cfg.product_form == false);
    REQUIRE(cfg.y0.has_value());
    CHECK(cfg.max_iterations == 20);
    CHECK(cfg.step_length == doctest::Approx(0.8));
    CHECK(cfg.workers == 2);
}

TEST_CASE("sweep artifacts: shape, determinism, failure handling") {
    const auto bench = build_benchmark();
    SweepProblem problem{bench.mdp,        bench.objective,   bench.constraints,
                         std::nullopt,     {},                bench.epsilon_hat,
                         true};
    SweepOptions options;
    options.mode = SweepMode::Individual;
    options.radii = {0.3, 0.1};
    options.out_dir = "sweep_test_out";
    options.workers = 2;

    const SweepResult first = run_sweep(problem, options);
    CHECK(first.failures == 0);
    REQUIRE(first.rows.size() == 2);
    for (const auto& row : first.rows) {
        CHECK(row.status == SolveStatus::Optimal);
        REQUIRE(row.action0_probability.size() == 10);
        for (double p : row.action0_probability) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
    }

    // CSV: one line per (radius, state) plus a header
    std::ifstream csv(first.csv_path);
    REQUIRE(csv.good());
    std::string line;
    int lines = 0;
    std::getline(csv, line);
    CHECK(line == "radius,state,repair_probability,status");
    while (std::getline(csv, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 20);

    // manifest parses and declares the radii
    const auto manifest =
        nlohmann::json::parse(std::ifstream(first.manifest_path));
    CHECK(manifest["mode"] == "individual");
    CHECK(manifest["radii"].size() == 2);
    CHECK(manifest["runs"].size() == 2);
    CHECK(manifest.contains("kernel_note"));

    // deterministic rerun: identical CSV bytes, manifest equal modulo timestamp
    const std::string csv_bytes_1 = read_text_file(first.csv_path);
    const SweepResult second = run_sweep(problem, options);
    CHECK(read_text_file(second.csv_path) == csv_bytes_1);
    auto m1 = nlohmann::json::parse(read_text_file(first.manifest_path));
    auto m2 = nlohmann::json::parse(read_text_file(second.manifest_path));
    m1.erase("timestamp");
    m2.erase("timestamp");
    // per-run wall times differ; drop them before comparing
    for (auto* m : {&m1, &m2})
        for (auto& run : (*m)["runs"]) run.erase("seconds");
    CHECK(m1 == m2);

    SUBCASE("failed points are recorded and the run continues") {
        SweepProblem infeasible = problem;
        for (auto& spec : infeasible.constraints) spec.threshold = -5.0;
        const SweepResult bad = run_sweep(infeasible, options);
        CHECK(bad.failures == 2);
        const std::string csv_text = read_text_file(bad.csv_path);
        CHECK(csv_text.find("nan,infeasible") != std::string::npos);
    }
    std::filesystem::remove_all(options.out_dir);
}

TEST_CASE("kernel file loading") {
    const std::string path = "kernel_test.json";
    {
        std::ofstream out(path);
        out << R"({"transition": [[[0,1],[1,0]],[[1,0],[0,1]]]})";
    }
    const Eigen::MatrixXd kernel = load_kernel_json(path, 4, 2);
    CHECK(kernel(0, 1) == doctest::Approx(1.0));
    CHECK(kernel(3, 1) == doctest::Approx(1.0));
    CHECK_THROWS_AS(load_kernel_json(path, 6, 2), ValidationError);
    std::filesystem::remove(path);
}
