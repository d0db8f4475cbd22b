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

#include "drccmdp/sweep.hpp"

#include "drccmdp/errors.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace drccmdp {

namespace {

Eigen::VectorXd default_y0(double epsilon_hat, int num_constraints, bool product_form) {
    const double split = product_form
                             ? std::pow(epsilon_hat, 1.0 / num_constraints)
                             : epsilon_hat / num_constraints;
    return Eigen::VectorXd::Constant(num_constraints, split);
}

MixtureLaw as_mixture(const EllipticalLaw& law) {
    return MixtureLaw(Eigen::VectorXd::Ones(1), {law});
}

} // namespace

std::string to_string(SweepMode mode) {
    switch (mode) {
    case SweepMode::Individual: return "individual";
    case SweepMode::Joint: return "joint";
    case SweepMode::Mixture: return "mixture";
    }
    return "unknown";
}

SweepRow solve_sweep_point(const SweepProblem& problem, SweepMode mode, double radius,
                           const JointSolveConfig& algo, const SolverBackend* backend) {
    const auto start = std::chrono::steady_clock::now();
    SweepRow row;
    row.radius = radius;

    ObjectiveBall objective = problem.objective;
    objective.radius = radius;
    std::vector<KlConstraintSpec> specs = problem.constraints;
    for (auto& spec : specs) spec.radius.delta = radius;

    SolveReport report;
    if (mode == SweepMode::Individual) {
        report = solve_individual(problem.mdp, specs, objective, backend);
    } else if (mode == SweepMode::Joint) {
        JointSolveConfig config = algo;
        if (config.y0.size() != static_cast<Eigen::Index>(specs.size()))
            config.y0 = default_y0(problem.epsilon_hat,
                                   static_cast<int>(specs.size()),
                                   problem.product_form);
        config.product_form = problem.product_form;
        report = solve_joint(problem.mdp, specs, objective, problem.epsilon_hat, config,
                            backend);
    } else {
        MixtureObjectiveBall mix_objective =
            problem.mixture_objective.value_or(
                MixtureObjectiveBall{as_mixture(problem.objective.law), radius});
        mix_objective.radius = radius;
        std::vector<MixtureConstraintSpec> mix_specs = problem.mixture_constraints;
        if (mix_specs.empty())
            for (const auto& spec : specs)
                mix_specs.push_back({spec.name, as_mixture(spec.reference),
                                     spec.threshold, spec.radius});
        for (auto& spec : mix_specs) spec.radius.delta = radius;

        const MixtureProgramDescription desc =
            build_mixture_program(problem.mdp, mix_specs, mix_objective,
                                  problem.epsilon_hat, problem.product_form);
        MixtureSolveConfig config;
        config.y0 = algo.y0.size() == static_cast<Eigen::Index>(mix_specs.size())
                        ? std::optional<Eigen::VectorXd>(algo.y0)
                        : std::nullopt;
        config.step_length = algo.step_length;
        report = solve_mixture_heuristic(desc, config, backend).report;
    }

    row.status = report.status;
    row.objective = report.objective;
    if (report.status == SolveStatus::Optimal) {
        row.action0_probability.resize(static_cast<std::size_t>(problem.mdp.num_states()));
        for (int s = 0; s < problem.mdp.num_states(); ++s)
            row.action0_probability[static_cast<std::size_t>(s)] =
                report.policy.prob(problem.mdp.pair_index(s, 0));
    }
    row.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

SweepResult run_sweep(const SweepProblem& problem, const SweepOptions& options,
                      const SolverBackend* backend) {
    if (options.radii.empty()) throw ValidationError("sweep needs at least one radius");
    std::filesystem::create_directories(options.out_dir);

    SweepResult result;
    result.rows.resize(options.radii.size());

    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    int workers = options.workers > 0 ? options.workers : std::min(4, std::max(1, hw));
    workers = std::min<int>(workers, static_cast<int>(options.radii.size()));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= options.radii.size()) return;
            try {
                result.rows[i] = solve_sweep_point(problem, options.mode,
                                                   options.radii[i],
                                                   options.joint_config, backend);
            } catch (const std::exception&) {
                result.rows[i].radius = options.radii[i];
                result.rows[i].status = SolveStatus::NumericalLimit;
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (const auto& row : result.rows)
        if (row.status != SolveStatus::Optimal) ++result.failures;

    // CSV: one row per (radius, state), radii in input order.
    const std::string mode_name = to_string(options.mode);
    result.csv_path =
        (std::filesystem::path(options.out_dir) / ("sweep_" + mode_name + ".csv"))
            .string();
    {
        std::ofstream csv(result.csv_path);
        if (!csv) throw ValidationError("cannot write " + result.csv_path);
        csv << "radius,state,repair_probability,status\n";
        csv.precision(12);
        for (const auto& row : result.rows) {
            for (int s = 0; s < problem.mdp.num_states(); ++s) {
                csv << row.radius << ',' << (s + 1) << ',';
                if (row.status == SolveStatus::Optimal)
                    csv << row.action0_probability[static_cast<std::size_t>(s)];
                else
                    csv << "nan";
                csv << ',' << to_string(row.status) << '\n';
            }
        }
    }

    nlohmann::json manifest;
    manifest["mode"] = mode_name;
    manifest["radii"] = options.radii;
    manifest["states"] = problem.mdp.num_states();
    manifest["epsilon_hat"] = problem.epsilon_hat;
    manifest["joint_constraint_form"] = problem.product_form ? "product" : "sum";
    manifest["workers"] = workers;
    manifest["kernel_note"] =
        options.kernel_note.empty()
            ? "default kernel: repair resets to state 1; do-not-repair advances "
              "with probability 0.9, stays with 0.1, last state absorbing; the "
              "reference experiment's kernel is not published, so quantitative "
              "results are regression baselines under this kernel"
            : options.kernel_note;
    {
        nlohmann::json runs = nlohmann::json::array();
        for (const auto& row : result.rows)
            runs.push_back({{"radius", row.radius},
                            {"status", to_string(row.status)},
                            {"objective", row.objective},
                            {"seconds", row.seconds}});
        manifest["runs"] = runs;
    }
    manifest["csv"] = result.csv_path;
    {
        const auto now = std::chrono::system_clock::now();
        const std::time_t tt = std::chrono::system_clock::to_time_t(now);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
        manifest["timestamp"] = buf;
    }
    result.manifest_path =
        (std::filesystem::path(options.out_dir) / ("manifest_" + mode_name + ".json"))
            .string();
    std::ofstream mf(result.manifest_path);
    if (!mf) throw ValidationError("cannot write " + result.manifest_path);
    mf << manifest.dump(2) << '\n';

    return result;
}

} // namespace drccmdp
