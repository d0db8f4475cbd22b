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

// Command-line front end: machine-replacement benchmark runs, instance-file
// solves, and radius sweeps for the DRCCMDP solver library.

#include <CLI11.hpp>

#include "drccmdp/joint_solver.hpp"
#include "drccmdp/errors.hpp"
#include "drccmdp/json_io.hpp"
#include "drccmdp/machine_replacement.hpp"
#include "drccmdp/mixture.hpp"
#include "drccmdp/sweep.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitBadInput = 4;

int log_level() {
    const char* env = std::getenv("DRCCMDP_LOG");
    if (env == nullptr) return 1;
    const std::string v(env);
    if (v == "quiet" || v == "0") return 0;
    if (v == "debug" || v == "2") return 2;
    return 1;
}

void info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[drccmdp] " << msg << '\n';
}

int status_exit_code(drccmdp::SolveStatus status) {
    switch (status) {
    case drccmdp::SolveStatus::Optimal: return kExitOk;
    case drccmdp::SolveStatus::Infeasible: return kExitInfeasible;
    case drccmdp::SolveStatus::Unbounded:
    case drccmdp::SolveStatus::NumericalLimit: return kExitNumerical;
    }
    return kExitNumerical;
}

struct SolveArgs {
    std::string mode = "individual";
    std::string instance_path;
    std::string kernel_path;
    std::string config_path;
    std::string out_dir = ".";
    std::string dump_program_path;
    double radius = 0.0;
    std::vector<double> sweep;
    double epsilon = 0.8;
    double xi = -40.0;
    int workers = 0;
};

int run_solve(const SolveArgs& args) {
    using namespace drccmdp;

    SweepMode mode;
    if (args.mode == "individual")
        mode = SweepMode::Individual;
    else if (args.mode == "joint")
        mode = SweepMode::Joint;
    else if (args.mode == "mixture")
        mode = SweepMode::Mixture;
    else {
        std::cerr << "unknown mode '" << args.mode << "'\n";
        return kExitBadInput;
    }

    SolveConfigFile cfg;
    if (!args.config_path.empty()) cfg = load_solve_config_json(args.config_path);

    // Assemble the problem: benchmark defaults, overridden by instance file,
    // kernel file, and config laws in that order.
    std::optional<Eigen::MatrixXd> kernel;
    std::string kernel_note;
    std::optional<MdpInstance> mdp;
    if (!args.instance_path.empty()) {
        mdp = load_instance_json(args.instance_path);
        kernel_note = "instance file: " + args.instance_path;
        info("loaded instance " + args.instance_path + " (" +
             std::to_string(mdp->num_states()) + " states)");
    }
    if (!args.kernel_path.empty()) {
        const int pairs = mdp ? mdp->num_pairs() : 20;
        const int states = mdp ? mdp->num_states() : 10;
        kernel = load_kernel_json(args.kernel_path, pairs, states);
        kernel_note = "kernel file: " + args.kernel_path;
        if (mdp)
            mdp = MdpInstance(
                [&] {
                    std::vector<int> a;
                    for (int s = 0; s < mdp->num_states(); ++s)
                        a.push_back(mdp->num_actions(s));
                    return a;
                }(),
                *kernel, mdp->initial(), mdp->discount());
    }

    SweepProblem problem{
        mdp ? *mdp : build_benchmark(args.radius, kernel, args.xi, args.epsilon).mdp,
        {}, {}, std::nullopt, {}, 0.8, cfg.product_form};

    if (cfg.objective || cfg.mixture_objective || !cfg.constraints.empty() ||
        !cfg.mixture_constraints.empty()) {
        if (!cfg.constraints.empty() && cfg.objective) {
            problem.objective = *cfg.objective;
            problem.constraints = cfg.constraints;
        } else if (!cfg.mixture_constraints.empty() && cfg.mixture_objective) {
            if (mode != SweepMode::Mixture) {
                std::cerr << "mixture laws in config require --mode mixture\n";
                return kExitBadInput;
            }
            // mixture mode still needs an elliptical placeholder for the shared
            // problem struct; use the first components
            problem.objective = {cfg.mixture_objective->law.components.front(),
                                 cfg.mixture_objective->radius};
            problem.mixture_objective = cfg.mixture_objective;
            problem.mixture_constraints = cfg.mixture_constraints;
            for (const auto& mc : cfg.mixture_constraints)
                problem.constraints.push_back({mc.name,
                                               mc.reference.components.front(),
                                               mc.threshold, 0.8, mc.radius});
        } else {
            std::cerr << "config must define an objective and constraints together\n";
            return kExitBadInput;
        }
        problem.epsilon_hat = cfg.epsilon_hat.value_or(0.8);
    } else {
        const auto bench = build_benchmark(args.radius, kernel, args.xi, args.epsilon);
        if (problem.mdp.num_pairs() != bench.objective.law.dim()) {
            std::cerr << "instance has " << problem.mdp.num_pairs()
                      << " state-action pairs; built-in benchmark laws need 20. "
                         "Provide reward laws via --config.\n";
            return kExitBadInput;
        }
        problem.objective = bench.objective;
        problem.constraints = bench.constraints;
        problem.epsilon_hat = cfg.epsilon_hat.value_or(bench.epsilon_hat);
    }

    JointSolveConfig algo;
    algo.max_iterations = cfg.max_iterations;
    algo.movement_tolerance = cfg.movement_tolerance;
    algo.step_length = cfg.step_length;
    algo.line_search_accuracy = cfg.line_search_accuracy;
    algo.product_form = cfg.product_form;
    if (cfg.y0)
        algo.y0 = *cfg.y0;
    else if (problem.constraints.size() == 2 &&
             0.95 * 0.91 >= problem.epsilon_hat - 1e-12)
        algo.y0 = (Eigen::VectorXd(2) << 0.95, 0.91).finished(); // benchmark default

    std::filesystem::create_directories(args.out_dir);

    if (!args.dump_program_path.empty()) {
        if (mode == SweepMode::Mixture) {
            std::cerr << "--dump-program covers the individual and joint cone "
                         "programs; the mixture program has no single conic form\n";
            return kExitBadInput;
        }
        ObjectiveBall objective = problem.objective;
        objective.radius = args.radius;
        std::vector<KlConstraintSpec> specs = problem.constraints;
        for (auto& s : specs) s.radius.delta = args.radius;
        ConicProgram prog;
        if (mode == SweepMode::Joint) {
            Eigen::VectorXd y0 = algo.y0;
            if (y0.size() != static_cast<Eigen::Index>(specs.size()))
                y0 = Eigen::VectorXd::Constant(
                    static_cast<Eigen::Index>(specs.size()),
                    std::pow(problem.epsilon_hat, 1.0 / specs.size()));
            Eigen::VectorXd tightened(specs.size());
            for (std::size_t k = 0; k < specs.size(); ++k)
                tightened(static_cast<Eigen::Index>(k)) = adjust_confidence(
                    y0(static_cast<Eigen::Index>(k)), specs[k].radius);
            prog = build_joint_tau_subproblem(problem.mdp, specs, objective, tightened);
        } else {
            prog = build_individual(problem.mdp, specs, objective);
        }
        write_text_file(args.dump_program_path, prog.to_json_string());
        info("wrote conic program to " + args.dump_program_path);
    }

    if (!args.sweep.empty()) {
        SweepOptions options;
        options.mode = mode;
        options.radii = args.sweep;
        options.out_dir = args.out_dir;
        options.workers = args.workers > 0 ? args.workers : cfg.workers;
        options.joint_config = algo;
        options.kernel_note = kernel_note;
        const SweepResult result = run_sweep(problem, options);
        info("sweep complete: " + std::to_string(result.rows.size()) + " points, " +
             std::to_string(result.failures) + " failures");
        std::cout << result.csv_path << '\n' << result.manifest_path << '\n';
        if (result.failures == 0) return kExitOk;
        for (const auto& row : result.rows)
            if (row.status == SolveStatus::Infeasible) return kExitInfeasible;
        return kExitNumerical;
    }

    SolveReport report;
    {
        ObjectiveBall objective = problem.objective;
        objective.radius = args.radius;
        std::vector<KlConstraintSpec> specs = problem.constraints;
        for (auto& s : specs) s.radius.delta = args.radius;
        if (mode == SweepMode::Individual) {
            report = solve_individual(problem.mdp, specs, objective);
        } else if (mode == SweepMode::Joint) {
            JointSolveConfig config = algo;
            if (config.y0.size() != static_cast<Eigen::Index>(specs.size())) {
                const double split =
                    std::pow(problem.epsilon_hat, 1.0 / specs.size());
                config.y0 = Eigen::VectorXd::Constant(
                    static_cast<Eigen::Index>(specs.size()), split);
            }
            report = solve_joint(problem.mdp, specs, objective, problem.epsilon_hat,
                                config);
        } else {
            std::vector<MixtureConstraintSpec> mix_specs = problem.mixture_constraints;
            if (mix_specs.empty())
                for (const auto& spec : specs)
                    mix_specs.push_back({spec.name,
                                         MixtureLaw(Eigen::VectorXd::Ones(1),
                                                    {spec.reference}),
                                         spec.threshold, spec.radius});
            MixtureObjectiveBall mix_objective = problem.mixture_objective.value_or(
                MixtureObjectiveBall{MixtureLaw(Eigen::VectorXd::Ones(1),
                                                {objective.law}),
                                     args.radius});
            mix_objective.radius = args.radius;
            MixtureSolveConfig config;
            if (algo.y0.size() == static_cast<Eigen::Index>(mix_specs.size()))
                config.y0 = algo.y0;
            report = solve_mixture_heuristic(
                         build_mixture_program(problem.mdp, mix_specs, mix_objective,
                                               problem.epsilon_hat, cfg.product_form),
                         config)
                         .report;
        }
    }

    const std::string report_path =
        (std::filesystem::path(args.out_dir) / "report.json").string();
    write_text_file(report_path, report.to_json_string());
    std::cout << "status: " << to_string(report.status)
              << "  objective: " << report.objective << '\n'
              << report_path << '\n';
    return status_exit_code(report.status);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DRCCMDP solver: distributionally robust chance-constrained MDPs "
                 "with KL ambiguity sets"};
    app.require_subcommand(1);

    SolveArgs args;
    CLI::App* solve = app.add_subcommand("solve", "solve one instance or a radius sweep");
    solve->add_option("--mode", args.mode, "individual | joint | mixture")
        ->default_val("individual");
    solve->add_option("--instance", args.instance_path, "MDP instance JSON file");
    solve->add_option("--radius", args.radius, "KL radius (all balls)");
    solve->add_option("--sweep", args.sweep, "comma-separated radius list")
        ->delimiter(',');
    solve->add_option("--out", args.out_dir, "output directory")->default_val(".");
    solve->add_option("--kernel", args.kernel_path, "transition kernel JSON override");
    solve->add_option("--epsilon", args.epsilon, "confidence level (benchmark laws)");
    solve->add_option("--xi", args.xi, "constraint threshold (benchmark laws)");
    solve->add_option("--config", args.config_path, "solve configuration JSON");
    solve->add_option("--workers", args.workers, "concurrent sweep workers");
    solve->add_option("--dump-program", args.dump_program_path,
                      "write the conic program JSON (individual/joint)");

    std::string instance_out;
    CLI::App* make = app.add_subcommand(
        "make-instance", "write the machine-replacement benchmark instance file");
    make->add_option("--out", instance_out, "output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return run_solve(args);
        if (make->parsed()) {
            drccmdp::save_instance_json(drccmdp::build_benchmark().mdp, instance_out);
            std::cout << instance_out << '\n';
            return kExitOk;
        }
    } catch (const drccmdp::ValidationError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const drccmdp::DomainError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const drccmdp::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}
