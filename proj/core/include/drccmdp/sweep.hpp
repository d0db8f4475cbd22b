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

#pragma once

#include "drccmdp/joint_solver.hpp"
#include "drccmdp/mixture.hpp"
#include "drccmdp/reformulate.hpp"

#include <optional>
#include <string>
#include <vector>

namespace drccmdp {

enum class SweepMode { Individual, Joint, Mixture };

std::string to_string(SweepMode mode);

/// One solve family over which the radius is swept. Mixture mode derives
/// single-component mixtures from the elliptical data when no explicit
/// mixture laws are given.
struct SweepProblem {
    MdpInstance mdp;
    ObjectiveBall objective;
    std::vector<KlConstraintSpec> constraints;
    std::optional<MixtureObjectiveBall> mixture_objective;
    std::vector<MixtureConstraintSpec> mixture_constraints;
    double epsilon_hat = 0.8;
    bool product_form = true;
};

struct SweepOptions {
    SweepMode mode = SweepMode::Individual;
    std::vector<double> radii;
    std::string out_dir;
    int workers = 0; // <= 0: min(4, hardware, #radii)
    JointSolveConfig joint_config;
    std::string kernel_note; // provenance recorded in the manifest
};

struct SweepRow {
    double radius = 0.0;
    SolveStatus status = SolveStatus::NumericalLimit;
    double objective = 0.0;
    std::vector<double> action0_probability; // per state; "repair" on the benchmark
    double seconds = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows; // in radii order
    std::string csv_path;
    std::string manifest_path;
    int failures = 0;
};

/// Solves one sweep point (radius applied to the objective and every
/// constraint) in the given mode.
SweepRow solve_sweep_point(const SweepProblem& problem, SweepMode mode, double radius,
                           const JointSolveConfig& algo,
                           const SolverBackend* backend = nullptr);

/// Runs all sweep points (concurrently up to the worker count), then writes
/// sweep_<mode>.csv (radius,state,repair_probability,status) and
/// manifest_<mode>.json into out_dir. Failed points are recorded and the run
/// continues.
SweepResult run_sweep(const SweepProblem& problem, const SweepOptions& options,
                      const SolverBackend* backend = nullptr);

} // namespace drccmdp
