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

namespace drccmdp {

/// Loads an MDP instance from the documented JSON schema
/// {states, actions, transition, initial, discount}; transition is nested
/// [state][action][next_state]. All invariants are validated on load.
MdpInstance load_instance_json(const std::string& path);
MdpInstance parse_instance_json(const std::string& text);

std::string instance_to_json_string(const MdpInstance& mdp);
void save_instance_json(const MdpInstance& mdp, const std::string& path);

/// A |Lambda| x |S| transition kernel from the same nested-array schema
/// (the "transition" field alone, or a full instance document).
Eigen::MatrixXd load_kernel_json(const std::string& path, int num_pairs,
                                 int num_states);

/// Optional solve configuration for the CLI (--config). Any field may be
/// omitted; see the README for the schema.
struct SolveConfigFile {
    std::optional<ObjectiveBall> objective;
    std::vector<KlConstraintSpec> constraints;
    std::optional<MixtureObjectiveBall> mixture_objective;
    std::vector<MixtureConstraintSpec> mixture_constraints;
    std::optional<double> epsilon_hat;
    bool product_form = true;
    std::optional<Eigen::VectorXd> y0;
    int max_iterations = 50;
    double movement_tolerance = 1e-4;
    double step_length = 0.9;
    double line_search_accuracy = 1e-3;
    int workers = 0;
};

SolveConfigFile load_solve_config_json(const std::string& path);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

} // namespace drccmdp
