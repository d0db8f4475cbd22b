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

#include "drccmdp/reformulate.hpp"

#include <Eigen/Dense>
#include <vector>

namespace drccmdp {

/// Configuration of the sequential-convex-approximation driver for the joint
/// DRCCMDP. The initial confidence split y0 must satisfy the box and joint
/// confidence constraints.
struct JointSolveConfig {
    Eigen::VectorXd y0;
    int max_iterations = 50;
    double movement_tolerance = 1e-4;
    double step_length = 0.9;              // gamma in (0, 1)
    double line_search_accuracy = 1e-3;    // accuracy of the chi-inverse searches
    bool product_form = true;              // joint confidence as prod y_k >= eps_hat
    bool finite_difference_duals = false;  // force the sensitivity fallback
};

/// Joint DRCCMDP solve by alternating a tau-subproblem (second-order cone
/// program at tightened confidences) with a y-subproblem (linear objective
/// over the confidence split), damped by step_length. The y-box at each
/// iterate realizes the inverse confidence transform of [1/2, 1 - Phi(z_k)],
/// ordered by the detected chi monotonicity. Returns the last (tau, V);
/// V is an upper bound on the joint problem's optimal value.
SolveReport solve_joint(const MdpInstance& mdp, const std::vector<KlConstraintSpec>& specs,
                       const ObjectiveBall& objective, double epsilon_hat,
                       const JointSolveConfig& config,
                       const SolverBackend* backend = nullptr);

} // namespace drccmdp
