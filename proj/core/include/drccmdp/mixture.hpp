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

#include "drccmdp/distributions.hpp"
#include "drccmdp/kl.hpp"
#include "drccmdp/mdp.hpp"
#include "drccmdp/reformulate.hpp"

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace drccmdp {

struct MixtureConstraintSpec {
    std::string name;
    MixtureLaw reference;
    double threshold = 0.0; // xi_k
    KlRadius radius;
};

struct MixtureObjectiveBall {
    MixtureLaw law;
    double radius = 0.0;
};

/// Decision variables of the mixture reformulation: per-constraint auxiliary
/// confidences (x, y, y_hat) and per-component levels l[k](j).
struct MixtureProgramVars {
    OccupationVector tau;
    double alpha = 0.0; // +inf encoded as infinity when radius = 0
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    Eigen::VectorXd y_hat;
    std::vector<Eigen::VectorXd> l;
};

/// Structured description of the joint DRCCMDP with elliptical-mixture
/// references: per-(j,k) cone pieces, the mixture aggregation, the KL
/// coupling, boxes, the joint confidence constraint, and an objective
/// evaluator callable at any (tau, alpha). Immutable after build.
class MixtureProgramDescription {
  public:
    MixtureProgramDescription(MdpInstance mdp, std::vector<MixtureConstraintSpec> specs,
                              MixtureObjectiveBall objective, double epsilon_hat,
                              bool product_form);

    const MdpInstance& mdp() const { return mdp_; }
    const std::vector<MixtureConstraintSpec>& constraints() const { return specs_; }
    const MixtureObjectiveBall& objective() const { return objective_; }
    double epsilon_hat() const { return epsilon_hat_; }
    bool product_form() const { return product_form_; }

    /// alpha log[ sum_j w_j exp(-tau'mu_j / alpha) psi_j(-tau'Sigma_j tau / 2 alpha^2) ]
    /// + alpha delta_0, evaluated through a log-sum-exp; +inf outside a
    /// component generator's domain. alpha = +inf (or radius 0) returns the
    /// nominal limit -tau' (sum_j w_j mu_j).
    double objective_value(const Eigen::VectorXd& tau, double alpha) const;
    Eigen::VectorXd objective_gradient(const Eigen::VectorXd& tau, double alpha) const;

    /// Largest constraint violation at the given variables; a feasible point
    /// is one with max_violation(vars) <= tol.
    double max_violation(const MixtureProgramVars& vars) const;

  private:
    MdpInstance mdp_;
    std::vector<MixtureConstraintSpec> specs_;
    MixtureObjectiveBall objective_;
    double epsilon_hat_;
    bool product_form_;
    OccupationPolytope polytope_;
};

/// Validates the mixture reformulation's assumptions (objective components
/// positive definite, nonpositive objective locations, generator bound) and
/// builds the description. Throws AssumptionError naming the failing
/// condition.
MixtureProgramDescription
build_mixture_program(const MdpInstance& mdp,
                      const std::vector<MixtureConstraintSpec>& specs,
                      const MixtureObjectiveBall& objective, double epsilon_hat,
                      bool product_form = true);

struct MixtureSolveConfig {
    std::optional<Eigen::VectorXd> y0;
    int max_iterations = 40;
    double movement_tolerance = 1e-6;
    double step_length = 0.9;
    double cut_tolerance = 1e-9;
    int max_cuts = 120;
    double line_search_accuracy = 1e-6;
};

struct MixtureSolveReport {
    SolveReport report;
    MixtureProgramVars vars;
    double max_violation = 0.0;
};

/// Block-coordinate heuristic: (i) at fixed confidence allocation, solve the
/// tau-problem over the cone region (cutting planes when the objective is not
/// conic) and line-search alpha; (ii) at fixed (tau, alpha), re-split the
/// component levels by per-constraint equal-slack searches and update y by
/// the damped y-subproblem step. Returns a point verified feasible at 1e-6,
/// flagged heuristic (stationary point only).
MixtureSolveReport solve_mixture_heuristic(const MixtureProgramDescription& desc,
                                           const MixtureSolveConfig& config = {},
                                           const SolverBackend* backend = nullptr);

} // namespace drccmdp
