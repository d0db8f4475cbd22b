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

#include "drccmdp/conic.hpp"
#include "drccmdp/distributions.hpp"
#include "drccmdp/kl.hpp"
#include "drccmdp/mdp.hpp"

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace drccmdp {

/// One distributionally robust chance constraint
///   inf_{F in KL ball} P_F(tau' r >= threshold) >= confidence.
/// In joint mode the per-constraint confidence is replaced by a single
/// epsilon_hat carried alongside the spec list.
struct KlConstraintSpec {
    std::string name;
    EllipticalLaw reference;
    double threshold = 0.0;  // xi_k
    double confidence = 0.0; // eps_k (individual mode)
    KlRadius radius;
};

/// KL ball around the objective's reference reward distribution.
struct ObjectiveBall {
    EllipticalLaw law;
    double radius = 0.0;
};

/// Deterministic equivalent of the individual DRCCMDP with a Gaussian
/// objective reference: minimize -tau'mu_0 + sqrt(2 delta_0) ||Sigma_0^{1/2} tau||
/// subject to, per constraint k,
///   tau'mu_k + Phi_k^{-1}(1 - eps~_k) ||Sigma_k^{1/2} tau|| >= xi_k
/// with eps~_k = adjust_confidence(eps_k, delta_k), plus the occupation
/// polytope. Constraints are named spec.name (default "cc<k>") so duals are
/// retrievable.
///
/// Throws NonconvexityError when some eps~_k < 1/2 (the constraint is not a
/// second-order cone), AssumptionError for non-Gaussian objective references
/// (use solve_individual_nongaussian) or an indefinite Sigma_0, and
/// UnsupportedGeneratorError for constraint references without a tractable
/// quantile.
ConicProgram build_individual(const MdpInstance& mdp,
                              const std::vector<KlConstraintSpec>& specs,
                              const ObjectiveBall& objective);

/// Same program with the tightened confidence levels fixed to y~ (the
/// tau-subproblem of the joint alternation). Requires y~_k >= 1/2 and
/// Gaussian constraint references.
ConicProgram build_joint_tau_subproblem(const MdpInstance& mdp,
                                        const std::vector<KlConstraintSpec>& specs,
                                        const ObjectiveBall& objective,
                                        const Eigen::VectorXd& tightened);

/// Nominal chance-constrained program (no ambiguity): the same second-order
/// cone program built directly from the stated confidences, bypassing the KL
/// transform. Collapse target for the radius-zero tests.
ConicProgram build_nominal_individual(const MdpInstance& mdp,
                                      const std::vector<KlConstraintSpec>& specs,
                                      const EllipticalLaw& objective_law);

/// minimize gamma' y  s.t.  sum_k log y_k >= log(epsilon_hat),
///                          lo <= y <= hi (componentwise).
struct YSubproblem {
    Eigen::VectorXd gamma;
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
    double epsilon_hat = 1.0;
    bool product_form = true; // false: literal sum constraint sum_k y_k >= epsilon_hat
};

/// Assembles the y-subproblem at a fixed tau iterate. bounds_lo/hi realize
/// the inverse-transformed confidence interval per constraint, ordered by the
/// detected chi monotonicity. Throws DomainError on an empty box.
YSubproblem build_joint_y_subproblem(const Eigen::VectorXd& gamma,
                                     const Eigen::VectorXd& bounds_lo,
                                     const Eigen::VectorXd& bounds_hi,
                                     double epsilon_hat, bool product_form = true);

/// Exact solution of the y-subproblem via KKT: components with nonpositive
/// cost sit at their upper bound; the coupling constraint, when active, is
/// resolved by bisection on its multiplier. Returns nullopt when even the
/// upper corner violates the coupling constraint (infeasible subproblem).
std::optional<Eigen::VectorXd> solve_y_subproblem(const YSubproblem& problem);

/// Result of a solve at the library's top level.
struct SolveReport {
    SolveStatus status = SolveStatus::NumericalLimit;
    OccupationVector tau;
    double objective = 0.0; // minimized reformulation objective (no 1/(1-beta))
    double worst_case_discounted_value = 0.0;
    StationaryPolicy policy;
    std::map<std::string, double> duals; // constraint shadow prices at tau*
    std::vector<Eigen::VectorXd> y_trace;
    std::vector<Eigen::VectorXd> theta_trace;
    int iterations = 0;
    double wall_time_seconds = 0.0;
    bool heuristic = false;
    bool chi_increasing = true;
    double equality_residual = 0.0;
    double min_tau = 0.0;
    std::string note;

    /// Documented JSON schema (see README).
    std::string to_json_string() const;
};

/// Individual DRCCMDP with a non-Gaussian objective reference: outer
/// log-grid + golden-section search over the dual scale alpha, inner convex
/// solve in tau at fixed alpha over the (fixed) cone-constrained region.
/// The inner objective is convex for Gaussian and Laplace generators; other
/// generators are rejected (AssumptionError from the worst-case assumption
/// check). Results are flagged heuristic unless the objective is Gaussian.
SolveReport solve_individual_nongaussian(const MdpInstance& mdp,
                                         const std::vector<KlConstraintSpec>& specs,
                                         const ObjectiveBall& objective,
                                         const SolverBackend* backend = nullptr);

/// Convenience dispatcher: Gaussian objective goes through build_individual +
/// conic_solve, anything else through solve_individual_nongaussian.
SolveReport solve_individual(const MdpInstance& mdp,
                             const std::vector<KlConstraintSpec>& specs,
                             const ObjectiveBall& objective,
                             const SolverBackend* backend = nullptr);

} // namespace drccmdp
