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

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace drccmdp {

/// A term coeff * ||A x + b||_2 added to the linear objective.
struct ConeNormTerm {
    double coeff = 0.0;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
};

/// c' x + d >= k * ||A x + b||_2 with k >= 0.
struct SocConstraint {
    std::string name;
    Eigen::VectorXd c;
    double d = 0.0;
    double k = 1.0;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
};

/// a' x (= | >=) rhs.
struct LinearConstraint {
    std::string name;
    Eigen::VectorXd a;
    double rhs = 0.0;
};

/// Solver-facing normal form: minimize a linear-plus-norms objective over
/// linear equalities, linear inequalities (>=), second-order cones, and
/// variable bounds. Dimension consistency is checked by validate().
struct ConicProgram {
    int num_vars = 0;
    Eigen::VectorXd objective_linear;
    std::vector<ConeNormTerm> objective_norms;
    std::vector<LinearConstraint> equalities;
    std::vector<LinearConstraint> inequalities;
    std::vector<SocConstraint> socs;
    Eigen::VectorXd lower; // -inf allowed
    Eigen::VectorXd upper; // +inf allowed

    /// Throws ValidationError on any dimension mismatch or non-finite cone
    /// multiplier.
    void validate() const;

    /// Documented JSON normal form for external-solver debugging.
    std::string to_json_string() const;

    /// Objective value at x (linear part plus norm terms).
    double objective_value(const Eigen::VectorXd& x) const;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, NumericalLimit };

std::string to_string(SolveStatus status);

struct BackendResult {
    SolveStatus status = SolveStatus::NumericalLimit;
    Eigen::VectorXd x;
    double objective = 0.0;
    /// Scalarized multipliers keyed by constraint name: for an inequality the
    /// shadow price of its rhs, for a SOC the shadow price of tightening d.
    std::map<std::string, double> duals;
    double feasibility_residual = 0.0;
    double duality_gap = 0.0;
    int iterations = 0;
};

/// Contract every conic backend fulfills. The embedded interior-point backend
/// always ships; external solvers plug in behind the same interface.
class SolverBackend {
  public:
    struct Capabilities {
        bool second_order_cones = false;
        bool dual_certificates = false;
        bool concurrent_solves = false;
    };

    virtual ~SolverBackend() = default;
    virtual Capabilities capabilities() const = 0;
    /// Requested tolerances: feasibility 1e-8, duality gap 1e-8. A backend
    /// that cannot reach them must report NumericalLimit, never Optimal.
    virtual BackendResult solve(const ConicProgram& program) const = 0;
};

/// Solves with the given backend, or the embedded interior-point method when
/// backend is null.
BackendResult conic_solve(const ConicProgram& program,
                          const SolverBackend* backend = nullptr);

/// The embedded reference backend (shared, stateless, thread-safe).
const SolverBackend& embedded_backend();

} // namespace drccmdp
