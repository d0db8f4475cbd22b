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

#include <Eigen/Dense>
#include <vector>

namespace drccmdp {

/// Cone structure of the standard-form problem
///   min c'x  s.t.  A x = b,  G x + s = h,  s in K,
/// K = R+^l x Q^{q_1} x ... x Q^{q_N} (nonnegative orthant first).
struct ConeDims {
    int l = 0;
    std::vector<int> q;
    int total() const {
        int m = l;
        for (int qi : q) m += qi;
        return m;
    }
    int degree() const { return l + static_cast<int>(q.size()); }
};

struct StandardConeProblem {
    Eigen::VectorXd c;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::MatrixXd G;
    Eigen::VectorXd h;
    ConeDims dims;
};

struct IpmSettings {
    double feastol = 1e-8;
    double abstol = 1e-8;
    double reltol = 1e-8;
    int max_iterations = 100;
    double step_fraction = 0.99;
    double static_regularization = 1e-11;
};

struct IpmResult {
    SolveStatus status = SolveStatus::NumericalLimit;
    Eigen::VectorXd x;
    Eigen::VectorXd y; // equality multipliers
    Eigen::VectorXd z; // cone multipliers (same layout as s)
    Eigen::VectorXd s;
    double objective = 0.0;
    double feasibility_residual = 0.0;
    double duality_gap = 0.0;
    int iterations = 0;
};

/// Dense primal-dual interior-point method on the homogeneous self-dual
/// embedding, with Nesterov-Todd scaling and Mehrotra predictor-corrector
/// steps. Sized for the small dense programs this library produces
/// (tens of variables); infeasibility and unboundedness are certified
/// through the embedding.
IpmResult ipm_solve(const StandardConeProblem& problem, const IpmSettings& settings = {});

/// The embedded SolverBackend: converts a ConicProgram to standard form
/// (epigraph variables for objective norm terms), runs ipm_solve, and maps
/// cone multipliers back to named constraints.
class InteriorPointBackend final : public SolverBackend {
  public:
    explicit InteriorPointBackend(IpmSettings settings = {}) : settings_(settings) {}

    Capabilities capabilities() const override {
        return {.second_order_cones = true,
                .dual_certificates = true,
                .concurrent_solves = true};
    }
    BackendResult solve(const ConicProgram& program) const override;

  private:
    IpmSettings settings_;
};

} // namespace drccmdp
