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

// Internal: Kelley cutting-plane minimization of a smooth convex function
// over the feasible region of a ConicProgram. Used for the objective shapes
// the conic normal form cannot express directly (log-generator objectives,
// mixture objectives).

#pragma once

#include "drccmdp/conic.hpp"

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <map>

namespace drccmdp::detail {

struct CuttingPlaneResult {
    Eigen::VectorXd x;
    double value = 0.0;
    double lower_bound = 0.0;
    bool converged = false;
    int cuts = 0;
    std::map<std::string, double> duals; // from the last cut-augmented solve
};

// Minimizes f over the feasible set of `region` (whose objective is
// ignored). Epigraph variable t with cuts t >= f(x_i) + g(x_i)'(x - x_i);
// each iteration solves the cut-augmented cone program. x0 must be feasible.
// Converges when best_f - lower_bound <= tol * max(1, |best_f|).
inline CuttingPlaneResult minimize_convex_over_region(
    const ConicProgram& region, const std::function<double(const Eigen::VectorXd&)>& f,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& gradient,
    const Eigen::VectorXd& x0, double tol, int max_cuts,
    const SolverBackend* backend = nullptr) {
    const int n = region.num_vars;

    ConicProgram prog = region;
    prog.num_vars = n + 1;
    prog.objective_linear = Eigen::VectorXd::Zero(n + 1);
    prog.objective_linear(n) = 1.0;
    prog.objective_norms.clear();
    auto widen = [&](Eigen::VectorXd& v, double fill) {
        Eigen::VectorXd w(n + 1);
        w << v, fill;
        v = w;
    };
    constexpr double kInf = std::numeric_limits<double>::infinity();
    widen(prog.lower, -kInf);
    widen(prog.upper, kInf);
    for (auto& eq : prog.equalities) widen(eq.a, 0.0);
    for (auto& in : prog.inequalities) widen(in.a, 0.0);
    for (auto& soc : prog.socs) {
        widen(soc.c, 0.0);
        soc.A.conservativeResize(soc.A.rows(), n + 1);
        soc.A.col(n).setZero();
    }

    auto add_cut = [&](const Eigen::VectorXd& x, double fx) {
        const Eigen::VectorXd g = gradient(x);
        LinearConstraint cut;
        cut.a = Eigen::VectorXd(n + 1);
        cut.a.head(n) = -g;
        cut.a(n) = 1.0;
        cut.rhs = fx - g.dot(x);
        prog.inequalities.push_back(std::move(cut));
    };

    CuttingPlaneResult best;
    best.x = x0;
    best.value = f(x0);
    best.lower_bound = -kInf;
    add_cut(x0, best.value);

    for (int i = 0; i < max_cuts; ++i) {
        const BackendResult res = conic_solve(prog, backend);
        if (res.status != SolveStatus::Optimal) break;
        const Eigen::VectorXd x = res.x.head(n);
        best.lower_bound = std::max(best.lower_bound, res.objective);
        const double fx = f(x);
        if (fx < best.value) {
            best.value = fx;
            best.x = x;
        }
        best.cuts = i + 1;
        best.duals = res.duals;
        if (best.value - best.lower_bound <= tol * std::max(1.0, std::abs(best.value))) {
            best.converged = true;
            break;
        }
        add_cut(x, fx);
    }
    return best;
}

} // namespace drccmdp::detail
