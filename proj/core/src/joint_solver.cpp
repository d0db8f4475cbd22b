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

#include "drccmdp/joint_solver.hpp"

#include "drccmdp/errors.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace drccmdp {

namespace {

std::string spec_name(const KlConstraintSpec& spec, std::size_t k) {
    return spec.name.empty() ? "cc" + std::to_string(k) : spec.name;
}

double coupling_slack(const Eigen::VectorXd& y, double eps_hat, bool product_form) {
    if (product_form) {
        double s = 0.0;
        for (int k = 0; k < y.size(); ++k) s += std::log(std::max(y(k), 1e-300));
        return s - std::log(eps_hat);
    }
    return y.sum() - eps_hat;
}

// Finite-difference shadow price of constraint k's threshold, the fallback
// when a backend ships no dual certificates.
double finite_difference_dual(const MdpInstance& mdp,
                              const std::vector<KlConstraintSpec>& specs,
                              const ObjectiveBall& objective,
                              const Eigen::VectorXd& tightened, std::size_t k,
                              double base_value, const SolverBackend* backend) {
    constexpr double kStep = 1e-5;
    std::vector<KlConstraintSpec> perturbed = specs;
    perturbed[k].threshold += kStep;
    const ConicProgram prog =
        build_joint_tau_subproblem(mdp, perturbed, objective, tightened);
    const BackendResult res = conic_solve(prog, backend);
    if (res.status != SolveStatus::Optimal) return 0.0;
    return std::max(0.0, (res.objective - base_value) / kStep);
}

} // namespace

SolveReport solve_joint(const MdpInstance& mdp, const std::vector<KlConstraintSpec>& specs,
                       const ObjectiveBall& objective, double epsilon_hat,
                       const JointSolveConfig& config, const SolverBackend* backend) {
    const auto start = std::chrono::steady_clock::now();
    const int K = static_cast<int>(specs.size());
    if (K == 0) throw ValidationError("solve_joint needs at least one constraint");
    if (config.y0.size() != K)
        throw ValidationError("initial confidence split has wrong length");
    for (int k = 0; k < K; ++k)
        if (!(config.y0(k) >= 0.0 && config.y0(k) <= 1.0))
            throw ValidationError("initial confidence split must lie in [0, 1]");
    if (coupling_slack(config.y0, epsilon_hat, config.product_form) < -1e-12)
        throw ValidationError(
            "initial confidence split violates the joint confidence constraint");
    if (!(config.step_length > 0.0 && config.step_length < 1.0))
        throw ValidationError("step length must lie in (0, 1)");
    if (!(epsilon_hat > 0.0 && epsilon_hat <= 1.0))
        throw DomainError("joint confidence must lie in (0, 1]");

    const bool duals_available =
        !config.finite_difference_duals &&
        (backend ? backend->capabilities().dual_certificates
                 : embedded_backend().capabilities().dual_certificates);

    // chi monotonicity per constraint radius (disputed direction; detected).
    std::vector<bool> increasing(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k)
        increasing[static_cast<std::size_t>(k)] =
            chi_increasing_in_y(specs[static_cast<std::size_t>(k)].radius);

    SolveReport report;
    report.heuristic = true;
    report.note = "joint sequential convex approximation; V is an upper bound";
    report.chi_increasing = increasing[0];

    Eigen::VectorXd y = config.y0.cwiseMin(1.0 - 1e-12).cwiseMax(0.0);
    for (int iter = 0; iter <= config.max_iterations; ++iter) {
        report.iterations = iter + 1;
        report.y_trace.push_back(y);

        Eigen::VectorXd tightened(K);
        for (int k = 0; k < K; ++k)
            tightened(k) =
                adjust_confidence(y(k), specs[static_cast<std::size_t>(k)].radius);

        const ConicProgram prog =
            build_joint_tau_subproblem(mdp, specs, objective, tightened);
        const BackendResult res = conic_solve(prog, backend);
        if (res.status != SolveStatus::Optimal) {
            report.status = res.status;
            if (iter == 0)
                report.note = "tau-subproblem infeasible at iteration 0; try a larger "
                              "initial confidence split";
            else
                report.note = "tau-subproblem failed (" + to_string(res.status) +
                              ") at iteration " + std::to_string(iter);
            break;
        }
        report.status = SolveStatus::Optimal;
        report.tau.tau = res.x;
        report.objective = res.objective;
        report.duals = res.duals;

        Eigen::VectorXd theta(K);
        for (std::size_t k = 0; k < specs.size(); ++k) {
            const auto it = res.duals.find(spec_name(specs[k], k));
            if (duals_available && it != res.duals.end())
                theta(static_cast<Eigen::Index>(k)) = std::max(0.0, it->second);
            else
                theta(static_cast<Eigen::Index>(k)) = finite_difference_dual(
                    mdp, specs, objective, tightened, k, res.objective, backend);
        }
        report.theta_trace.push_back(theta);

        if (iter == config.max_iterations) break;

        // Confidence boxes realizing the inverse transform of
        // [1/2, 1 - Phi((xi - tau'mu)/sd)], ordered by the detected direction.
        Eigen::VectorXd lo(K), hi(K), gamma(K);
        bool box_ok = true;
        std::string box_diag;
        for (int k = 0; k < K; ++k) {
            const auto& spec = specs[static_cast<std::size_t>(k)];
            const double sd =
                std::sqrt(std::max(0.0, res.x.dot(spec.reference.dispersion * res.x)));
            double target;
            if (sd < 1e-12)
                target = res.x.dot(spec.reference.location) >= spec.threshold ? 1.0 : 0.0;
            else
                target = 1.0 - std_cdf(Generator::gaussian(),
                                       (spec.threshold - res.x.dot(spec.reference.location)) / sd);

            const double chi_at0 = adjust_confidence(0.0, spec.radius);
            const double chi_at1 = adjust_confidence(1.0, spec.radius);
            const double chi_min = std::min(chi_at0, chi_at1);
            const double chi_max = std::max(chi_at0, chi_at1);
            const bool inc = increasing[static_cast<std::size_t>(k)];

            if (target < chi_min - 1e-9) {
                box_ok = false;
                std::ostringstream diag;
                diag << "empty confidence box for constraint " << spec_name(spec, static_cast<std::size_t>(k))
                     << " at iteration " << iter << ": attainable chi range ["
                     << chi_min << ", " << chi_max << "], required upper level "
                     << target;
                box_diag = diag.str();
                break;
            }
            // y achieving chi(y) = 1/2; when 1/2 sits below the attainable
            // range every y qualifies and the permissive endpoint applies.
            const double y_half =
                (0.5 < chi_min) ? (inc ? 0.0 : 1.0)
                                : inverse_adjust(0.5, spec.radius,
                                                 config.line_search_accuracy);
            const double y_target =
                (target >= chi_max) ? (inc ? 1.0 : 0.0)
                                    : inverse_adjust(target, spec.radius,
                                                     config.line_search_accuracy);
            lo(k) = inc ? y_half : y_target;
            hi(k) = inc ? y_target : y_half;
            if (hi(k) < lo(k)) std::swap(lo(k), hi(k));
            // y^n satisfies constraint k at its own tightened level, so it
            // lies in the exact box; the finite line-search accuracy can
            // exclude it by a hair, which would starve the y-subproblem.
            lo(k) = std::min(lo(k), y(k));
            hi(k) = std::max(hi(k), y(k));
            gamma(k) = theta(k) *
                       gaussian_quantile_derivative(1.0 - tightened(k)) * sd;
        }
        if (!box_ok) {
            report.status = SolveStatus::NumericalLimit;
            report.note = box_diag;
            break;
        }

        Eigen::VectorXd y_opt;
        // interior-point certificates report ~1e-12 rather than exact zeros on
        // slack constraints; anything below 1e-9 counts as degenerate
        if (gamma.cwiseAbs().maxCoeff() <= 1e-9) {
            y_opt = y; // keep the split unchanged, preventing oscillation
        } else {
            const YSubproblem sub = build_joint_y_subproblem(
                gamma, lo, hi, epsilon_hat, config.product_form);
            const auto solved = solve_y_subproblem(sub);
            if (!solved) {
                report.status = SolveStatus::NumericalLimit;
                report.note = "y-subproblem infeasible at iteration " +
                              std::to_string(iter);
                break;
            }
            y_opt = *solved;
        }

        // stay strictly below 1: the quantile multiplier blows up there
        const Eigen::VectorXd y_next =
            (y + config.step_length * (y_opt - y))
                .cwiseMin(1.0 - 1e-12)
                .cwiseMax(0.0);
        const double movement = (y_next - y).norm();
        y = y_next;
        if (movement < config.movement_tolerance) {
            report.note = "converged by movement criterion";
            break;
        }
    }

    if (report.status == SolveStatus::Optimal && report.tau.tau.size() > 0) {
        const OccupationPolytope poly = build_occupation_polytope(mdp);
        report.equality_residual =
            (poly.eq_matrix * report.tau.tau - poly.eq_rhs).cwiseAbs().maxCoeff();
        report.min_tau = report.tau.tau.minCoeff();
        report.policy = extract_policy(report.tau, mdp);
        report.worst_case_discounted_value =
            -report.objective / (1.0 - mdp.discount());
    }
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

} // namespace drccmdp
