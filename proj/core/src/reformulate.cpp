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

#include "drccmdp/reformulate.hpp"

#include "cutting_plane.hpp"
#include "drccmdp/errors.hpp"
#include "drccmdp/scalar_opt.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <limits>
#include <map>

namespace drccmdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHalfSlack = 1e-12;

std::string constraint_name(const KlConstraintSpec& spec, std::size_t k) {
    return spec.name.empty() ? "cc" + std::to_string(k) : spec.name;
}

// Shared frame: occupation polytope, tau >= 0, and the Gaussian objective
// -tau'mu_0 (+ sqrt(2 delta_0) ||Sigma_0^{1/2} tau|| when delta_0 > 0).
ConicProgram make_tau_frame(const MdpInstance& mdp, const EllipticalLaw& objective_law,
                            double delta0) {
    const int n = mdp.num_pairs();
    if (objective_law.dim() != n)
        throw ValidationError("objective law dimension does not match |Lambda|");

    ConicProgram prog;
    prog.num_vars = n;
    prog.objective_linear = -objective_law.location;
    if (delta0 > 0.0) {
        objective_law.require_positive_definite("objective reference");
        prog.objective_norms.push_back(
            {std::sqrt(2.0 * delta0), psd_sqrt(objective_law.dispersion),
             Eigen::VectorXd::Zero(n)});
    }

    const OccupationPolytope poly = build_occupation_polytope(mdp);
    for (int s = 0; s < poly.eq_matrix.rows(); ++s)
        prog.equalities.push_back(
            {"occ" + std::to_string(s), poly.eq_matrix.row(s), poly.eq_rhs(s)});
    prog.lower = Eigen::VectorXd::Zero(n);
    prog.upper = Eigen::VectorXd::Constant(n, kInf);
    return prog;
}

// Appends tau'mu + kappa ||Sigma^{1/2} tau|| >= xi with kappa <= 0.
// Vanishing dispersion (or kappa = 0) degenerates to the linear constraint.
void append_chance_constraint(ConicProgram& prog, const std::string& name,
                              const EllipticalLaw& law, double xi, double kappa) {
    if (kappa > 0.0)
        throw NonconvexityError("constraint " + name +
                                " has a positive quantile multiplier; not a "
                                "second-order cone");
    // quantile noise at exactly 1/2 (bisection resolution) counts as zero
    const bool degenerate =
        kappa > -1e-12 || law.dispersion.cwiseAbs().maxCoeff() < 1e-14;
    if (degenerate) {
        prog.inequalities.push_back({name, law.location, xi});
        return;
    }
    SocConstraint soc;
    soc.name = name;
    soc.c = law.location;
    soc.d = -xi;
    soc.k = -kappa;
    soc.A = psd_sqrt(law.dispersion);
    soc.b = Eigen::VectorXd::Zero(prog.num_vars);
    prog.socs.push_back(std::move(soc));
}

double tightened_quantile(const EllipticalLaw& law, double tightened,
                          const std::string& name) {
    if (tightened < 0.5 - kHalfSlack)
        throw NonconvexityError(
            "constraint " + name + ": tightened confidence " +
            std::to_string(tightened) +
            " is below 1/2, the deterministic equivalent is not convex");
    if (tightened >= 1.0 - 1e-15)
        throw DomainError("constraint " + name +
                          ": tightened confidence reaches 1, the quantile "
                          "multiplier is unbounded");
    return std::min(std_quantile(law.generator, 1.0 - std::max(tightened, 0.5)), 0.0);
}

void fill_report_from_tau(SolveReport& report, const MdpInstance& mdp) {
    const OccupationPolytope poly = build_occupation_polytope(mdp);
    report.equality_residual =
        (poly.eq_matrix * report.tau.tau - poly.eq_rhs).cwiseAbs().maxCoeff();
    report.min_tau = report.tau.tau.minCoeff();
    report.policy = extract_policy(report.tau, mdp);
    report.worst_case_discounted_value = -report.objective / (1.0 - mdp.discount());
}

} // namespace

ConicProgram build_individual(const MdpInstance& mdp,
                              const std::vector<KlConstraintSpec>& specs,
                              const ObjectiveBall& objective) {
    if (objective.law.generator.kind != GeneratorKind::Gaussian)
        throw AssumptionError(
            "build_individual needs a Gaussian objective reference; use "
            "solve_individual_nongaussian for other generators");
    require_worst_case_assumption(objective.law.generator, objective.radius);

    ConicProgram prog = make_tau_frame(mdp, objective.law, objective.radius);
    for (std::size_t k = 0; k < specs.size(); ++k) {
        const auto& spec = specs[k];
        if (spec.reference.dim() != mdp.num_pairs())
            throw ValidationError("constraint law dimension does not match |Lambda|");
        const double tightened = adjust_confidence(spec.confidence, spec.radius);
        const double kappa =
            tightened_quantile(spec.reference, tightened, constraint_name(spec, k));
        append_chance_constraint(prog, constraint_name(spec, k), spec.reference,
                                 spec.threshold, kappa);
    }
    prog.validate();
    return prog;
}

ConicProgram build_joint_tau_subproblem(const MdpInstance& mdp,
                                        const std::vector<KlConstraintSpec>& specs,
                                        const ObjectiveBall& objective,
                                        const Eigen::VectorXd& tightened) {
    if (tightened.size() != static_cast<Eigen::Index>(specs.size()))
        throw ValidationError("tightened confidence vector has wrong length");
    if (objective.law.generator.kind != GeneratorKind::Gaussian)
        throw AssumptionError("joint tau-subproblem needs a Gaussian objective reference");

    ConicProgram prog = make_tau_frame(mdp, objective.law, objective.radius);
    for (std::size_t k = 0; k < specs.size(); ++k) {
        const auto& spec = specs[k];
        if (spec.reference.generator.kind != GeneratorKind::Gaussian)
            throw AssumptionError("joint tau-subproblem needs Gaussian references");
        const double kappa =
            tightened_quantile(spec.reference, tightened(static_cast<Eigen::Index>(k)),
                               constraint_name(spec, k));
        append_chance_constraint(prog, constraint_name(spec, k), spec.reference,
                                 spec.threshold, kappa);
    }
    prog.validate();
    return prog;
}

ConicProgram build_nominal_individual(const MdpInstance& mdp,
                                      const std::vector<KlConstraintSpec>& specs,
                                      const EllipticalLaw& objective_law) {
    ConicProgram prog = make_tau_frame(mdp, objective_law, 0.0);
    for (std::size_t k = 0; k < specs.size(); ++k) {
        const auto& spec = specs[k];
        const double kappa =
            tightened_quantile(spec.reference, spec.confidence, constraint_name(spec, k));
        append_chance_constraint(prog, constraint_name(spec, k), spec.reference,
                                 spec.threshold, kappa);
    }
    prog.validate();
    return prog;
}

YSubproblem build_joint_y_subproblem(const Eigen::VectorXd& gamma,
                                     const Eigen::VectorXd& bounds_lo,
                                     const Eigen::VectorXd& bounds_hi,
                                     double epsilon_hat, bool product_form) {
    if (gamma.size() != bounds_lo.size() || gamma.size() != bounds_hi.size())
        throw ValidationError("y-subproblem vectors have mismatched lengths");
    if (!(epsilon_hat > 0.0 && epsilon_hat <= 1.0))
        throw DomainError("joint confidence must lie in (0, 1]");
    for (int k = 0; k < gamma.size(); ++k) {
        if (bounds_hi(k) < bounds_lo(k) - 1e-12)
            throw DomainError("y-subproblem box " + std::to_string(k) + " is empty: [" +
                              std::to_string(bounds_lo(k)) + ", " +
                              std::to_string(bounds_hi(k)) + "]");
        if (bounds_lo(k) < -1e-12 || bounds_hi(k) > 1.0 + 1e-12)
            throw DomainError("y-subproblem box must lie within [0, 1]");
    }
    YSubproblem prob;
    prob.gamma = gamma;
    prob.lo = bounds_lo.cwiseMax(0.0);
    prob.hi = bounds_hi.cwiseMin(1.0).cwiseMax(prob.lo);
    prob.epsilon_hat = epsilon_hat;
    prob.product_form = product_form;
    return prob;
}

std::optional<Eigen::VectorXd> solve_y_subproblem(const YSubproblem& prob) {
    const int K = static_cast<int>(prob.gamma.size());
    auto coupling = [&](const Eigen::VectorXd& y) {
        if (prob.product_form) {
            double s = 0.0;
            for (int k = 0; k < K; ++k) s += std::log(std::max(y(k), 1e-300));
            return s - std::log(prob.epsilon_hat);
        }
        return y.sum() - prob.epsilon_hat;
    };

    // Box minimizer of the linear objective; nonpositive costs sit at the
    // upper bound (the coupling constraint also prefers larger y there).
    Eigen::VectorXd corner(K);
    for (int k = 0; k < K; ++k) corner(k) = prob.gamma(k) > 0.0 ? prob.lo(k) : prob.hi(k);
    if (coupling(corner) >= -1e-12) return corner;

    Eigen::VectorXd all_hi = prob.hi;
    if (coupling(all_hi) < -1e-12) return std::nullopt; // box cannot reach epsilon_hat

    if (!prob.product_form) {
        // Greedy: raise the cheapest positive-cost components until the sum
        // constraint is met.
        Eigen::VectorXd y = corner;
        std::vector<int> order;
        for (int k = 0; k < K; ++k)
            if (prob.gamma(k) > 0.0) order.push_back(k);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return prob.gamma(a) < prob.gamma(b); });
        double deficit = prob.epsilon_hat - y.sum();
        for (int k : order) {
            if (deficit <= 0.0) break;
            const double room = prob.hi(k) - y(k);
            const double add = std::min(room, deficit);
            y(k) += add;
            deficit -= add;
        }
        return deficit <= 1e-12 ? std::optional<Eigen::VectorXd>(y) : std::nullopt;
    }

    // KKT for the product form: y_k(lambda) = clamp(lambda / gamma_k, lo, hi)
    // for gamma_k > 0, hi otherwise; the coupling value is nondecreasing in
    // lambda, so bisect on the multiplier.
    auto y_of = [&](double lambda) {
        Eigen::VectorXd y(K);
        for (int k = 0; k < K; ++k)
            y(k) = prob.gamma(k) > 0.0
                       ? std::clamp(lambda / prob.gamma(k), prob.lo(k), prob.hi(k))
                       : prob.hi(k);
        return y;
    };
    double lam_hi = 1.0;
    for (int k = 0; k < K; ++k)
        if (prob.gamma(k) > 0.0) lam_hi = std::max(lam_hi, prob.gamma(k) * prob.hi(k));
    double lam_lo = 0.0;
    for (int i = 0; i < 200 && (lam_hi - lam_lo) > 1e-15 * std::max(1.0, lam_hi); ++i) {
        const double mid = 0.5 * (lam_lo + lam_hi);
        if (coupling(y_of(mid)) < 0.0)
            lam_lo = mid;
        else
            lam_hi = mid;
    }
    return y_of(lam_hi);
}

std::string SolveReport::to_json_string() const {
    nlohmann::json j;
    j["status"] = to_string(status);
    j["objective"] = objective;
    j["worst_case_discounted_value"] = worst_case_discounted_value;
    j["iterations"] = iterations;
    j["wall_time_seconds"] = wall_time_seconds;
    j["heuristic"] = heuristic;
    j["chi_increasing_in_y"] = chi_increasing;
    j["feasibility"] = {{"equality_residual", equality_residual}, {"min_tau", min_tau}};
    if (!duals.empty()) j["duals"] = duals;
    if (!note.empty()) j["note"] = note;
    auto vec = [](const Eigen::VectorXd& v) {
        std::vector<double> out(v.data(), v.data() + v.size());
        return out;
    };
    j["tau"] = vec(tau.tau);
    j["policy"] = vec(policy.prob);
    j["y_trace"] = nlohmann::json::array();
    for (const auto& y : y_trace) j["y_trace"].push_back(vec(y));
    j["theta_trace"] = nlohmann::json::array();
    for (const auto& th : theta_trace) j["theta_trace"].push_back(vec(th));
    return j.dump(2);
}

SolveReport solve_individual(const MdpInstance& mdp,
                             const std::vector<KlConstraintSpec>& specs,
                             const ObjectiveBall& objective,
                             const SolverBackend* backend) {
    if (objective.law.generator.kind != GeneratorKind::Gaussian)
        return solve_individual_nongaussian(mdp, specs, objective, backend);

    const auto start = std::chrono::steady_clock::now();
    const ConicProgram prog = build_individual(mdp, specs, objective);
    const BackendResult res = conic_solve(prog, backend);

    SolveReport report;
    report.status = res.status;
    report.iterations = res.iterations;
    if (res.status == SolveStatus::Optimal) {
        report.tau.tau = res.x;
        report.objective = res.objective;
        report.duals = res.duals;
        fill_report_from_tau(report, mdp);
    }
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

SolveReport solve_individual_nongaussian(const MdpInstance& mdp,
                                         const std::vector<KlConstraintSpec>& specs,
                                         const ObjectiveBall& objective,
                                         const SolverBackend* backend) {
    const auto start = std::chrono::steady_clock::now();
    const auto& law = objective.law;
    const double delta0 = objective.radius;
    law.require_positive_definite("objective reference");
    require_worst_case_assumption(law.generator, delta0);
    const bool gaussian = law.generator.kind == GeneratorKind::Gaussian;
    if (!gaussian && law.generator.kind != GeneratorKind::Laplace)
        throw AssumptionError("inner tau-problem is only convex for Gaussian and "
                              "Laplace objective generators");

    // Cone-constrained region shared by every alpha; objective filled per solve.
    ConicProgram region = make_tau_frame(mdp, law, 0.0);
    for (std::size_t k = 0; k < specs.size(); ++k) {
        const auto& spec = specs[k];
        const double tightened = adjust_confidence(spec.confidence, spec.radius);
        const double kappa =
            tightened_quantile(spec.reference, tightened, constraint_name(spec, k));
        append_chance_constraint(region, constraint_name(spec, k), spec.reference,
                                 spec.threshold, kappa);
    }

    SolveReport report;
    report.heuristic = !gaussian;

    if (delta0 == 0.0) {
        // alpha* = +inf: the worst case collapses to the nominal mean.
        const BackendResult res = conic_solve(region, backend);
        report.status = res.status;
        if (res.status == SolveStatus::Optimal) {
            report.tau.tau = res.x;
            report.objective = res.objective;
            fill_report_from_tau(report, mdp);
        }
        report.note = "alpha = +inf (radius 0)";
        report.wall_time_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        return report;
    }

    const Eigen::MatrixXd sqrt_sigma = psd_sqrt(law.dispersion);
    const int n = mdp.num_pairs();

    struct Inner {
        double value = kInf;
        Eigen::VectorXd tau;
        SolveStatus status = SolveStatus::NumericalLimit;
    };
    std::map<double, Inner> cache;

    auto inner_solve = [&](double alpha) -> const Inner& {
        auto it = cache.find(alpha);
        if (it != cache.end()) return it->second;
        Inner inner;
        if (gaussian) {
            // min -tau'mu + w/(2 alpha), w >= ||S tau||^2 as a rotated cone.
            ConicProgram prog = region;
            prog.num_vars = n + 1;
            prog.objective_linear.conservativeResize(n + 1);
            prog.objective_linear(n) = 1.0 / (2.0 * alpha);
            prog.lower.conservativeResize(n + 1);
            prog.lower(n) = 0.0;
            prog.upper.conservativeResize(n + 1);
            prog.upper(n) = kInf;
            for (auto& eq : prog.equalities) {
                eq.a.conservativeResize(n + 1);
                eq.a(n) = 0.0;
            }
            for (auto& in : prog.inequalities) {
                in.a.conservativeResize(n + 1);
                in.a(n) = 0.0;
            }
            for (auto& soc : prog.socs) {
                soc.c.conservativeResize(n + 1);
                soc.c(n) = 0.0;
                soc.A.conservativeResize(soc.A.rows(), n + 1);
                soc.A.col(n).setZero();
            }
            SocConstraint rot;
            rot.name = "epigraph";
            rot.c = Eigen::VectorXd::Zero(n + 1);
            rot.c(n) = 1.0;
            rot.d = 1.0;
            rot.k = 1.0;
            rot.A.setZero(n + 1, n + 1);
            rot.A.topLeftCorner(n, n) = 2.0 * sqrt_sigma;
            rot.A(n, n) = 1.0;
            rot.b = Eigen::VectorXd::Zero(n + 1);
            rot.b(n) = -1.0;
            prog.socs.push_back(std::move(rot));
            const BackendResult res = conic_solve(prog, backend);
            inner.status = res.status;
            if (res.status == SolveStatus::Optimal) {
                inner.tau = res.x.head(n);
                inner.value = res.objective + alpha * delta0;
            }
        } else {
            // Laplace: f(tau) = -tau'mu - alpha log(1 - v/(2 alpha^2)),
            // v = tau'Sigma tau, restricted to the generator's domain.
            ConicProgram prog = region;
            SocConstraint guard;
            guard.name = "domain";
            guard.c = Eigen::VectorXd::Zero(n);
            guard.d = std::sqrt(2.0 * (1.0 - 1e-9)) * alpha;
            guard.k = 1.0;
            guard.A = sqrt_sigma;
            guard.b = Eigen::VectorXd::Zero(n);
            prog.socs.push_back(std::move(guard));

            const BackendResult seed = conic_solve(prog, backend);
            inner.status = seed.status;
            if (seed.status == SolveStatus::Optimal) {
                auto f = [&](const Eigen::VectorXd& tau) {
                    const double v = tau.dot(law.dispersion * tau);
                    const double arg = 1.0 - v / (2.0 * alpha * alpha);
                    if (arg <= 0.0) return std::numeric_limits<double>::max();
                    return -tau.dot(law.location) - alpha * std::log(arg);
                };
                auto grad = [&](const Eigen::VectorXd& tau) -> Eigen::VectorXd {
                    const double v = tau.dot(law.dispersion * tau);
                    const double arg = 1.0 - v / (2.0 * alpha * alpha);
                    return -law.location + (law.dispersion * tau) / (alpha * arg);
                };
                const auto cp = detail::minimize_convex_over_region(
                    prog, f, grad, seed.x, 1e-9, 120, backend);
                inner.tau = cp.x;
                inner.value = cp.value + alpha * delta0;
            }
        }
        return cache.emplace(alpha, std::move(inner)).first->second;
    };

    // Region feasibility determines the whole problem's status.
    {
        const BackendResult probe = conic_solve(region, backend);
        if (probe.status != SolveStatus::Optimal) {
            report.status = probe.status;
            report.wall_time_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();
            return report;
        }
    }

    // Same grid policy as worst_case_expectation: log grid then golden.
    auto outer = [&](double alpha) { return inner_solve(alpha).value; };
    double lo = 1e-6;
    const auto grid = log_spaced(lo, 1e6, 200);
    const double alpha_star = grid_then_golden_minimize(outer, grid, 1e-10);
    const Inner& best = inner_solve(alpha_star);

    report.status = best.status;
    if (best.status == SolveStatus::Optimal) {
        report.tau.tau = best.tau;
        report.objective = best.value;
        fill_report_from_tau(report, mdp);
        report.note = "alpha = " + std::to_string(alpha_star);
    }
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

} // namespace drccmdp
