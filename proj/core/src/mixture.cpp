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

#include "drccmdp/mixture.hpp"

#include "cutting_plane.hpp"
#include "drccmdp/errors.hpp"
#include "drccmdp/scalar_opt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace drccmdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLevelMin = 0.5;       // cone validity of the per-component pieces
constexpr double kLevelMax = 1.0 - 1e-9;

double kl_coupling_value(double x, double y, double delta) {
    return (std::exp(-delta) * std::pow(x, y) - 1.0) / (x - 1.0);
}

double quantile_derivative(const Generator& gen, double p) {
    if (gen.kind == GeneratorKind::Gaussian) return gaussian_quantile_derivative(p);
    if (gen.kind == GeneratorKind::Laplace) return p < 0.5 ? 1.0 / p : 1.0 / (1.0 - p);
    throw UnsupportedGeneratorError("no quantile derivative for this generator");
}

std::string constraint_name(const MixtureConstraintSpec& spec, std::size_t k) {
    return spec.name.empty() ? "mcc" + std::to_string(k) : spec.name;
}

std::string piece_name(const MixtureConstraintSpec& spec, std::size_t k, int j) {
    return constraint_name(spec, k) + "/c" + std::to_string(j);
}

// Standardized margin (xi - tau'mu_j) / sigma_j, with the deterministic
// sigma -> 0 limit mapped to +-inf.
double standardized_margin(const EllipticalLaw& comp, const Eigen::VectorXd& tau,
                           double xi) {
    const double mean = tau.dot(comp.location);
    const double sd = std::sqrt(std::max(0.0, tau.dot(comp.dispersion * tau)));
    if (sd < 1e-15) return mean >= xi ? -kInf : kInf;
    return (xi - mean) / sd;
}

} // namespace

MixtureProgramDescription::MixtureProgramDescription(
    MdpInstance mdp, std::vector<MixtureConstraintSpec> specs,
    MixtureObjectiveBall objective, double epsilon_hat, bool product_form)
    : mdp_(std::move(mdp)), specs_(std::move(specs)), objective_(std::move(objective)),
      epsilon_hat_(epsilon_hat), product_form_(product_form),
      polytope_(build_occupation_polytope(mdp_)) {}

double MixtureProgramDescription::objective_value(const Eigen::VectorXd& tau,
                                                  double alpha) const {
    const auto& mix = objective_.law;
    if (objective_.radius == 0.0 || std::isinf(alpha)) {
        double mean = 0.0;
        for (int j = 0; j < mix.count(); ++j)
            mean += mix.weights(j) * tau.dot(mix.components[static_cast<std::size_t>(j)].location);
        return -mean;
    }
    double lse_max = -kInf;
    std::vector<double> log_terms(static_cast<std::size_t>(mix.count()));
    for (int j = 0; j < mix.count(); ++j) {
        const auto& comp = mix.components[static_cast<std::size_t>(j)];
        const double m = tau.dot(comp.location);
        const double v = tau.dot(comp.dispersion * tau);
        double log_psi;
        if (comp.generator.kind == GeneratorKind::Gaussian) {
            log_psi = v / (2.0 * alpha * alpha);
        } else if (comp.generator.kind == GeneratorKind::Laplace) {
            const double arg = 1.0 - v / (2.0 * alpha * alpha);
            if (arg <= 0.0) return kInf;
            log_psi = -std::log(arg);
        } else {
            throw AssumptionError("mixture objective component generator undefined on "
                                  "negative arguments");
        }
        const double lt = std::log(std::max(mix.weights(j), 1e-300)) - m / alpha + log_psi;
        log_terms[static_cast<std::size_t>(j)] = lt;
        lse_max = std::max(lse_max, lt);
    }
    double acc = 0.0;
    for (double lt : log_terms) acc += std::exp(lt - lse_max);
    return alpha * (lse_max + std::log(acc)) + alpha * objective_.radius;
}

Eigen::VectorXd MixtureProgramDescription::objective_gradient(const Eigen::VectorXd& tau,
                                                              double alpha) const {
    const auto& mix = objective_.law;
    const int n = static_cast<int>(tau.size());
    if (objective_.radius == 0.0 || std::isinf(alpha)) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
        for (int j = 0; j < mix.count(); ++j)
            g -= mix.weights(j) * mix.components[static_cast<std::size_t>(j)].location;
        return g;
    }
    std::vector<double> log_terms(static_cast<std::size_t>(mix.count()));
    double lse_max = -kInf;
    for (int j = 0; j < mix.count(); ++j) {
        const auto& comp = mix.components[static_cast<std::size_t>(j)];
        const double m = tau.dot(comp.location);
        const double v = tau.dot(comp.dispersion * tau);
        double log_psi = 0.0;
        if (comp.generator.kind == GeneratorKind::Gaussian)
            log_psi = v / (2.0 * alpha * alpha);
        else
            log_psi = -std::log(1.0 - v / (2.0 * alpha * alpha));
        log_terms[static_cast<std::size_t>(j)] =
            std::log(std::max(mix.weights(j), 1e-300)) - m / alpha + log_psi;
        lse_max = std::max(lse_max, log_terms[static_cast<std::size_t>(j)]);
    }
    double denom = 0.0;
    for (double lt : log_terms) denom += std::exp(lt - lse_max);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < mix.count(); ++j) {
        const auto& comp = mix.components[static_cast<std::size_t>(j)];
        const double p = std::exp(log_terms[static_cast<std::size_t>(j)] - lse_max) / denom;
        Eigen::VectorXd comp_grad = comp.dispersion * tau / alpha;
        if (comp.generator.kind == GeneratorKind::Laplace) {
            const double v = tau.dot(comp.dispersion * tau);
            comp_grad /= 1.0 - v / (2.0 * alpha * alpha);
        }
        g += p * (-comp.location + comp_grad);
    }
    return g;
}

double MixtureProgramDescription::max_violation(const MixtureProgramVars& vars) const {
    const Eigen::VectorXd& tau = vars.tau.tau;
    double worst = 0.0;
    worst = std::max(worst,
                     (polytope_.eq_matrix * tau - polytope_.eq_rhs).cwiseAbs().maxCoeff());
    worst = std::max(worst, -tau.minCoeff());

    const int K = static_cast<int>(specs_.size());
    for (int k = 0; k < K; ++k) {
        const auto& spec = specs_[static_cast<std::size_t>(k)];
        const auto& lk = vars.l[static_cast<std::size_t>(k)];
        double agg = 0.0;
        for (int j = 0; j < spec.reference.count(); ++j) {
            const auto& comp = spec.reference.components[static_cast<std::size_t>(j)];
            const double level = lk(j);
            worst = std::max({worst, -level, level - 1.0});
            const double sd = std::sqrt(std::max(0.0, tau.dot(comp.dispersion * tau)));
            const double quant =
                level >= 1.0 ? -kInf
                             : std_quantile(comp.generator, 1.0 - std::max(level, 1e-15));
            const double lhs = tau.dot(comp.location) + quant * sd;
            worst = std::max(worst, spec.threshold - lhs);
            agg += spec.reference.weights(j) * level;
        }
        worst = std::max(worst, vars.y_hat(k) - agg);
        const double x = vars.x(k);
        if (!(x > 0.0 && x < 1.0))
            worst = std::max(worst, 1.0);
        else
            worst = std::max(worst, kl_coupling_value(x, vars.y(k), spec.radius.delta) -
                                        vars.y_hat(k));
        worst = std::max({worst, -vars.y(k), vars.y(k) - 1.0, -vars.y_hat(k),
                          vars.y_hat(k) - 1.0});
    }
    if (product_form_) {
        double logprod = 0.0;
        for (int k = 0; k < K; ++k) logprod += std::log(std::max(vars.y(k), 1e-300));
        worst = std::max(worst, (std::log(epsilon_hat_) - logprod) * epsilon_hat_);
    } else {
        worst = std::max(worst, epsilon_hat_ - vars.y.sum());
    }
    return worst;
}

MixtureProgramDescription
build_mixture_program(const MdpInstance& mdp,
                      const std::vector<MixtureConstraintSpec>& specs,
                      const MixtureObjectiveBall& objective, double epsilon_hat,
                      bool product_form) {
    if (specs.empty()) throw ValidationError("mixture program needs constraints");
    if (!(epsilon_hat > 0.0 && epsilon_hat <= 1.0))
        throw DomainError("joint confidence must lie in (0, 1]");
    for (int j = 0; j < objective.law.count(); ++j) {
        const auto& comp = objective.law.components[static_cast<std::size_t>(j)];
        if (comp.dim() != mdp.num_pairs())
            throw ValidationError("objective mixture dimension does not match |Lambda|");
        comp.require_positive_definite("objective mixture component " +
                                       std::to_string(j));
        if ((comp.location.array() > 0.0).any())
            throw AssumptionError(
                "objective mixture component " + std::to_string(j) +
                " has a positive location entry; the reformulation assumes "
                "nonpositive objective locations");
        require_worst_case_assumption(comp.generator, objective.radius);
    }
    for (const auto& spec : specs) {
        if (spec.reference.dim() != mdp.num_pairs())
            throw ValidationError("constraint mixture dimension does not match |Lambda|");
        if (!(spec.radius.delta >= 0.0))
            throw DomainError("KL radius must be nonnegative");
    }
    return {mdp, specs, objective, epsilon_hat, product_form};
}

namespace {

// Cone-constrained region at fixed per-component levels; the linear objective
// is the nominal mixture mean, which doubles as a seeding objective.
ConicProgram build_region(const MixtureProgramDescription& desc,
                          const std::vector<Eigen::VectorXd>& levels) {
    const auto& mdp = desc.mdp();
    const int n = mdp.num_pairs();
    ConicProgram prog;
    prog.num_vars = n;
    prog.objective_linear = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < desc.objective().law.count(); ++j)
        prog.objective_linear -=
            desc.objective().law.weights(j) *
            desc.objective().law.components[static_cast<std::size_t>(j)].location;
    const OccupationPolytope poly = build_occupation_polytope(mdp);
    for (int s = 0; s < poly.eq_matrix.rows(); ++s)
        prog.equalities.push_back(
            {"occ" + std::to_string(s), poly.eq_matrix.row(s), poly.eq_rhs(s)});
    prog.lower = Eigen::VectorXd::Zero(n);
    prog.upper = Eigen::VectorXd::Constant(n, kInf);

    for (std::size_t k = 0; k < desc.constraints().size(); ++k) {
        const auto& spec = desc.constraints()[k];
        for (int j = 0; j < spec.reference.count(); ++j) {
            const auto& comp = spec.reference.components[static_cast<std::size_t>(j)];
            const double level = levels[k](j);
            const double kappa =
                std::min(0.0, std_quantile(comp.generator, 1.0 - level));
            const bool degenerate =
                kappa == 0.0 || comp.dispersion.cwiseAbs().maxCoeff() < 1e-14;
            if (degenerate) {
                prog.inequalities.push_back(
                    {piece_name(spec, k, j), comp.location, spec.threshold});
                continue;
            }
            SocConstraint soc;
            soc.name = piece_name(spec, k, j);
            soc.c = comp.location;
            soc.d = -spec.threshold;
            soc.k = -kappa;
            soc.A = psd_sqrt(comp.dispersion);
            soc.b = Eigen::VectorXd::Zero(n);
            prog.socs.push_back(std::move(soc));
        }
    }
    return prog;
}

// Equal-slack split of the required mixture confidence y_hat across
// components at the current tau: l_j(t) = clamp(1 - Phi_j(z_j + t)) with the
// scalar t chosen so the weighted sum meets y_hat from above.
Eigen::VectorXd allocate_levels(const MixtureConstraintSpec& spec,
                                const Eigen::VectorXd& tau, double y_hat) {
    const int J = spec.reference.count();
    Eigen::VectorXd z(J);
    for (int j = 0; j < J; ++j)
        z(j) = standardized_margin(spec.reference.components[static_cast<std::size_t>(j)],
                                   tau, spec.threshold);
    auto level_at = [&](int j, double t) {
        const auto& gen = spec.reference.components[static_cast<std::size_t>(j)].generator;
        double zt = z(j) + t;
        if (std::isinf(z(j))) zt = z(j);
        return std::clamp(1.0 - std_cdf(gen, zt), kLevelMin, kLevelMax);
    };
    auto aggregate = [&](double t) {
        double sum = 0.0;
        for (int j = 0; j < J; ++j) sum += spec.reference.weights(j) * level_at(j, t);
        return sum;
    };
    const double target = std::min(y_hat, kLevelMax);
    double t_lo = -40.0; // aggregate(t_lo) is the loosest = largest value
    double t_hi = 40.0;
    if (aggregate(t_hi) >= target) {
        t_lo = t_hi;
    } else {
        for (int i = 0; i < 120 && (t_hi - t_lo) > 1e-12; ++i) {
            const double mid = 0.5 * (t_lo + t_hi);
            if (aggregate(mid) >= target)
                t_lo = mid;
            else
                t_hi = mid;
        }
    }
    Eigen::VectorXd l(J);
    for (int j = 0; j < J; ++j) l(j) = level_at(j, t_lo);
    return l;
}

} // namespace

MixtureSolveReport solve_mixture_heuristic(const MixtureProgramDescription& desc,
                                           const MixtureSolveConfig& config,
                                           const SolverBackend* backend) {
    const auto start_time = std::chrono::steady_clock::now();
    const auto& mdp = desc.mdp();
    const int n = mdp.num_pairs();
    const int K = static_cast<int>(desc.constraints().size());
    const double delta0 = desc.objective().radius;
    const auto& mix0 = desc.objective().law;
    const bool single_gaussian_objective =
        mix0.count() == 1 &&
        mix0.components.front().generator.kind == GeneratorKind::Gaussian;

    MixtureSolveReport out;
    out.report.heuristic = true;
    out.report.note = "mixture block-coordinate heuristic: stationary-point only";

    auto chi = [&](double y, int k) {
        return adjust_confidence_detail(y, desc.constraints()[static_cast<std::size_t>(k)].radius);
    };

    // Phase 1: a feasible confidence split. Equal split first, then the
    // per-constraint loose corners.
    std::vector<Eigen::VectorXd> starts;
    if (config.y0) starts.push_back(*config.y0);
    const double equal = desc.product_form()
                             ? std::pow(desc.epsilon_hat(), 1.0 / K)
                             : desc.epsilon_hat() / K;
    starts.push_back(Eigen::VectorXd::Constant(K, equal));
    for (int k = 0; k < K; ++k) {
        Eigen::VectorXd v = Eigen::VectorXd::Constant(K, desc.product_form() ? 1.0 : 0.0);
        v(k) = desc.epsilon_hat();
        starts.push_back(v);
    }

    Eigen::VectorXd y;
    std::vector<Eigen::VectorXd> levels(static_cast<std::size_t>(K));
    Eigen::VectorXd tau;
    bool started = false;
    for (const auto& candidate : starts) {
        for (int k = 0; k < K; ++k) {
            const double y_hat = chi(candidate(k), k).value;
            levels[static_cast<std::size_t>(k)] = Eigen::VectorXd::Constant(
                desc.constraints()[static_cast<std::size_t>(k)].reference.count(),
                std::clamp(y_hat, kLevelMin, kLevelMax));
        }
        const BackendResult probe = conic_solve(build_region(desc, levels), backend);
        if (probe.status == SolveStatus::Optimal) {
            y = candidate;
            tau = probe.x;
            started = true;
            break;
        }
    }
    if (!started) {
        out.report.status = SolveStatus::Infeasible;
        out.report.note = "no feasible confidence split found in phase 1";
        out.report.wall_time_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time)
                .count();
        return out;
    }

    double alpha = kInf;
    double value = kInf;
    MixtureProgramVars snapshot;
    bool snapshot_ok = false;

    for (int iter = 0; iter <= config.max_iterations; ++iter) {
        out.report.iterations = iter + 1;
        out.report.y_trace.push_back(y);

        Eigen::VectorXd y_hat(K), x_arg(K);
        for (int k = 0; k < K; ++k) {
            const ChiResult c = chi(y(k), k);
            y_hat(k) = c.value;
            x_arg(k) = c.argmin_x;
        }
        if (iter > 0)
            for (int k = 0; k < K; ++k)
                levels[static_cast<std::size_t>(k)] = allocate_levels(
                    desc.constraints()[static_cast<std::size_t>(k)], tau, y_hat(k));

        const ConicProgram region = build_region(desc, levels);
        std::map<std::string, double> duals;

        if (delta0 == 0.0) {
            const BackendResult res = conic_solve(region, backend);
            if (res.status != SolveStatus::Optimal) {
                out.report.status = res.status;
                out.report.note = "tau-subproblem failed at iteration " +
                                  std::to_string(iter);
                break;
            }
            tau = res.x;
            value = res.objective;
            alpha = kInf;
            duals = res.duals;
        } else if (single_gaussian_objective) {
            ConicProgram prog = region;
            prog.objective_linear = -mix0.components.front().location;
            prog.objective_norms.push_back(
                {std::sqrt(2.0 * delta0), psd_sqrt(mix0.components.front().dispersion),
                 Eigen::VectorXd::Zero(n)});
            const BackendResult res = conic_solve(prog, backend);
            if (res.status != SolveStatus::Optimal) {
                out.report.status = res.status;
                out.report.note = "tau-subproblem failed at iteration " +
                                  std::to_string(iter);
                break;
            }
            tau = res.x;
            value = res.objective;
            const double v0 =
                tau.dot(mix0.components.front().dispersion * tau);
            alpha = v0 > 0.0 ? std::sqrt(v0 / (2.0 * delta0)) : 0.0;
            duals = res.duals;
        } else {
            // Alternate the alpha line search with cutting-plane tau solves.
            const BackendResult seed = conic_solve(region, backend);
            if (seed.status != SolveStatus::Optimal) {
                out.report.status = seed.status;
                out.report.note = "tau-region infeasible at iteration " +
                                  std::to_string(iter);
                break;
            }
            Eigen::VectorXd tau_cur =
                (tau.size() == n && desc.objective_value(tau, alpha) < kInf) ? tau
                                                                             : seed.x;
            double block_value = kInf;
            for (int inner = 0; inner < 25; ++inner) {
                // alpha step: restrict to the domain of Laplace components
                double alpha_lo = 1e-6;
                for (int j = 0; j < mix0.count(); ++j) {
                    const auto& comp = mix0.components[static_cast<std::size_t>(j)];
                    if (comp.generator.kind == GeneratorKind::Laplace) {
                        const double v = tau_cur.dot(comp.dispersion * tau_cur);
                        alpha_lo = std::max(alpha_lo,
                                            std::sqrt(v / 2.0) * (1.0 + 1e-9));
                    }
                }
                auto g = [&](double a) { return desc.objective_value(tau_cur, a); };
                alpha = grid_then_golden_minimize(g, log_spaced(alpha_lo, 1e6, 200),
                                                  1e-10);

                // tau step at fixed alpha
                ConicProgram guarded = region;
                for (int j = 0; j < mix0.count(); ++j) {
                    const auto& comp = mix0.components[static_cast<std::size_t>(j)];
                    if (comp.generator.kind != GeneratorKind::Laplace) continue;
                    SocConstraint guard;
                    guard.name = "domain" + std::to_string(j);
                    guard.c = Eigen::VectorXd::Zero(n);
                    guard.d = std::sqrt(2.0 * (1.0 - 1e-9)) * alpha;
                    guard.k = 1.0;
                    guard.A = psd_sqrt(comp.dispersion);
                    guard.b = Eigen::VectorXd::Zero(n);
                    guarded.socs.push_back(std::move(guard));
                }
                Eigen::VectorXd seed_tau = tau_cur;
                if (!(desc.objective_value(seed_tau, alpha) < kInf)) seed_tau = seed.x;
                const auto cp = detail::minimize_convex_over_region(
                    guarded,
                    [&](const Eigen::VectorXd& t) { return desc.objective_value(t, alpha); },
                    [&](const Eigen::VectorXd& t) { return desc.objective_gradient(t, alpha); },
                    seed_tau, config.cut_tolerance, config.max_cuts, backend);
                tau_cur = cp.x;
                duals = cp.duals;
                const double new_value = cp.value;
                if (std::abs(new_value - block_value) <=
                    1e-9 * std::max(1.0, std::abs(new_value))) {
                    block_value = new_value;
                    break;
                }
                block_value = new_value;
            }
            tau = tau_cur;
            value = block_value;
            out.report.status = SolveStatus::Optimal;
        }
        out.report.status = SolveStatus::Optimal;

        snapshot.tau.tau = tau;
        snapshot.alpha = alpha;
        snapshot.x = x_arg;
        snapshot.y = y;
        snapshot.y_hat = y_hat;
        snapshot.l = levels;
        snapshot_ok = true;

        if (iter == config.max_iterations) break;

        // y block: duals aggregated per constraint drive the linear search
        // direction; boxes realize the attainable confidence interval at tau.
        Eigen::VectorXd gamma = Eigen::VectorXd::Zero(K);
        Eigen::VectorXd lo(K), hi(K);
        Eigen::VectorXd theta_sum = Eigen::VectorXd::Zero(K);
        for (int k = 0; k < K; ++k) {
            const auto& spec = desc.constraints()[static_cast<std::size_t>(k)];
            double reachable = 0.0;
            for (int j = 0; j < spec.reference.count(); ++j) {
                const auto& comp = spec.reference.components[static_cast<std::size_t>(j)];
                const double sd =
                    std::sqrt(std::max(0.0, tau.dot(comp.dispersion * tau)));
                const auto it = duals.find(piece_name(spec, static_cast<std::size_t>(k), j));
                const double theta = it != duals.end() ? std::max(0.0, it->second) : 0.0;
                theta_sum(k) += theta;
                const double level = levels[static_cast<std::size_t>(k)](j);
                gamma(k) +=
                    theta * quantile_derivative(comp.generator, 1.0 - level) * sd;
                const double z = standardized_margin(comp, tau, spec.threshold);
                reachable += spec.reference.weights(j) *
                             (std::isinf(z) ? (z < 0.0 ? 1.0 : 0.0)
                                            : 1.0 - std_cdf(comp.generator, z));
            }
            reachable = std::clamp(reachable, 0.0, 1.0);

            const KlRadius radius = spec.radius;
            const double chi0 = adjust_confidence(0.0, radius);
            const double chi1 = adjust_confidence(1.0, radius);
            const double chi_min = std::min(chi0, chi1);
            const double chi_max = std::max(chi0, chi1);
            const bool inc = chi_increasing_in_y(radius);
            if (reachable < chi_min - 1e-9) {
                out.report.status = SolveStatus::NumericalLimit;
                out.report.note = "empty confidence box for constraint " +
                                  constraint_name(spec, static_cast<std::size_t>(k));
                break;
            }
            const double y_half =
                (0.5 < chi_min)
                    ? (inc ? 0.0 : 1.0)
                    : inverse_adjust(0.5, radius, config.line_search_accuracy);
            const double y_target =
                (reachable >= chi_max)
                    ? (inc ? 1.0 : 0.0)
                    : inverse_adjust(reachable, radius, config.line_search_accuracy);
            lo(k) = inc ? y_half : y_target;
            hi(k) = inc ? y_target : y_half;
            if (hi(k) < lo(k)) std::swap(lo(k), hi(k));
            // keep the current iterate inside the box (finite line-search
            // accuracy can exclude it by a hair)
            lo(k) = std::min(lo(k), y(k));
            hi(k) = std::max(hi(k), y(k));
        }
        if (out.report.status == SolveStatus::NumericalLimit) break;

        Eigen::VectorXd y_opt = y;
        if (gamma.cwiseAbs().maxCoeff() > 1e-9) { // dual noise counts as degenerate
            const auto solved = solve_y_subproblem(build_joint_y_subproblem(
                gamma, lo, hi, desc.epsilon_hat(), desc.product_form()));
            if (!solved) {
                out.report.status = SolveStatus::NumericalLimit;
                out.report.note = "y-subproblem infeasible at iteration " +
                                  std::to_string(iter);
                break;
            }
            y_opt = *solved;
        }
        out.report.theta_trace.push_back(theta_sum);
        const Eigen::VectorXd y_next = (y + config.step_length * (y_opt - y))
                                           .cwiseMin(1.0 - 1e-12)
                                           .cwiseMax(0.0);
        const double movement = (y_next - y).norm();
        y = y_next;
        if (movement < config.movement_tolerance) break;
    }

    if (snapshot_ok) {
        out.vars = snapshot;
        out.max_violation = desc.max_violation(snapshot);
        out.report.tau = snapshot.tau;
        out.report.objective = value;
        out.report.worst_case_discounted_value = -value / (1.0 - mdp.discount());
        out.report.policy = extract_policy(snapshot.tau, mdp);
        const OccupationPolytope poly = build_occupation_polytope(mdp);
        out.report.equality_residual =
            (poly.eq_matrix * snapshot.tau.tau - poly.eq_rhs).cwiseAbs().maxCoeff();
        out.report.min_tau = snapshot.tau.tau.minCoeff();
        if (out.max_violation > 1e-6 && out.report.status == SolveStatus::Optimal) {
            out.report.status = SolveStatus::NumericalLimit;
            out.report.note = "returned point violates constraints beyond 1e-6";
        }
    }
    out.report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time)
            .count();
    return out;
}

} // namespace drccmdp
