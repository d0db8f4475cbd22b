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

// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerance in code.

#include "drccmdp/joint_solver.hpp"
#include "drccmdp/errors.hpp"
#include "drccmdp/machine_replacement.hpp"
#include "drccmdp/mixture.hpp"
#include "drccmdp/scalar_opt.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace drccmdp;

namespace {

struct Criterion {
    int number;
    std::string title;
    std::function<std::string()> run; // empty string = pass, else failure detail
};

MdpInstance cycle_toy() {
    Eigen::MatrixXd kernel(4, 2);
    kernel << 0, 1, 1, 0, 1, 0, 0, 1;
    return MdpInstance({2, 2}, kernel, Eigen::VectorXd::Constant(2, 0.5), 0.5);
}

EllipticalLaw toy_objective_law() {
    Eigen::VectorXd mu(4);
    mu << 1.0, 0.5, 0.2, 0.8;
    return {mu, 0.1 * Eigen::MatrixXd::Identity(4, 4), Generator::gaussian()};
}

KlConstraintSpec toy_constraint(const char* name, double m0, double m1, double m2,
                                double m3, double xi, double delta) {
    Eigen::VectorXd mu(4);
    mu << m0, m1, m2, m3;
    return {name,
            {mu, 0.05 * Eigen::MatrixXd::Identity(4, 4), Generator::gaussian()},
            xi,
            0.8,
            {delta}};
}

JointSolveConfig paper_config() {
    JointSolveConfig config;
    config.y0 = (Eigen::VectorXd(2) << 0.95, 0.91).finished();
    config.max_iterations = 50;
    config.movement_tolerance = 1e-4;
    config.step_length = 0.9;
    config.line_search_accuracy = 1e-3;
    return config;
}

std::string fail(const std::string& msg) { return msg; }

// ---------------------------------------------------------------------------

std::string criterion1_collapse() {
    const auto bench = build_benchmark(0.0);

    // individual: KL path at radius zero vs the nominal build
    const BackendResult robust =
        conic_solve(build_individual(bench.mdp, bench.constraints, bench.objective));
    const BackendResult nominal = conic_solve(
        build_nominal_individual(bench.mdp, bench.constraints, bench.objective.law));
    if (robust.status != SolveStatus::Optimal || nominal.status != SolveStatus::Optimal)
        return fail("individual solve not optimal");
    const double rel_ind = std::abs(robust.objective - nominal.objective) /
                           std::abs(nominal.objective);
    if (rel_ind > 1e-5)
        return fail("individual collapse off by " + std::to_string(rel_ind));

    // joint: sequential convex approximation at radius zero vs a nominal
    // 1-D confidence-split oracle (y2 = eps_hat / y1)
    auto value_at = [&](double y1) -> double {
        const double y2 = bench.epsilon_hat / y1;
        if (y2 > 1.0) return 1e100;
        Eigen::VectorXd tight(2);
        tight << y1, y2;
        try {
            const BackendResult res = conic_solve(build_joint_tau_subproblem(
                bench.mdp, bench.constraints, bench.objective, tight));
            return res.status == SolveStatus::Optimal ? res.objective : 1e100;
        } catch (const Error&) {
            return 1e100;
        }
    };
    double oracle = 1e100;
    double best_y1 = bench.epsilon_hat;
    for (int i = 0; i <= 400; ++i) {
        const double y1 =
            bench.epsilon_hat + (1.0 - bench.epsilon_hat) * i / 400.0;
        const double v = value_at(y1);
        if (v < oracle) {
            oracle = v;
            best_y1 = y1;
        }
    }
    const double refined = golden_section_minimize(
        value_at, std::max(bench.epsilon_hat, best_y1 - 2e-3),
        std::min(1.0, best_y1 + 2e-3), 1e-10);
    oracle = std::min(oracle, value_at(refined));

    JointSolveConfig config = paper_config();
    config.movement_tolerance = 1e-7;
    const SolveReport joint = solve_joint(bench.mdp, bench.constraints, bench.objective,
                                         bench.epsilon_hat, config);
    if (joint.status != SolveStatus::Optimal) return fail("joint solve not optimal");
    const double rel_joint = std::abs(joint.objective - oracle) / std::abs(oracle);
    if (rel_joint > 1e-5)
        return fail("joint collapse off by " + std::to_string(rel_joint));
    return {};
}

std::string criterion2_kl_transform() {
    for (int i = 1; i <= 9; ++i) {
        const double eps = i / 10.0;
        if (std::abs(adjust_confidence(eps, {0.0}) - eps) > 1e-6)
            return fail("chi(eps, 0) != eps at eps = " + std::to_string(eps));
        for (double delta : {0.0, 0.01, 0.1, 0.2, 0.3, 0.5}) {
            const double chi = adjust_confidence(eps, {delta});
            if (chi < eps - 1e-6)
                return fail("chi below eps at (" + std::to_string(eps) + ", " +
                            std::to_string(delta) + ")");
            const double back = inverse_adjust(chi, {delta});
            if (std::abs(back - eps) > 1e-6)
                return fail("roundtrip off by " + std::to_string(back - eps) +
                            " at (" + std::to_string(eps) + ", " +
                            std::to_string(delta) + ")");
        }
    }
    return {};
}

std::string criterion3_quantiles() {
    double worst = 0.0;
    for (double lp = std::log10(1e-6); lp <= std::log10(0.5); lp += 0.01) {
        const double tail = std::pow(10.0, lp);
        for (double p : {tail, 1.0 - tail}) {
            const double exact = std_quantile(Generator::gaussian(), p);
            const double approx = std_quantile(Generator::gaussian(), p,
                                               QuantileMethod::RationalApproximation);
            worst = std::max(worst, std::abs(exact - approx));
        }
    }
    if (worst > 4.5e-4)
        return fail("rational approximation error " + std::to_string(worst));

    const double h = 1e-6;
    for (double p = 0.05; p <= 0.9501; p += 0.01) {
        const double analytic = gaussian_quantile_derivative(p);
        const double fd = (std_quantile(Generator::gaussian(), p + h) -
                           std_quantile(Generator::gaussian(), p - h)) /
                          (2.0 * h);
        if (std::abs(analytic - fd) / std::abs(analytic) > 1e-4)
            return fail("derivative off at p = " + std::to_string(p));
    }
    return {};
}

std::string criterion4_worst_case() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    const int dim = 5;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd tau(dim);
        for (int i = 0; i < dim; ++i) tau(i) = unif(rng);
        tau /= tau.sum();
        Eigen::VectorXd mu(dim);
        for (int i = 0; i < dim; ++i) mu(i) = 2.0 * unif(rng) - 1.0;
        Eigen::VectorXd diag(dim);
        for (int i = 0; i < dim; ++i) diag(i) = 0.1 + unif(rng);
        const double delta = 0.01 + unif(rng);

        const EllipticalLaw law(mu, diag.asDiagonal(), Generator::gaussian());
        const auto wc = worst_case_expectation({tau}, law, delta);
        const double oracle = testing::alpha_grid_worst_case(
            tau.dot(mu), tau.dot(diag.asDiagonal() * tau), Generator::gaussian(),
            delta);
        if (std::abs(wc.value - oracle) > 1e-4 * std::max(1.0, std::abs(oracle)))
            return fail("closed form vs grid off by " +
                        std::to_string(wc.value - oracle) + " on trial " +
                        std::to_string(trial));
    }
    return {};
}

std::string criterion5_radius_monotonicity() {
    const std::vector<double> radii{0.5, 0.4, 0.3, 0.2, 0.1, 0.01};
    std::vector<double> objectives;
    std::vector<Eigen::VectorXd> curves;
    for (double delta : radii) {
        const auto bench = build_benchmark(delta);
        const SolveReport report =
            solve_individual(bench.mdp, bench.constraints, bench.objective);
        if (report.status != SolveStatus::Optimal)
            return fail("solve failed at delta " + std::to_string(delta));
        objectives.push_back(report.objective);
        Eigen::VectorXd curve(10);
        for (int s = 0; s < 10; ++s)
            curve(s) = report.policy.prob(bench.mdp.pair_index(s, 0));
        curves.push_back(curve);
    }
    // objective (a minimum) nondecreasing in delta = nonincreasing along the
    // descending radius list
    for (std::size_t i = 1; i < objectives.size(); ++i)
        if (objectives[i] > objectives[i - 1] + 1e-9)
            return fail("objective not monotone in the radius");
    // convergence toward the smallest-radius curve: distances decrease
    const Eigen::VectorXd& target = curves.back();
    double prev = 1e100;
    for (std::size_t i = 0; i + 1 < curves.size(); ++i) {
        const double dist = (curves[i] - target).cwiseAbs().maxCoeff();
        if (dist > prev + 1e-9)
            return fail("curve distance to the delta = 0.01 curve is not decreasing");
        prev = dist;
    }
    return {};
}

std::string criterion6_risky_states() {
    for (double delta : {0.5, 0.4, 0.3, 0.2, 0.1, 0.01}) {
        const auto bench = build_benchmark(delta);
        const SolveReport report =
            solve_individual(bench.mdp, bench.constraints, bench.objective);
        if (report.status != SolveStatus::Optimal)
            return fail("solve failed at delta " + std::to_string(delta));
        for (int s : {7, 8, 9})
            if (std::abs(report.policy.prob(bench.mdp.pair_index(s, 0)) - 1.0) > 1e-3)
                return fail("state " + std::to_string(s + 1) +
                            " repair probability below 1 at delta " +
                            std::to_string(delta));
    }
    return {};
}

std::string criterion7_joint_driver() {
    const auto bench = build_benchmark(1e-4);
    const SolveReport report = solve_joint(bench.mdp, bench.constraints, bench.objective,
                                          bench.epsilon_hat, paper_config());
    if (report.status != SolveStatus::Optimal) return fail("run not optimal");
    if (report.note != "converged by movement criterion" || report.iterations >= 50)
        return fail("movement criterion did not trigger before n_max");

    for (const auto& y : report.y_trace) {
        double logprod = 0.0;
        for (int k = 0; k < y.size(); ++k) {
            if (y(k) < -1e-9 || y(k) > 1.0 + 1e-9) return fail("iterate outside [0,1]");
            logprod += std::log(y(k));
        }
        if (logprod < std::log(bench.epsilon_hat) - 1e-9)
            return fail("iterate violates the joint confidence constraint");
        for (int k = 0; k < y.size(); ++k)
            if (adjust_confidence(y(k), bench.constraints[static_cast<std::size_t>(k)]
                                            .radius) < 0.5 - 1e-9)
                return fail("iterate leaves the convex confidence box");
    }

    const Eigen::VectorXd tau = report.tau.tau;
    const Eigen::VectorXd& y = report.y_trace.back();
    Eigen::VectorXd tightened(2);
    for (int k = 0; k < 2; ++k) {
        const auto& spec = bench.constraints[static_cast<std::size_t>(k)];
        tightened(k) = adjust_confidence(y(k), spec.radius);
        const double kappa = std_quantile(Generator::gaussian(), 1.0 - tightened(k));
        const double sd = std::sqrt(tau.dot(spec.reference.dispersion * tau));
        if (tau.dot(spec.reference.location) + kappa * sd < spec.threshold - 1e-6)
            return fail("final tau violates tightened constraint " + spec.name);
    }

    // joint reference-distribution satisfaction at the converged confidences
    std::mt19937_64 rng(99);
    std::normal_distribution<double> normal;
    const int samples = 1000000;
    std::vector<Eigen::VectorXd> sds;
    for (const auto& spec : bench.constraints)
        sds.push_back(spec.reference.dispersion.diagonal().cwiseSqrt());
    int hits = 0;
    Eigen::VectorXd draw(tau.size());
    for (int i = 0; i < samples; ++i) {
        bool all = true;
        for (std::size_t k = 0; k < bench.constraints.size() && all; ++k) {
            const auto& spec = bench.constraints[k];
            for (int j = 0; j < draw.size(); ++j)
                draw(j) = spec.reference.location(j) + sds[k](j) * normal(rng);
            all = tau.dot(draw) >= spec.threshold;
        }
        hits += all ? 1 : 0;
    }
    const double joint_prob = static_cast<double>(hits) / samples;
    const double target = tightened(0) * tightened(1);
    const double se = std::sqrt(joint_prob * (1.0 - joint_prob) / samples);
    if (joint_prob < target - 3.0 * se)
        return fail("Monte Carlo joint satisfaction " + std::to_string(joint_prob) +
                    " below " + std::to_string(target));
    return {};
}

std::string criterion8_mixture() {
    // single-component mixtures reproduce the joint solve
    const auto bench = build_benchmark(1e-4);
    const SolveReport joint = solve_joint(bench.mdp, bench.constraints, bench.objective,
                                         bench.epsilon_hat, paper_config());
    if (joint.status != SolveStatus::Optimal) return fail("joint run not optimal");

    auto as_mixture = [](const EllipticalLaw& law) {
        return MixtureLaw(Eigen::VectorXd::Ones(1), {law});
    };
    std::vector<MixtureConstraintSpec> mix_specs;
    for (const auto& spec : bench.constraints)
        mix_specs.push_back(
            {spec.name, as_mixture(spec.reference), spec.threshold, spec.radius});
    const auto desc = build_mixture_program(
        bench.mdp, mix_specs,
        MixtureObjectiveBall{as_mixture(bench.objective.law), bench.objective.radius},
        bench.epsilon_hat);
    MixtureSolveConfig mix_cfg;
    mix_cfg.y0 = paper_config().y0;
    const MixtureSolveReport mixed = solve_mixture_heuristic(desc, mix_cfg);
    if (mixed.report.status != SolveStatus::Optimal)
        return fail("mixture run not optimal");
    const double rel = std::abs(mixed.report.objective - joint.objective) /
                       std::max(1.0, std::abs(joint.objective));
    if (rel > 1e-3) return fail("mixture vs joint off by " + std::to_string(rel));

    // evaluator vs Monte Carlo on a 2-component Gaussian mixture
    Eigen::VectorXd mu1(4), mu2(4);
    mu1 << -1.0, -0.5, -0.2, -0.8;
    mu2 << -0.6, -0.9, -0.4, -0.3;
    const MixtureObjectiveBall two{
        MixtureLaw((Eigen::VectorXd(2) << 0.4, 0.6).finished(),
                   {EllipticalLaw(mu1, 0.1 * Eigen::MatrixXd::Identity(4, 4),
                                  Generator::gaussian()),
                    EllipticalLaw(mu2, 0.2 * Eigen::MatrixXd::Identity(4, 4),
                                  Generator::gaussian())}),
        0.25};
    const auto toy_desc = build_mixture_program(
        cycle_toy(),
        {{"mc", two.law, -10.0, {0.1}}}, two, 0.85);
    Eigen::VectorXd tau(4);
    tau << 0.3, 0.2, 0.25, 0.25;
    const double alpha = 1.2;
    const auto mc = testing::gaussian_mixture_monte_carlo(
        {0.4, 0.6}, {mu1, mu2},
        {0.1 * Eigen::MatrixXd::Identity(4, 4), 0.2 * Eigen::MatrixXd::Identity(4, 4)},
        [&](const Eigen::VectorXd& r) { return std::exp(-tau.dot(r) / alpha); },
        1000000, 4242);
    const double mc_value = alpha * std::log(mc.mean) + alpha * two.radius;
    const double mc_se = alpha * mc.standard_error / mc.mean;
    const double lib_value = toy_desc.objective_value(tau, alpha);
    if (std::abs(lib_value - mc_value) > 3.0 * mc_se)
        return fail("evaluator vs Monte Carlo off by " +
                    std::to_string(lib_value - mc_value));
    return {};
}

std::string criterion9_toy_equivalence() {
    const MdpInstance mdp = cycle_toy();
    const ObjectiveBall ball{toy_objective_law(), 0.2};
    const OccupationPolytope poly = build_occupation_polytope(mdp);

    // individual
    const std::vector<KlConstraintSpec> specs{
        toy_constraint("c1", 0.9, 1.2, 0.6, 1.0, 0.8, 0.1)};
    const SolveReport individual = solve_individual(mdp, specs, ball);
    if (individual.status != SolveStatus::Optimal)
        return fail("toy individual not optimal");
    {
        const double tightened = adjust_confidence(0.8, {0.1});
        const double kappa = std_quantile(Generator::gaussian(), 1.0 - tightened);
        const auto& claw = specs[0].reference;
        const auto grid = testing::polytope_grid_maximize(
            poly.eq_matrix, poly.eq_rhs,
            [&](const Eigen::VectorXd& tau) {
                return tau.dot(ball.law.location) -
                       std::sqrt(2.0 * ball.radius *
                                 tau.dot(ball.law.dispersion * tau));
            },
            [&](const Eigen::VectorXd& tau) {
                const double sd = std::sqrt(tau.dot(claw.dispersion * tau));
                return tau.dot(claw.location) + kappa * sd >=
                       specs[0].threshold - 1e-12;
            },
            160, 4);
        if (std::abs(-individual.objective - grid.value) >
            1e-3 * std::max(1.0, std::abs(grid.value)))
            return fail("toy individual vs grid oracle off by " +
                        std::to_string(-individual.objective - grid.value));
    }

    // joint with two constraints; thresholds keep the second one active at
    // the optimum while the polytope retains a feasible band
    const std::vector<KlConstraintSpec> joint_specs{
        toy_constraint("c1", 0.9, 1.2, 0.6, 1.0, 0.60, 0.05),
        toy_constraint("c2", 1.1, 0.7, 0.9, 0.8, 0.68, 0.05)};
    const double eps_hat = 0.8;
    JointSolveConfig config = paper_config();
    config.y0 = (Eigen::VectorXd(2) << 0.92, 0.9).finished();
    config.movement_tolerance = 1e-7;
    const SolveReport joint = solve_joint(mdp, joint_specs, ball, eps_hat, config);
    if (joint.status != SolveStatus::Optimal) return fail("toy joint not optimal");
    {
        double best = -1e100;
        for (int i = 0; i <= 160; ++i) {
            const double y1 = eps_hat + (1.0 - eps_hat) * i / 160.0;
            const double y2 = eps_hat / y1;
            if (y2 > 1.0) continue;
            Eigen::VectorXd kappas(2), tights(2);
            tights << adjust_confidence(y1, joint_specs[0].radius),
                adjust_confidence(y2, joint_specs[1].radius);
            if (tights.minCoeff() < 0.5 || tights.maxCoeff() >= 1.0) continue;
            for (int k = 0; k < 2; ++k)
                kappas(k) = std_quantile(Generator::gaussian(), 1.0 - tights(k));
            const auto grid = testing::polytope_grid_maximize(
                poly.eq_matrix, poly.eq_rhs,
                [&](const Eigen::VectorXd& tau) {
                    return tau.dot(ball.law.location) -
                           std::sqrt(2.0 * ball.radius *
                                     tau.dot(ball.law.dispersion * tau));
                },
                [&](const Eigen::VectorXd& tau) {
                    for (int k = 0; k < 2; ++k) {
                        const auto& claw = joint_specs[static_cast<std::size_t>(k)]
                                               .reference;
                        const double sd =
                            std::sqrt(tau.dot(claw.dispersion * tau));
                        if (tau.dot(claw.location) + kappas(k) * sd <
                            joint_specs[static_cast<std::size_t>(k)].threshold -
                                1e-12)
                            return false;
                    }
                    return true;
                },
                90, 3);
            best = std::max(best, grid.value);
        }
        if (std::abs(-joint.objective - best) > 1e-3 * std::max(1.0, std::abs(best)))
            return fail("toy joint vs grid oracle off by " +
                        std::to_string(-joint.objective - best));
    }
    return {};
}

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "radius-zero collapse to the nominal programs", criterion1_collapse},
        {2, "KL confidence transform identities", criterion2_kl_transform},
        {3, "quantile accuracy and derivative", criterion3_quantiles},
        {4, "worst-case expectation closed form vs grid", criterion4_worst_case},
        {5, "benchmark radius monotonicity and curve convergence",
         criterion5_radius_monotonicity},
        {6, "risky states repair with probability one", criterion6_risky_states},
        {7, "joint driver on the reference configuration", criterion7_joint_driver},
        {8, "mixture consistency and evaluator", criterion8_mixture},
        {9, "toy brute-force equivalence", criterion9_toy_equivalence},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        try {
            detail = criterion.run();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        if (detail.empty()) {
            std::printf("PASS criterion %d: %s (%.2fs)\n", criterion.number,
                        criterion.title.c_str(), seconds);
        } else {
            std::printf("FAIL criterion %d: %s (%.2fs) -- %s\n", criterion.number,
                        criterion.title.c_str(), seconds, detail.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
