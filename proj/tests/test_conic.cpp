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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "drccmdp/conic.hpp"
#include "drccmdp/machine_replacement.hpp"
#include "drccmdp/mdp.hpp"
#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace drccmdp;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ConicProgram empty_program(int n) {
    ConicProgram prog;
    prog.num_vars = n;
    prog.objective_linear = Eigen::VectorXd::Zero(n);
    prog.lower = Eigen::VectorXd::Constant(n, -kInf);
    prog.upper = Eigen::VectorXd::Constant(n, kInf);
    return prog;
}

} // namespace

TEST_CASE("pure LP over the benchmark polytope matches the vertex oracle") {
    const auto bench = build_benchmark();
    const OccupationPolytope poly = build_occupation_polytope(bench.mdp);
    const Eigen::VectorXd mu = machine_replacement_mean(0);

    ConicProgram prog = empty_program(poly.dimension);
    prog.objective_linear = -mu; // maximize tau'mu
    prog.lower = Eigen::VectorXd::Zero(poly.dimension);
    for (int s = 0; s < poly.eq_matrix.rows(); ++s)
        prog.equalities.push_back({"", poly.eq_matrix.row(s), poly.eq_rhs(s)});

    const BackendResult res = conic_solve(prog);
    REQUIRE(res.status == SolveStatus::Optimal);

    const double oracle = testing::vertex_lp_max(poly.eq_matrix, poly.eq_rhs, mu);
    CHECK(std::abs(-res.objective - oracle) < 1e-6);
    CHECK(res.x.minCoeff() > -1e-9);
    CHECK((poly.eq_matrix * res.x - poly.eq_rhs).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("constructed infeasibility is certified") {
    // x >= 3 and x <= 1
    ConicProgram prog = empty_program(1);
    prog.lower(0) = 3.0;
    prog.upper(0) = 1.0;
    const BackendResult res = conic_solve(prog);
    CHECK(res.status == SolveStatus::Infeasible);
}

TEST_CASE("norm minimization over a hyperplane has value 1/||a||") {
    const int n = 4;
    Eigen::VectorXd a(n);
    a << 1.0, -2.0, 0.5, 3.0;

    ConicProgram prog = empty_program(n);
    prog.equalities.push_back({"plane", a, 1.0});
    prog.objective_norms.push_back(
        {1.0, Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n)});

    const BackendResult res = conic_solve(prog);
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(std::abs(res.objective - 1.0 / a.norm()) < 1e-7);
}

TEST_CASE("unbounded direction is certified") {
    ConicProgram prog = empty_program(1);
    prog.lower(0) = 0.0;
    prog.objective_linear(0) = -1.0;
    const BackendResult res = conic_solve(prog);
    CHECK(res.status == SolveStatus::Unbounded);
}

TEST_CASE("SOC constraint and its dual shadow price") {
    // minimize x subject to x + 0 >= 2*|x - 3| -> feasible interval [2, 6]
    ConicProgram prog = empty_program(1);
    prog.objective_linear(0) = 1.0;
    SocConstraint soc;
    soc.name = "band";
    soc.c = Eigen::VectorXd::Ones(1);
    soc.d = 0.0;
    soc.k = 2.0;
    soc.A = Eigen::MatrixXd::Identity(1, 1);
    soc.b = Eigen::VectorXd::Constant(1, -3.0);
    prog.socs.push_back(soc);

    const BackendResult res = conic_solve(prog);
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.x(0) == doctest::Approx(2.0).epsilon(1e-6));

    // shadow price of d: perturbing d by h moves the optimum by -h/... check
    // against a re-solve
    const double dual = res.duals.at("band");
    ConicProgram bumped = prog;
    bumped.socs[0].d += 1e-5;
    const BackendResult res2 = conic_solve(bumped);
    REQUIRE(res2.status == SolveStatus::Optimal);
    const double fd = -(res2.objective - res.objective) / 1e-5;
    CHECK(dual == doctest::Approx(fd).epsilon(1e-3));
}

TEST_CASE("linear inequality duals match finite differences") {
    // minimize 2x + y s.t. x + y >= 4, x >= 0, y >= 0
    ConicProgram prog = empty_program(2);
    prog.objective_linear << 2.0, 1.0;
    prog.lower = Eigen::VectorXd::Zero(2);
    Eigen::VectorXd a(2);
    a << 1.0, 1.0;
    prog.inequalities.push_back({"cover", a, 4.0});

    const BackendResult res = conic_solve(prog);
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.objective == doctest::Approx(4.0).epsilon(1e-7));
    CHECK(res.duals.at("cover") == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("status string mapping") {
    CHECK(to_string(SolveStatus::Optimal) == "optimal");
    CHECK(to_string(SolveStatus::NumericalLimit) == "numerical-limit");
}

TEST_CASE("random LPs over occupation polytopes match the vertex oracle") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unif(0.01, 1.0);
    for (int trial = 0; trial < 12; ++trial) {
        const int states = 2 + static_cast<int>(unif(rng) * 3.0);
        const int actions = 2;
        Eigen::MatrixXd kernel(states * actions, states);
        for (int r = 0; r < kernel.rows(); ++r) {
            double sum = 0.0;
            for (int c = 0; c < states; ++c) {
                kernel(r, c) = unif(rng);
                sum += kernel(r, c);
            }
            kernel.row(r) /= sum;
        }
        Eigen::VectorXd q(states);
        double qs = 0.0;
        for (int s = 0; s < states; ++s) {
            q(s) = unif(rng);
            qs += q(s);
        }
        q /= qs;
        const MdpInstance mdp(std::vector<int>(states, actions), kernel, q, 0.8);
        const OccupationPolytope poly = build_occupation_polytope(mdp);

        Eigen::VectorXd reward(poly.dimension);
        for (int i = 0; i < poly.dimension; ++i) reward(i) = 2.0 * unif(rng) - 1.0;

        ConicProgram prog = empty_program(poly.dimension);
        prog.objective_linear = -reward;
        prog.lower = Eigen::VectorXd::Zero(poly.dimension);
        for (int s = 0; s < poly.eq_matrix.rows(); ++s)
            prog.equalities.push_back({"", poly.eq_matrix.row(s), poly.eq_rhs(s)});
        const BackendResult res = conic_solve(prog);
        REQUIRE(res.status == SolveStatus::Optimal);
        const double oracle =
            testing::vertex_lp_max(poly.eq_matrix, poly.eq_rhs, reward);
        CHECK(std::abs(-res.objective - oracle) <= 1e-6 * std::max(1.0, std::abs(oracle)));
        CHECK(res.x.sum() == doctest::Approx(1.0).epsilon(1e-7));
    }
}

TEST_CASE("duplicated equality rows do not break the factorization") {
    ConicProgram prog = empty_program(2);
    prog.objective_linear << 1.0, 2.0;
    prog.lower = Eigen::VectorXd::Zero(2);
    Eigen::VectorXd a(2);
    a << 1.0, 1.0;
    prog.equalities.push_back({"sum", a, 1.0});
    prog.equalities.push_back({"sum-again", a, 1.0}); // redundant copy
    const BackendResult res = conic_solve(prog);
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.objective == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(res.x(0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("random feasible SOCPs satisfy their reported certificates") {
    std::mt19937_64 rng(53);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif(0.2, 1.0);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 4 + static_cast<int>(unif(rng) * 4.0);

        // Build the cone constraint around a known interior point so the
        // program is feasible by construction.
        Eigen::VectorXd interior(n);
        for (int i = 0; i < n; ++i) interior(i) = unif(rng);

        ConicProgram prog = empty_program(n);
        for (int i = 0; i < n; ++i) prog.objective_linear(i) = normal(rng);
        prog.lower = Eigen::VectorXd::Zero(n);
        prog.upper = Eigen::VectorXd::Constant(n, 2.0);

        SocConstraint soc;
        soc.name = "ball";
        soc.c = Eigen::VectorXd::Zero(n);
        soc.A = Eigen::MatrixXd::Identity(n, n);
        soc.b = -interior;
        soc.k = 1.0;
        soc.d = 0.5 + unif(rng); // radius around the interior point
        prog.socs.push_back(soc);

        Eigen::VectorXd a(n);
        for (int i = 0; i < n; ++i) a(i) = unif(rng);
        prog.equalities.push_back({"plane", a, a.dot(interior)});

        const BackendResult res = conic_solve(prog);
        REQUIRE(res.status == SolveStatus::Optimal);
        CHECK(std::abs(a.dot(res.x) - a.dot(interior)) <= 1e-6);
        CHECK((res.x - interior).norm() <= prog.socs[0].d + 1e-6);
        CHECK(res.x.minCoeff() >= -1e-7);
        CHECK(res.feasibility_residual <= 1e-8);
        CHECK(res.duality_gap <= 1e-6);

        // optimality spot check: the solution beats random feasible points
        for (int probe = 0; probe < 200; ++probe) {
            Eigen::VectorXd candidate(n);
            for (int i = 0; i < n; ++i) candidate(i) = 2.0 * unif(rng);
            // project onto the hyperplane through the interior point
            candidate += a * ((a.dot(interior) - a.dot(candidate)) / a.squaredNorm());
            if (candidate.minCoeff() < 0.0 || candidate.maxCoeff() > 2.0) continue;
            if ((candidate - interior).norm() > prog.socs[0].d) continue;
            CHECK(prog.objective_linear.dot(candidate) >= res.objective - 1e-7);
        }
    }
}

TEST_CASE("program JSON dump round-trips through validation") {
    ConicProgram prog = empty_program(2);
    prog.lower = Eigen::VectorXd::Zero(2);
    Eigen::VectorXd a(2);
    a << 1.0, 1.0;
    prog.equalities.push_back({"sum", a, 1.0});
    prog.validate();
    const std::string dump = prog.to_json_string();
    CHECK(dump.find("\"equalities\"") != std::string::npos);
    CHECK(dump.find("\"num_vars\": 2") != std::string::npos);
}
