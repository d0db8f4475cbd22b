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

#include "drccmdp/machine_replacement.hpp"

#include "drccmdp/errors.hpp"

namespace drccmdp {

namespace {

constexpr int kStates = 10;
constexpr int kPairs = 2 * kStates;

// Mean costs per state for (repair, do-not-repair).
// which = 0: opportunity cost; 1: operation consumption; 2: low quality.
constexpr double kMeans[3][kStates][2] = {
    {{-10, 0}, {-10, 0}, {-10, 0}, {-10, 0}, {-10, 0},
     {-10, 0}, {-10, 0}, {-10, 0}, {-40, -85}, {-40, -95}},
    {{-15, -10}, {-15, -30}, {-15, -40}, {-15, -50}, {-15, -70},
     {-15, -80}, {-15, -80}, {-15, -80}, {-50, -200}, {-50, -200}},
    {{0, -40}, {0, -40}, {0, -50}, {0, -50}, {-15, -50},
     {-15, -55}, {-15, -55}, {-15, -55}, {-30, -80}, {-30, -100}},
};

constexpr double kCov0[kPairs] = {0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3,
                                  0.3, 0.3, 0.3, 0.3, 0.3, 3,   5,   2,   8,   9};
constexpr double kCov1[kPairs] = {0.5, 5,   0.5, 0.5, 0.5, 5,   0.5, 5,   0.5, 0.5,
                                  0.5, 5,   0.5, 0.5, 0.5, 0.5, 8,   9,   8,   9};
constexpr double kCov2[kPairs] = {0.04, 0.04, 0.04, 0.04, 0.04, 0.04, 0.04,
                                  0.04, 0.04, 0.04, 0.04, 0.04, 0.04, 0.04,
                                  0.04, 4,    9,    8,    8.5,  10};

} // namespace

Eigen::VectorXd machine_replacement_mean(int which) {
    if (which < 0 || which > 2) throw DomainError("cost index must be 0, 1 or 2");
    Eigen::VectorXd mu(kPairs);
    for (int s = 0; s < kStates; ++s)
        for (int a = 0; a < 2; ++a) mu(2 * s + a) = kMeans[which][s][a];
    return mu;
}

Eigen::VectorXd machine_replacement_cov_diagonal(int which) {
    Eigen::VectorXd d(kPairs);
    const double* src = which == 0 ? kCov0 : which == 1 ? kCov1 : kCov2;
    if (which < 0 || which > 2) throw DomainError("cost index must be 0, 1 or 2");
    for (int i = 0; i < kPairs; ++i) d(i) = src[i];
    return d;
}

Eigen::MatrixXd default_machine_replacement_kernel() {
    Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(kPairs, kStates);
    for (int s = 0; s < kStates; ++s) {
        kernel(2 * s + 0, 0) = 1.0; // repair resets to the newest state
        if (s + 1 < kStates) {
            kernel(2 * s + 1, s + 1) = 0.9; // aging
            kernel(2 * s + 1, s) = 0.1;
        } else {
            kernel(2 * s + 1, s) = 1.0; // oldest state absorbs
        }
    }
    return kernel;
}

MachineReplacementBenchmark build_benchmark(double radius,
                                            const std::optional<Eigen::MatrixXd>& kernel,
                                            double xi, double epsilon) {
    MachineReplacementBenchmark bench{
        MdpInstance(std::vector<int>(kStates, 2),
                    kernel.value_or(default_machine_replacement_kernel()),
                    Eigen::VectorXd::Constant(kStates, 1.0 / kStates), 0.9),
        {},
        {},
        epsilon,
        !kernel.has_value()};

    auto law = [&](int which) {
        return EllipticalLaw(machine_replacement_mean(which),
                             machine_replacement_cov_diagonal(which).asDiagonal(),
                             Generator::gaussian());
    };
    bench.objective = {law(0), radius};
    bench.constraints.push_back(
        {"operation-cost", law(1), xi, epsilon, KlRadius{radius}});
    bench.constraints.push_back(
        {"low-quality-cost", law(2), xi, epsilon, KlRadius{radius}});
    return bench;
}

} // namespace drccmdp
