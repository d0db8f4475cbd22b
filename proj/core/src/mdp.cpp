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

#include "drccmdp/mdp.hpp"

#include "drccmdp/errors.hpp"

#include <cmath>
#include <sstream>

namespace drccmdp {

namespace {
constexpr double kStochasticTol = 1e-12;
} // namespace

MdpInstance::MdpInstance(std::vector<int> actions_per_state, Eigen::MatrixXd transition,
                         Eigen::VectorXd initial, double discount)
    : actions_per_state_(std::move(actions_per_state)), transition_(std::move(transition)),
      initial_(std::move(initial)), discount_(discount) {
    const int num_states = static_cast<int>(actions_per_state_.size());
    if (num_states <= 0) throw ValidationError("MDP must have at least one state");

    int pairs = 0;
    pair_offset_.reserve(actions_per_state_.size());
    for (int s = 0; s < num_states; ++s) {
        const int na = actions_per_state_[static_cast<std::size_t>(s)];
        if (na <= 0)
            throw ValidationError("state " + std::to_string(s) + " has no actions");
        pair_offset_.push_back(pairs);
        for (int a = 0; a < na; ++a) {
            pair_state_.push_back(s);
            pair_action_.push_back(a);
        }
        pairs += na;
    }

    if (transition_.rows() != pairs || transition_.cols() != num_states) {
        std::ostringstream msg;
        msg << "transition kernel must be " << pairs << " x " << num_states << ", got "
            << transition_.rows() << " x " << transition_.cols();
        throw ValidationError(msg.str());
    }
    for (int i = 0; i < pairs; ++i) {
        double row_sum = 0.0;
        for (int sp = 0; sp < num_states; ++sp) {
            const double p = transition_(i, sp);
            if (!(p >= 0.0))
                throw ValidationError("negative transition probability at (s=" +
                                      std::to_string(pair_state_[static_cast<std::size_t>(i)]) +
                                      ", a=" +
                                      std::to_string(pair_action_[static_cast<std::size_t>(i)]) +
                                      ")");
            row_sum += p;
        }
        if (std::abs(row_sum - 1.0) > kStochasticTol)
            throw ValidationError(
                "transition row for (s=" +
                std::to_string(pair_state_[static_cast<std::size_t>(i)]) + ", a=" +
                std::to_string(pair_action_[static_cast<std::size_t>(i)]) +
                ") sums to " + std::to_string(row_sum) + ", expected 1");
    }

    if (initial_.size() != num_states)
        throw ValidationError("initial distribution has wrong length");
    double q_sum = 0.0;
    for (int s = 0; s < num_states; ++s) {
        if (!(initial_(s) >= 0.0))
            throw ValidationError("initial distribution has a negative entry at state " +
                                  std::to_string(s));
        q_sum += initial_(s);
    }
    if (std::abs(q_sum - 1.0) > kStochasticTol)
        throw ValidationError("initial distribution sums to " + std::to_string(q_sum) +
                              ", expected 1");

    if (!(discount_ >= 0.0 && discount_ < 1.0))
        throw ValidationError("discount factor must lie in [0, 1)");
}

OccupationPolytope build_occupation_polytope(const MdpInstance& mdp) {
    const int ns = mdp.num_states();
    const int np = mdp.num_pairs();
    const double beta = mdp.discount();

    OccupationPolytope poly;
    poly.eq_matrix.setZero(ns, np);
    poly.eq_rhs.resize(ns);
    poly.dimension = np;
    for (int sp = 0; sp < ns; ++sp) {
        for (int i = 0; i < np; ++i) {
            const double delta = (mdp.pair_state(i) == sp) ? 1.0 : 0.0;
            poly.eq_matrix(sp, i) = delta - beta * mdp.transition()(i, sp);
        }
        poly.eq_rhs(sp) = (1.0 - beta) * mdp.initial()(sp);
    }
    return poly;
}

StationaryPolicy extract_policy(const OccupationVector& tau, const MdpInstance& mdp) {
    if (tau.tau.size() != mdp.num_pairs())
        throw DomainError("occupation vector has wrong length");
    Eigen::VectorXd clamped = tau.tau;
    for (int i = 0; i < clamped.size(); ++i) {
        if (clamped(i) < -1e-9)
            throw DomainError("occupation vector has a negative entry at pair " +
                              std::to_string(i));
        if (clamped(i) < 0.0) clamped(i) = 0.0;
    }

    StationaryPolicy policy;
    policy.prob.resize(mdp.num_pairs());
    for (int s = 0; s < mdp.num_states(); ++s) {
        const int base = mdp.pair_index(s, 0);
        const int na = mdp.num_actions(s);
        double mass = 0.0;
        for (int a = 0; a < na; ++a) mass += clamped(base + a);
        for (int a = 0; a < na; ++a)
            policy.prob(base + a) = mass > 0.0 ? clamped(base + a) / mass : 1.0 / na;
    }
    return policy;
}

double discounted_value(const OccupationVector& tau, const Eigen::VectorXd& reward,
                        double beta) {
    if (tau.tau.size() != reward.size())
        throw DomainError("reward vector has wrong length");
    if (!reward.allFinite()) throw DomainError("reward vector has non-finite entries");
    return tau.tau.dot(reward) / (1.0 - beta);
}

} // namespace drccmdp
