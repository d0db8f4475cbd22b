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
#include <string>
#include <vector>

namespace drccmdp {

/// A finite discounted MDP (S, A, P, q, beta). State/action indices are dense
/// 0-based integers; the state-action set Lambda is enumerated state-major,
/// so pair (s, a) has index pair_offset[s] + a. Immutable after construction.
class MdpInstance {
  public:
    /// Validates and builds an instance.
    ///
    /// transition(i, s') is the probability of moving to s' from the i-th
    /// state-action pair. Every row must sum to 1 within 1e-12 with
    /// nonnegative entries; initial must be a probability vector; discount
    /// must lie in [0, 1). Throws ValidationError naming the offending
    /// (s, a) or field otherwise.
    MdpInstance(std::vector<int> actions_per_state, Eigen::MatrixXd transition,
                Eigen::VectorXd initial, double discount);

    int num_states() const { return static_cast<int>(actions_per_state_.size()); }
    int num_pairs() const { return static_cast<int>(transition_.rows()); }
    int num_actions(int s) const { return actions_per_state_[static_cast<std::size_t>(s)]; }
    double discount() const { return discount_; }
    const Eigen::VectorXd& initial() const { return initial_; }
    /// |Lambda| x |S| transition kernel, rows indexed by pair index.
    const Eigen::MatrixXd& transition() const { return transition_; }

    int pair_index(int s, int a) const { return pair_offset_[static_cast<std::size_t>(s)] + a; }
    int pair_state(int i) const { return pair_state_[static_cast<std::size_t>(i)]; }
    int pair_action(int i) const { return pair_action_[static_cast<std::size_t>(i)]; }

  private:
    std::vector<int> actions_per_state_;
    std::vector<int> pair_offset_;
    std::vector<int> pair_state_;
    std::vector<int> pair_action_;
    Eigen::MatrixXd transition_;
    Eigen::VectorXd initial_;
    double discount_;
};

/// The linear-equality description of the set of occupation measures:
/// eq_matrix * tau = eq_rhs, tau >= 0. Row s' carries coefficients
/// delta(s', s) - beta * p(s'|s, a) and right-hand side (1 - beta) * q(s').
struct OccupationPolytope {
    Eigen::MatrixXd eq_matrix; // |S| x |Lambda|
    Eigen::VectorXd eq_rhs;    // length |S|
    int dimension = 0;         // |Lambda|
    bool nonnegative = true;   // tau >= 0 always applies
};

/// Discounted state-action visitation frequencies; the decision vector of
/// every program in this library.
struct OccupationVector {
    Eigen::VectorXd tau;
};

/// Per-state action distribution, stored flat by pair index.
struct StationaryPolicy {
    Eigen::VectorXd prob; // length |Lambda|, rows per state sum to 1
};

OccupationPolytope build_occupation_polytope(const MdpInstance& mdp);

/// Normalizes tau row-wise into a stationary policy. States with zero
/// occupation get the uniform distribution over their actions. Entries in
/// [-1e-9, 0) are treated as solver noise and clamped to zero; anything more
/// negative is a DomainError.
StationaryPolicy extract_policy(const OccupationVector& tau, const MdpInstance& mdp);

/// (1 / (1 - beta)) * tau' * reward. Throws on dimension mismatch or
/// non-finite rewards.
double discounted_value(const OccupationVector& tau, const Eigen::VectorXd& reward,
                        double beta);

} // namespace drccmdp
