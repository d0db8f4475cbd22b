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

namespace drccmdp {

/// Radius of a Kullback-Leibler ambiguity ball.
struct KlRadius {
    double delta = 0.0;
};

/// The KL confidence transform
///   chi(eps, delta) = inf_{x in (0,1)} (exp(-delta) x^eps - 1) / (x - 1),
/// which maps a worst-case confidence level over the KL ball of radius delta
/// to the equivalent confidence level under the reference distribution.
///
/// The infimum is located on a dense mixed log/linear grid over
/// [1e-8, 1 - 1e-8] (10^4 points) and refined by golden-section search to an
/// interval width of 1e-12; the endpoints themselves can carry the infimum
/// (delta = 0 approaches it as x -> 1), so the grid touches both. The result
/// is clamped to [0, 1].
double adjust_confidence(double eps, KlRadius delta);

/// adjust_confidence together with the minimizing x, for callers that carry
/// the auxiliary variable of the mixture reformulation.
struct ChiResult {
    double value = 0.0;
    double argmin_x = 0.5;
};
ChiResult adjust_confidence_detail(double eps, KlRadius delta);

/// Inverse of chi(., delta): the unique y in [0, 1] with chi(y) = target,
/// found by bisection to |chi(y) - target| <= accuracy. The monotonicity
/// direction of chi in y is detected at runtime (see chi_increasing_in_y).
/// Targets outside [chi(0), chi(1)] raise RangeError naming the attainable
/// interval.
double inverse_adjust(double target, KlRadius delta, double accuracy = 1e-9);

/// True when chi(., delta) is nondecreasing in its confidence argument,
/// determined numerically by comparing chi at 0.25 and 0.75. Recorded in
/// solve reports because the direction is disputed.
bool chi_increasing_in_y(KlRadius delta);

} // namespace drccmdp
