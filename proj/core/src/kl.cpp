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

#include "drccmdp/kl.hpp"

#include "drccmdp/errors.hpp"
#include "drccmdp/scalar_opt.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace drccmdp {

namespace {

constexpr double kXMin = 1e-8;
constexpr double kXMax = 1.0 - 1e-8;

// (exp(-delta) x^eps - 1) / (x - 1), numerator through expm1: the direct
// form cancels catastrophically as x -> 1, where the delta = 0 infimum lives.
double h_value(double x, double eps, double delta) {
    return std::expm1(-delta + eps * std::log(x)) / (x - 1.0);
}

// Mixed grid: log-spaced on [1e-8, 1/2] to resolve the x -> 0 endpoint,
// linear on [1/2, 1 - 1e-8] where h can be extremely flat for small delta.
const std::vector<double>& grid_points() {
    static const std::vector<double> grid = [] {
        std::vector<double> pts = log_spaced(kXMin, 0.5, 5000);
        const std::vector<double> lin = lin_spaced(0.5, kXMax, 5000);
        pts.insert(pts.end(), lin.begin() + 1, lin.end());
        return pts;
    }();
    return grid;
}

} // namespace

ChiResult adjust_confidence_detail(double eps, KlRadius radius) {
    if (!(eps >= 0.0 && eps <= 1.0))
        throw DomainError("confidence level must lie in [0, 1]");
    if (!(radius.delta >= 0.0)) throw DomainError("KL radius must be nonnegative");

    const auto h = [&](double x) { return h_value(x, eps, radius.delta); };
    const double xstar = grid_then_golden_minimize(h, grid_points(), 1e-12);
    return {std::clamp(h(xstar), 0.0, 1.0), xstar};
}

double adjust_confidence(double eps, KlRadius radius) {
    return adjust_confidence_detail(eps, radius).value;
}

bool chi_increasing_in_y(KlRadius radius) {
    return adjust_confidence(0.25, radius) <= adjust_confidence(0.75, radius);
}

double inverse_adjust(double target, KlRadius radius, double accuracy) {
    if (!(radius.delta >= 0.0)) throw DomainError("KL radius must be nonnegative");
    const double chi0 = adjust_confidence(0.0, radius);
    const double chi1 = adjust_confidence(1.0, radius);
    const double lo_val = std::min(chi0, chi1);
    const double hi_val = std::max(chi0, chi1);
    const double slack = std::max(accuracy, 1e-9);
    if (target < lo_val - slack || target > hi_val + slack)
        throw RangeError("inverse_adjust: target " + std::to_string(target) +
                         " outside attainable interval [" + std::to_string(lo_val) +
                         ", " + std::to_string(hi_val) + "]");

    const bool increasing = chi_increasing_in_y(radius);
    // Endpoint targets snap to the endpoint: chi saturates and flattens near
    // its extremes, where value-tolerance bisection would stop far from the
    // boundary the interval logic needs.
    if (target >= hi_val - 1e-12) return (chi1 >= chi0) ? 1.0 : 0.0;
    if (target <= lo_val + 1e-12) return (chi1 >= chi0) ? 0.0 : 1.0;

    double y_lo = 0.0;
    double y_hi = 1.0;
    for (int i = 0; i < 200 && (y_hi - y_lo) > 1e-12; ++i) {
        const double mid = 0.5 * (y_lo + y_hi);
        const double value = adjust_confidence(mid, radius);
        if (std::abs(value - target) <= accuracy) return mid;
        const bool go_right = increasing ? (value < target) : (value > target);
        if (go_right)
            y_lo = mid;
        else
            y_hi = mid;
    }
    return 0.5 * (y_lo + y_hi);
}

} // namespace drccmdp
