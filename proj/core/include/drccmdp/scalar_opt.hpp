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

#include <cmath>
#include <functional>
#include <vector>

namespace drccmdp {

/// Golden-section search for the minimizer of f on [a, b].
/// Shrinks the bracket until its width drops below width_tol (or max_iter).
/// Returns the bracket midpoint. f is assumed unimodal on [a, b]; on
/// non-unimodal input the result is still a local minimizer of the
/// final bracket, which is what the grid-then-refine callers rely on.
inline double golden_section_minimize(const std::function<double(double)>& f, double a,
                                      double b, double width_tol, int max_iter = 200) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0; // 1/phi
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < max_iter && (b - a) > width_tol; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

/// Minimize f over a fixed grid, then refine with golden-section search on the
/// cell around the best grid point. Returns the refined argmin.
inline double grid_then_golden_minimize(const std::function<double(double)>& f,
                                        const std::vector<double>& grid,
                                        double width_tol) {
    std::size_t best = 0;
    double fbest = f(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double fi = f(grid[i]);
        if (fi < fbest) {
            fbest = fi;
            best = i;
        }
    }
    const double lo = grid[best > 0 ? best - 1 : 0];
    const double hi = grid[best + 1 < grid.size() ? best + 1 : grid.size() - 1];
    if (hi <= lo) return grid[best];
    const double refined = golden_section_minimize(f, lo, hi, width_tol);
    // The golden bracket can drift off the true argmin when the grid cell is
    // not unimodal; keep whichever candidate evaluates lower.
    return f(refined) <= fbest ? refined : grid[best];
}

/// n log-spaced points on [lo, hi], lo > 0.
inline std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> pts(static_cast<std::size_t>(n));
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        pts[static_cast<std::size_t>(i)] =
            std::exp(llo + (lhi - llo) * static_cast<double>(i) / (n - 1));
    return pts;
}

/// n linearly spaced points on [lo, hi].
inline std::vector<double> lin_spaced(double lo, double hi, int n) {
    std::vector<double> pts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        pts[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return pts;
}

} // namespace drccmdp
