#pragma once

// Derivative-free minimisers used as independent oracles.

#include <array>
#include <functional>
#include <vector>

namespace gwgauss::oracle {

struct ScalarMin {
    double x = 0.0;
    double f = 0.0;
};

/// Golden-section search on [lo, hi]. The returned x lies within tol of the
/// argmin for unimodal f. Throws InvalidInterval unless lo < hi and tol > 0.
[[nodiscard]] ScalarMin golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                                           double tol);

struct Box2 {
    double x_lo = 0.0;
    double x_hi = 1.0;
    double y_lo = 0.0;
    double y_hi = 1.0;
};

struct Min2 {
    double x = 0.0;
    double y = 0.0;
    double f = 0.0;
};

/// Multi-level grid search. Each level evaluates a (points x points) grid,
/// then shrinks the box by 5x around the incumbent, clipped to the original
/// box. A final golden-section polish along each axis is applied
/// alternately until the incumbent stops moving.
[[nodiscard]] Min2 grid_refine_min2d(const std::function<double(double, double)>& f, Box2 box,
                                     int levels, int points = 41);

/// n-D variant of grid_refine_min2d on an axis-aligned box (n <= 4).
struct MinN {
    std::vector<double> x;
    double f = 0.0;
};
[[nodiscard]] MinN grid_refine_min(const std::function<double(const std::vector<double>&)>& f,
                                   const std::vector<double>& lo, const std::vector<double>& hi,
                                   int levels, int points = 21);

}  // namespace gwgauss::oracle
