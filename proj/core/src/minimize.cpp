#include "gwgauss/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gwgauss/error.hpp"

namespace gwgauss::oracle {

namespace {

constexpr double kInvPhi = 0.6180339887498948482;  // (sqrt(5) - 1) / 2
constexpr double kShrink = 5.0;

double finite_or_inf(double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; }

// Window of the given width centred on c, shifted to stay inside [lo, hi].
std::pair<double, double> window(double c, double width, double lo, double hi) {
    width = std::min(width, hi - lo);
    double a = c - 0.5 * width;
    double b = c + 0.5 * width;
    if (a < lo) { b += lo - a; a = lo; }
    if (b > hi) { a -= b - hi; b = hi; }
    return {std::max(a, lo), std::min(b, hi)};
}

}  // namespace

ScalarMin golden_section_min(const std::function<double(double)>& f, double lo, double hi, double tol) {
    if (!(lo < hi) || !(tol > 0.0) || !std::isfinite(lo) || !std::isfinite(hi)) {
        std::ostringstream os;
        os << "golden section needs lo < hi and tol > 0, got [" << lo << ", " << hi << "], tol " << tol;
        throw Error(ErrorCode::InvalidInterval, os.str());
    }
    auto g = [&](double x) { return finite_or_inf(f(x)); };
    double a = lo;
    double b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = g(c);
    double fd = g(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = g(d);
        }
    }
    // Include the endpoints so boundary minima are reported exactly.
    ScalarMin best{0.5 * (a + b), g(0.5 * (a + b))};
    for (double x : {lo, hi, c, d}) {
        const double v = g(x);
        if (v < best.f && std::abs(x - 0.5 * (a + b)) <= tol) best = {x, v};
    }
    if (best.x - lo <= tol) {
        const double v = g(lo);
        if (v <= best.f) best = {lo, v};
    }
    if (hi - best.x <= tol) {
        const double v = g(hi);
        if (v <= best.f) best = {hi, v};
    }
    return best;
}

Min2 grid_refine_min2d(const std::function<double(double, double)>& f, Box2 box, int levels, int points) {
    auto g = [&](double x, double y) { return finite_or_inf(f(x, y)); };
    points = std::max(points, 3);
    levels = std::max(levels, 1);
    const Box2 outer = box;
    Min2 best{box.x_lo, box.y_lo, std::numeric_limits<double>::infinity()};
    for (int level = 0; level < levels; ++level) {
        const double dx = (box.x_hi - box.x_lo) / (points - 1);
        const double dy = (box.y_hi - box.y_lo) / (points - 1);
        for (int i = 0; i < points; ++i) {
            const double x = box.x_lo + i * dx;
            for (int j = 0; j < points; ++j) {
                const double y = box.y_lo + j * dy;
                const double v = g(x, y);
                if (v < best.f) best = {x, y, v};
            }
        }
        const auto [xa, xb] = window(best.x, (box.x_hi - box.x_lo) / kShrink, outer.x_lo, outer.x_hi);
        const auto [ya, yb] = window(best.y, (box.y_hi - box.y_lo) / kShrink, outer.y_lo, outer.y_hi);
        box = {xa, xb, ya, yb};
    }

    // Axis-wise polish inside the last box.
    for (int round = 0; round < 8; ++round) {
        const Min2 before = best;
        const double tx = 1e-3 * (box.x_hi - box.x_lo) + 1e-15;
        const double ty = 1e-3 * (box.y_hi - box.y_lo) + 1e-15;
        const auto [xa, xb] = window(best.x, 2.0 * (box.x_hi - box.x_lo), outer.x_lo, outer.x_hi);
        const ScalarMin sx = golden_section_min([&](double x) { return g(x, best.y); }, xa, xb, tx * 1e-3);
        if (sx.f < best.f) best = {sx.x, best.y, sx.f};
        const auto [ya, yb] = window(best.y, 2.0 * (box.y_hi - box.y_lo), outer.y_lo, outer.y_hi);
        const ScalarMin sy = golden_section_min([&](double y) { return g(best.x, y); }, ya, yb, ty * 1e-3);
        if (sy.f < best.f) best = {best.x, sy.x, sy.f};
        if (before.f - best.f <= 1e-15 * std::max(1.0, std::abs(best.f))) break;
    }
    return best;
}

MinN grid_refine_min(const std::function<double(const std::vector<double>&)>& f,
                     const std::vector<double>& lo, const std::vector<double>& hi, int levels, int points) {
    const std::size_t n = lo.size();
    if (n == 0 || hi.size() != n || n > 4) {
        throw Error(ErrorCode::InvalidArgument, "grid_refine_min needs 1 <= n <= 4 matching bounds");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(lo[i] < hi[i])) throw Error(ErrorCode::InvalidInterval, "grid box must have lo < hi");
    }
    auto g = [&](const std::vector<double>& x) { return finite_or_inf(f(x)); };
    points = std::max(points, 3);
    levels = std::max(levels, 1);
    std::vector<double> a = lo;
    std::vector<double> b = hi;
    MinN best{lo, std::numeric_limits<double>::infinity()};
    std::vector<double> x(n);
    std::vector<int> idx(n);
    for (int level = 0; level < levels; ++level) {
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
            for (std::size_t i = 0; i < n; ++i) x[i] = a[i] + idx[i] * (b[i] - a[i]) / (points - 1);
            const double v = g(x);
            if (v < best.f) best = {x, v};
            std::size_t k = 0;
            while (k < n && ++idx[k] == points) idx[k++] = 0;
            if (k == n) break;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto [wa, wb] = window(best.x[i], (b[i] - a[i]) / kShrink, lo[i], hi[i]);
            a[i] = wa;
            b[i] = wb;
        }
    }
    for (int round = 0; round < 8; ++round) {
        const double before = best.f;
        for (std::size_t i = 0; i < n; ++i) {
            const auto [wa, wb] = window(best.x[i], 2.0 * (b[i] - a[i]), lo[i], hi[i]);
            std::vector<double> probe = best.x;
            const ScalarMin s = golden_section_min(
                [&](double t) {
                    probe[i] = t;
                    return g(probe);
                },
                wa, wb, 1e-6 * (b[i] - a[i]) + 1e-15);
            if (s.f < best.f) {
                best.x[i] = s.x;
                best.f = s.f;
            }
        }
        if (before - best.f <= 1e-15 * std::max(1.0, std::abs(best.f))) break;
    }
    return best;
}

}  // namespace gwgauss::oracle
