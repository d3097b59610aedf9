#include "gwgauss/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gwgauss/error.hpp"
#include "gwgauss/philox.hpp"

namespace gwgauss::oracle {

namespace {

// Draws normals two at a time from consecutive Philox blocks.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const auto z = rng_.normals(counter_++);
        spare_ = z[1];
        have_spare_ = true;
        return z[0];
    }

private:
    Philox4x32 rng_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

struct CoordFactor {
    double sx = 0.0;   // sqrt(sigma_x)
    double cy = 0.0;   // k / sqrt(sigma_x)
    double ry = 0.0;   // sqrt(sigma_y - k^2 / sigma_x)
};

}  // namespace

MonteCarloEstimate monte_carlo_igw_cost(const CouplingPlan& plan, std::uint64_t samples, std::uint64_t seed) {
    if (samples < 10000) throw Error(ErrorCode::InvalidArgument, "monte carlo needs at least 1e4 samples");
    if (plan.y_dim() > 0 && plan.max_kappa() >= kSingularKappa) {
        throw Error(ErrorCode::SingularPlan, "plan covariance is singular (kappa = 1)");
    }
    const std::size_t m = plan.x_dim();
    const std::size_t n = plan.y_dim();
    std::vector<CoordFactor> f(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double sx = plan.sigma_x()[k];
        f[k].sx = std::sqrt(sx);
        if (k < n) {
            const double kk = plan.k_xy()[k];
            f[k].cy = kk / f[k].sx;
            f[k].ry = std::sqrt(std::max(plan.sigma_y()[k] - kk * kk / sx, 0.0));
        }
    }

    NormalStream z(seed);
    double mean = 0.0;
    double m2 = 0.0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        double xx = 0.0;
        double yy = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double z1 = z.next();
            const double w1 = z.next();
            const double x = f[k].sx * z1;
            const double xp = f[k].sx * w1;
            xx += x * xp;
            if (k < n) {
                const double z2 = z.next();
                const double w2 = z.next();
                yy += (f[k].cy * z1 + f[k].ry * z2) * (f[k].cy * w1 + f[k].ry * w2);
            }
        }
        const double d = xx - yy;
        const double v = d * d;
        const double delta = v - mean;
        mean += delta / static_cast<double>(s + 1);
        m2 += delta * (v - mean);
    }
    const auto nn = static_cast<double>(samples);
    return {mean, std::sqrt(m2 / (nn - 1.0) / nn)};
}

}  // namespace gwgauss::oracle
