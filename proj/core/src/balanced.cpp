#include "gwgauss/balanced.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gwgauss/error.hpp"

namespace gwgauss {

namespace {

constexpr double kMarginalTolerance = 1e-9;
constexpr double kAttainTolerance = 1e-9;

void require_marginals(std::span<const double> plan_side, std::span<const double> spectrum,
                       const char* which) {
    if (plan_side.size() != spectrum.size()) {
        std::ostringstream os;
        os << which << " marginal dimension " << plan_side.size() << " != measure dimension "
           << spectrum.size();
        throw Error(ErrorCode::MarginalMismatch, os.str());
    }
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        if (std::abs(plan_side[i] - spectrum[i]) > kMarginalTolerance * std::max(1.0, spectrum[i])) {
            std::ostringstream os;
            os << which << " marginal eigenvalue " << i << " = " << plan_side[i]
               << " does not match " << spectrum[i];
            throw Error(ErrorCode::MarginalMismatch, os.str());
        }
    }
}

std::vector<double> sorted_eigenvalues(const Eigen::MatrixXd& m) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

}  // namespace

IgwResult igw_entropic(const GaussianMeasure& mu, const GaussianMeasure& nu, double epsilon) {
    if (!mu.is_probability() || !nu.is_probability()) {
        throw Error(ErrorCode::UnbalancedInput,
                    "entropic IGW needs probability measures; use uigw_entropic for scaled measures");
    }
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw Error(ErrorCode::NegativeEpsilon, "epsilon must be finite and >= 0");
    }

    const bool swapped = mu.dim() < nu.dim();
    const GaussianMeasure& big = swapped ? nu : mu;
    const GaussianMeasure& small = swapped ? mu : nu;
    const std::size_t n = small.dim();
    const double quarter_eps = 0.25 * epsilon;

    double value = big.trace_of_square() + small.trace_of_square();
    std::vector<double> kappas(n);
    std::vector<double> k_xy(n);
    bool degenerate = false;
    for (std::size_t k = 0; k < n; ++k) {
        const double l = big.eigenvalue(k) * small.eigenvalue(k);
        value -= 2.0 * std::max(l - quarter_eps, 0.0);
        if (epsilon > 0.0 && l > quarter_eps) {
            value += 0.5 * epsilon * (std::log(l) - std::log(quarter_eps));
        }
        const double kappa = epsilon > 0.0 ? std::max(1.0 - quarter_eps / l, 0.0) : 1.0;
        kappas[k] = kappa;
        k_xy[k] = std::sqrt(l * kappa);
        degenerate = degenerate || kappa >= 1.0;
    }

    std::vector<double> sx(big.spectrum().begin(), big.spectrum().end());
    std::vector<double> sy(small.spectrum().begin(), small.spectrum().end());
    return IgwResult{std::max(value, 0.0),
                     std::move(kappas),
                     CouplingPlan(1.0, std::move(sx), std::move(sy), std::move(k_xy)),
                     epsilon,
                     swapped,
                     degenerate};
}

TraceBound verify_trace_bound(const CouplingPlan& plan, const GaussianMeasure& mu,
                              const GaussianMeasure& nu) {
    require_marginals(plan.sigma_x(), mu.spectrum(), "x");
    require_marginals(plan.sigma_y(), nu.spectrum(), "y");
    TraceBound out;
    for (std::size_t k = 0; k < plan.y_dim(); ++k) {
        const double c = plan.k_xy()[k];
        out.trace += c * c;
        out.bound += mu.eigenvalue(k) * nu.eigenvalue(k) * plan.kappa(k);
    }
    out.attained = std::abs(out.trace - out.bound) <= kAttainTolerance * std::max(1.0, out.bound);
    return out;
}

TraceBound verify_trace_bound(const dense::DensePlan& plan, const GaussianMeasure& mu,
                              const GaussianMeasure& nu) {
    if (plan.sigma_x.rows() != static_cast<Eigen::Index>(mu.dim()) ||
        plan.sigma_y.rows() != static_cast<Eigen::Index>(nu.dim())) {
        throw Error(ErrorCode::MarginalMismatch, "plan marginal dimensions differ from (mu, nu)");
    }
    const auto ex = sorted_eigenvalues(plan.sigma_x);
    const auto ey = sorted_eigenvalues(plan.sigma_y);
    require_marginals(ex, mu.spectrum(), "x");
    require_marginals(ey, nu.spectrum(), "y");

    const auto kappas = dense::correlation_kappas(plan);
    TraceBound out;
    out.trace = plan.k_xy.squaredNorm();
    for (std::size_t j = 0; j < kappas.size(); ++j) {
        out.bound += mu.eigenvalue(j) * nu.eigenvalue(j) * kappas[j];
    }
    out.attained = std::abs(out.trace - out.bound) <= kAttainTolerance * std::max(1.0, out.bound);
    return out;
}

double plan_log_det(const CouplingPlan& plan) {
    double s = 0.0;
    for (double v : plan.sigma_x()) s += std::log(v);
    for (double v : plan.sigma_y()) s += std::log(v);
    for (std::size_t k = 0; k < plan.y_dim(); ++k) {
        const double kappa = plan.kappa(k);
        if (kappa >= kSingularKappa) {
            throw Error(ErrorCode::SingularPlan, "plan covariance is singular (kappa = 1)");
        }
        s += std::log1p(-kappa);
    }
    return s;
}

}  // namespace gwgauss
