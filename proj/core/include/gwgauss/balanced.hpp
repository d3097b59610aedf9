#pragma once

// Entropic inner-product Gromov-Wasserstein between zero-mean Gaussian
// probability measures.

#include <vector>

#include "gwgauss/dense.hpp"
#include "gwgauss/gaussian.hpp"

namespace gwgauss {

struct IgwResult {
    double value = 0.0;
    /// Optimal squared correlations, one per coordinate of the smaller space.
    std::vector<double> kappas;
    /// Plan with x = the larger-dimensional measure.
    CouplingPlan plan;
    double epsilon = 0.0;
    /// True when nu had the larger dimension and the plan's x block is nu.
    bool swapped = false;
    /// True when some kappa equals 1 (only at epsilon = 0): the plan
    /// covariance is singular although the value is finite.
    bool degenerate = false;
};

/// Closed-form entropic IGW:
///   tr(S_mu^2) + tr(S_nu^2) - 2 sum_k (l_k - eps/4)^+
///     + eps/2 sum_k [log l_k - log(eps/4)]^+,    l_k = lambda_mu,k lambda_nu,k
/// with optimal kappa_k = [1 - eps / (4 l_k)]^+.
///
/// Throws UnbalancedInput unless both masses are 1 and NegativeEpsilon for
/// eps < 0.
[[nodiscard]] IgwResult igw_entropic(const GaussianMeasure& mu, const GaussianMeasure& nu,
                                     double epsilon);

struct TraceBound {
    double bound = 0.0;  ///< sum_j lambda_mu,j lambda_nu,j kappa_j
    double trace = 0.0;  ///< tr(K^T K)
    bool attained = false;
};

/// von Neumann bound on tr(K^T K) for a plan whose marginals are (mu, nu).
/// Throws MarginalMismatch when the plan's marginal spectra differ from the
/// measures'.
[[nodiscard]] TraceBound verify_trace_bound(const CouplingPlan& plan, const GaussianMeasure& mu,
                                            const GaussianMeasure& nu);
[[nodiscard]] TraceBound verify_trace_bound(const dense::DensePlan& plan, const GaussianMeasure& mu,
                                            const GaussianMeasure& nu);

/// log det of the plan's block covariance,
/// sum log sigma_x + sum log sigma_y + sum log(1 - kappa_k).
[[nodiscard]] double plan_log_det(const CouplingPlan& plan);

}  // namespace gwgauss
