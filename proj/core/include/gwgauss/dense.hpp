#pragma once

// Dense-matrix reference computations. These deliberately go through full
// (m+n) x (m+n) matrices and Cholesky factorisations rather than the
// per-coordinate formulas, so they can be used to cross-check them.

#include <vector>

#include <Eigen/Dense>

#include "gwgauss/gaussian.hpp"

namespace gwgauss::dense {

/// Arbitrary (not necessarily diagonal) Gaussian coupling covariance.
struct DensePlan {
    Eigen::MatrixXd sigma_x;  ///< m x m
    Eigen::MatrixXd sigma_y;  ///< n x n
    Eigen::MatrixXd k_xy;     ///< m x n cross-covariance
};

[[nodiscard]] DensePlan to_dense(const CouplingPlan& plan);

/// [[sigma_x, k_xy], [k_xy^T, sigma_y]]
[[nodiscard]] Eigen::MatrixXd block_covariance(const DensePlan& plan);

/// log det via Cholesky; throws SingularPlan if the matrix is not PD.
[[nodiscard]] double log_det_spd(const Eigen::MatrixXd& m);

/// KL(N(0, a) || N(0, b)) from dense covariances.
[[nodiscard]] double gaussian_kl(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// KL(normalised plan || N(0, diag(mu)) (x) N(0, diag(nu))), with the plan in
/// the eigencoordinates of mu and nu.
[[nodiscard]] double joint_kl(const CouplingPlan& plan, const GaussianMeasure& mu,
                              const GaussianMeasure& nu);

/// Squared singular values of sigma_x^{-1/2} K sigma_y^{-1/2}, descending,
/// padded with zeros to min(m, n) entries.
[[nodiscard]] std::vector<double> correlation_kappas(const DensePlan& plan);

}  // namespace gwgauss::dense
