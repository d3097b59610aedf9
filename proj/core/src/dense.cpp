#include "gwgauss/dense.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "gwgauss/error.hpp"

namespace gwgauss::dense {

DensePlan to_dense(const CouplingPlan& plan) {
    const auto m = static_cast<Eigen::Index>(plan.x_dim());
    const auto n = static_cast<Eigen::Index>(plan.y_dim());
    DensePlan out{Eigen::MatrixXd::Zero(m, m), Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(m, n)};
    for (Eigen::Index i = 0; i < m; ++i) out.sigma_x(i, i) = plan.sigma_x()[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) {
        out.sigma_y(j, j) = plan.sigma_y()[static_cast<std::size_t>(j)];
        out.k_xy(j, j) = plan.k_xy()[static_cast<std::size_t>(j)];
    }
    return out;
}

Eigen::MatrixXd block_covariance(const DensePlan& plan) {
    const Eigen::Index m = plan.sigma_x.rows();
    const Eigen::Index n = plan.sigma_y.rows();
    if (plan.k_xy.rows() != m || plan.k_xy.cols() != n) {
        throw Error(ErrorCode::DimensionMismatch, "k_xy must be m x n");
    }
    Eigen::MatrixXd s(m + n, m + n);
    s.topLeftCorner(m, m) = plan.sigma_x;
    s.topRightCorner(m, n) = plan.k_xy;
    s.bottomLeftCorner(n, m) = plan.k_xy.transpose();
    s.bottomRightCorner(n, n) = plan.sigma_y;
    return s;
}

double log_det_spd(const Eigen::MatrixXd& m) {
    const Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::SingularPlan, "matrix is not positive definite");
    }
    const Eigen::VectorXd d = llt.matrixL().toDenseMatrix().diagonal();
    double s = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) s += 2.0 * std::log(d(i));
    return s;
}

double gaussian_kl(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "covariances must have equal shape");
    }
    const Eigen::LLT<Eigen::MatrixXd> llt_b(b);
    if (llt_b.info() != Eigen::Success) {
        throw Error(ErrorCode::SingularPlan, "reference covariance is not positive definite");
    }
    const double trace_term = llt_b.solve(a).trace();
    return 0.5 * (trace_term - static_cast<double>(a.rows()) + log_det_spd(b) - log_det_spd(a));
}

double joint_kl(const CouplingPlan& plan, const GaussianMeasure& mu, const GaussianMeasure& nu) {
    if (plan.x_dim() != mu.dim() || plan.y_dim() != nu.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "plan marginal dimensions must match (mu, nu)");
    }
    const Eigen::MatrixXd joint = block_covariance(to_dense(plan));
    const auto m = static_cast<Eigen::Index>(mu.dim());
    const auto n = static_cast<Eigen::Index>(nu.dim());
    Eigen::MatrixXd reference = Eigen::MatrixXd::Zero(m + n, m + n);
    for (Eigen::Index i = 0; i < m; ++i) reference(i, i) = mu.eigenvalue(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < n; ++j) reference(m + j, m + j) = nu.eigenvalue(static_cast<std::size_t>(j));
    return gaussian_kl(joint, reference);
}

namespace {

Eigen::MatrixXd inverse_sqrt_spd(const Eigen::MatrixXd& m) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
        throw Error(ErrorCode::SingularPlan, "marginal covariance is not positive definite");
    }
    return es.operatorInverseSqrt();
}

}  // namespace

std::vector<double> correlation_kappas(const DensePlan& plan) {
    const Eigen::MatrixXd whitened =
        inverse_sqrt_spd(plan.sigma_x) * plan.k_xy * inverse_sqrt_spd(plan.sigma_y);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(whitened);
    const Eigen::VectorXd sv = svd.singularValues();
    const auto r = static_cast<std::size_t>(std::min(plan.sigma_x.rows(), plan.sigma_y.rows()));
    std::vector<double> out(r, 0.0);
    for (std::size_t k = 0; k < r && static_cast<Eigen::Index>(k) < sv.size(); ++k) {
        out[k] = sv(static_cast<Eigen::Index>(k)) * sv(static_cast<Eigen::Index>(k));
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

}  // namespace gwgauss::dense
