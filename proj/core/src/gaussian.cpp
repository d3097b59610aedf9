#include "gwgauss/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "gwgauss/error.hpp"

namespace gwgauss {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonSymmetric: return "NonSymmetric";
        case ErrorCode::NonPositiveDefinite: return "NonPositiveDefinite";
        case ErrorCode::NonPositiveMass: return "NonPositiveMass";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InvalidPlan: return "InvalidPlan";
        case ErrorCode::SingularPlan: return "SingularPlan";
        case ErrorCode::UnbalancedInput: return "UnbalancedInput";
        case ErrorCode::NegativeEpsilon: return "NegativeEpsilon";
        case ErrorCode::MarginalMismatch: return "MarginalMismatch";
        case ErrorCode::InvalidRegularizers: return "InvalidRegularizers";
        case ErrorCode::NoPositiveRoot: return "NoPositiveRoot";
        case ErrorCode::InvalidWeights: return "InvalidWeights";
        case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
        case ErrorCode::EpsilonConditionViolated: return "EpsilonConditionViolated";
        case ErrorCode::TooManyIndices: return "TooManyIndices";
        case ErrorCode::InvalidInterval: return "InvalidInterval";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

namespace {

void require_positive_mass(double mass) {
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        std::ostringstream os;
        os << "mass must be positive and finite, got " << mass;
        throw Error(ErrorCode::NonPositiveMass, os.str());
    }
}

// Indices sorting `values` non-increasing; ties keep their original order.
std::vector<std::size_t> descending_order(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    return order;
}

}  // namespace

GaussianMeasure::GaussianMeasure(double mass, std::vector<double> spectrum, Eigen::MatrixXd basis)
    : mass_(mass), spectrum_(std::move(spectrum)), basis_(std::move(basis)) {
    require_positive_mass(mass_);
    if (spectrum_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "measure must have dimension >= 1");
    }
    const auto n = static_cast<Eigen::Index>(spectrum_.size());
    if (basis_.rows() != n || basis_.cols() != n) {
        throw Error(ErrorCode::DimensionMismatch, "basis must be dim x dim");
    }
    for (std::size_t i = 0; i < spectrum_.size(); ++i) {
        if (!(spectrum_[i] > kPositiveDefiniteFloor) || !std::isfinite(spectrum_[i])) {
            std::ostringstream os;
            os << "eigenvalue " << i << " = " << spectrum_[i] << " is not above "
               << kPositiveDefiniteFloor;
            throw Error(ErrorCode::NonPositiveDefinite, os.str());
        }
        if (i > 0 && spectrum_[i] > spectrum_[i - 1]) {
            throw Error(ErrorCode::InvalidArgument, "spectrum must be sorted non-increasing");
        }
    }
    const Eigen::MatrixXd gram = basis_.transpose() * basis_;
    const double dev = (gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (dev > kOrthogonalityTolerance) {
        throw Error(ErrorCode::InvalidArgument, "basis is not orthogonal");
    }
}

bool GaussianMeasure::is_probability() const noexcept {
    return std::abs(mass_ - 1.0) <= kUnitMassTolerance;
}

Eigen::MatrixXd GaussianMeasure::covariance() const {
    const Eigen::Map<const Eigen::VectorXd> lambda(spectrum_.data(),
                                                   static_cast<Eigen::Index>(spectrum_.size()));
    return basis_ * lambda.asDiagonal() * basis_.transpose();
}

GaussianMeasure GaussianMeasure::with_mass(double mass) const {
    return GaussianMeasure(mass, spectrum_, basis_);
}

double GaussianMeasure::trace_of_square() const noexcept {
    double s = 0.0;
    for (double l : spectrum_) s += l * l;
    return s;
}

double GaussianMeasure::log_det() const noexcept {
    double s = 0.0;
    for (double l : spectrum_) s += std::log(l);
    return s;
}

GaussianMeasure make_gaussian(double mass, const Eigen::MatrixXd& covariance) {
    require_positive_mass(mass);
    if (covariance.rows() != covariance.cols() || covariance.rows() == 0) {
        throw Error(ErrorCode::DimensionMismatch, "covariance must be a non-empty square matrix");
    }
    const double asym = (covariance - covariance.transpose()).cwiseAbs().maxCoeff();
    if (!(asym <= kSymmetryTolerance)) {
        std::ostringstream os;
        os << "covariance asymmetry " << asym << " exceeds " << kSymmetryTolerance;
        throw Error(ErrorCode::NonSymmetric, os.str());
    }
    const Eigen::MatrixXd sym = 0.5 * (covariance + covariance.transpose());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::InvalidArgument, "eigendecomposition failed");
    }
    const Eigen::VectorXd& values = solver.eigenvalues();
    const std::vector<double> raw(values.data(), values.data() + values.size());
    const auto order = descending_order(raw);

    const auto n = values.size();
    std::vector<double> spectrum(static_cast<std::size_t>(n));
    Eigen::MatrixXd basis(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto src = static_cast<Eigen::Index>(order[static_cast<std::size_t>(j)]);
        spectrum[static_cast<std::size_t>(j)] = values(src);
        basis.col(j) = solver.eigenvectors().col(src);
    }
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        if (!(spectrum[i] > kPositiveDefiniteFloor)) {
            std::ostringstream os;
            os << "covariance eigenvalue " << spectrum[i] << " is not above "
               << kPositiveDefiniteFloor;
            throw Error(ErrorCode::NonPositiveDefinite, os.str());
        }
    }
    return GaussianMeasure(mass, std::move(spectrum), std::move(basis));
}

GaussianMeasure gaussian_from_spectrum(double mass, std::vector<double> spectrum) {
    require_positive_mass(mass);
    if (spectrum.empty()) {
        throw Error(ErrorCode::InvalidArgument, "spectrum must be non-empty");
    }
    for (double l : spectrum) {
        if (!(l > kPositiveDefiniteFloor) || !std::isfinite(l)) {
            std::ostringstream os;
            os << "spectrum entry " << l << " is not above " << kPositiveDefiniteFloor;
            throw Error(ErrorCode::NonPositiveDefinite, os.str());
        }
    }
    const auto order = descending_order(spectrum);
    const auto n = static_cast<Eigen::Index>(spectrum.size());
    std::vector<double> sorted(spectrum.size());
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t j = 0; j < order.size(); ++j) {
        sorted[j] = spectrum[order[j]];
        basis(static_cast<Eigen::Index>(order[j]), static_cast<Eigen::Index>(j)) = 1.0;
    }
    return GaussianMeasure(mass, std::move(sorted), std::move(basis));
}

CouplingPlan::CouplingPlan(double mass, std::vector<double> sigma_x, std::vector<double> sigma_y,
                           std::vector<double> k_xy)
    : mass_(mass), sigma_x_(std::move(sigma_x)), sigma_y_(std::move(sigma_y)), k_xy_(std::move(k_xy)) {
    require_positive_mass(mass_);
    if (sigma_x_.empty() || sigma_y_.empty()) {
        throw Error(ErrorCode::InvalidPlan, "plan marginals must be non-empty");
    }
    if (sigma_y_.size() > sigma_x_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "plan requires dim(y) <= dim(x)");
    }
    if (k_xy_.size() != sigma_y_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "k_xy must have one entry per y coordinate");
    }
    for (double s : sigma_x_) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw Error(ErrorCode::InvalidPlan, "sigma_x entries must be positive");
        }
    }
    for (double s : sigma_y_) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw Error(ErrorCode::InvalidPlan, "sigma_y entries must be positive");
        }
    }
    for (std::size_t k = 0; k < k_xy_.size(); ++k) {
        const double c = k_xy_[k];
        if (!(c >= 0.0) || !std::isfinite(c)) {
            throw Error(ErrorCode::InvalidPlan, "k_xy entries must be non-negative");
        }
        const double bound = sigma_x_[k] * sigma_y_[k];
        if (c * c > bound * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "k_xy[" << k << "]^2 = " << c * c << " exceeds sigma_x*sigma_y = " << bound;
            throw Error(ErrorCode::InvalidPlan, os.str());
        }
    }
}

double CouplingPlan::kappa(std::size_t k) const {
    const double c = k_xy_.at(k);
    return std::min(1.0, c * c / (sigma_x_[k] * sigma_y_[k]));
}

std::vector<double> CouplingPlan::kappas() const {
    std::vector<double> out(k_xy_.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = kappa(k);
    return out;
}

double CouplingPlan::max_kappa() const {
    double m = 0.0;
    for (std::size_t k = 0; k < k_xy_.size(); ++k) m = std::max(m, kappa(k));
    return m;
}

double psi(double x) {
    if (!(x > 0.0)) throw Error(ErrorCode::InvalidArgument, "psi requires x > 0");
    return x - std::log(x) - 1.0;
}

double kl_mass(double a, double b) {
    if (!(b > 0.0) || a < 0.0) throw Error(ErrorCode::InvalidArgument, "kl_mass requires a >= 0, b > 0");
    if (a == 0.0) return b;
    return a * std::log(a / b) - a + b;
}

double kl_normalized(const GaussianMeasure& alpha, const GaussianMeasure& beta) {
    if (alpha.dim() != beta.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "KL requires measures of equal dimension");
    }
    // tr(S_a S_b^{-1}) = sum_ij la_i / lb_j <u_i, v_j>^2 with u, v the two eigenbases.
    const Eigen::MatrixXd overlap = alpha.basis().transpose() * beta.basis();
    double trace_term = 0.0;
    for (Eigen::Index i = 0; i < overlap.rows(); ++i) {
        for (Eigen::Index j = 0; j < overlap.cols(); ++j) {
            const double o = overlap(i, j);
            trace_term += alpha.eigenvalue(static_cast<std::size_t>(i)) /
                          beta.eigenvalue(static_cast<std::size_t>(j)) * o * o;
        }
    }
    const double k = static_cast<double>(alpha.dim());
    return 0.5 * (trace_term - k + beta.log_det() - alpha.log_det());
}

double kl_gaussian(const GaussianMeasure& alpha, const GaussianMeasure& beta) {
    return alpha.mass() * kl_normalized(alpha, beta) + kl_mass(alpha.mass(), beta.mass());
}

double kl_quadratic(const GaussianMeasure& alpha, const GaussianMeasure& beta) {
    const double dm = alpha.mass() - beta.mass();
    return 2.0 * alpha.mass() * kl_gaussian(alpha, beta) + dm * dm;
}

double igw_cost_of_plan(const CouplingPlan& plan) {
    double cost = 0.0;
    for (double s : plan.sigma_x()) cost += s * s;
    for (double s : plan.sigma_y()) cost += s * s;
    for (double c : plan.k_xy()) cost -= 2.0 * c * c;
    return std::max(cost, 0.0);
}

PlanKlTerms plan_kl_decomposition(const CouplingPlan& plan, const GaussianMeasure& mu,
                                  const GaussianMeasure& nu) {
    if (plan.x_dim() != mu.dim() || plan.y_dim() != nu.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "plan marginal dimensions must match (mu, nu)");
    }
    PlanKlTerms out;
    for (std::size_t i = 0; i < mu.dim(); ++i) out.kl_x += 0.5 * psi(plan.sigma_x()[i] / mu.eigenvalue(i));
    for (std::size_t j = 0; j < nu.dim(); ++j) out.kl_y += 0.5 * psi(plan.sigma_y()[j] / nu.eigenvalue(j));
    for (std::size_t k = 0; k < plan.y_dim(); ++k) {
        const double kappa = plan.kappa(k);
        if (kappa >= kSingularKappa) {
            throw Error(ErrorCode::SingularPlan, "plan correlation kappa reaches 1");
        }
        out.mutual -= 0.5 * std::log1p(-kappa);
    }
    return out;
}

}  // namespace gwgauss
