#pragma once

// Scaled zero-mean Gaussian measures, diagonal Gaussian coupling plans, and
// the KL / transport-cost primitives shared by the closed-form solvers.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gwgauss {

inline constexpr double kSymmetryTolerance = 1e-8;
inline constexpr double kPositiveDefiniteFloor = 1e-12;
inline constexpr double kOrthogonalityTolerance = 1e-10;
inline constexpr double kUnitMassTolerance = 1e-12;
inline constexpr double kSingularKappa = 1.0 - 1e-12;

/// m * N(0, basis * diag(spectrum) * basis^T) with the spectrum sorted
/// non-increasing. Columns of `basis` are the eigenvectors, so `basis^T x`
/// maps input coordinates to eigencoordinates.
class GaussianMeasure {
public:
    /// Validates every invariant; throws gwgauss::Error on violation.
    GaussianMeasure(double mass, std::vector<double> spectrum, Eigen::MatrixXd basis);

    [[nodiscard]] double mass() const noexcept { return mass_; }
    [[nodiscard]] std::size_t dim() const noexcept { return spectrum_.size(); }
    [[nodiscard]] std::span<const double> spectrum() const noexcept { return spectrum_; }
    [[nodiscard]] double eigenvalue(std::size_t i) const { return spectrum_.at(i); }
    [[nodiscard]] const Eigen::MatrixXd& basis() const noexcept { return basis_; }
    [[nodiscard]] bool is_probability() const noexcept;

    [[nodiscard]] Eigen::MatrixXd covariance() const;

    /// Same shape, total mass replaced.
    [[nodiscard]] GaussianMeasure with_mass(double mass) const;
    /// t * measure.
    [[nodiscard]] GaussianMeasure scaled(double t) const { return with_mass(t * mass_); }

    [[nodiscard]] double trace_of_square() const noexcept;
    [[nodiscard]] double log_det() const noexcept;

private:
    double mass_;
    std::vector<double> spectrum_;
    Eigen::MatrixXd basis_;
};

/// Eigendecomposes `covariance`. Equal eigenvalues keep the solver's order
/// (stable sort), which only permutes within ties.
[[nodiscard]] GaussianMeasure make_gaussian(double mass, const Eigen::MatrixXd& covariance);

/// Builds a measure directly from eigenvalues, already in eigencoordinates.
/// Unsorted input is stably sorted; the basis becomes the matching permutation.
[[nodiscard]] GaussianMeasure gaussian_from_spectrum(double mass, std::vector<double> spectrum);

/// Gaussian plan in the shared eigenbasis: block covariance
/// [[diag(sigma_x), K], [K^T, diag(sigma_y)]] with K the m x n matrix whose
/// leading n x n block is diag(k_xy), times total mass.
class CouplingPlan {
public:
    CouplingPlan(double mass, std::vector<double> sigma_x, std::vector<double> sigma_y,
                 std::vector<double> k_xy);

    [[nodiscard]] double mass() const noexcept { return mass_; }
    [[nodiscard]] std::size_t x_dim() const noexcept { return sigma_x_.size(); }
    [[nodiscard]] std::size_t y_dim() const noexcept { return sigma_y_.size(); }
    [[nodiscard]] std::span<const double> sigma_x() const noexcept { return sigma_x_; }
    [[nodiscard]] std::span<const double> sigma_y() const noexcept { return sigma_y_; }
    [[nodiscard]] std::span<const double> k_xy() const noexcept { return k_xy_; }

    /// Squared correlation k_xy[k]^2 / (sigma_x[k] sigma_y[k]), in [0, 1].
    [[nodiscard]] double kappa(std::size_t k) const;
    [[nodiscard]] std::vector<double> kappas() const;
    [[nodiscard]] double max_kappa() const;

private:
    double mass_;
    std::vector<double> sigma_x_;
    std::vector<double> sigma_y_;
    std::vector<double> k_xy_;
};

/// Psi(x) = x - log x - 1.
[[nodiscard]] double psi(double x);

/// Generalised KL between positive scalars: a log(a/b) - a + b.
[[nodiscard]] double kl_mass(double a, double b);

/// KL between the normalised Gaussians (ignores masses).
[[nodiscard]] double kl_normalized(const GaussianMeasure& alpha, const GaussianMeasure& beta);

/// Generalised KL between scaled Gaussians:
/// m_a KL(normalised) + KL(m_a || m_b).
[[nodiscard]] double kl_gaussian(const GaussianMeasure& alpha, const GaussianMeasure& beta);

/// KL(alpha (x) alpha || beta (x) beta) = 2 m_a KL(alpha || beta) + (m_a - m_b)^2.
[[nodiscard]] double kl_quadratic(const GaussianMeasure& alpha, const GaussianMeasure& beta);

/// E_pi[(<X,X'> - <Y,Y'>)^2] for the normalised plan:
/// sum sigma_x^2 + sum sigma_y^2 - 2 sum k_xy^2.
[[nodiscard]] double igw_cost_of_plan(const CouplingPlan& plan);

struct PlanKlTerms {
    double kl_x = 0.0;
    double kl_y = 0.0;
    double mutual = 0.0;  ///< -1/2 sum log(1 - kappa_k)

    [[nodiscard]] double total() const noexcept { return kl_x + kl_y + mutual; }
};

/// KL(normalised plan || mu (x) nu) split into marginal and correlation parts.
/// The plan is read in the eigencoordinates of mu and nu.
[[nodiscard]] PlanKlTerms plan_kl_decomposition(const CouplingPlan& plan,
                                                const GaussianMeasure& mu,
                                                const GaussianMeasure& nu);

}  // namespace gwgauss
