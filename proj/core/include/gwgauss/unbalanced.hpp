#pragma once

// Entropic unbalanced inner-product Gromov-Wasserstein between scaled
// zero-mean Gaussians. The optimal plan is diagonal in the shared
// eigenbasis, so the problem splits into independent per-coordinate
// minimisations of g_+ (paired coordinates) and h (unpaired ones), followed
// by a scalar optimisation of the plan mass.

#include <optional>
#include <vector>

#include "gwgauss/gaussian.hpp"

namespace gwgauss {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Objective functions of one coordinate pair (a = lambda_mu,k, b = lambda_nu,k).
/// g_{-1}: marginal terms only; g_{1}: correlated branch; g_+: their
/// piecewise combination split on xy = eps/2; h: unpaired coordinate.
[[nodiscard]] double g_neg1(double x, double y, double a, double b, double epsilon, double tau);
[[nodiscard]] double g_pos1(double x, double y, double a, double b, double epsilon, double tau);
[[nodiscard]] double g_plus(double x, double y, double a, double b, double epsilon, double tau);
[[nodiscard]] double h_unpaired(double x, double a, double epsilon, double tau);

/// Stationary point of the (separable, convex) g_{-1}.
[[nodiscard]] Point2 minimize_g_neg1(double a, double b, double epsilon, double tau);

/// t(z) = c3 z^3 + c2 z^2 + c1 z + c0 whose positive root is tau / (x y)
/// at the minimiser of g_1.
struct BranchCubic {
    double c3 = 0.0;
    double c2 = 0.0;
    double c1 = 0.0;
    double c0 = 0.0;

    [[nodiscard]] double operator()(double z) const noexcept { return ((c3 * z + c2) * z + c1) * z + c0; }
    [[nodiscard]] double derivative(double z) const noexcept { return (3.0 * c3 * z + 2.0 * c2) * z + c1; }
    /// Sum of absolute term magnitudes at z; residuals are measured against this.
    [[nodiscard]] double scale(double z) const noexcept;
};

[[nodiscard]] BranchCubic branch_cubic(double a, double b, double epsilon, double tau);

/// Unique positive root of the branch cubic by bracketed Newton. Throws
/// NoPositiveRoot if the bracket cannot be formed or the residual check fails.
[[nodiscard]] double solve_branch_cubic(double a, double b, double epsilon, double tau);

/// Stationary point of the convex g_1 recovered from the cubic root.
[[nodiscard]] Point2 minimize_g_plus1(double a, double b, double epsilon, double tau);

enum class Branch { Correlated, Decoupled };

struct CoordSolution {
    double x = 0.0;              ///< optimal x-marginal eigenvalue
    std::optional<double> y;     ///< optimal y-marginal eigenvalue (absent for unpaired coordinates)
    double psi = 0.0;            ///< optimal cross-covariance entry
    Branch branch = Branch::Decoupled;
    double g_value = 0.0;        ///< objective at (x, y)
    /// g_+ evaluated at the other branch's stationary point; never below
    /// g_value. Equal to g_value for unpaired coordinates.
    double other_branch_value = 0.0;
};

/// Minimiser of g_+: the decoupled point when its product stays below eps/2,
/// the correlated point otherwise.
[[nodiscard]] CoordSolution minimize_g_plus(double a, double b, double epsilon, double tau);

/// Positive root of 2x^2 + ((tau+eps)/a) x - (tau+eps) = 0.
[[nodiscard]] double minimize_h(double a, double epsilon, double tau);

/// f(x) = upsilon x + tau KL(x||m_mu^2) + tau KL(x||m_nu^2) + eps KL(x||m_mu^2 m_nu^2)
[[nodiscard]] double mass_objective(double mass_squared, double upsilon, double m_mu, double m_nu,
                                    double epsilon, double tau);

/// argmin of mass_objective, i.e. the optimal squared plan mass.
[[nodiscard]] double optimal_mass(double upsilon, double m_mu, double m_nu, double epsilon, double tau);

struct UigwResult {
    double value = 0.0;
    double mass = 0.0;          ///< m_pi
    double mass_squared = 0.0;  ///< m_pi^2
    double upsilon = 0.0;
    std::vector<CoordSolution> coords;
    CouplingPlan plan;
    double epsilon = 0.0;
    double tau = 0.0;
    bool swapped = false;
    /// Marginal solutions are non-increasing in k within each branch class.
    bool order_consistent = true;
};

[[nodiscard]] UigwResult uigw_entropic(const GaussianMeasure& mu, const GaussianMeasure& nu,
                                       double epsilon, double tau);

}  // namespace gwgauss
