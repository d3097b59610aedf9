#include "gwgauss/unbalanced.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <sstream>

#include "gwgauss/error.hpp"

namespace gwgauss {

namespace {

void require_regularizers(double epsilon, double tau) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw Error(ErrorCode::NegativeEpsilon, "epsilon must be finite and >= 0");
    }
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw Error(ErrorCode::InvalidRegularizers, "tau must be finite and > 0");
    }
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << name << " must be positive, got " << v;
        throw Error(ErrorCode::InvalidArgument, os.str());
    }
}

// Positive root of x^2 + p x - q = 0 (p, q > 0), cancellation-free.
double positive_root(double p, double q) {
    return 2.0 * q / (p + std::sqrt(p * p + 4.0 * q));
}

double marginal_terms(double x, double y, double a, double b, double epsilon, double tau) {
    return x * x + y * y + (tau + epsilon) * (x / a + y / b - std::log((x / a) * (y / b)) - 2.0);
}

// Cross term of g_1: -2(xy - eps/2) + eps [log(xy) - log(eps/2)].
double correlated_term(double xy, double epsilon) {
    const double half_eps = 0.5 * epsilon;
    double t = -2.0 * (xy - half_eps);
    if (epsilon > 0.0) t += epsilon * std::log(xy / half_eps);
    return t;
}

}  // namespace

double g_neg1(double x, double y, double a, double b, double epsilon, double tau) {
    return marginal_terms(x, y, a, b, epsilon, tau);
}

double g_pos1(double x, double y, double a, double b, double epsilon, double tau) {
    return marginal_terms(x, y, a, b, epsilon, tau) + correlated_term(x * y, epsilon);
}

double g_plus(double x, double y, double a, double b, double epsilon, double tau) {
    const double xy = x * y;
    return xy < 0.5 * epsilon ? g_neg1(x, y, a, b, epsilon, tau) : g_pos1(x, y, a, b, epsilon, tau);
}

double h_unpaired(double x, double a, double epsilon, double tau) {
    return x * x + (tau + epsilon) * (x / a - std::log(x / a) - 1.0);
}

Point2 minimize_g_neg1(double a, double b, double epsilon, double tau) {
    require_positive(a, "a");
    require_positive(b, "b");
    require_regularizers(epsilon, tau);
    const double c = tau + epsilon;
    // 2x^2 + (c/a) x - c = 0
    return {positive_root(0.5 * c / a, 0.5 * c), positive_root(0.5 * c / b, 0.5 * c)};
}

double BranchCubic::scale(double z) const noexcept {
    const double az = std::abs(z);
    return std::abs(c3) * az * az * az + std::abs(c2) * az * az + std::abs(c1) * az + std::abs(c0);
}

BranchCubic branch_cubic(double a, double b, double epsilon, double tau) {
    const double c = tau + epsilon;
    const double c_sq = c * c;
    const double s = 1.0 / a + 1.0 / b;
    const double s_sq = s * s;
    return BranchCubic{tau, 8.0 * tau - c_sq / (a * b), 16.0 * tau - 2.0 * c_sq * s_sq,
                       -4.0 * c_sq * s_sq};
}

double solve_branch_cubic(double a, double b, double epsilon, double tau) {
    require_positive(a, "a");
    require_positive(b, "b");
    require_regularizers(epsilon, tau);
    const BranchCubic t = branch_cubic(a, b, epsilon, tau);

    // t(0) = c0 < 0 and t -> +inf, so grow an upper bracket geometrically.
    double lo = 0.0;
    double hi = 1.0;
    int grow = 0;
    while (t(hi) <= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++grow > 2100 || !std::isfinite(hi)) {
            throw Error(ErrorCode::NoPositiveRoot, "could not bracket the branch cubic root");
        }
    }

    double z = hi;
    for (int iter = 0; iter < 400; ++iter) {
        const double fz = t(z);
        if (fz == 0.0) break;
        if (fz < 0.0) lo = z; else hi = z;
        const double d = t.derivative(z);
        double next = (d != 0.0) ? z - fz / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - z);
        z = next;
        if (step <= 4.0 * std::numeric_limits<double>::epsilon() * z) break;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    }

    if (!(z > 0.0) || std::abs(t(z)) > 1e-10 * t.scale(z)) {
        std::ostringstream os;
        os << "branch cubic residual " << t(z) << " at z = " << z << " exceeds tolerance";
        throw Error(ErrorCode::NoPositiveRoot, os.str());
    }
    return z;
}

Point2 minimize_g_plus1(double a, double b, double epsilon, double tau) {
    const double z = solve_branch_cubic(a, b, epsilon, tau);
    const double c = tau + epsilon;
    // x^2 + (c / 2a) x - (tau / z + tau / 2) = 0, likewise for y.
    const double q = tau / z + 0.5 * tau;
    return {positive_root(0.5 * c / a, q), positive_root(0.5 * c / b, q)};
}

CoordSolution minimize_g_plus(double a, double b, double epsilon, double tau) {
    const Point2 decoupled = minimize_g_neg1(a, b, epsilon, tau);
    const Point2 correlated = minimize_g_plus1(a, b, epsilon, tau);
    const double half_eps = 0.5 * epsilon;

    CoordSolution out;
    const bool use_decoupled = decoupled.x * decoupled.y < half_eps;
    const Point2 chosen = use_decoupled ? decoupled : correlated;
    const Point2 other = use_decoupled ? correlated : decoupled;
    out.x = chosen.x;
    out.y = chosen.y;
    out.branch = use_decoupled ? Branch::Decoupled : Branch::Correlated;
    out.g_value = g_plus(chosen.x, chosen.y, a, b, epsilon, tau);
    out.other_branch_value = g_plus(other.x, other.y, a, b, epsilon, tau);
    if (!use_decoupled) {
        const double xy = chosen.x * chosen.y;
        const double kappa = epsilon > 0.0 ? std::max(1.0 - half_eps / xy, 0.0) : 1.0;
        out.psi = std::sqrt(kappa * xy);
    }
#ifndef NDEBUG
    // Both g_{-1} and g_1 have positive-definite Hessians at their stationary points.
    const double c = tau + epsilon;
    assert(2.0 + c / (decoupled.x * decoupled.x) > 0.0 && 2.0 + c / (decoupled.y * decoupled.y) > 0.0);
    const double hxx = 2.0 + tau / (correlated.x * correlated.x);
    const double hyy = 2.0 + tau / (correlated.y * correlated.y);
    assert(hxx > 0.0 && hxx * hyy - 4.0 > 0.0);
#endif
    return out;
}

double minimize_h(double a, double epsilon, double tau) {
    require_positive(a, "a");
    require_regularizers(epsilon, tau);
    const double c = tau + epsilon;
    return positive_root(0.5 * c / a, 0.5 * c);
}

double mass_objective(double mass_squared, double upsilon, double m_mu, double m_nu, double epsilon,
                      double tau) {
    const double a = m_mu * m_mu;
    const double b = m_nu * m_nu;
    return upsilon * mass_squared + tau * kl_mass(mass_squared, a) + tau * kl_mass(mass_squared, b) +
           epsilon * kl_mass(mass_squared, a * b);
}

double optimal_mass(double upsilon, double m_mu, double m_nu, double epsilon, double tau) {
    require_positive(m_mu, "m_mu");
    require_positive(m_nu, "m_nu");
    if (!(epsilon >= 0.0)) throw Error(ErrorCode::NegativeEpsilon, "epsilon must be >= 0");
    const double denom = 2.0 * tau + epsilon;
    if (!(denom > 0.0) || tau < 0.0) {
        throw Error(ErrorCode::InvalidRegularizers, "2 tau + eps must be positive");
    }
    const double log_a = 2.0 * std::log(m_mu);
    const double log_b = 2.0 * std::log(m_nu);
    return std::exp((tau * log_a + tau * log_b + epsilon * (log_a + log_b) - upsilon) / denom);
}

namespace {

bool non_increasing_within_branches(const std::vector<CoordSolution>& coords) {
    constexpr double rel = 1e-12;
    for (Branch cls : {Branch::Correlated, Branch::Decoupled}) {
        const CoordSolution* prev = nullptr;
        for (const auto& c : coords) {
            if (c.branch != cls) continue;
            if (prev != nullptr) {
                if (c.x > prev->x * (1.0 + rel)) return false;
                if (c.y && prev->y && *c.y > *prev->y * (1.0 + rel)) return false;
            }
            prev = &c;
        }
    }
    return true;
}

}  // namespace

UigwResult uigw_entropic(const GaussianMeasure& mu, const GaussianMeasure& nu, double epsilon,
                         double tau) {
    require_regularizers(epsilon, tau);
    const bool swapped = mu.dim() < nu.dim();
    const GaussianMeasure& big = swapped ? nu : mu;
    const GaussianMeasure& small = swapped ? mu : nu;
    const std::size_t m = big.dim();
    const std::size_t n = small.dim();

    std::vector<CoordSolution> coords;
    coords.reserve(m);
    double upsilon = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        coords.push_back(minimize_g_plus(big.eigenvalue(k), small.eigenvalue(k), epsilon, tau));
        upsilon += coords.back().g_value;
    }
    for (std::size_t k = n; k < m; ++k) {
        CoordSolution c;
        c.x = minimize_h(big.eigenvalue(k), epsilon, tau);
        c.g_value = h_unpaired(c.x, big.eigenvalue(k), epsilon, tau);
        c.other_branch_value = c.g_value;
        upsilon += c.g_value;
        coords.push_back(c);
    }

    const double mass_sq = optimal_mass(upsilon, big.mass(), small.mass(), epsilon, tau);
    const double value = mass_objective(mass_sq, upsilon, big.mass(), small.mass(), epsilon, tau);

    std::vector<double> sx(m);
    std::vector<double> sy(n);
    std::vector<double> kxy(n);
    for (std::size_t k = 0; k < m; ++k) sx[k] = coords[k].x;
    for (std::size_t k = 0; k < n; ++k) {
        sy[k] = *coords[k].y;
        kxy[k] = coords[k].psi;
    }
    const double mass = std::sqrt(mass_sq);
    const bool ordered = non_increasing_within_branches(coords);
    return UigwResult{value,
                      mass,
                      mass_sq,
                      upsilon,
                      std::move(coords),
                      CouplingPlan(mass, std::move(sx), std::move(sy), std::move(kxy)),
                      epsilon,
                      tau,
                      swapped,
                      ordered};
}

}  // namespace gwgauss
