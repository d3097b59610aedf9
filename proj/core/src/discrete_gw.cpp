#include "gwgauss/discrete_gw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "gwgauss/error.hpp"

namespace gwgauss::oracle {

DiscreteMeasure::DiscreteMeasure(Eigen::MatrixXd points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
    if (weights_.size() < 2) throw Error(ErrorCode::InvalidArgument, "discrete measure needs >= 2 points");
    if (static_cast<std::size_t>(points_.rows()) != weights_.size()) {
        throw Error(ErrorCode::InvalidArgument, "one weight per point required");
    }
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::InvalidArgument, "weights must be >= 0");
    }
}

double DiscreteMeasure::total_mass() const noexcept {
    return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

Eigen::MatrixXd DiscreteMeasure::second_moment() const {
    const Eigen::Map<const Eigen::VectorXd> w(weights_.data(), static_cast<Eigen::Index>(weights_.size()));
    return points_.transpose() * w.asDiagonal() * points_;
}

namespace {

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

DiscreteMeasure quantize_gaussian(const GaussianMeasure& measure, int points_per_dim) {
    const std::size_t d = measure.dim();
    if (d > 3) throw Error(ErrorCode::DimensionTooLarge, "quantization supports dim <= 3");
    if (points_per_dim < 8) throw Error(ErrorCode::InvalidArgument, "points_per_dim must be >= 8");
    const auto n = static_cast<std::size_t>(points_per_dim);

    // Per-axis standardised nodes and cell probabilities.
    std::vector<double> node(n);
    std::vector<double> prob(n);
    const double h = 2.0 * kQuantizationRange / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) node[i] = -kQuantizationRange + h * static_cast<double>(i);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = i == 0 ? 0.0 : std_normal_cdf(0.5 * (node[i - 1] + node[i]));
        const double hi = i + 1 == n ? 1.0 : std_normal_cdf(0.5 * (node[i] + node[i + 1]));
        prob[i] = hi - lo;
    }

    std::size_t total = 1;
    for (std::size_t k = 0; k < d; ++k) total *= n;
    Eigen::MatrixXd coords(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(d));
    std::vector<double> weights(total);
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t p = 0; p < total; ++p) {
        double w = measure.mass();
        for (std::size_t k = 0; k < d; ++k) {
            coords(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(k)) =
                std::sqrt(measure.eigenvalue(k)) * node[idx[k]];
            w *= prob[idx[k]];
        }
        weights[p] = w;
        for (std::size_t k = 0; k < d && ++idx[k] == n; ++k) idx[k] = 0;
    }
    // Rows are eigencoordinates; rotate into the ambient basis.
    Eigen::MatrixXd points = coords * measure.basis().transpose();
    return DiscreteMeasure(std::move(points), std::move(weights));
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> log_weights(const std::vector<double>& w) {
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] > 0.0 ? std::log(w[i]) : kNegInf;
    return out;
}

struct Sinkhorn {
    const Eigen::MatrixXd& cost;
    const std::vector<double>& lp;
    const std::vector<double>& lq;
    double eps;

    // f_i = -eps log sum_j exp((g_j - C_ij)/eps + lq_j)
    void update_f(Eigen::VectorXd& f, const Eigen::VectorXd& g) const {
        const Eigen::Index n = cost.rows();
        const Eigen::Index m = cost.cols();
        std::vector<double> t(static_cast<std::size_t>(m));
        for (Eigen::Index i = 0; i < n; ++i) {
            double mx = kNegInf;
            for (Eigen::Index j = 0; j < m; ++j) {
                t[j] = (g(j) - cost(i, j)) / eps + lq[j];
                mx = std::max(mx, t[j]);
            }
            double s = 0.0;
            for (Eigen::Index j = 0; j < m; ++j) s += std::exp(t[j] - mx);
            f(i) = -eps * (mx + std::log(s));
        }
    }

    void update_g(const Eigen::VectorXd& f, Eigen::VectorXd& g) const {
        const Eigen::Index n = cost.rows();
        const Eigen::Index m = cost.cols();
        Eigen::VectorXd mx = Eigen::VectorXd::Constant(m, kNegInf);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (lp[i] == kNegInf) continue;
            for (Eigen::Index j = 0; j < m; ++j) mx(j) = std::max(mx(j), (f(i) - cost(i, j)) / eps + lp[i]);
        }
        Eigen::VectorXd s = Eigen::VectorXd::Zero(m);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (lp[i] == kNegInf) continue;
            for (Eigen::Index j = 0; j < m; ++j) s(j) += std::exp((f(i) - cost(i, j)) / eps + lp[i] - mx(j));
        }
        for (Eigen::Index j = 0; j < m; ++j) g(j) = -eps * (mx(j) + std::log(s(j)));
    }

    [[nodiscard]] Eigen::MatrixXd plan(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const {
        Eigen::MatrixXd pi(cost.rows(), cost.cols());
        for (Eigen::Index i = 0; i < cost.rows(); ++i) {
            for (Eigen::Index j = 0; j < cost.cols(); ++j) {
                const double l = (f(i) + g(j) - cost(i, j)) / eps + lp[i] + lq[j];
                pi(i, j) = l == kNegInf ? 0.0 : std::exp(l);
            }
        }
        return pi;
    }
};

double marginal_l1(const Eigen::MatrixXd& pi, const std::vector<double>& p, const std::vector<double>& q) {
    double row = 0.0;
    double col = 0.0;
    const Eigen::VectorXd r = pi.rowwise().sum();
    const Eigen::VectorXd c = pi.colwise().sum().transpose();
    for (Eigen::Index i = 0; i < r.size(); ++i) row += std::abs(r(i) - p[i]);
    for (Eigen::Index j = 0; j < c.size(); ++j) col += std::abs(c(j) - q[j]);
    return std::max(row, col);
}

// Generalised KL(pi || p q^T).
double plan_kl(const Eigen::MatrixXd& pi, const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < pi.rows(); ++i) {
        for (Eigen::Index j = 0; j < pi.cols(); ++j) {
            const double v = pi(i, j);
            const double r = p[i] * q[j];
            if (v > 0.0) s += v * std::log(v / r) - v + r;
            else s += r;
        }
    }
    return s;
}

// Aligned fully correlated cross moment sum_k sqrt(a_k b_k) u_k v_k^T.
Eigen::MatrixXd correlated_start(const Eigen::MatrixXd& mx, const Eigen::MatrixXd& my) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ex(mx);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ey(my);
    const Eigen::Index dx = mx.rows();
    const Eigen::Index dy = my.rows();
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(dx, dy);
    for (Eigen::Index r = 0; r < std::min(dx, dy); ++r) {
        // Eigen orders eigenvalues ascending; pair the largest first.
        const Eigen::Index ix = dx - 1 - r;
        const Eigen::Index iy = dy - 1 - r;
        const double s = std::sqrt(std::max(ex.eigenvalues()(ix), 0.0) * std::max(ey.eigenvalues()(iy), 0.0));
        k += s * ex.eigenvectors().col(ix) * ey.eigenvectors().col(iy).transpose();
    }
    return k;
}

}  // namespace

DiscreteGwResult discrete_entropic_gw(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double epsilon,
                                      const DiscreteGwOptions& options) {
    if (std::abs(mu.total_mass() - 1.0) > 1e-9 || std::abs(nu.total_mass() - 1.0) > 1e-9) {
        throw Error(ErrorCode::UnbalancedInput, "discrete entropic GW needs probability measures");
    }
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw Error(ErrorCode::NegativeEpsilon, "discrete entropic GW needs epsilon > 0");
    }
    const Eigen::MatrixXd& x = mu.points();
    const Eigen::MatrixXd& y = nu.points();
    const std::vector<double>& p = mu.weights();
    const std::vector<double>& q = nu.weights();
    const std::vector<double> lp = log_weights(p);
    const std::vector<double> lq = log_weights(q);
    const Eigen::MatrixXd mx = mu.second_moment();
    const Eigen::MatrixXd my = nu.second_moment();
    const double moments = mx.squaredNorm() + my.squaredNorm();

    const auto n = static_cast<Eigen::Index>(mu.size());
    const auto m = static_cast<Eigen::Index>(nu.size());
    Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(m);
    Eigen::MatrixXd k = correlated_start(mx, my);

    DiscreteGwResult best;
    best.value = std::numeric_limits<double>::infinity();
    SolverReport report;
    bool stationary = false;
    for (int outer = 0; outer < options.max_iter; ++outer) {
        const Eigen::MatrixXd cost = -4.0 * (x * k * y.transpose());
        const Sinkhorn sk{cost, lp, lq, epsilon};
        Eigen::MatrixXd pi;
        double err = std::numeric_limits<double>::infinity();
        for (int it = 0; it < options.inner_max_iter; ++it) {
            sk.update_f(f, g);
            sk.update_g(f, g);
            if (it % 10 == 9 || it + 1 == options.inner_max_iter) {
                pi = sk.plan(f, g);
                err = marginal_l1(pi, p, q);
                if (err <= options.inner_tol) break;
            }
        }
        if (pi.size() == 0) pi = sk.plan(f, g);

        const Eigen::MatrixXd k_new = x.transpose() * pi * y;
        const double value = moments - 2.0 * k_new.squaredNorm() + epsilon * plan_kl(pi, p, q);
        report.iterations = outer + 1;
        if (!report.objective_trace.empty()) {
            // Changes below the inner solver's accuracy are noise: the
            // previous iterate is stationary to working precision.
            const double prev = report.objective_trace.back();
            const double noise = options.stall_tol * std::max(1.0, std::abs(prev));
            if (value > prev + noise) break;
            if (value >= prev - noise) {
                stationary = true;
                break;
            }
        }
        report.objective_trace.push_back(value);
        best.value = value;
        best.coupling = pi;
        report.marginal_error = marginal_l1(pi, p, q);

        const double change = (k_new - k).norm();
        k = k_new;
        if (change <= options.stationarity_tol * std::max(1.0, k.norm())) {
            stationary = true;
            break;
        }
    }
    report.converged = stationary && report.marginal_error <= options.tol;
    best.report = std::move(report);
    return best;
}

}  // namespace gwgauss::oracle
