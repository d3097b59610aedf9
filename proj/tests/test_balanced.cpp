#include <doctest.h>

#include <cmath>
#include <random>

#include "gwgauss/balanced.hpp"
#include "gwgauss/dense.hpp"
#include "gwgauss/error.hpp"
#include "gwgauss/minimize.hpp"

using namespace gwgauss;

namespace {

std::vector<double> random_spectrum(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.1, 10.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

}  // namespace

TEST_CASE("igw: threshold boundary gives kappa 0") {
    const auto g = gaussian_from_spectrum(1.0, {1.0});
    const IgwResult r = igw_entropic(g, g, 4.0);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(r.kappas[0] == 0.0);
    CHECK_FALSE(r.degenerate);
}

TEST_CASE("igw: eps = 0 reduces to the trace difference") {
    const IgwResult r =
        igw_entropic(gaussian_from_spectrum(1.0, {2.0, 1.0}), gaussian_from_spectrum(1.0, {3.0}), 0.0);
    CHECK(r.value == 2.0);
    CHECK(r.kappas == std::vector<double>{1.0});
    CHECK(r.degenerate);
    CHECK_FALSE(r.swapped);
}

TEST_CASE("igw: 1-D example matches golden-section minimisation") {
    const auto g = gaussian_from_spectrum(1.0, {2.0});
    const IgwResult r = igw_entropic(g, g, 1.0);
    CHECK(r.value == doctest::Approx(8.0 - 2.0 * 3.75 + 0.5 * std::log(16.0)).epsilon(1e-14));
    CHECK(r.value == doctest::Approx(1.886294).epsilon(1e-6));
    const auto m = oracle::golden_section_min([](double k) { return 8.0 - 8.0 * k - 0.5 * std::log1p(-k); },
                                              0.0, 1.0, 1e-12);
    CHECK(std::abs(m.f - r.value) < 1e-8);
    CHECK(std::abs(m.x - r.kappas[0]) < 1e-7);
    CHECK(r.kappas[0] == doctest::Approx(0.9375));
}

TEST_CASE("igw: swaps when the second measure is larger") {
    const auto small = gaussian_from_spectrum(1.0, {3.0});
    const auto big = gaussian_from_spectrum(1.0, {2.0, 1.0});
    const IgwResult a = igw_entropic(small, big, 0.7);
    const IgwResult b = igw_entropic(big, small, 0.7);
    CHECK(a.swapped);
    CHECK_FALSE(b.swapped);
    CHECK(a.value == b.value);
    CHECK(a.plan.x_dim() == 2);
}

TEST_CASE("igw: input validation") {
    const auto unit = gaussian_from_spectrum(1.0, {1.0});
    const auto heavy = gaussian_from_spectrum(2.0, {1.0});
    CHECK_THROWS_AS((void)igw_entropic(unit, heavy, 1.0), Error);
    try {
        (void)igw_entropic(unit, heavy, 1.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnbalancedInput);
    }
    try {
        (void)igw_entropic(unit, unit, -1.0);
        FAIL("expected NegativeEpsilon");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NegativeEpsilon);
    }
}

TEST_CASE("igw: value is non-decreasing in epsilon and plans stay valid") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    for (int i = 0; i < 100; ++i) {
        const auto mu = gaussian_from_spectrum(1.0, random_spectrum(rng, dim(rng)));
        const auto nu = gaussian_from_spectrum(1.0, random_spectrum(rng, dim(rng)));
        double prev = -1.0;
        for (double eps : {0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0}) {
            const IgwResult r = igw_entropic(mu, nu, eps);
            CHECK(r.value >= prev - 1e-12 * std::max(1.0, prev));
            CHECK(r.value >= 0.0);
            for (std::size_t k = 0; k < r.plan.y_dim(); ++k) {
                CHECK(r.plan.k_xy()[k] * r.plan.k_xy()[k] <= r.plan.sigma_x()[k] * r.plan.sigma_y()[k] * (1 + 1e-12));
            }
            prev = r.value;
        }
    }
}

TEST_CASE("igw: eps = 0 equals the trace expression exactly") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
        auto lm = random_spectrum(rng, 1 + i % 5);
        auto ln = random_spectrum(rng, 1 + (i / 5) % 5);
        const auto mu = gaussian_from_spectrum(1.0, lm);
        const auto nu = gaussian_from_spectrum(1.0, ln);
        double expected = mu.trace_of_square() + nu.trace_of_square();
        for (std::size_t k = 0; k < std::min(mu.dim(), nu.dim()); ++k) {
            expected -= 2.0 * mu.eigenvalue(k) * nu.eigenvalue(k);
        }
        CHECK(igw_entropic(mu, nu, 0.0).value == doctest::Approx(std::max(expected, 0.0)).epsilon(1e-14));
    }
}

TEST_CASE("igw: value = plan cost + entropic term") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> e(0.01, 10.0);
    for (int i = 0; i < 100; ++i) {
        const auto mu = gaussian_from_spectrum(1.0, random_spectrum(rng, 1 + i % 6));
        const auto nu = gaussian_from_spectrum(1.0, random_spectrum(rng, 1 + (i / 6) % 6));
        const double eps = e(rng);
        const IgwResult r = igw_entropic(mu, nu, eps);
        double mutual = 0.0;
        for (double k : r.kappas) mutual -= 0.5 * std::log1p(-k);
        CHECK(std::abs(igw_cost_of_plan(r.plan) + eps * mutual - r.value) <= 1e-10 * std::max(1.0, r.value));
    }
}

TEST_CASE("verify_trace_bound: optimal plan attains the bound") {
    const auto mu = gaussian_from_spectrum(1.0, {3.0, 2.0, 0.5});
    const auto nu = gaussian_from_spectrum(1.0, {4.0, 1.0});
    const IgwResult r = igw_entropic(mu, nu, 1.3);
    const TraceBound tb = verify_trace_bound(r.plan, mu, nu);
    CHECK(tb.attained);
    CHECK(tb.trace == doctest::Approx(tb.bound).epsilon(1e-12));
}

TEST_CASE("verify_trace_bound: cross-paired plan falls short") {
    const auto mu = gaussian_from_spectrum(1.0, {2.0, 1.0});
    const auto nu = gaussian_from_spectrum(1.0, {2.0, 1.0});
    dense::DensePlan plan{mu.covariance(), nu.covariance(), Eigen::MatrixXd::Zero(2, 2)};
    // Pair x-coordinate 0 with y-coordinate 1 and vice versa, kappa = 0.5 each.
    plan.k_xy(0, 1) = std::sqrt(0.5 * 2.0 * 1.0);
    plan.k_xy(1, 0) = std::sqrt(0.5 * 1.0 * 2.0);
    const TraceBound tb = verify_trace_bound(plan, mu, nu);
    CHECK(tb.trace == doctest::Approx(2.0));
    CHECK(tb.bound == doctest::Approx(0.5 * 4.0 + 0.5 * 1.0));
    CHECK(tb.trace < tb.bound);
    CHECK_FALSE(tb.attained);
}

TEST_CASE("verify_trace_bound: zero plan and marginal mismatch") {
    const auto mu = gaussian_from_spectrum(1.0, {2.0, 1.0});
    const auto nu = gaussian_from_spectrum(1.0, {1.0});
    const TraceBound tb = verify_trace_bound(CouplingPlan(1.0, {2.0, 1.0}, {1.0}, {0.0}), mu, nu);
    CHECK(tb.trace == 0.0);
    CHECK(tb.bound == 0.0);
    CHECK(tb.attained);
    try {
        (void)verify_trace_bound(CouplingPlan(1.0, {2.5, 1.0}, {1.0}, {0.0}), mu, nu);
        FAIL("expected MarginalMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MarginalMismatch);
    }
}

TEST_CASE("plan_log_det examples") {
    CHECK(plan_log_det(CouplingPlan(1.0, {2.0, 3.0}, {5.0}, {0.0})) ==
          doctest::Approx(std::log(2.0) + std::log(3.0) + std::log(5.0)));
    CHECK(plan_log_det(CouplingPlan(1.0, {1.0}, {1.0}, {std::sqrt(0.75)})) ==
          doctest::Approx(std::log(0.25)).epsilon(1e-14));
    const CouplingPlan p(1.0, {3.0, 1.5, 0.7}, {2.0, 0.4}, {1.1, 0.3});
    const double dense = dense::log_det_spd(dense::block_covariance(dense::to_dense(p)));
    CHECK(std::abs(plan_log_det(p) - dense) < 1e-9);
    try {
        (void)plan_log_det(CouplingPlan(1.0, {1.0}, {1.0}, {1.0}));
        FAIL("expected SingularPlan");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularPlan);
    }
}

TEST_CASE("igw: kappas are golden-section argmins on a randomized grid") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> lam(0.1, 10.0);
    std::uniform_real_distribution<double> e(0.0, 10.0);
    for (int i = 0; i < 200; ++i) {
        const double a = lam(rng);
        const double b = lam(rng);
        const double eps = e(rng);
        const IgwResult r = igw_entropic(gaussian_from_spectrum(1.0, {a}), gaussian_from_spectrum(1.0, {b}), eps);
        const auto m = oracle::golden_section_min(
            [&](double k) { return -2.0 * a * b * k - 0.5 * eps * std::log1p(-k); }, 0.0, 1.0, 1e-12);
        CHECK(std::abs(m.x - r.kappas[0]) < 1e-7);
    }
}
