#include <doctest.h>

#include <cmath>
#include <random>

#include "gwgauss/error.hpp"
#include "gwgauss/minimize.hpp"
#include "gwgauss/unbalanced.hpp"

using namespace gwgauss;

namespace {

const double kGolden = 0.5 * (std::sqrt(5.0) - 1.0);

struct Params {
    double a, b, eps, tau;
};

std::vector<Params> random_params(std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> la(std::log(0.1), std::log(10.0));
    std::uniform_real_distribution<double> le(std::log(0.01), std::log(10.0));
    std::vector<Params> out;
    for (int i = 0; i < n; ++i) out.push_back({std::exp(la(rng)), std::exp(la(rng)), std::exp(le(rng)), std::exp(le(rng))});
    return out;
}

}  // namespace

TEST_CASE("g_neg1 minimiser: golden-ratio example and symmetry") {
    const Point2 p = minimize_g_neg1(1.0, 1.0, 1.0, 1.0);
    CHECK(p.x == doctest::Approx(kGolden).epsilon(1e-15));
    CHECK(p.y == p.x);
    CHECK(p.x == doctest::Approx(0.618034).epsilon(1e-6));
    const Point2 q = minimize_g_neg1(2.5, 2.5, 0.3, 0.9);
    CHECK(q.x == q.y);
}

TEST_CASE("g_neg1 minimiser matches the textbook quadratic root") {
    for (const auto& p : random_params(1, 50)) {
        const double c = p.tau + p.eps;
        const double displayed = -c / (4.0 * p.a) + 0.5 * std::sqrt(2.0 * c + c * c / (4.0 * p.a * p.a));
        CHECK(minimize_g_neg1(p.a, p.b, p.eps, p.tau).x == doctest::Approx(displayed).epsilon(1e-12));
    }
}

TEST_CASE("g_neg1 minimiser: zero gradient and grid agreement") {
    for (const auto& p : random_params(2, 30)) {
        const Point2 s = minimize_g_neg1(p.a, p.b, p.eps, p.tau);
        const double h = 1e-6;
        const auto g = [&](double x, double y) { return g_neg1(x, y, p.a, p.b, p.eps, p.tau); };
        const double gx = (g(s.x * (1 + h), s.y) - g(s.x * (1 - h), s.y)) / (2 * h * s.x);
        const double gy = (g(s.x, s.y * (1 + h)) - g(s.x, s.y * (1 - h))) / (2 * h * s.y);
        CHECK(std::abs(gx) < 1e-6 * std::max(1.0, std::abs(g(s.x, s.y))));
        CHECK(std::abs(gy) < 1e-6 * std::max(1.0, std::abs(g(s.x, s.y))));
        const double hi = 10.0 * std::max(p.a, p.b) + 10.0;
        const auto grid = oracle::grid_refine_min2d(g, {1e-9, hi, 1e-9, hi}, 14, 61);
        CHECK(std::abs(grid.x - s.x) < 1e-6);
        CHECK(std::abs(grid.y - s.y) < 1e-6);
    }
}

TEST_CASE("branch cubic: residual, positive root, eps = 0") {
    for (const auto& p : random_params(3, 100)) {
        const double z = solve_branch_cubic(p.a, p.b, p.eps, p.tau);
        const BranchCubic t = branch_cubic(p.a, p.b, p.eps, p.tau);
        CHECK(z > 0.0);
        CHECK(std::abs(t(z)) <= 1e-10 * t.scale(z));
        CHECK(t(0.0) < 0.0);
        const double z0 = solve_branch_cubic(p.a, p.b, 0.0, p.tau);
        CHECK(z0 > 0.0);
    }
}

TEST_CASE("branch cubic: symmetric case back-substitutes") {
    const double a = 1.7;
    const double tau = 0.8;
    const double eps = 0.3;
    const double z = solve_branch_cubic(a, a, eps, tau);
    const Point2 p = minimize_g_plus1(a, a, eps, tau);
    CHECK(p.x == doctest::Approx(p.y).epsilon(1e-15));
    CHECK(z == doctest::Approx(tau / (p.x * p.x)).epsilon(1e-12));
}

TEST_CASE("g_plus1 minimiser: stationarity, product identity, grid agreement") {
    for (const auto& p : random_params(4, 40)) {
        const Point2 s = minimize_g_plus1(p.a, p.b, p.eps, p.tau);
        const double c = p.tau + p.eps;
        const double rx = 2 * s.x - 2 * s.y + c / p.a - p.tau / s.x;
        const double ry = 2 * s.y - 2 * s.x + c / p.b - p.tau / s.y;
        const double scale = 2 * (s.x + s.y) + c / p.a + c / p.b + p.tau / s.x + p.tau / s.y;
        CHECK(std::abs(rx) <= 1e-8 * scale);
        CHECK(std::abs(ry) <= 1e-8 * scale);
        const double z = solve_branch_cubic(p.a, p.b, p.eps, p.tau);
        CHECK(s.x * s.y == doctest::Approx(p.tau / z).epsilon(1e-9));
        const double hi = 10.0 * std::max(p.a, p.b) + 10.0;
        const auto grid = oracle::grid_refine_min2d(
            [&](double x, double y) { return g_pos1(x, y, p.a, p.b, p.eps, p.tau); }, {1e-9, hi, 1e-9, hi}, 14, 61);
        CHECK(std::abs(grid.f - g_pos1(s.x, s.y, p.a, p.b, p.eps, p.tau)) < 1e-6);
    }
}

TEST_CASE("g_plus: branch selection examples") {
    const CoordSolution big_eps = minimize_g_plus(1.0, 1.0, 50.0, 1.0);
    CHECK(big_eps.branch == Branch::Decoupled);
    CHECK(big_eps.psi == 0.0);
    for (const auto& p : random_params(5, 50)) {
        const CoordSolution s = minimize_g_plus(p.a, p.b, 0.0, p.tau);
        CHECK(s.branch == Branch::Correlated);
        CHECK(*s.y > 0.0);
        CHECK(s.psi * s.psi == doctest::Approx(s.x * *s.y).epsilon(1e-12));
    }
}

TEST_CASE("g_plus: selected branch never loses and psi is feasible") {
    for (const auto& p : random_params(6, 200)) {
        const CoordSolution s = minimize_g_plus(p.a, p.b, p.eps, p.tau);
        CHECK(s.g_value <= s.other_branch_value + 1e-12 * std::max(1.0, std::abs(s.g_value)));
        CHECK(s.psi * s.psi <= s.x * *s.y * (1 + 1e-12));
        const double expected = std::max(1.0 - p.eps / (2.0 * s.x * *s.y), 0.0) * s.x * *s.y;
        CHECK(s.psi * s.psi == doctest::Approx(expected).epsilon(1e-12));
        const Point2 t = minimize_g_neg1(p.a, p.b, p.eps, p.tau);
        CHECK((s.branch == Branch::Decoupled) == (t.x * t.y < 0.5 * p.eps));
    }
}

TEST_CASE("h minimiser: example, golden section, h(x) <= h(a)") {
    CHECK(minimize_h(1.0, 1.0, 1.0) == doctest::Approx(kGolden).epsilon(1e-15));
    for (const auto& p : random_params(7, 100)) {
        const double x = minimize_h(p.a, p.eps, p.tau);
        const auto m = oracle::golden_section_min([&](double v) { return h_unpaired(v, p.a, p.eps, p.tau); }, 1e-12,
                                                  10 * p.a + 10, 1e-12);
        CHECK(std::abs(m.x - x) < 1e-7);
        CHECK(h_unpaired(x, p.a, p.eps, p.tau) <= h_unpaired(p.a, p.a, p.eps, p.tau));
        const double c = p.tau + p.eps;
        CHECK(std::abs(2 * x + c / p.a - c / x) < 1e-10 * (2 * x + c / p.a + c / x));
    }
}

TEST_CASE("optimal mass: examples and golden section") {
    CHECK(optimal_mass(0.0, 1.0, 1.0, 0.5, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    const double tau = 0.7;
    const double eps = 0.4;
    CHECK(optimal_mass(2 * tau + eps, 1.0, 1.0, eps, tau) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-5.0, 20.0);
    std::uniform_real_distribution<double> m(0.2, 5.0);
    std::uniform_real_distribution<double> r(0.01, 10.0);
    for (int i = 0; i < 100; ++i) {
        const double ups = u(rng), mm = m(rng), mn = m(rng), e = r(rng), t = r(rng);
        const double x = optimal_mass(ups, mm, mn, e, t);
        const auto g = oracle::golden_section_min(
            [&](double s) { return mass_objective(std::exp(s), ups, mm, mn, e, t); }, -60.0, 60.0, 1e-12);
        CHECK(std::exp(g.x) == doctest::Approx(x).epsilon(1e-7));
    }
}

TEST_CASE("optimal mass: statement and squared-mass exponents agree") {
    const double mm = 1.7, mn = 0.6, eps = 0.9, tau = 1.3, ups = 2.2;
    const double d = 2 * tau + eps;
    const double statement = std::pow(mm, 2 * tau / d) * std::pow(mn, 2 * tau / d) *
                             std::pow(mm * mn, 2 * eps / d) * std::exp(-ups / d);
    CHECK(optimal_mass(ups, mm, mn, eps, tau) == doctest::Approx(statement).epsilon(1e-14));
}

TEST_CASE("uigw: unit Gaussians with eps = tau = 1") {
    const auto g = gaussian_from_spectrum(1.0, {1.0});
    const UigwResult r = uigw_entropic(g, g, 1.0, 1.0);
    // Frozen from an independent brute-force minimisation over (x, y, psi, mass).
    CHECK(r.value == doctest::Approx(0.9626691802741498).epsilon(1e-9));
    CHECK(r.upsilon == doctest::Approx(1.160915277738203).epsilon(1e-9));
    CHECK(r.mass_squared == doctest::Approx(0.67911027302).epsilon(1e-8));
    CHECK(r.mass * r.mass == doctest::Approx(r.mass_squared));
}

TEST_CASE("uigw: value identity at the optimum") {
    const auto mu = gaussian_from_spectrum(1.4, {3.0, 1.0, 0.5});
    const auto nu = gaussian_from_spectrum(0.8, {2.0, 0.2});
    const double eps = 0.6, tau = 1.1;
    const UigwResult r = uigw_entropic(mu, nu, eps, tau);
    const double a = 1.4 * 1.4, b = 0.8 * 0.8;
    CHECK(r.value == doctest::Approx(tau * (a + b) + eps * a * b - (2 * tau + eps) * r.mass_squared).epsilon(1e-12));
    CHECK(r.coords.size() == 3);
    CHECK_FALSE(r.coords[2].y.has_value());
    CHECK(r.plan.x_dim() == 3);
    CHECK(r.plan.y_dim() == 2);
}

TEST_CASE("uigw: m = n has no unpaired terms; swap is recorded") {
    const auto mu = gaussian_from_spectrum(1.0, {2.0, 1.0});
    const auto nu = gaussian_from_spectrum(1.0, {1.5, 0.5});
    const UigwResult r = uigw_entropic(mu, nu, 0.5, 1.0);
    double s = 0.0;
    for (std::size_t k = 0; k < 2; ++k) s += minimize_g_plus(mu.eigenvalue(k), nu.eigenvalue(k), 0.5, 1.0).g_value;
    CHECK(r.upsilon == doctest::Approx(s).epsilon(1e-15));

    const auto small = gaussian_from_spectrum(1.0, {1.0});
    CHECK(uigw_entropic(small, mu, 0.5, 1.0).swapped);
    CHECK(uigw_entropic(small, mu, 0.5, 1.0).value == uigw_entropic(mu, small, 0.5, 1.0).value);
}

TEST_CASE("uigw: mass scaling law; plain 2-homogeneity only without entropy") {
    const auto mu = gaussian_from_spectrum(1.0, {2.0, 0.7});
    const auto nu = gaussian_from_spectrum(1.0, {1.2});
    const double tau = 0.9;
    for (double eps : {0.0, 0.5}) {
        const UigwResult base = uigw_entropic(mu, nu, eps, tau);
        const double d = 2 * tau + eps;
        for (double theta : {0.5, 2.0, 3.0}) {
            const double v = uigw_entropic(mu.scaled(theta), nu.scaled(theta), eps, tau).value;
            const double t2 = theta * theta;
            const double predicted =
                tau * 2.0 * t2 + eps * t2 * t2 - d * base.mass_squared * std::pow(theta, 4 * (tau + eps) / d);
            CHECK(v == doctest::Approx(predicted).epsilon(1e-12));
            if (eps == 0.0) CHECK(v == doctest::Approx(t2 * base.value).epsilon(1e-12));
        }
    }
    // With entropy the value is not 2-homogeneous.
    const auto g = gaussian_from_spectrum(1.0, {1.0});
    const double ratio = uigw_entropic(g.scaled(2.0), g.scaled(2.0), 1.0, 1.0).value /
                         uigw_entropic(g, g, 1.0, 1.0).value;
    CHECK(std::abs(ratio - 4.0) > 1.0);
}

TEST_CASE("uigw: solutions are non-increasing within each branch") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    std::uniform_real_distribution<double> r(0.01, 10.0);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> a(1 + i % 5), b(1 + (i / 5) % 5);
        for (auto& v : a) v = u(rng);
        for (auto& v : b) v = u(rng);
        const UigwResult res =
            uigw_entropic(gaussian_from_spectrum(u(rng), a), gaussian_from_spectrum(u(rng), b), r(rng), r(rng));
        CHECK(res.order_consistent);
    }
}

TEST_CASE("uigw: validation") {
    const auto g = gaussian_from_spectrum(1.0, {1.0});
    try {
        (void)uigw_entropic(g, g, 1.0, 0.0);
        FAIL("expected InvalidRegularizers");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidRegularizers);
    }
    try {
        (void)uigw_entropic(g, g, -0.1, 1.0);
        FAIL("expected NegativeEpsilon");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NegativeEpsilon);
    }
}
