#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gwgauss/barycenter.hpp"
#include "gwgauss/error.hpp"
#include "gwgauss/minimize.hpp"

using namespace gwgauss;

namespace {

BarycenterSpec make_spec(std::vector<std::vector<double>> spectra, std::vector<double> weights, std::size_t d,
                         double eps) {
    BarycenterSpec s;
    for (auto& sp : spectra) s.measures.push_back(gaussian_from_spectrum(1.0, std::move(sp)));
    s.weights = std::move(weights);
    s.target_dim = d;
    s.epsilon = eps;
    return s;
}

ErrorCode code_of(const BarycenterSpec& spec) {
    try {
        (void)entropic_igw_barycenter(spec);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("barycenter: mean of two 1-D measures") {
    const auto r = igw_barycenter(make_spec({{1.0}, {3.0}}, {0.5, 0.5}, 1, 0.0));
    CHECK(r.spectrum == std::vector<double>{2.0});
    CHECK(r.kappas[0][0] == 1.0);
    CHECK(r.kappas[1][0] == 1.0);
}

TEST_CASE("barycenter: truncated coordinate loses short measures") {
    const auto r = igw_barycenter(make_spec({{2.0}, {2.0, 2.0}}, {0.5, 0.5}, 2, 0.0));
    CHECK(r.spectrum == std::vector<double>{2.0, 1.0});
    CHECK(r.kappas[0][1] == 0.0);
    CHECK(r.B == std::vector<double>{1.0, 0.5});
}

TEST_CASE("barycenter: identical measures are a fixed point") {
    const std::vector<double> sp{5.0, 2.5, 0.3};
    const auto r = igw_barycenter(make_spec({sp, sp, sp}, {0.2, 0.3, 0.5}, 3, 0.0));
    for (std::size_t j = 0; j < 3; ++j) CHECK(r.spectrum[j] == doctest::Approx(sp[j]).epsilon(1e-15));
}

TEST_CASE("barycenter: spectrum minimises each coordinate quadratic") {
    const auto r = igw_barycenter(make_spec({{4.0, 1.0, 0.5}, {2.0}, {3.0, 3.0}}, {0.5, 0.3, 0.2}, 3, 0.0));
    for (std::size_t j = 0; j < 3; ++j) {
        const double a = r.A[j];
        const auto m = oracle::golden_section_min([a](double l) { return l * l - 2.0 * l * a; }, -10.0, 10.0, 1e-12);
        CHECK(std::abs(m.x - r.spectrum[j]) < 1e-8);
    }
}

TEST_CASE("barycenter: validation") {
    auto bad = make_spec({{1.0}, {3.0}}, {0.5, 0.6}, 1, 0.0);
    try {
        (void)igw_barycenter(bad);
        FAIL("expected InvalidWeights");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidWeights);
    }
    CHECK(code_of(make_spec({{1.0}, {3.0}}, {0.5, 0.5}, 2, 0.1)) == ErrorCode::DimensionTooLarge);
    CHECK(code_of(make_spec({{1.0}, {3.0}}, {0.5, 0.5}, 1, -0.1)) == ErrorCode::NegativeEpsilon);
    auto heavy = make_spec({{1.0}}, {1.0}, 1, 0.0);
    heavy.measures[0] = heavy.measures[0].with_mass(2.0);
    CHECK(code_of(heavy) == ErrorCode::UnbalancedInput);
}

TEST_CASE("entropic barycenter: eps = 0 matches the unregularised one") {
    const auto spec = make_spec({{4.0, 1.0}, {2.0, 0.5, 0.1}}, {0.25, 0.75}, 3, 0.0);
    const auto a = igw_barycenter(spec);
    const auto b = entropic_igw_barycenter(spec);
    CHECK(a.spectrum == b.spectrum);
    CHECK(b.formula_flag == FormulaFlag::Both);
}

TEST_CASE("entropic barycenter: single 1-D measure") {
    const auto r = entropic_igw_barycenter(make_spec({{1.0}}, {1.0}, 1, 0.1));
    // Frozen from per-coordinate golden-section maximisation.
    const double kappa = 1.0 - 0.1 / (2.0 * (1.0 + std::sqrt(0.9)));
    CHECK(r.kappas[0][0] == doctest::Approx(kappa).epsilon(1e-12));
    CHECK(r.kappas[0][0] == doctest::Approx(0.97434165).epsilon(1e-8));
    CHECK(r.spectrum[0] == doctest::Approx(kappa).epsilon(1e-12));
    CHECK(r.formula_flag == FormulaFlag::Proof);
    CHECK_FALSE(r.oracle_used);
    CHECK(to_string(r.formula_flag) == "proof");
    const auto m = oracle::golden_section_min(
        [](double k) { return -(k * k) - 0.05 * std::log1p(-k); }, 0.5, 1.0 - 1e-12, 1e-12);
    CHECK(std::abs(m.x - r.kappas[0][0]) < 1e-7);
}

TEST_CASE("entropic barycenter: condition violation lists failing pairs") {
    const auto spec = make_spec({{1.0}, {0.01}}, {0.5, 0.5}, 1, 0.1);
    try {
        (void)entropic_igw_barycenter(spec);
        FAIL("expected EpsilonConditionError");
    } catch (const EpsilonConditionError& e) {
        CHECK(e.code() == ErrorCode::EpsilonConditionViolated);
        REQUIRE(e.failures().size() == 1);
        CHECK(e.failures()[0] == ConditionFailure{1, 0});
    }
    CHECK(code_of(make_spec({{0.1}}, {1.0}, 1, 0.5)) == ErrorCode::EpsilonConditionViolated);
}

TEST_CASE("entropic barycenter: stationarity, ordering, permutation equivariance") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> lam(1.0, 10.0);
    std::uniform_real_distribution<double> w(0.2, 1.0);
    for (int i = 0; i < 30; ++i) {
        std::vector<std::vector<double>> spectra(3);
        std::vector<double> weights(3);
        for (std::size_t l = 0; l < 3; ++l) {
            spectra[l].resize(1 + (i + l) % 3);
            for (auto& v : spectra[l]) v = lam(rng);
            weights[l] = w(rng);
        }
        double sum = 0.0;
        for (double v : weights) sum += v;
        for (auto& v : weights) v /= sum;
        const double eps = 0.05;
        const auto spec = make_spec(spectra, weights, 3, eps);
        const auto r = entropic_igw_barycenter(spec);

        for (std::size_t j = 0; j + 1 < 3; ++j) CHECK(r.spectrum[j] >= r.spectrum[j + 1] - 1e-12);
        for (std::size_t j = 0; j < 3; ++j) {
            double s = 0.0;
            for (std::size_t l = 0; l < 3; ++l) {
                if (j < spec.measures[l].dim()) s += weights[l] * spec.measures[l].eigenvalue(j) * r.kappas[l][j];
            }
            CHECK(r.spectrum[j] == doctest::Approx(s).epsilon(1e-12));
            for (std::size_t l = 0; l < 3; ++l) {
                if (j >= spec.measures[l].dim()) continue;
                const double lj = spec.measures[l].eigenvalue(j);
                CHECK(std::abs(2.0 * lj * s * (1.0 - r.kappas[l][j]) - 0.5 * eps) < 1e-7);
            }
        }

        const std::vector<std::size_t> perm{2, 0, 1};
        std::vector<std::vector<double>> ps;
        std::vector<double> pw;
        for (std::size_t l : perm) {
            ps.push_back(spectra[l]);
            pw.push_back(weights[l]);
        }
        const auto rp = entropic_igw_barycenter(make_spec(ps, pw, 3, eps));
        for (std::size_t j = 0; j < 3; ++j) CHECK(rp.spectrum[j] == doctest::Approx(r.spectrum[j]).epsilon(1e-12));
    }
}

TEST_CASE("subset search: examples") {
    const auto none = subset_search_maximizer({1.0, 2.0}, {1e6, 1e6});
    CHECK(none.subset.empty());
    CHECK(none.value == 0.0);
    CHECK(none.x == std::vector<double>{0.0, 0.0});

    const auto one = subset_search_maximizer({2.0}, {1.0});
    REQUIRE(one.subset == std::vector<std::size_t>{0});
    CHECK(one.x[0] == doctest::Approx(1.0 - 1.0 / (4.0 * (2.0 + std::sqrt(3.0)))).epsilon(1e-12));
    CHECK(one.x[0] == doctest::Approx(0.9330127).epsilon(1e-7));
    const auto m = oracle::golden_section_min([](double x) { return -subset_objective({2.0}, {1.0}, {x}); }, 0.0,
                                              1.0 - 1e-12, 1e-12);
    CHECK(std::abs(m.x - one.x[0]) < 1e-7);
    CHECK(one.value == doctest::Approx(-m.f).epsilon(1e-10));
}

TEST_CASE("subset search: errors") {
    try {
        (void)subset_search_maximizer(std::vector<double>(25, 1.0), std::vector<double>(25, 1.0));
        FAIL("expected TooManyIndices");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooManyIndices);
    }
    try {
        (void)subset_search_maximizer({1.0, 2.0}, {1.0});
        FAIL("expected InvalidArgument");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidArgument);
    }
}

TEST_CASE("subset search: matches a 2-D grid and never loses to x = 0") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int i = 0; i < 20; ++i) {
        const std::vector<double> a{u(rng), u(rng)};
        const std::vector<double> b{u(rng), u(rng)};
        const auto r = subset_search_maximizer(a, b);
        CHECK(r.value >= 0.0);
        const auto g = oracle::grid_refine_min2d(
            [&](double x, double y) { return -subset_objective(a, b, {x, y}); }, {0.0, 1.0 - 1e-9, 0.0, 1.0 - 1e-9},
            12, 41);
        CHECK(std::abs(-g.f - r.value) < 1e-5);
    }
}
