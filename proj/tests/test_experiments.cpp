#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "pathgrad/errors.hpp"
#include "pathgrad/experiments.hpp"
#include "pathgrad/rng.hpp"

using namespace pathgrad;

namespace {

const PathSpec& unit_path() {
    static const PathSpec p({1.0, 1.0, 1.0}, {0.0, 0.0, 0.0});
    return p;
}

}  // namespace

TEST_CASE("loglog slope fit on exact power laws") {
    std::vector<std::pair<double, double>> square_law;
    std::vector<std::pair<double, double>> inverse;
    for (double b : {10.0, 100.0, 1000.0, 10000.0}) {
        square_law.emplace_back(b, 1.0 / (b * b));
        inverse.emplace_back(b, 1.0 / b);
    }
    CHECK(std::abs(fit_loglog_slope(square_law) + 2.0) < 1e-9);
    CHECK(std::abs(fit_loglog_slope(inverse) + 1.0) < 1e-9);
}

TEST_CASE("loglog slope fit on a noisy power law") {
    RandomStream rs(31);
    std::vector<std::pair<double, double>> pts;
    const double exponent = -1.5;
    for (double b : {10.0, 30.0, 100.0, 300.0, 1000.0, 3000.0, 10000.0}) {
        const double noise = std::exp(rs.normal(0.03));
        pts.emplace_back(b, 2.5 * std::pow(b, exponent) * noise);
    }
    CHECK(std::abs(fit_loglog_slope(pts) - exponent) < 0.1);
}

TEST_CASE("loglog slope fit input validation") {
    std::vector<std::pair<double, double>> two = {{1.0, 1.0}, {2.0, 0.5}};
    CHECK_THROWS_AS(fit_loglog_slope(two), ValidationError);
    std::vector<std::pair<double, double>> bad = {{1.0, 1.0}, {2.0, -0.5}, {3.0, 0.1}};
    CHECK_THROWS_AS(fit_loglog_slope(bad), ValidationError);
}

TEST_CASE("variance study reproduces the expected magnitudes and ratio") {
    NoiseModel noise{1.0, 100, 7};
    const auto report = variance_study(builtin_model("linear3"), unit_path(),
                                       Density::uniform(), noise, 1000);
    // Var(IG) = sigma^2 dx^2 / m = 0.01 under this discretization
    CHECK(report.var_ig > 0.008);
    CHECK(report.var_ig < 0.012);
    CHECK(report.ratio > 0.30);
    CHECK(report.ratio < 0.37);
    CHECK(std::abs(report.predicted_ratio - 1.0 / 3.0) < 1e-4);
    CHECK(report.trial_ig.size() == 1000);
    CHECK(report.trial_ps.size() == 1000);
    CHECK(report.ratio == doctest::Approx(report.var_ps / report.var_ig));
}

TEST_CASE("variance ratio tracks the predicted integral of G^2") {
    NoiseModel noise{1.0, 100, 21};
    for (const Density& d :
         {Density::uniform(), Density::triangular_up(), Density::beta(2.0, 2.0)}) {
        const auto report =
            variance_study(builtin_model("linear3"), unit_path(), d, noise, 1000);
        INFO(d.describe(), ": ratio ", report.ratio, " predicted ", report.predicted_ratio);
        CHECK(std::abs(report.ratio - report.predicted_ratio) < 0.04);
    }
}

TEST_CASE("variance ratio is invariant to sigma and path scaling") {
    const Density uniform = Density::uniform();
    NoiseModel base{1.0, 100, 3};
    const auto a = variance_study(builtin_model("linear3"), unit_path(), uniform, base, 400);

    NoiseModel small_sigma{0.1, 100, 3};
    const PathSpec wide({2.0, 2.0, 2.0}, {0.0, 0.0, 0.0});
    const auto b =
        variance_study(builtin_model("linear3"), wide, uniform, small_sigma, 400);

    CHECK(a.var_ig != b.var_ig);  // the absolute variances move...
    CHECK(std::abs(a.ratio - b.ratio) < 1e-9);  // ...the ratio does not
    CHECK(b.ratio > 0.30);
    CHECK(b.ratio < 0.37);
}

TEST_CASE("variance study is deterministic given the seed") {
    NoiseModel noise{1.0, 50, 123};
    const auto a = variance_study(builtin_model("quadratic3"), unit_path(),
                                  Density::uniform(), noise, 150);
    const auto b = variance_study(builtin_model("quadratic3"), unit_path(),
                                  Density::uniform(), noise, 150);
    CHECK(a.trial_ig == b.trial_ig);
    CHECK(a.trial_ps == b.trial_ps);
    CHECK(a.var_ig == b.var_ig);
    CHECK(a.var_ps == b.var_ps);
    CHECK(a.ratio == b.ratio);
}

TEST_CASE("variance study refuses bad configurations") {
    NoiseModel noise{1.0, 100, 0};
    const Model lin = builtin_model("linear3");
    CHECK_THROWS_AS(variance_study(lin, unit_path(), Density::uniform(), noise, 50),
                    ValidationError);
    CHECK_THROWS_AS(variance_study(lin, unit_path(), Density::point_mass(0.5), noise, 1000),
                    ValidationError);
    CHECK_THROWS_AS(
        variance_study(lin, unit_path(), Density::empirical({0.2, 0.6}), noise, 1000),
        ValidationError);
    NoiseModel bad_sigma{0.0, 100, 0};
    CHECK_THROWS_AS(variance_study(lin, unit_path(), Density::uniform(), bad_sigma, 1000),
                    ValidationError);
}

TEST_CASE("budget split policy") {
    CHECK(mc_inner_steps(10) == 10);
    CHECK(mc_inner_steps(100) == 10);
    CHECK(mc_inner_steps(1000) == 10);
    CHECK(mc_inner_steps(10000) == 22);
}

TEST_CASE("convergence study at reduced scale") {
    const std::vector<long> budgets = {10, 100, 1000};
    const auto study = convergence_study(builtin_model("sigmoidal3"), unit_path(),
                                         Density::uniform(), budgets, 5, 10000, 17);
    REQUIRE(study.points.size() == 3);
    for (std::size_t i = 0; i < study.points.size(); ++i) {
        CHECK(study.points[i].budget == budgets[i]);
        CHECK(study.points[i].mse_det > 0.0);
        CHECK(study.points[i].mse_mc > 0.0);
        CHECK(study.points[i].n_baselines * study.points[i].inner_steps <= budgets[i]);
    }
    // deterministic quadrature error shrinks like 1/m (MSE like 1/m^2)
    CHECK(study.slope_det < -1.8);
    CHECK(study.slope_mc < -0.4);
    CHECK(study.points[1].mse_det < study.points[1].mse_mc);
    CHECK(study.points[2].mse_det < study.points[2].mse_mc);
}

TEST_CASE("convergence study is deterministic given the seed") {
    const std::vector<long> budgets = {10, 100, 1000};
    const auto a = convergence_study(builtin_model("quadratic3"), unit_path(),
                                     Density::uniform(), budgets, 3, 10000, 9);
    const auto b = convergence_study(builtin_model("quadratic3"), unit_path(),
                                     Density::uniform(), budgets, 3, 10000, 9);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].mse_det == b.points[i].mse_det);
        CHECK(a.points[i].mse_mc == b.points[i].mse_mc);
    }
    CHECK(a.slope_mc == b.slope_mc);
}

TEST_CASE("convergence study validates its inputs") {
    const Model m = builtin_model("sigmoidal3");
    const std::vector<long> unsorted = {100, 10};
    CHECK_THROWS_AS(
        convergence_study(m, unit_path(), Density::uniform(), unsorted, 3, 10000, 0),
        ValidationError);
    const std::vector<long> ok = {10, 100};
    CHECK_THROWS_AS(convergence_study(m, unit_path(), Density::uniform(), ok, 3, 500, 0),
                    ValidationError);  // ground truth below 10x max budget
    const std::vector<long> tiny = {5, 100, 1000};
    CHECK_THROWS_AS(
        convergence_study(m, unit_path(), Density::uniform(), tiny, 3, 10000, 0),
        ValidationError);  // budget below the minimal MC configuration
}
