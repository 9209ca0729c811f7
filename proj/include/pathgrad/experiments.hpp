#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pathgrad/attribution.hpp"
#include "pathgrad/density.hpp"
#include "pathgrad/model.hpp"
#include "pathgrad/pathgeom.hpp"

namespace pathgrad {

/// Shattered-gradient stand-in: i.i.d. Gaussian noise added to every
/// per-feature partial at every grid node, combined by the estimators'
/// (1/m)-weighted sums. Under this discretization Var(IG) = sigma^2 dx^2 / m
/// and the PS/IG variance ratio tends to the integral of G^2.
struct NoiseModel {
    double sigma = 1.0;
    long grid_steps = 100;
    std::uint64_t seed = 0;
};

struct VarianceReport {
    std::string model_name;
    std::string density_name;
    long trials = 0;
    double var_ig = 0.0;
    double var_ps = 0.0;
    double ratio = 0.0;            // var_ps / var_ig
    double predicted_ratio = 0.0;  // integral of G^2 from the density module
    double sigma = 0.0;
    long grid_steps = 0;
    std::uint64_t seed = 0;
    // per-trial feature-1 attributions, in trial order (CSV rows)
    std::vector<double> trial_ig;
    std::vector<double> trial_ps;
};

/// Per trial: take the exact gradients on the grid, add one shared noisy
/// realization, and compute both the IG and the CDF-weighted attribution of
/// feature 1 from the SAME noisy gradients (paired design). Reports unbiased
/// sample variances across trials and their ratio.
VarianceReport variance_study(const Model& model, const PathSpec& path, const Density& d,
                              const NoiseModel& noise, long trials);

struct ConvergencePoint {
    long budget = 0;        // total gradient evaluations
    double mse_det = 0.0;   // squared Euclidean error of the deterministic estimator
    double mse_mc = 0.0;    // mean squared error of the Monte Carlo estimator
    long inner_steps = 0;
    long n_baselines = 0;
};

struct ConvergenceStudy {
    std::vector<ConvergencePoint> points;
    double slope_det = 0.0;  // fitted log-log MSE slope
    double slope_mc = 0.0;
    std::string model_name;
    std::string density_name;
    long ground_truth_steps = 0;
    long mc_repeats = 0;
    std::uint64_t seed = 0;
    std::string split_policy;  // how a budget is split into baselines x inner steps
};

/// Monte Carlo budget split: inner_steps = max(10, round(cbrt(B))), which
/// balances the MC variance term (~inner/B) against the squared inner
/// quadrature bias (~1/inner^2); n_baselines = B / inner_steps.
long mc_inner_steps(long budget);

/// Measures MSE against psig_det at ground_truth_steps for each budget:
/// deterministic estimator at m = budget vs Monte Carlo at an equal number
/// of gradient evaluations (averaged over mc_repeats seeded repeats).
ConvergenceStudy convergence_study(const Model& model, const PathSpec& path,
                                   const Density& d, std::span<const long> budgets,
                                   long mc_repeats, long ground_truth_steps,
                                   std::uint64_t seed);

/// Ordinary least-squares slope of log(mse) against log(budget).
double fit_loglog_slope(std::span<const std::pair<double, double>> points);

}  // namespace pathgrad
