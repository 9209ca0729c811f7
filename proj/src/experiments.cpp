#include "pathgrad/experiments.hpp"

#include <cmath>

#include "pathgrad/errors.hpp"
#include "pathgrad/rng.hpp"

namespace pathgrad {

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

double sample_variance(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return acc / (n - 1.0);
}

}  // namespace

VarianceReport variance_study(const Model& model, const PathSpec& path, const Density& d,
                              const NoiseModel& noise, long trials) {
    if (trials < 100) throw ValidationError("variance study needs trials >= 100");
    if (!d.is_continuous()) {
        throw ValidationError("variance study requires a continuous density on (0,1); got " +
                              d.describe());
    }
    if (!(noise.sigma > 0.0)) throw ValidationError("noise sigma must be > 0");
    if (noise.grid_steps < 2) throw ValidationError("noise grid_steps must be >= 2");
    if (model.dim() != path.dim()) throw ValidationError("model/path dimension mismatch");

    const long m = noise.grid_steps;
    const std::size_t n = static_cast<std::size_t>(model.dim());

    // exact gradients and CDF weights on the grid, shared by every trial
    std::vector<double> partials(static_cast<std::size_t>(m) * n);
    std::vector<double> weights(static_cast<std::size_t>(m));
    std::vector<double> point(n);
    for (long k = 1; k <= m; ++k) {
        const double alpha = static_cast<double>(k) / static_cast<double>(m);
        gamma_into(path, alpha, point);
        model.grad_into(point, {partials.data() + (k - 1) * n, n});
        weights[static_cast<std::size_t>(k - 1)] = d.cdf(alpha);
    }

    const double dx0 = path.input[0] - path.baseline[0];
    // distinct models get independent noise realizations, deterministically
    const std::uint64_t stream_root = RandomStream::mix(noise.seed, fnv1a(model.name()));

    VarianceReport report;
    report.model_name = model.name();
    report.density_name = d.describe();
    report.trials = trials;
    report.sigma = noise.sigma;
    report.grid_steps = m;
    report.seed = noise.seed;
    report.trial_ig.resize(static_cast<std::size_t>(trials));
    report.trial_ps.resize(static_cast<std::size_t>(trials));

    for (long t = 0; t < trials; ++t) {
        RandomStream rs = RandomStream::substream(stream_root, static_cast<std::uint64_t>(t));
        double acc_ig = 0.0;
        double acc_ps = 0.0;
        for (long k = 0; k < m; ++k) {
            // noise is drawn for every feature to realize the full i.i.d.
            // field; only feature 1 is recorded
            for (std::size_t i = 0; i < n; ++i) {
                const double noisy = partials[static_cast<std::size_t>(k) * n + i] +
                                     rs.normal(noise.sigma);
                if (i == 0) {
                    acc_ig += noisy;
                    acc_ps += weights[static_cast<std::size_t>(k)] * noisy;
                }
            }
        }
        report.trial_ig[static_cast<std::size_t>(t)] = dx0 * acc_ig / static_cast<double>(m);
        report.trial_ps[static_cast<std::size_t>(t)] = dx0 * acc_ps / static_cast<double>(m);
    }

    report.var_ig = sample_variance(report.trial_ig);
    report.var_ps = sample_variance(report.trial_ps);
    report.ratio = report.var_ps / report.var_ig;
    report.predicted_ratio = d.l2_norm_sq_of_cdf(10000);
    return report;
}

long mc_inner_steps(long budget) {
    const long cbrt_b = std::lround(std::cbrt(static_cast<double>(budget)));
    return std::max<long>(10, cbrt_b);
}

ConvergenceStudy convergence_study(const Model& model, const PathSpec& path,
                                   const Density& d, std::span<const long> budgets,
                                   long mc_repeats, long ground_truth_steps,
                                   std::uint64_t seed) {
    if (budgets.size() < 1) throw ValidationError("convergence study needs budgets");
    for (std::size_t i = 0; i < budgets.size(); ++i) {
        if (budgets[i] < 1) throw ValidationError("budgets must be positive");
        if (i > 0 && budgets[i] <= budgets[i - 1]) {
            throw ValidationError("budgets must be sorted strictly ascending");
        }
    }
    if (mc_repeats < 1) throw ValidationError("mc_repeats must be >= 1");
    if (ground_truth_steps < 10 * budgets.back()) {
        throw ValidationError("ground_truth_steps must be at least 10x the largest budget");
    }

    const AttributionResult truth = psig_det(model, path, d, ground_truth_steps);

    ConvergenceStudy study;
    study.model_name = model.name();
    study.density_name = d.describe();
    study.ground_truth_steps = ground_truth_steps;
    study.mc_repeats = mc_repeats;
    study.seed = seed;
    study.split_policy = "inner=max(10,round(cbrt(budget)))";

    const auto sq_error = [&truth](const AttributionResult& r) {
        double acc = 0.0;
        for (std::size_t i = 0; i < r.values.size(); ++i) {
            const double e = r.values[i] - truth.values[i];
            acc += e * e;
        }
        return acc;
    };

    for (std::size_t bi = 0; bi < budgets.size(); ++bi) {
        const long budget = budgets[bi];
        ConvergencePoint pt;
        pt.budget = budget;
        pt.inner_steps = mc_inner_steps(budget);
        pt.n_baselines = budget / pt.inner_steps;
        if (pt.n_baselines < 1) {
            throw ValidationError("budget " + std::to_string(budget) +
                                  " is below the minimal Monte Carlo configuration (" +
                                  std::to_string(pt.inner_steps) + " inner steps)");
        }
        pt.mse_det = sq_error(psig_det(model, path, d, budget));
        double acc = 0.0;
        for (long rep = 0; rep < mc_repeats; ++rep) {
            const std::uint64_t rep_seed =
                RandomStream::mix(seed, (static_cast<std::uint64_t>(bi) << 32) ^
                                            static_cast<std::uint64_t>(rep));
            acc += sq_error(psig_mc(model, path, d, pt.n_baselines, pt.inner_steps, rep_seed));
        }
        pt.mse_mc = acc / static_cast<double>(mc_repeats);
        study.points.push_back(pt);
    }

    std::vector<std::pair<double, double>> det_pts, mc_pts;
    for (const auto& p : study.points) {
        det_pts.emplace_back(static_cast<double>(p.budget), p.mse_det);
        mc_pts.emplace_back(static_cast<double>(p.budget), p.mse_mc);
    }
    study.slope_det = fit_loglog_slope(det_pts);
    study.slope_mc = fit_loglog_slope(mc_pts);
    return study;
}

double fit_loglog_slope(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) throw ValidationError("slope fit needs at least 3 points");
    double sx = 0.0, sy = 0.0;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0)) {
            throw ValidationError("slope fit needs strictly positive values");
        }
        sx += std::log(x);
        sy += std::log(y);
    }
    const double n = static_cast<double>(points.size());
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        const double dx = std::log(x) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y) - my);
    }
    if (sxx == 0.0) throw ValidationError("slope fit needs at least two distinct budgets");
    return sxy / sxx;
}

}  // namespace pathgrad
