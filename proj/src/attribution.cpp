#include "pathgrad/attribution.hpp"

#include <cmath>
#include <sstream>

#include "pathgrad/errors.hpp"

namespace pathgrad {

const char* estimator_name(Estimator e) {
    switch (e) {
        case Estimator::ig: return "ig";
        case Estimator::pwig: return "pwig";
        case Estimator::psig_det: return "psig_det";
        case Estimator::psig_mc: return "psig_mc";
    }
    return "?";
}

WeightFn WeightFn::one() {
    return WeightFn{[](double) { return 1.0; }, "one"};
}

WeightFn WeightFn::identity() {
    return WeightFn{[](double a) { return a; }, "alpha"};
}

WeightFn WeightFn::from_cdf(const Density& d) {
    return WeightFn{[d](double a) { return d.cdf(a); }, "cdf:" + d.describe()};
}

namespace {

double node(long k, long m, QuadratureRule rule) {
    if (rule == QuadratureRule::midpoint) {
        return (static_cast<double>(k) - 0.5) / static_cast<double>(m);
    }
    return static_cast<double>(k) / static_cast<double>(m);
}

double eval_weight(const WeightFn& w, double alpha) {
    const double v = w.fn(alpha);
    if (!std::isfinite(v) || v < 0.0) {
        throw InvalidWeightError("weight '" + w.descriptor + "' returned " +
                                 std::to_string(v) + " at alpha=" + std::to_string(alpha));
    }
    return v;
}

AttributionResult finish(std::vector<double> values, Estimator est, long steps,
                         std::string descriptor) {
    AttributionResult r;
    r.values = std::move(values);
    r.estimator = est;
    r.steps = steps;
    r.density_or_weight = std::move(descriptor);
    double sum = 0.0;
    for (double v : r.values) {
        if (!std::isfinite(v)) {
            throw NumericsError("attribution produced a non-finite value");
        }
        sum += v;
    }
    r.sum = sum;
    return r;
}

// Shared kernel for all grid estimators. ig is the weight==1 case and
// psig_det the weight==G case, so the three are bit-identical whenever
// their weights agree on the grid (multiplying by 1.0 is exact).
std::vector<double> weighted_grid_values(const Model& model, const PathSpec& path,
                                         const WeightFn& weight, long m,
                                         QuadratureRule rule) {
    if (m < 1) throw ValidationError("step count m must be >= 1");
    if (model.dim() != path.dim()) {
        throw ValidationError("model '" + model.name() + "' has dim " +
                              std::to_string(model.dim()) + " but the path has dim " +
                              std::to_string(path.dim()));
    }
    const std::size_t n = static_cast<std::size_t>(path.dim());
    std::vector<double> accum(n, 0.0);
    std::vector<double> point(n), g(n);
    for (long k = 1; k <= m; ++k) {
        const double alpha = node(k, m, rule);
        gamma_into(path, alpha, point);
        model.grad_into(point, g);
        const double w = eval_weight(weight, alpha);
        for (std::size_t i = 0; i < n; ++i) accum[i] += w * g[i];
    }
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = (path.input[i] - path.baseline[i]) * accum[i] / static_cast<double>(m);
    }
    return values;
}

}  // namespace

AttributionResult ig(const Model& model, const PathSpec& path, long m, QuadratureRule rule) {
    return finish(weighted_grid_values(model, path, WeightFn::one(), m, rule),
                  Estimator::ig, m, "one");
}

AttributionResult pwig(const Model& model, const PathSpec& path, const WeightFn& weight,
                       long m, QuadratureRule rule) {
    return finish(weighted_grid_values(model, path, weight, m, rule), Estimator::pwig, m,
                  weight.descriptor);
}

AttributionResult psig_det(const Model& model, const PathSpec& path, const Density& d,
                           long m, QuadratureRule rule) {
    return finish(weighted_grid_values(model, path, WeightFn::from_cdf(d), m, rule),
                  Estimator::psig_det, m, d.describe());
}

namespace {

// Inner IG for one intermediate baseline b_s, discretized at inner_steps
// reparametrized nodes alpha = s + (k/inner)(1 - s). For s = 0 the nodes and
// the accumulation match ig() exactly, making the point-mass-at-zero density
// reproduce standard IG bit for bit.
void baseline_ig_into(const Model& model, const PathSpec& path, double s, long inner,
                      std::span<double> out) {
    const std::size_t n = static_cast<std::size_t>(path.dim());
    std::vector<double> accum(n, 0.0);
    std::vector<double> point(n), g(n);
    for (long k = 1; k <= inner; ++k) {
        const double u = static_cast<double>(k) / static_cast<double>(inner);
        const double alpha = reparam_alpha(s, u);
        gamma_into(path, alpha, point);
        model.grad_into(point, g);
        for (std::size_t i = 0; i < n; ++i) accum[i] += g[i];
    }
    const std::vector<double> b = gamma(path, s);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (path.input[i] - b[i]) * accum[i] / static_cast<double>(inner);
    }
}

}  // namespace

AttributionResult psig_mc_from_samples(const Model& model, const PathSpec& path,
                                       std::span<const double> samples, long inner_steps,
                                       const std::string& descriptor) {
    if (samples.empty()) throw ValidationError("psig_mc needs at least one baseline");
    if (inner_steps < 1) throw ValidationError("inner_steps must be >= 1");
    if (model.dim() != path.dim()) {
        throw ValidationError("model/path dimension mismatch in psig_mc");
    }
    const std::size_t n = static_cast<std::size_t>(path.dim());
    std::vector<double> mean(n, 0.0), m2(n, 0.0), v(n);
    long count = 0;
    for (double s : samples) {
        baseline_ig_into(model, path, s, inner_steps, v);
        ++count;
        // running mean keeps the average exact when every term is identical
        for (std::size_t i = 0; i < n; ++i) {
            const double d0 = v[i] - mean[i];
            mean[i] += d0 / static_cast<double>(count);
            m2[i] += d0 * (v[i] - mean[i]);
        }
    }
    AttributionResult r = finish(std::move(mean), Estimator::psig_mc, inner_steps, descriptor);
    r.n_baselines = count;
    r.std_error.resize(n, 0.0);
    if (count > 1) {
        for (std::size_t i = 0; i < n; ++i) {
            r.std_error[i] = std::sqrt(m2[i] / static_cast<double>(count - 1) /
                                       static_cast<double>(count));
        }
    }
    return r;
}

AttributionResult psig_mc(const Model& model, const PathSpec& path, const Density& d,
                          long n_baselines, long inner_steps, std::uint64_t seed) {
    if (n_baselines < 1) throw ValidationError("n_baselines must be >= 1");
    std::vector<double> samples(static_cast<std::size_t>(n_baselines));
    for (long j = 0; j < n_baselines; ++j) {
        RandomStream rs = RandomStream::substream(seed, static_cast<std::uint64_t>(j));
        samples[static_cast<std::size_t>(j)] = d.sample(rs);
    }
    return psig_mc_from_samples(model, path, samples, inner_steps, d.describe());
}

double completeness_residual(const Model& model, const PathSpec& path,
                             const WeightFn& weight, long m) {
    if (m < 2) throw ValidationError("completeness residual needs m >= 2");
    const double delta_f = model.eval(path.input) - model.eval(path.baseline);
    const AttributionResult r = pwig(model, path, weight, m);
    return delta_f - r.sum;
}

double completeness_residual_by_parts(const Model& model, const PathSpec& path,
                                      const WeightFn& weight, long m) {
    if (m < 2) throw ValidationError("completeness residual needs m >= 2");
    const double delta_f = model.eval(path.input) - model.eval(path.baseline);
    const double md = static_cast<double>(m);
    const double f_end = model.eval(gamma(path, 1.0));
    const double f_start = model.eval(gamma(path, 0.0));
    const double g_end = eval_weight(weight, 1.0);
    const double g_start = eval_weight(weight, 0.0);
    double acc = 0.0;
    for (long k = 1; k <= m; ++k) {
        const double alpha = static_cast<double>(k) / md;
        double gprime;
        if (k < m) {
            gprime = (eval_weight(weight, static_cast<double>(k + 1) / md) -
                      eval_weight(weight, static_cast<double>(k - 1) / md)) *
                     md / 2.0;
        } else {
            gprime = (g_end - eval_weight(weight, static_cast<double>(m - 1) / md)) * md;
        }
        acc += gprime * model.eval(gamma(path, alpha));
    }
    return delta_f - (g_end * f_end - g_start * f_start) + acc / md;
}

double expected_baseline_completeness_gap(const Model& model, const PathSpec& path,
                                          const Density& d, long m) {
    if (m < 2) throw ValidationError("expected-baseline gap needs m >= 2");
    const AttributionResult r = psig_det(model, path, d, m);
    double expected_fb = 0.0;
    switch (d.kind()) {
        case DensityKind::point_mass: {
            expected_fb = model.eval(gamma(path, d.quantile(0.5)));
            break;
        }
        case DensityKind::empirical: {
            const auto& ss = d.samples();
            double acc = 0.0;
            for (double s : ss) acc += model.eval(gamma(path, s));
            expected_fb = acc / static_cast<double>(ss.size());
            break;
        }
        default: {  // continuous kinds: pdf-weighted mean on the same grid
            double acc = 0.0;
            for (long k = 1; k <= m; ++k) {
                const double s = static_cast<double>(k) / static_cast<double>(m);
                acc += d.pdf(s) * model.eval(gamma(path, s));
            }
            expected_fb = acc / static_cast<double>(m);
            break;
        }
    }
    return std::abs(r.sum - (model.eval(path.input) - expected_fb));
}

std::vector<AxiomOutcome> axiom_checks(const Density& d, long m) {
    if (m < 1) throw ValidationError("axiom checks need m >= 1");
    std::vector<AxiomOutcome> out;

    {
        // linearity: attribution of a*F1 + b*F2 equals the combination of
        // the separate attributions, coordinatewise
        const Model f1 = builtin_model("linear3");
        const Model f2 = builtin_model("quadratic3");
        const Model combo = linear_combination(2.0, f1, 3.0, f2, "2*linear3+3*quadratic3");
        const PathSpec path({1.0, 1.0, 1.0}, {0.0, 0.0, 0.0});
        const auto lhs = psig_det(combo, path, d, m);
        const auto a1 = psig_det(f1, path, d, m);
        const auto a2 = psig_det(f2, path, d, m);
        double disc = 0.0;
        for (std::size_t i = 0; i < lhs.values.size(); ++i) {
            disc = std::max(disc,
                            std::abs(lhs.values[i] - (2.0 * a1.values[i] + 3.0 * a2.values[i])));
        }
        out.push_back({"linearity", disc < 1e-10, disc,
                       "psig(2*F1+3*F2) vs 2*psig(F1)+3*psig(F2), F1=linear3 F2=quadratic3"});
    }

    {
        // dummy: a feature the model never reads gets exactly zero
        const Model f("x1sq_plus_x2", 3,
                      [](std::span<const double> x) { return x[0] * x[0] + x[1]; },
                      [](std::span<const double> x, std::span<double> g) {
                          g[0] = 2.0 * x[0];
                          g[1] = 1.0;
                          g[2] = 0.0;
                      });
        const PathSpec path({0.7, -0.3, 0.9}, {0.0, 0.0, 0.0});
        const auto r = psig_det(f, path, d, m);
        const double disc = std::abs(r.values[2]);
        out.push_back({"dummy", r.values[2] == 0.0, disc,
                       "F(x)=x1^2+x2 ignores x3; attribution of x3 must be exactly 0"});
    }

    {
        // symmetry: F symmetric in (x1,x2) with matching endpoints gives
        // exactly equal attributions
        const Model f("x1x2_plus_x3", 3,
                      [](std::span<const double> x) { return x[0] * x[1] + x[2]; },
                      [](std::span<const double> x, std::span<double> g) {
                          g[0] = x[1];
                          g[1] = x[0];
                          g[2] = 1.0;
                      });
        const PathSpec path({1.0, 1.0, 0.5}, {0.0, 0.0, 0.0});
        const auto r = psig_det(f, path, d, m);
        const double disc = std::abs(r.values[0] - r.values[1]);
        out.push_back({"symmetry", r.values[0] == r.values[1], disc,
                       "F(x)=x1*x2+x3 with x1=x2, x1'=x2'; attributions 1 and 2 must match"});
    }

    return out;
}

}  // namespace pathgrad
