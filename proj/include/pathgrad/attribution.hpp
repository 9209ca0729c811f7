#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pathgrad/density.hpp"
#include "pathgrad/model.hpp"
#include "pathgrad/pathgeom.hpp"

namespace pathgrad {

enum class Estimator { ig, pwig, psig_det, psig_mc };
const char* estimator_name(Estimator e);

/// Nonnegative weight g(alpha) on [0,1] plus a human-readable descriptor.
struct WeightFn {
    std::function<double(double)> fn;
    std::string descriptor;

    static WeightFn one();                        // g == 1 (standard IG)
    static WeightFn identity();                   // g(alpha) = alpha
    static WeightFn from_cdf(const Density& d);   // g = G
};

struct AttributionResult {
    std::vector<double> values;        // one attribution per feature
    Estimator estimator = Estimator::ig;
    long steps = 0;                    // grid steps; inner steps for psig_mc
    std::string density_or_weight;
    double sum = 0.0;                  // cached sum of values
    // Monte Carlo metadata (empty / zero for the deterministic estimators)
    std::vector<double> std_error;     // per-coordinate empirical standard error
    long n_baselines = 0;
};

/// Quadrature grid for the path integral. The right-endpoint rule at nodes
/// k/m is the reference rule; midpoint is available but excluded from the
/// fidelity guarantees (bit-for-bit identities hold on the reference rule).
enum class QuadratureRule { right_endpoint, midpoint };

/// Standard integrated gradients on the m-point grid:
/// values_i = (x_i - x'_i) * (1/m) sum_k dF(gamma(k/m))/dx_i.
AttributionResult ig(const Model& model, const PathSpec& path, long m,
                     QuadratureRule rule = QuadratureRule::right_endpoint);

/// Path-weighted variant: each grid node is scaled by g(k/m).
AttributionResult pwig(const Model& model, const PathSpec& path, const WeightFn& weight,
                       long m, QuadratureRule rule = QuadratureRule::right_endpoint);

/// Deterministic path-sampled estimator: pwig with g = G, the CDF of d.
/// Bit-identical to pwig(model, path, WeightFn::from_cdf(d), m).
AttributionResult psig_det(const Model& model, const PathSpec& path, const Density& d,
                           long m, QuadratureRule rule = QuadratureRule::right_endpoint);

/// Monte Carlo path-sampled estimator: draws baselines s_j from d (one
/// deterministic substream per baseline index), computes the inner IG for
/// each on inner_steps reparametrized nodes, and averages with a running
/// mean in a fixed reduction order.
AttributionResult psig_mc(const Model& model, const PathSpec& path, const Density& d,
                          long n_baselines, long inner_steps, std::uint64_t seed);

/// Same estimator with the baseline positions supplied explicitly.
AttributionResult psig_mc_from_samples(const Model& model, const PathSpec& path,
                                       std::span<const double> samples, long inner_steps,
                                       const std::string& descriptor = "fixed-samples");

/// R(g) = (F(x) - F(x')) - sum_i PWIG_i(g), on the m-point grid.
double completeness_residual(const Model& model, const PathSpec& path,
                             const WeightFn& weight, long m);

/// Integration-by-parts form of the residual,
/// R(g) = dF - (g(1) F(gamma(1)) - g(0) F(gamma(0))) + integral of g' F(gamma),
/// with g' by centered differences at interior nodes and one-sided at the
/// right endpoint. Cross-validates the direct form.
double completeness_residual_by_parts(const Model& model, const PathSpec& path,
                                      const WeightFn& weight, long m);

/// | sum_i psig_det_i - (F(x) - E[F(b_s)]) | with the expectation discretized
/// on the same grid (pdf-weighted for continuous kinds, exact for point
/// masses, sample mean for the empirical kind). Vanishes at O(1/m).
double expected_baseline_completeness_gap(const Model& model, const PathSpec& path,
                                          const Density& d, long m);

struct AxiomOutcome {
    std::string axiom;   // "linearity" | "dummy" | "symmetry"
    bool pass = false;
    double discrepancy = 0.0;
    std::string detail;
};

/// Fixed scenario checks that the estimator preserves linearity, the dummy
/// axiom and symmetry, using psig_det with the given density and grid.
std::vector<AxiomOutcome> axiom_checks(const Density& d, long m);

}  // namespace pathgrad
