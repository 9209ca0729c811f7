#pragma once

#include <string>
#include <vector>

#include "pathgrad/rng.hpp"

namespace pathgrad {

/// Right-continuous step CDF of a sample list on [0,1]:
/// G_m(alpha) = #{ s_j <= alpha } / m.
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> samples);  // sorts; requires samples in [0,1]
    double operator()(double alpha) const;
    std::size_t size() const { return samples_.size(); }
    const std::vector<double>& samples() const { return samples_; }

private:
    std::vector<double> samples_;
};

enum class DensityKind { uniform, triangular_up, beta, point_mass, empirical };

/// Probability distribution on [0,1] with pdf (continuous kinds only), CDF,
/// quantile function and sampling. Immutable; sampling takes an explicit
/// random stream.
class Density {
public:
    static Density uniform();
    static Density triangular_up();                     // p(s) = 2s
    static Density beta(double a, double b);            // requires a, b >= 1
    static Density point_mass(double s0);               // s0 in [0,1]
    static Density empirical(std::vector<double> samples);

    DensityKind kind() const { return kind_; }
    bool is_continuous() const;
    const std::string& describe() const { return descriptor_; }

    double pdf(double s) const;        // UnsupportedOperationError for discrete kinds
    double cdf(double alpha) const;
    double quantile(double u) const;   // inverse CDF; empirical picks the u-th stored point
    double sample(RandomStream& rs) const { return quantile(rs.uniform01()); }

    /// integral of G(alpha)^2 over [0,1] by the same right-endpoint rule the
    /// attribution engine uses; this is the predicted variance ratio.
    double l2_norm_sq_of_cdf(long grid_size) const;

    /// Stored points (empirical kind only).
    const std::vector<double>& samples() const;

private:
    Density(DensityKind kind, std::string descriptor);

    DensityKind kind_;
    std::string descriptor_;
    double beta_a_ = 0.0, beta_b_ = 0.0;
    double log_beta_norm_ = 0.0;        // log B(a,b)
    std::vector<double> beta_cum_;      // cumulative pdf integral on a fixed fine grid
    double point_ = 0.0;
    std::vector<double> samples_;       // sorted, empirical kind
};

/// CLI descriptor: uniform | triangular | beta:a,b | pointmass:s0 |
/// empirical:<path> (one real per line).
Density parse_density(const std::string& descriptor);

}  // namespace pathgrad
