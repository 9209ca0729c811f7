#pragma once

#include <span>
#include <vector>

namespace pathgrad {

class Model;

/// Straight-line interpolation path from a baseline to an input.
struct PathSpec {
    std::vector<double> input;     // x
    std::vector<double> baseline;  // x'

    PathSpec(std::vector<double> input_, std::vector<double> baseline_);

    int dim() const { return static_cast<int>(input.size()); }
    bool degenerate() const;  // input == baseline coordinatewise
};

/// Validates t against [0,1] with a small absolute slack (grid endpoints like
/// k/m can land at 1 +/- ulp) and returns the clamped value.
double clamp_unit(double t, const char* what);

/// gamma(alpha) = x' + alpha (x - x')
std::vector<double> gamma(const PathSpec& path, double alpha);
void gamma_into(const PathSpec& path, double alpha, std::span<double> out);

/// b_s = x' + s (x - x'); identical to gamma, named for its role as the
/// intermediate baseline in path-sampled attribution.
std::vector<double> intermediate_baseline(const PathSpec& path, double s);

/// d/dalpha F(gamma(alpha)) = sum_i (x_i - x'_i) dF/dx_i at gamma(alpha).
double path_derivative(const Model& model, const PathSpec& path, double alpha);

/// alpha = s + u (1 - s): maps the inner integration variable of a shortened
/// path starting at b_s back onto the master path; the result lies in [s, 1].
double reparam_alpha(double s, double u);

}  // namespace pathgrad
