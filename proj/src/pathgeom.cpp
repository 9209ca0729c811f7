#include "pathgrad/pathgeom.hpp"

#include <cmath>
#include <string>

#include "pathgrad/errors.hpp"
#include "pathgrad/model.hpp"

namespace pathgrad {

namespace {
constexpr double kUnitSlack = 1e-12;
}

PathSpec::PathSpec(std::vector<double> input_, std::vector<double> baseline_)
    : input(std::move(input_)), baseline(std::move(baseline_)) {
    if (input.empty() || input.size() != baseline.size()) {
        throw ValidationError("path input and baseline must have equal dimension >= 1 (got " +
                              std::to_string(input.size()) + " and " +
                              std::to_string(baseline.size()) + ")");
    }
    for (double v : input) {
        if (!std::isfinite(v)) throw ValidationError("path input has a non-finite coordinate");
    }
    for (double v : baseline) {
        if (!std::isfinite(v)) throw ValidationError("path baseline has a non-finite coordinate");
    }
}

bool PathSpec::degenerate() const {
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (input[i] != baseline[i]) return false;
    }
    return true;
}

double clamp_unit(double t, const char* what) {
    if (!(t >= -kUnitSlack && t <= 1.0 + kUnitSlack)) {
        throw ValidationError(std::string(what) + " = " + std::to_string(t) +
                              " is outside [0, 1]");
    }
    if (t < 0.0) return 0.0;
    if (t > 1.0) return 1.0;
    return t;
}

void gamma_into(const PathSpec& path, double alpha, std::span<double> out) {
    const double a = clamp_unit(alpha, "alpha");
    for (std::size_t i = 0; i < path.input.size(); ++i) {
        out[i] = path.baseline[i] + a * (path.input[i] - path.baseline[i]);
    }
}

std::vector<double> gamma(const PathSpec& path, double alpha) {
    std::vector<double> out(path.input.size());
    gamma_into(path, alpha, out);
    return out;
}

std::vector<double> intermediate_baseline(const PathSpec& path, double s) {
    clamp_unit(s, "s");
    return gamma(path, s);
}

double path_derivative(const Model& model, const PathSpec& path, double alpha) {
    const std::vector<double> point = gamma(path, alpha);
    const std::vector<double> g = model.grad(point);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        acc += (path.input[i] - path.baseline[i]) * g[i];
    }
    return acc;
}

double reparam_alpha(double s, double u) {
    const double sc = clamp_unit(s, "s");
    const double uc = clamp_unit(u, "u");
    return sc + uc * (1.0 - sc);
}

}  // namespace pathgrad
