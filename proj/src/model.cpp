#include "pathgrad/model.hpp"

#include <cmath>
#include <memory>
#include <utility>

#include "pathgrad/errors.hpp"
#include "pathgrad/kvconfig.hpp"

namespace pathgrad {

Model::Model(std::string name, int dim, EvalFn eval, GradFn grad)
    : name_(std::move(name)), dim_(dim), eval_(std::move(eval)), grad_(std::move(grad)) {
    if (dim_ < 1) throw ValidationError("model dimension must be >= 1");
    if (!eval_ || !grad_) throw ValidationError("model needs both eval and grad procedures");
}

void Model::check_arg(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_) {
        throw ValidationError("model '" + name_ + "' expects " + std::to_string(dim_) +
                              " coordinates, got " + std::to_string(x.size()));
    }
}

double Model::eval(std::span<const double> x) const {
    check_arg(x);
    return eval_(x);
}

void Model::grad_into(std::span<const double> x, std::span<double> out) const {
    check_arg(x);
    if (out.size() != x.size()) throw ValidationError("gradient output span has wrong size");
    grad_(x, out);
}

std::vector<double> Model::grad(std::span<const double> x) const {
    std::vector<double> out(x.size());
    grad_into(x, out);
    return out;
}

namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

Model make_linear3() {
    return Model(
        "linear3", 3, [](std::span<const double> x) { return x[0] + x[1] + x[2]; },
        [](std::span<const double>, std::span<double> g) { g[0] = g[1] = g[2] = 1.0; });
}

Model make_quadratic3() {
    return Model(
        "quadratic3", 3,
        [](std::span<const double> x) { return x[0] * x[0] + x[0] * x[1] + x[2] * x[2]; },
        [](std::span<const double> x, std::span<double> g) {
            g[0] = 2.0 * x[0] + x[1];
            g[1] = x[0];
            g[2] = 2.0 * x[2];
        });
}

Model make_sigmoidal3() {
    return Model(
        "sigmoidal3", 3,
        [](std::span<const double> x) {
            const double mean = (x[0] + x[1] + x[2]) / 3.0;
            return logistic(10.0 * (mean - 0.5));
        },
        [](std::span<const double> x, std::span<double> g) {
            const double mean = (x[0] + x[1] + x[2]) / 3.0;
            const double s = logistic(10.0 * (mean - 0.5));
            const double d = (10.0 / 3.0) * s * (1.0 - s);
            g[0] = g[1] = g[2] = d;
        });
}

}  // namespace

const std::vector<std::string>& builtin_model_names() {
    static const std::vector<std::string> names = {"linear3", "quadratic3", "sigmoidal3"};
    return names;
}

Model builtin_model(const std::string& name) {
    if (name == "linear3") return make_linear3();
    if (name == "quadratic3") return make_quadratic3();
    if (name == "sigmoidal3") return make_sigmoidal3();
    std::string msg = "unknown model '" + name + "'; available:";
    for (const auto& n : builtin_model_names()) msg += " " + n;
    throw UnknownModelError(msg);
}

double check_gradient(const Model& model, std::span<const double> point, double step) {
    if (!(step > 0.0)) throw ValidationError("finite-difference step must be > 0");
    for (double v : point) {
        if (!std::isfinite(v)) throw ValidationError("check_gradient point must be finite");
    }
    const std::vector<double> g = model.grad(point);
    std::vector<double> x(point.begin(), point.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double orig = x[i];
        x[i] = orig + step;
        const double fp = model.eval(x);
        x[i] = orig - step;
        const double fm = model.eval(x);
        x[i] = orig;
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw NumericsError("model '" + model.name() +
                                "' evaluated non-finite at a perturbed point");
        }
        const double cd = (fp - fm) / (2.0 * step);
        const double rel = std::abs(g[i] - cd) / std::max(1.0, std::abs(cd));
        worst = std::max(worst, rel);
    }
    return worst;
}

Model linear_combination(double a, const Model& f, double b, const Model& g,
                         std::string name) {
    if (f.dim() != g.dim()) {
        throw ValidationError("linear_combination needs models of equal dimension");
    }
    const int n = f.dim();
    return Model(
        std::move(name), n,
        [a, f, b, g](std::span<const double> x) { return a * f.eval(x) + b * g.eval(x); },
        [a, f, b, g, n](std::span<const double> x, std::span<double> out) {
            std::vector<double> tmp(n);
            f.grad_into(x, out);
            g.grad_into(x, tmp);
            for (int i = 0; i < n; ++i) out[i] = a * out[i] + b * tmp[i];
        });
}

namespace {

struct MlpCore {
    MlpSpec spec;

    int input_dim() const { return spec.layer_sizes.front(); }
    int layers() const { return static_cast<int>(spec.layer_sizes.size()) - 1; }

    double act(double z) const {
        return spec.activation == Activation::tanh ? std::tanh(z) : logistic(z);
    }
    // derivative expressed through the activation value itself
    double act_deriv_from_value(double a) const {
        return spec.activation == Activation::tanh ? 1.0 - a * a : a * (1.0 - a);
    }

    // Forward pass keeping activations per layer; returns scalar output.
    double forward(std::span<const double> x, std::vector<std::vector<double>>& acts) const {
        acts.assign(spec.layer_sizes.size(), {});
        acts[0].assign(x.begin(), x.end());
        for (int l = 0; l < layers(); ++l) {
            const int nin = spec.layer_sizes[l];
            const int nout = spec.layer_sizes[l + 1];
            const auto& w = spec.weights[l];
            const auto& bias = spec.biases[l];
            acts[l + 1].resize(nout);
            const bool last = (l == layers() - 1);
            for (int r = 0; r < nout; ++r) {
                double z = bias[r];
                for (int c = 0; c < nin; ++c) z += w[r * nin + c] * acts[l][c];
                acts[l + 1][r] = last ? z : act(z);
            }
        }
        return acts.back()[0];
    }

    // Hand-written reverse pass: seed d(out)/d(out) = 1 and walk the layers
    // backwards, multiplying by W^T and the activation derivative.
    void backward(const std::vector<std::vector<double>>& acts, std::span<double> out) const {
        std::vector<double> delta = {1.0};
        for (int l = layers() - 1; l >= 0; --l) {
            const int nin = spec.layer_sizes[l];
            const int nout = spec.layer_sizes[l + 1];
            const auto& w = spec.weights[l];
            std::vector<double> prev(nin, 0.0);
            for (int c = 0; c < nin; ++c) {
                double acc = 0.0;
                for (int r = 0; r < nout; ++r) acc += w[r * nin + c] * delta[r];
                prev[c] = acc;
            }
            if (l > 0) {
                for (int c = 0; c < nin; ++c) {
                    prev[c] *= act_deriv_from_value(acts[l][c]);
                }
            }
            delta = std::move(prev);
        }
        for (std::size_t i = 0; i < delta.size(); ++i) out[i] = delta[i];
    }
};

void validate_mlp_spec(const MlpSpec& spec) {
    if (spec.name.empty()) throw ValidationError("mlp spec needs a name");
    if (spec.layer_sizes.size() < 2) {
        throw ValidationError("mlp '" + spec.name + "' needs at least two layer sizes");
    }
    for (int n : spec.layer_sizes) {
        if (n < 1) throw ValidationError("mlp '" + spec.name + "' layer sizes must be positive");
    }
    if (spec.layer_sizes.back() != 1) {
        throw ValidationError("mlp '" + spec.name + "' must have scalar output (last layer size 1)");
    }
    const std::size_t nlayers = spec.layer_sizes.size() - 1;
    if (spec.weights.size() != nlayers || spec.biases.size() != nlayers) {
        throw ValidationError("mlp '" + spec.name + "' needs one weight matrix and one bias per layer");
    }
    for (std::size_t l = 0; l < nlayers; ++l) {
        const std::size_t nin = static_cast<std::size_t>(spec.layer_sizes[l]);
        const std::size_t nout = static_cast<std::size_t>(spec.layer_sizes[l + 1]);
        if (spec.weights[l].size() != nin * nout) {
            throw ValidationError("mlp '" + spec.name + "' weight " + std::to_string(l + 1) +
                                  " must have " + std::to_string(nout * nin) + " entries");
        }
        if (spec.biases[l].size() != nout) {
            throw ValidationError("mlp '" + spec.name + "' bias " + std::to_string(l + 1) +
                                  " must have " + std::to_string(nout) + " entries");
        }
        for (double v : spec.weights[l]) {
            if (!std::isfinite(v)) throw ValidationError("mlp '" + spec.name + "' has non-finite weight");
        }
        for (double v : spec.biases[l]) {
            if (!std::isfinite(v)) throw ValidationError("mlp '" + spec.name + "' has non-finite bias");
        }
    }
}

}  // namespace

Model make_mlp(const MlpSpec& spec) {
    validate_mlp_spec(spec);
    auto core = std::make_shared<MlpCore>(MlpCore{spec});
    return Model(
        spec.name, spec.layer_sizes.front(),
        [core](std::span<const double> x) {
            std::vector<std::vector<double>> acts;
            return core->forward(x, acts);
        },
        [core](std::span<const double> x, std::span<double> out) {
            std::vector<std::vector<double>> acts;
            core->forward(x, acts);
            core->backward(acts, out);
        });
}

MlpSpec mlp_spec_from_kv(const std::map<std::string, std::string>& kv) {
    MlpSpec spec;
    spec.name = kv_get(kv, "name");
    for (double v : parse_reals(kv_get(kv, "layers"))) {
        if (v != std::floor(v) || v < 1.0 || v > 1e6) {
            throw ValidationError("mlp 'layers' must be positive integers");
        }
        spec.layer_sizes.push_back(static_cast<int>(v));
    }
    const std::string act = kv_get(kv, "activation");
    if (act == "tanh") {
        spec.activation = Activation::tanh;
    } else if (act == "sigmoid") {
        spec.activation = Activation::sigmoid;
    } else {
        throw ValidationError("mlp activation must be tanh or sigmoid, got '" + act + "'");
    }
    if (spec.layer_sizes.size() < 2) {
        throw ValidationError("mlp 'layers' needs at least two sizes");
    }
    for (std::size_t l = 1; l < spec.layer_sizes.size(); ++l) {
        spec.weights.push_back(parse_reals(kv_get(kv, "weight." + std::to_string(l))));
        spec.biases.push_back(parse_reals(kv_get(kv, "bias." + std::to_string(l))));
    }
    validate_mlp_spec(spec);
    return spec;
}

MlpSpec load_mlp_spec(const std::string& path) {
    return mlp_spec_from_kv(load_kv_file(path));
}

ModelRegistry::ModelRegistry() {
    for (const auto& name : builtin_model_names()) add(builtin_model(name));
}

void ModelRegistry::add(Model model) {
    const std::string name = model.name();
    if (!models_.emplace(name, std::move(model)).second) {
        throw ValidationError("a model named '" + name + "' is already registered");
    }
}

Model ModelRegistry::get(const std::string& name) const {
    auto it = models_.find(name);
    if (it == models_.end()) {
        std::string msg = "unknown model '" + name + "'; available:";
        for (const auto& [n, _] : models_) msg += " " + n;
        throw UnknownModelError(msg);
    }
    return it->second;
}

std::vector<std::string> ModelRegistry::names() const {
    std::vector<std::string> out;
    out.reserve(models_.size());
    for (const auto& [n, _] : models_) out.push_back(n);
    return out;
}

}  // namespace pathgrad
