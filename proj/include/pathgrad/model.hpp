#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace pathgrad {

/// A differentiable scalar function of an n-vector together with an exact
/// gradient procedure. Immutable after construction; evaluation is pure and
/// safe to call from many threads.
class Model {
public:
    using EvalFn = std::function<double(std::span<const double>)>;
    using GradFn = std::function<void(std::span<const double>, std::span<double>)>;

    Model(std::string name, int dim, EvalFn eval, GradFn grad);

    const std::string& name() const { return name_; }
    int dim() const { return dim_; }

    double eval(std::span<const double> x) const;
    void grad_into(std::span<const double> x, std::span<double> out) const;
    std::vector<double> grad(std::span<const double> x) const;

private:
    void check_arg(std::span<const double> x) const;

    std::string name_;
    int dim_;
    EvalFn eval_;
    GradFn grad_;
};

/// Built-in 3-variable test functions with analytic gradients:
///   linear3:     F(x) = x1 + x2 + x3
///   quadratic3:  F(x) = x1^2 + x1 x2 + x3^2
///   sigmoidal3:  F(x) = logistic(10 (mean(x) - 1/2))
Model builtin_model(const std::string& name);
const std::vector<std::string>& builtin_model_names();

/// Max over coordinates of |grad_i - centraldiff_i| / max(1, |centraldiff_i|)
/// with central differences of eval at the given step.
double check_gradient(const Model& model, std::span<const double> point, double step);

/// a*F + b*G as a new model (used by the linearity axiom check).
Model linear_combination(double a, const Model& f, double b, const Model& g,
                         std::string name);

enum class Activation { tanh, sigmoid };

/// Fully-connected feed-forward net, scalar output, hidden layers activated,
/// final layer linear. Gradients come from an explicit hand-written reverse
/// pass so exactness stays auditable.
struct MlpSpec {
    std::string name;
    std::vector<int> layer_sizes;               // first = input dim, last = 1
    std::vector<std::vector<double>> weights;   // per layer, row-major (out x in)
    std::vector<std::vector<double>> biases;    // per layer
    Activation activation = Activation::tanh;
};

Model make_mlp(const MlpSpec& spec);

/// Loads an MlpSpec from a plain-text key/value config (see docs/formats.md).
MlpSpec load_mlp_spec(const std::string& path);
MlpSpec mlp_spec_from_kv(const std::map<std::string, std::string>& kv);

/// Name -> Model lookup, preloaded with the built-ins; MLPs register here.
class ModelRegistry {
public:
    ModelRegistry();
    void add(Model model);
    Model get(const std::string& name) const;
    std::vector<std::string> names() const;

private:
    std::map<std::string, Model> models_;
};

}  // namespace pathgrad
