#include "pathgrad/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "pathgrad/attribution.hpp"
#include "pathgrad/density.hpp"
#include "pathgrad/errors.hpp"
#include "pathgrad/experiments.hpp"
#include "pathgrad/kvconfig.hpp"
#include "pathgrad/model.hpp"
#include "pathgrad/svg.hpp"
#include "pathgrad/textio.hpp"

namespace pathgrad {

namespace {

/// Removes any files written during a failed run.
class OutputGuard {
public:
    ~OutputGuard() {
        if (committed_) return;
        for (const auto& p : paths_) {
            std::error_code ec;
            std::filesystem::remove(p, ec);
        }
    }
    void track(const std::string& path) { paths_.push_back(path); }
    void commit() { committed_ = true; }

private:
    std::vector<std::string> paths_;
    bool committed_ = false;
};

void write_text_file(const std::string& path, const std::string& content, OutputGuard& guard) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path + "'");
    guard.track(path);
    out << content;
    out.flush();
    if (!out) throw IoError("failed while writing '" + path + "'");
}

/// One option: command-line flag wins, then the --config file, then the
/// built-in default. Presence is tracked through CLI11's count().
class Options {
public:
    Options(CLI::App* cmd, const std::map<std::string, std::string>* cfg) : cmd_(cmd), cfg_(cfg) {}

    std::string get(const std::string& flag, const std::string& fallback) {
        const CLI::Option* opt = cmd_->get_option("--" + flag);
        if (opt->count() > 0) return opt->as<std::string>();
        if (cfg_ != nullptr) {
            auto it = cfg_->find(flag);
            if (it != cfg_->end()) return it->second;
        }
        return fallback;
    }
    bool given(const std::string& flag) const {
        if (cmd_->get_option("--" + flag)->count() > 0) return true;
        return cfg_ != nullptr && cfg_->count(flag) > 0;
    }
    long get_long(const std::string& flag, long fallback) {
        const std::string s = get(flag, "");
        return s.empty() ? fallback : parse_long(s);
    }
    double get_double(const std::string& flag, double fallback) {
        const std::string s = get(flag, "");
        return s.empty() ? fallback : parse_real(s);
    }

private:
    CLI::App* cmd_;
    const std::map<std::string, std::string>* cfg_;
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv("PATHGRAD_SEED")) {
        return static_cast<std::uint64_t>(parse_long(env));
    }
    return 0;
}

std::string join_reals(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ",";
        out += fmt17(v[i]);
    }
    return out;
}

std::string join_longs(const std::vector<long>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

/// Resolved settings in effect for a run; serialized into the CSV metadata
/// comment and the JSON summary so outputs are self-describing.
struct ResolvedConfig {
    std::string command;
    std::vector<std::pair<std::string, std::string>> entries;

    void set(const std::string& k, const std::string& v) { entries.emplace_back(k, v); }
    std::string flat() const {
        std::string out = "command=" + command;
        for (const auto& [k, v] : entries) out += " " + k + "=" + v;
        return out;
    }
    std::string find(const std::string& k) const {
        for (const auto& [key, v] : entries) {
            if (key == k) return v;
        }
        return "";
    }
};

std::string csv_header(const ResolvedConfig& rc) {
    return "# pathgrad " + std::string(kVersion) + " | seed=" + rc.find("seed") + " | " +
           rc.flat() + "\n";
}

void json_config(JsonWriter& w, const ResolvedConfig& rc) {
    w.key("config").begin_object();
    w.kv("command", rc.command);
    for (const auto& [k, v] : rc.entries) w.kv(k, v);
    w.end_object();
}

struct CommonInputs {
    Model model;
    PathSpec path;
    Density density;
    std::uint64_t seed;
};

std::vector<double> resolve_vector(Options& opts, const std::string& flag, int dim,
                                   double fill) {
    if (!opts.given(flag)) return std::vector<double>(static_cast<std::size_t>(dim), fill);
    std::vector<double> v = parse_reals(opts.get(flag, ""));
    if (static_cast<int>(v.size()) != dim) {
        throw ValidationError("--" + flag + " needs " + std::to_string(dim) +
                              " comma-separated coordinates");
    }
    return v;
}

CommonInputs resolve_common(Options& opts, const ModelRegistry& registry,
                            ResolvedConfig& rc, const std::string& default_model) {
    const std::string model_name = opts.get("model", default_model);
    Model model = registry.get(model_name);
    std::vector<double> input = resolve_vector(opts, "input", model.dim(), 1.0);
    std::vector<double> baseline = resolve_vector(opts, "baseline", model.dim(), 0.0);
    Density density = parse_density(opts.get("density", "uniform"));
    const std::uint64_t seed =
        static_cast<std::uint64_t>(opts.get_long("seed", static_cast<long>(default_seed())));
    rc.set("model", model_name);
    rc.set("input", join_reals(input));
    rc.set("baseline", join_reals(baseline));
    rc.set("density", density.describe());
    rc.set("seed", std::to_string(seed));
    return CommonInputs{std::move(model), PathSpec(std::move(input), std::move(baseline)),
                        std::move(density), seed};
}

// ---------------------------------------------------------------- attribute

int cmd_attribute(Options& opts, const ModelRegistry& registry, std::ostream& out) {
    ResolvedConfig rc;
    rc.command = "attribute";
    CommonInputs in = resolve_common(opts, registry, rc, "quadratic3");

    const std::string estimator = opts.get("estimator", "psig-det");
    const long steps = opts.get_long("steps", 1000);
    const std::string rule_name = opts.get("rule", "right");
    QuadratureRule rule;
    if (rule_name == "right") {
        rule = QuadratureRule::right_endpoint;
    } else if (rule_name == "midpoint") {
        rule = QuadratureRule::midpoint;
    } else {
        throw ValidationError("--rule must be right or midpoint");
    }
    rc.set("estimator", estimator);
    rc.set("steps", std::to_string(steps));
    rc.set("rule", rule_name);

    AttributionResult result;
    if (estimator == "ig") {
        result = ig(in.model, in.path, steps, rule);
    } else if (estimator == "psig-det") {
        result = psig_det(in.model, in.path, in.density, steps, rule);
    } else if (estimator == "psig-mc") {
        const long baselines = opts.get_long("baselines", 1000);
        rc.set("baselines", std::to_string(baselines));
        result = psig_mc(in.model, in.path, in.density, baselines, steps, in.seed);
    } else {
        throw ValidationError("--estimator must be ig, psig-det or psig-mc");
    }

    OutputGuard guard;
    const std::string csv_path = opts.get("csv", "");
    if (!csv_path.empty()) {
        std::string csv = csv_header(rc) + "feature,value\n";
        for (std::size_t i = 0; i < result.values.size(); ++i) {
            csv += std::to_string(i + 1) + "," + fmt17(result.values[i]) + "\n";
        }
        write_text_file(csv_path, csv, guard);
    }
    const std::string json_path = opts.get("json", "");
    if (!json_path.empty()) {
        JsonWriter w;
        w.begin_object();
        w.kv("version", kVersion);
        json_config(w, rc);
        w.kv("estimator", estimator_name(result.estimator));
        w.kv("steps", result.steps);
        w.kv("density_or_weight", result.density_or_weight);
        w.kv("values", result.values);
        w.kv("sum", result.sum);
        if (!result.std_error.empty()) {
            w.kv("std_error", result.std_error);
            w.kv("n_baselines", result.n_baselines);
        }
        w.end_object();
        write_text_file(json_path, w.str() + "\n", guard);
    }

    out << "model: " << in.model.name() << "   estimator: " << estimator_name(result.estimator)
        << "   density/weight: " << result.density_or_weight << "   steps: " << result.steps
        << "\n";
    out << "feature  attribution\n";
    for (std::size_t i = 0; i < result.values.size(); ++i) {
        out << std::setw(7) << (i + 1) << "  " << fmt17(result.values[i]);
        if (!result.std_error.empty()) out << "  (se " << fmt17(result.std_error[i]) << ")";
        out << "\n";
    }
    out << "sum      " << fmt17(result.sum) << "\n";
    guard.commit();
    return 0;
}

// ----------------------------------------------------------------- variance

std::vector<std::string> split_names(const std::string& text) {
    std::vector<std::string> out;
    std::string token;
    for (char c : text) {
        if (c == ',') {
            if (!trim(token).empty()) out.push_back(trim(token));
            token.clear();
        } else {
            token += c;
        }
    }
    if (!trim(token).empty()) out.push_back(trim(token));
    return out;
}

int cmd_variance(Options& opts, const ModelRegistry& registry, std::ostream& out) {
    ResolvedConfig rc;
    rc.command = "variance";

    const std::string models_arg = opts.given("model")
                                       ? opts.get("model", "")
                                       : opts.get("models", "linear3,quadratic3,sigmoidal3");
    const std::vector<std::string> model_names = split_names(models_arg);
    if (model_names.empty()) throw ValidationError("--models needs at least one model name");

    Density density = parse_density(opts.get("density", "uniform"));
    const long trials = opts.get_long("trials", 1000);
    NoiseModel noise;
    noise.sigma = opts.get_double("sigma", 1.0);
    noise.grid_steps = opts.get_long("steps", 100);
    noise.seed = static_cast<std::uint64_t>(opts.get_long("seed", static_cast<long>(default_seed())));

    rc.set("models", models_arg);
    rc.set("density", density.describe());
    rc.set("trials", std::to_string(trials));
    rc.set("sigma", fmt17(noise.sigma));
    rc.set("steps", std::to_string(noise.grid_steps));
    rc.set("seed", std::to_string(noise.seed));

    std::vector<VarianceReport> reports;
    for (const auto& name : model_names) {
        Model model = registry.get(name);
        std::vector<double> input = resolve_vector(opts, "input", model.dim(), 1.0);
        std::vector<double> baseline = resolve_vector(opts, "baseline", model.dim(), 0.0);
        PathSpec path(std::move(input), std::move(baseline));
        reports.push_back(variance_study(model, path, density, noise, trials));
    }
    rc.set("input", opts.given("input") ? opts.get("input", "") : "ones");
    rc.set("baseline", opts.given("baseline") ? opts.get("baseline", "") : "zeros");

    OutputGuard guard;
    const std::string csv_path = opts.get("csv", "");
    if (!csv_path.empty()) {
        std::string csv = csv_header(rc) + "model,trial,attr_ig,attr_ps\n";
        for (const auto& r : reports) {
            for (long t = 0; t < r.trials; ++t) {
                csv += r.model_name + "," + std::to_string(t) + "," +
                       fmt17(r.trial_ig[static_cast<std::size_t>(t)]) + "," +
                       fmt17(r.trial_ps[static_cast<std::size_t>(t)]) + "\n";
            }
        }
        write_text_file(csv_path, csv, guard);
    }
    const std::string json_path = opts.get("json", "");
    if (!json_path.empty()) {
        JsonWriter w;
        w.begin_object();
        w.kv("version", kVersion);
        json_config(w, rc);
        w.key("reports").begin_array();
        for (const auto& r : reports) {
            w.begin_object();
            w.kv("model", r.model_name);
            w.kv("density", r.density_name);
            w.kv("trials", r.trials);
            w.kv("var_ig", r.var_ig);
            w.kv("var_ps", r.var_ps);
            w.kv("ratio", r.ratio);
            w.kv("predicted_ratio", r.predicted_ratio);
            w.end_object();
        }
        w.end_array();
        w.end_object();
        write_text_file(json_path, w.str() + "\n", guard);
    }

    out << std::left << std::setw(14) << "Function" << std::setw(13) << "Var(IG)"
        << std::setw(13) << "Var(PS-IG)" << "Ratio\n";
    for (const auto& r : reports) {
        std::ostringstream vig, vps, ratio;
        vig << std::fixed << std::setprecision(5) << r.var_ig;
        vps << std::fixed << std::setprecision(5) << r.var_ps;
        ratio << std::fixed << std::setprecision(4) << r.ratio;
        out << std::left << std::setw(14) << r.model_name << std::setw(13) << vig.str()
            << std::setw(13) << vps.str() << ratio.str() << "\n";
    }
    out << "predicted ratio (integral of G^2): " << fmt17(reports.front().predicted_ratio)
        << "\n";
    guard.commit();
    return 0;
}

// -------------------------------------------------------------- convergence

int cmd_convergence(Options& opts, const ModelRegistry& registry, std::ostream& out) {
    ResolvedConfig rc;
    rc.command = "convergence";
    CommonInputs in = resolve_common(opts, registry, rc, "sigmoidal3");

    std::vector<long> budgets;
    for (double b : parse_reals(opts.get("budgets", "10,100,1000,10000"))) {
        budgets.push_back(static_cast<long>(b));
    }
    const long repeats = opts.get_long("repeats", 20);
    const long gt_steps = opts.get_long("ground-truth-steps", 100000);
    rc.set("budgets", join_longs(budgets));
    rc.set("repeats", std::to_string(repeats));
    rc.set("ground_truth_steps", std::to_string(gt_steps));

    const ConvergenceStudy study =
        convergence_study(in.model, in.path, in.density, budgets, repeats, gt_steps, in.seed);
    rc.set("split_policy", study.split_policy);

    OutputGuard guard;
    const std::string csv_path = opts.get("csv", "");
    if (!csv_path.empty()) {
        std::string csv = csv_header(rc) + "budget,inner_steps,n_baselines,mse_det,mse_mc\n";
        for (const auto& p : study.points) {
            csv += std::to_string(p.budget) + "," + std::to_string(p.inner_steps) + "," +
                   std::to_string(p.n_baselines) + "," + fmt17(p.mse_det) + "," +
                   fmt17(p.mse_mc) + "\n";
        }
        write_text_file(csv_path, csv, guard);
    }
    const std::string json_path = opts.get("json", "");
    if (!json_path.empty()) {
        JsonWriter w;
        w.begin_object();
        w.kv("version", kVersion);
        json_config(w, rc);
        w.kv("slope_det", study.slope_det);
        w.kv("slope_mc", study.slope_mc);
        w.key("points").begin_array();
        for (const auto& p : study.points) {
            w.begin_object();
            w.kv("budget", p.budget);
            w.kv("inner_steps", p.inner_steps);
            w.kv("n_baselines", p.n_baselines);
            w.kv("mse_det", p.mse_det);
            w.kv("mse_mc", p.mse_mc);
            w.end_object();
        }
        w.end_array();
        w.end_object();
        write_text_file(json_path, w.str() + "\n", guard);
    }
    const std::string svg_path = opts.get("svg", "");
    if (!svg_path.empty()) {
        SvgSeries det{"deterministic", {}}, mc{"monte-carlo", {}};
        for (const auto& p : study.points) {
            det.points.emplace_back(static_cast<double>(p.budget), p.mse_det);
            mc.points.emplace_back(static_cast<double>(p.budget), p.mse_mc);
        }
        const std::string content =
            render_loglog_svg(det, mc, "gradient evaluations", "MSE vs ground truth");
        write_text_file(svg_path, content, guard);
    }

    out << "budget      inner  baselines  mse_det        mse_mc\n";
    for (const auto& p : study.points) {
        std::ostringstream det_s, mc_s;
        det_s << std::scientific << std::setprecision(6) << p.mse_det;
        mc_s << std::scientific << std::setprecision(6) << p.mse_mc;
        out << std::left << std::setw(12) << p.budget << std::setw(7) << p.inner_steps
            << std::setw(11) << p.n_baselines << std::setw(15) << det_s.str() << mc_s.str()
            << "\n";
    }
    out << "fitted log-log slopes: deterministic " << fmt17(study.slope_det) << ", monte-carlo "
        << fmt17(study.slope_mc) << "\n";
    guard.commit();
    return 0;
}

// ------------------------------------------------------------------- axioms

int cmd_axioms(Options& opts, std::ostream& out) {
    ResolvedConfig rc;
    rc.command = "axioms";
    Density density = parse_density(opts.get("density", "uniform"));
    const long steps = opts.get_long("steps", 1000);
    rc.set("density", density.describe());
    rc.set("steps", std::to_string(steps));
    rc.set("seed", "0");

    const std::vector<AxiomOutcome> outcomes = axiom_checks(density, steps);

    OutputGuard guard;
    const std::string json_path = opts.get("json", "");
    if (!json_path.empty()) {
        JsonWriter w;
        w.begin_object();
        w.kv("version", kVersion);
        json_config(w, rc);
        w.key("axioms").begin_array();
        for (const auto& o : outcomes) {
            w.begin_object();
            w.kv("axiom", o.axiom);
            w.kv("pass", o.pass);
            w.kv("discrepancy", o.discrepancy);
            w.kv("detail", o.detail);
            w.end_object();
        }
        w.end_array();
        w.end_object();
        write_text_file(json_path, w.str() + "\n", guard);
    }

    bool all_pass = true;
    for (const auto& o : outcomes) {
        out << (o.pass ? "[pass] " : "[FAIL] ") << std::left << std::setw(10) << o.axiom
            << " discrepancy " << fmt17(o.discrepancy) << "  (" << o.detail << ")\n";
        all_pass = all_pass && o.pass;
    }
    guard.commit();
    return all_pass ? 0 : 2;
}

// ----------------------------------------------------------------- residual

int cmd_residual(Options& opts, const ModelRegistry& registry, std::ostream& out) {
    ResolvedConfig rc;
    rc.command = "residual";
    CommonInputs in = resolve_common(opts, registry, rc, "quadratic3");
    const long steps = opts.get_long("steps", 1000);
    const std::string weight_name = opts.get("weight", "cdf");
    rc.set("steps", std::to_string(steps));
    rc.set("weight", weight_name);

    WeightFn weight;
    if (weight_name == "one") {
        weight = WeightFn::one();
    } else if (weight_name == "alpha") {
        weight = WeightFn::identity();
    } else if (weight_name == "cdf") {
        weight = WeightFn::from_cdf(in.density);
    } else {
        throw ValidationError("--weight must be one, alpha or cdf");
    }

    const double direct = completeness_residual(in.model, in.path, weight, steps);
    const double by_parts = completeness_residual_by_parts(in.model, in.path, weight, steps);
    const double gap = expected_baseline_completeness_gap(in.model, in.path, in.density, steps);

    OutputGuard guard;
    const std::string json_path = opts.get("json", "");
    if (!json_path.empty()) {
        JsonWriter w;
        w.begin_object();
        w.kv("version", kVersion);
        json_config(w, rc);
        w.kv("weight", weight.descriptor);
        w.kv("residual_direct", direct);
        w.kv("residual_by_parts", by_parts);
        w.kv("difference", std::abs(direct - by_parts));
        w.kv("expected_baseline_gap", gap);
        w.end_object();
        write_text_file(json_path, w.str() + "\n", guard);
    }

    out << "model: " << in.model.name() << "   weight: " << weight.descriptor
        << "   steps: " << steps << "\n";
    out << "residual (direct)            " << fmt17(direct) << "\n";
    out << "residual (by parts, eq form) " << fmt17(by_parts) << "\n";
    out << "difference                   " << fmt17(std::abs(direct - by_parts)) << "\n";
    out << "expected-baseline gap        " << fmt17(gap) << "\n";
    guard.commit();
    return 0;
}

void add_common_options(CLI::App* cmd) {
    cmd->add_option("--model", "model name (built-in or registered MLP)");
    cmd->add_option("--models", "comma-separated model names (variance)");
    cmd->add_option("--input", "input vector x, comma-separated");
    cmd->add_option("--baseline", "baseline vector x', comma-separated");
    cmd->add_option("--density", "uniform | triangular | beta:a,b | pointmass:s0 | empirical:<file>");
    cmd->add_option("--steps", "grid steps m (inner steps for psig-mc)");
    cmd->add_option("--estimator", "ig | psig-det | psig-mc");
    cmd->add_option("--rule", "quadrature rule: right | midpoint");
    cmd->add_option("--baselines", "number of Monte Carlo baselines");
    cmd->add_option("--trials", "variance study trials");
    cmd->add_option("--sigma", "noise standard deviation");
    cmd->add_option("--budgets", "comma-separated gradient-evaluation budgets");
    cmd->add_option("--repeats", "Monte Carlo repeats per budget");
    cmd->add_option("--ground-truth-steps", "grid steps for the ground-truth attribution");
    cmd->add_option("--weight", "residual weight: one | alpha | cdf");
    cmd->add_option("--seed", "random seed (default: PATHGRAD_SEED env var, else 0)");
    cmd->add_option("--config", "key=value config file; flags override it");
    cmd->add_option("--mlp", "register an MLP from a key=value spec file");
    cmd->add_option("--csv", "write CSV output here");
    cmd->add_option("--json", "write JSON summary here");
    cmd->add_option("--svg", "write a log-log SVG chart here (convergence)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"attribution estimators and experiment drivers"};
    app.set_version_flag("--version", std::string("pathgrad ") + kVersion);
    app.require_subcommand(0, 1);

    CLI::App* attribute = app.add_subcommand("attribute", "compute per-feature attributions");
    CLI::App* variance = app.add_subcommand("variance", "gradient-noise variance study");
    CLI::App* convergence = app.add_subcommand("convergence", "deterministic vs Monte Carlo MSE");
    CLI::App* axioms = app.add_subcommand("axioms", "linearity / dummy / symmetry checks");
    CLI::App* residual = app.add_subcommand("residual", "completeness residual, two routes");
    for (CLI::App* cmd : {attribute, variance, convergence, axioms, residual}) {
        add_common_options(cmd);
    }

    std::vector<const char*> argv;
    argv.push_back("pathgrad");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 1;
    }

    CLI::App* active = nullptr;
    for (CLI::App* cmd : {attribute, variance, convergence, axioms, residual}) {
        if (cmd->parsed()) active = cmd;
    }
    if (active == nullptr) {
        err << "error: expected a subcommand: attribute | variance | convergence | axioms | residual\n";
        return 1;
    }

    try {
        std::map<std::string, std::string> cfg;
        if (active->get_option("--config")->count() > 0) {
            cfg = load_kv_file(active->get_option("--config")->as<std::string>());
        }
        Options opts(active, &cfg);

        ModelRegistry registry;
        const std::string mlp_path = opts.get("mlp", "");
        if (!mlp_path.empty()) registry.add(make_mlp(load_mlp_spec(mlp_path)));

        if (active == attribute) return cmd_attribute(opts, registry, out);
        if (active == variance) return cmd_variance(opts, registry, out);
        if (active == convergence) return cmd_convergence(opts, registry, out);
        if (active == axioms) return cmd_axioms(opts, out);
        return cmd_residual(opts, registry, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace pathgrad
