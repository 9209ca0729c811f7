#include "pathgrad/density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pathgrad/errors.hpp"
#include "pathgrad/kvconfig.hpp"
#include "pathgrad/pathgeom.hpp"

namespace pathgrad {

namespace {

// Panels for the precomputed beta CDF table. Each panel is integrated with
// Simpson's rule; the remainder from the nearest panel edge is integrated
// adaptively, so cdf() stays at ~1e-10 accuracy while staying cheap enough
// for bisection sampling.
constexpr int kBetaPanels = 16384;
constexpr double kSimpsonTol = 1e-10;
constexpr int kMaxSimpsonDepth = 40;

template <typename F>
double simpson(const F& f, double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(f, a, m, fa, flm, fm);
    const double right = simpson(f, m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
    if (b <= a) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    return adaptive_simpson(f, a, b, fa, fm, fb, simpson(f, a, b, fa, fm, fb), tol,
                            kMaxSimpsonDepth);
}

}  // namespace

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) throw ValidationError("empirical CDF needs at least one sample");
    for (double s : samples_) {
        if (!(s >= 0.0 && s <= 1.0)) {
            throw ValidationError("empirical samples must lie in [0, 1]");
        }
    }
    std::sort(samples_.begin(), samples_.end());
}

double EmpiricalCdf::operator()(double alpha) const {
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), alpha);
    return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

Density::Density(DensityKind kind, std::string descriptor)
    : kind_(kind), descriptor_(std::move(descriptor)) {}

Density Density::uniform() { return Density(DensityKind::uniform, "uniform"); }

Density Density::triangular_up() { return Density(DensityKind::triangular_up, "triangular"); }

Density Density::beta(double a, double b) {
    if (!(a >= 1.0) || !(b >= 1.0)) {
        throw ValidationError("beta density requires a >= 1 and b >= 1 (bounded pdf); got a=" +
                              std::to_string(a) + ", b=" + std::to_string(b));
    }
    std::ostringstream d;
    d << "beta:" << a << "," << b;
    Density out(DensityKind::beta, d.str());
    out.beta_a_ = a;
    out.beta_b_ = b;
    out.log_beta_norm_ = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    // cumulative integral of the pdf at panel edges i/kBetaPanels
    out.beta_cum_.resize(kBetaPanels + 1);
    out.beta_cum_[0] = 0.0;
    const auto p = [&out](double s) { return out.pdf(s); };
    for (int i = 0; i < kBetaPanels; ++i) {
        const double lo = static_cast<double>(i) / kBetaPanels;
        const double hi = static_cast<double>(i + 1) / kBetaPanels;
        out.beta_cum_[i + 1] = out.beta_cum_[i] + integrate(p, lo, hi, kSimpsonTol / kBetaPanels);
    }
    return out;
}

Density Density::point_mass(double s0) {
    if (!(s0 >= 0.0 && s0 <= 1.0)) {
        throw ValidationError("point mass location must lie in [0, 1]");
    }
    std::ostringstream d;
    d << "pointmass:" << s0;
    Density out(DensityKind::point_mass, d.str());
    out.point_ = s0;
    return out;
}

Density Density::empirical(std::vector<double> samples) {
    EmpiricalCdf cdf(std::move(samples));  // validates and sorts
    Density out(DensityKind::empirical,
                "empirical(m=" + std::to_string(cdf.size()) + ")");
    out.samples_ = cdf.samples();
    return out;
}

bool Density::is_continuous() const {
    return kind_ == DensityKind::uniform || kind_ == DensityKind::triangular_up ||
           kind_ == DensityKind::beta;
}

double Density::pdf(double s) const {
    if (!is_continuous()) {
        throw UnsupportedOperationError("pdf is undefined for " + descriptor_);
    }
    const double x = clamp_unit(s, "s");
    switch (kind_) {
        case DensityKind::uniform:
            return 1.0;
        case DensityKind::triangular_up:
            return 2.0 * x;
        case DensityKind::beta: {
            if (x == 0.0) return beta_a_ == 1.0 ? std::exp(-log_beta_norm_) : 0.0;
            if (x == 1.0) return beta_b_ == 1.0 ? std::exp(-log_beta_norm_) : 0.0;
            return std::exp((beta_a_ - 1.0) * std::log(x) + (beta_b_ - 1.0) * std::log1p(-x) -
                            log_beta_norm_);
        }
        default:
            return 0.0;  // unreachable
    }
}

double Density::cdf(double alpha) const {
    const double x = clamp_unit(alpha, "alpha");
    switch (kind_) {
        case DensityKind::uniform:
            return x;
        case DensityKind::triangular_up:
            return x * x;
        case DensityKind::beta: {
            if (x >= 1.0) return 1.0;
            const double scaled = x * kBetaPanels;
            const int panel = std::min(static_cast<int>(scaled), kBetaPanels - 1);
            const double lo = static_cast<double>(panel) / kBetaPanels;
            const auto p = [this](double s) { return pdf(s); };
            const double v = beta_cum_[panel] + integrate(p, lo, x, kSimpsonTol);
            return std::min(v, 1.0);
        }
        case DensityKind::point_mass:
            return x >= point_ ? 1.0 : 0.0;
        case DensityKind::empirical: {
            const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
            return static_cast<double>(it - samples_.begin()) /
                   static_cast<double>(samples_.size());
        }
    }
    return 0.0;
}

double Density::quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) throw ValidationError("quantile argument must lie in [0, 1]");
    switch (kind_) {
        case DensityKind::uniform:
            return u;
        case DensityKind::triangular_up:
            return std::sqrt(u);
        case DensityKind::beta: {
            // bisection on the CDF; no closed-form inverse
            double lo = 0.0, hi = 1.0;
            while (hi - lo > 1e-12) {
                const double mid = 0.5 * (lo + hi);
                if (cdf(mid) < u) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        case DensityKind::point_mass:
            return point_;
        case DensityKind::empirical: {
            const std::size_t m = samples_.size();
            std::size_t idx = static_cast<std::size_t>(u * static_cast<double>(m));
            if (idx >= m) idx = m - 1;
            return samples_[idx];
        }
    }
    return 0.0;
}

double Density::l2_norm_sq_of_cdf(long grid_size) const {
    if (grid_size < 2) throw ValidationError("l2_norm_sq_of_cdf needs grid_size >= 2");
    double acc = 0.0;
    for (long k = 1; k <= grid_size; ++k) {
        const double g = cdf(static_cast<double>(k) / static_cast<double>(grid_size));
        acc += g * g;
    }
    return acc / static_cast<double>(grid_size);
}

const std::vector<double>& Density::samples() const {
    if (kind_ != DensityKind::empirical) {
        throw UnsupportedOperationError("samples() is only defined for the empirical kind");
    }
    return samples_;
}

Density parse_density(const std::string& descriptor) {
    const std::string d = trim(descriptor);
    if (d == "uniform") return Density::uniform();
    if (d == "triangular") return Density::triangular_up();
    if (d.rfind("beta:", 0) == 0) {
        const auto parts = parse_reals(d.substr(5));
        if (parts.size() != 2) {
            throw ValidationError("beta density wants two parameters, e.g. beta:2,2");
        }
        return Density::beta(parts[0], parts[1]);
    }
    if (d.rfind("pointmass:", 0) == 0) {
        return Density::point_mass(parse_real(d.substr(10)));
    }
    if (d.rfind("empirical:", 0) == 0) {
        const std::string path = trim(d.substr(10));
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot open sample file '" + path + "'");
        std::vector<double> samples;
        std::string line;
        while (std::getline(in, line)) {
            line = trim(line);
            if (line.empty() || line[0] == '#') continue;
            samples.push_back(parse_real(line));
        }
        if (samples.empty()) {
            throw ValidationError("sample file '" + path + "' contains no values");
        }
        return Density::empirical(std::move(samples));
    }
    throw ValidationError(
        "unknown density '" + d +
        "'; expected uniform | triangular | beta:a,b | pointmass:s0 | empirical:<path>");
}

}  // namespace pathgrad
