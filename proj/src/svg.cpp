#include "pathgrad/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pathgrad/errors.hpp"

namespace pathgrad {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 24.0;
constexpr double kMarginBottom = 52.0;

struct LogRange {
    int lo_decade;
    int hi_decade;
    double span() const { return static_cast<double>(hi_decade - lo_decade); }
};

LogRange decade_range(double lo, double hi) {
    int a = static_cast<int>(std::floor(std::log10(lo) + 1e-12));
    int b = static_cast<int>(std::ceil(std::log10(hi) - 1e-12));
    if (a == b) {  // flat series: keep one decade of headroom
        --a;
        ++b;
    }
    return {a, b};
}

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::string decade_label(int d) { return "1e" + std::to_string(d); }

void validate(const SvgSeries& s) {
    if (s.points.empty()) throw ValidationError("svg series '" + s.label + "' is empty");
    for (const auto& [x, y] : s.points) {
        if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
            throw ValidationError("svg series '" + s.label +
                                  "' needs strictly positive finite values for log axes");
        }
    }
}

}  // namespace

std::string render_loglog_svg(const SvgSeries& a, const SvgSeries& b,
                              const std::string& x_label, const std::string& y_label) {
    validate(a);
    validate(b);

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const SvgSeries* s : {&a, &b}) {
        for (const auto& [x, y] : s->points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    const LogRange xr = decade_range(xmin, xmax);
    const LogRange yr = decade_range(ymin, ymax);

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const auto px = [&](double x) {
        return kMarginLeft + (std::log10(x) - xr.lo_decade) / xr.span() * plot_w;
    };
    const auto py = [&](double y) {
        return kMarginTop + plot_h - (std::log10(y) - yr.lo_decade) / yr.span() * plot_h;
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "  <rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";

    // axes
    const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
    const double y0 = kMarginTop + plot_h, y1 = kMarginTop;
    svg << "  <line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
        << "\" stroke=\"black\"/>\n";
    svg << "  <line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
        << "\" stroke=\"black\"/>\n";

    // decade ticks
    for (int d = xr.lo_decade; d <= xr.hi_decade; ++d) {
        const double x = px(std::pow(10.0, d));
        svg << "  <line class=\"xtick\" x1=\"" << x << "\" y1=\"" << y0 << "\" x2=\"" << x
            << "\" y2=\"" << y0 + 6 << "\" stroke=\"black\"/>\n";
        svg << "  <text x=\"" << x << "\" y=\"" << y0 + 20
            << "\" font-size=\"12\" text-anchor=\"middle\">" << decade_label(d) << "</text>\n";
    }
    for (int d = yr.lo_decade; d <= yr.hi_decade; ++d) {
        const double y = py(std::pow(10.0, d));
        svg << "  <line class=\"ytick\" x1=\"" << x0 - 6 << "\" y1=\"" << y << "\" x2=\"" << x0
            << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
        svg << "  <text x=\"" << x0 - 9 << "\" y=\"" << y + 4
            << "\" font-size=\"12\" text-anchor=\"end\">" << decade_label(d) << "</text>\n";
    }

    // axis labels
    svg << "  <text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 12
        << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n";
    svg << "  <text x=\"16\" y=\"" << (y0 + y1) / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (y0 + y1) / 2 << ")\">" << y_label << "</text>\n";

    // the two series; these are the only polyline elements in the file
    const char* colors[2] = {"#1f77b4", "#d62728"};
    int ci = 0;
    for (const SvgSeries* s : {&a, &b}) {
        svg << "  <polyline fill=\"none\" stroke=\"" << colors[ci] << "\" stroke-width=\"2\" points=\"";
        bool first = true;
        for (const auto& [x, y] : s->points) {
            if (!first) svg << " ";
            svg << num(px(x)) << "," << num(py(y));
            first = false;
        }
        svg << "\"/>\n";
        ++ci;
    }

    // legend
    const double lx = x1 - 190.0, ly = y1 + 10.0;
    svg << "  <rect x=\"" << lx - 8 << "\" y=\"" << ly - 14 << "\" width=\"198\" height=\"44\""
        << " fill=\"white\" stroke=\"#888\"/>\n";
    ci = 0;
    for (const SvgSeries* s : {&a, &b}) {
        const double yy = ly + 18.0 * ci;
        svg << "  <line x1=\"" << lx << "\" y1=\"" << yy - 4 << "\" x2=\"" << lx + 26
            << "\" y2=\"" << yy - 4 << "\" stroke=\"" << colors[ci] << "\" stroke-width=\"2\"/>\n";
        svg << "  <text x=\"" << lx + 32 << "\" y=\"" << yy
            << "\" font-size=\"12\">" << s->label << "</text>\n";
        ++ci;
    }

    svg << "</svg>\n";
    return svg.str();
}

void write_loglog_svg(const SvgSeries& a, const SvgSeries& b, const std::string& x_label,
                      const std::string& y_label, const std::string& path) {
    const std::string content = render_loglog_svg(a, b, x_label, y_label);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write svg file '" + path + "'");
    out << content;
    out.flush();
    if (!out) throw IoError("failed while writing svg file '" + path + "'");
}

}  // namespace pathgrad
