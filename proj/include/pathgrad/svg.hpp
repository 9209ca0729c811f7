#pragma once

#include <string>
#include <utility>
#include <vector>

namespace pathgrad {

struct SvgSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (x, y), all strictly positive
};

/// Self-contained log-log chart: two polylines, decade tick marks and labels
/// on both axes, and a legend. No plotting dependency so the output is
/// diff-able in tests. Throws ValidationError on empty series or
/// non-positive values.
std::string render_loglog_svg(const SvgSeries& a, const SvgSeries& b,
                              const std::string& x_label, const std::string& y_label);

/// Renders and writes atomically-ish: validates and renders before touching
/// the file, so a failed call leaves nothing behind.
void write_loglog_svg(const SvgSeries& a, const SvgSeries& b, const std::string& x_label,
                      const std::string& y_label, const std::string& path);

}  // namespace pathgrad
