#pragma once

// Static SVG 1.1 line plots: one mean line plus a shaded band per curve.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "banditlab/csv.hpp"

namespace banditlab {

struct SvgOptions {
  double width = 800.0;
  double height = 500.0;
  std::size_t smoothing_window = 1;
  std::string title = "mean regret";
};

// Trailing moving average; out[t] averages values[max(0, t-w+1) .. t].
std::vector<double> moving_average(std::span<const double> values, std::size_t window);

// Maps data coordinates to pixels. Both axes are linear with the data range
// padded by 5% on each side.
struct PlotFrame {
  double x_min = 0.0, x_max = 1.0;
  double y_min = 0.0, y_max = 1.0;
  double left = 60.0, right = 0.0, top = 30.0, bottom = 0.0;

  double px(double x) const;
  double py(double y) const;
};

// Frame for the (already smoothed) bundle on a width x height canvas.
PlotFrame make_frame(const CurveBundle& bundle, double width, double height);

// Smooths every curve, then renders. Throws ConfigError if the bundle is
// invalid or smoothing_window is 0.
std::string render_svg(const CurveBundle& bundle, const SvgOptions& options = {});

CurveBundle smooth(const CurveBundle& bundle, std::size_t window);

}  // namespace banditlab
