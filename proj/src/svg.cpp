#include "banditlab/svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "banditlab/errors.hpp"

namespace banditlab {
namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void pad(double& lo, double& hi) {
  if (!(hi > lo)) {
    const double d = lo == 0.0 ? 1.0 : std::abs(lo) * 0.5;
    lo -= d;
    hi += d;
    return;
  }
  const double p = 0.05 * (hi - lo);
  lo -= p;
  hi += p;
}

}  // namespace

std::vector<double> moving_average(std::span<const double> values, std::size_t window) {
  if (window == 0) throw ConfigError("/output/smoothing_window", "must be >= 1");
  std::vector<double> out(values.size());
  double sum = 0.0;
  for (std::size_t t = 0; t < values.size(); ++t) {
    sum += values[t];
    if (t >= window) sum -= values[t - window];
    const std::size_t n = std::min(window, t + 1);
    out[t] = window == 1 ? values[t] : sum / static_cast<double>(n);
  }
  return out;
}

double PlotFrame::px(double x) const {
  return left + (x - x_min) / (x_max - x_min) * (right - left);
}

double PlotFrame::py(double y) const {
  return bottom - (y - y_min) / (y_max - y_min) * (bottom - top);
}

PlotFrame make_frame(const CurveBundle& bundle, double width, double height) {
  PlotFrame f;
  f.right = width - 20.0;
  f.bottom = height - 40.0;
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (const auto& c : bundle.curves) {
    for (std::size_t i = 0; i < c.t.size(); ++i) {
      xlo = std::min(xlo, c.t[i]);
      xhi = std::max(xhi, c.t[i]);
      ylo = std::min({ylo, c.ci_lo[i], c.mean[i]});
      yhi = std::max({yhi, c.ci_hi[i], c.mean[i]});
    }
  }
  pad(xlo, xhi);
  pad(ylo, yhi);
  f.x_min = xlo;
  f.x_max = xhi;
  f.y_min = ylo;
  f.y_max = yhi;
  return f;
}

CurveBundle smooth(const CurveBundle& bundle, std::size_t window) {
  CurveBundle out = bundle;
  for (auto& c : out.curves) {
    c.mean = moving_average(c.mean, window);
    c.ci_lo = moving_average(c.ci_lo, window);
    c.ci_hi = moving_average(c.ci_hi, window);
  }
  return out;
}

std::string render_svg(const CurveBundle& bundle, const SvgOptions& options) {
  bundle.validate();
  const CurveBundle sm = smooth(bundle, options.smoothing_window);
  const PlotFrame f = make_frame(sm, options.width, options.height);

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
       fixed(options.width) + "\" height=\"" + fixed(options.height) + "\">\n";
  s += "<metadata>smoothing_window=" + std::to_string(options.smoothing_window) +
       "</metadata>\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + fixed(options.width / 2) + "\" y=\"18\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"14\">" + escape_xml(options.title) + "</text>\n";

  // axes and tick labels
  s += "<g stroke=\"black\" stroke-width=\"1\">\n";
  s += "<line x1=\"" + fixed(f.left) + "\" y1=\"" + fixed(f.bottom) + "\" x2=\"" + fixed(f.right) +
       "\" y2=\"" + fixed(f.bottom) + "\"/>\n";
  s += "<line x1=\"" + fixed(f.left) + "\" y1=\"" + fixed(f.top) + "\" x2=\"" + fixed(f.left) +
       "\" y2=\"" + fixed(f.bottom) + "\"/>\n";
  s += "</g>\n<g font-family=\"sans-serif\" font-size=\"10\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double x = f.x_min + (f.x_max - f.x_min) * i / 4.0;
    const double y = f.y_min + (f.y_max - f.y_min) * i / 4.0;
    s += "<text x=\"" + fixed(f.px(x)) + "\" y=\"" + fixed(f.bottom + 14) +
         "\" text-anchor=\"middle\">" + format_number(std::round(x)) + "</text>\n";
    s += "<text x=\"" + fixed(f.left - 4) + "\" y=\"" + fixed(f.py(y) + 3) +
         "\" text-anchor=\"end\">" + fixed(y) + "</text>\n";
  }
  s += "</g>\n";

  for (std::size_t ci = 0; ci < sm.curves.size(); ++ci) {
    const Curve& c = sm.curves[ci];
    const char* color = kPalette[ci % kPalette.size()];
    std::string band, line;
    for (std::size_t i = 0; i < c.t.size(); ++i) {
      band += fixed(f.px(c.t[i])) + "," + fixed(f.py(c.ci_hi[i])) + " ";
    }
    for (std::size_t i = c.t.size(); i-- > 0;) {
      band += fixed(f.px(c.t[i])) + "," + fixed(f.py(c.ci_lo[i])) + " ";
    }
    for (std::size_t i = 0; i < c.t.size(); ++i) {
      if (i) line += ' ';
      line += fixed(f.px(c.t[i])) + "," + fixed(f.py(c.mean[i]));
    }
    band.pop_back();
    s += "<g class=\"series\" data-name=\"" + escape_xml(c.name) + "\">\n";
    s += "<polygon class=\"band\" fill=\"" + std::string(color) +
         "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"" + band + "\"/>\n";
    s += "<polyline class=\"mean\" fill=\"none\" stroke=\"" + std::string(color) +
         "\" stroke-width=\"1.5\" points=\"" + line + "\"/>\n";
    s += "<text x=\"" + fixed(f.right - 120) + "\" y=\"" + fixed(f.top + 14 + 14.0 * ci) +
         "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + color + "\">" +
         escape_xml(c.name) + "</text>\n";
    s += "</g>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace banditlab
