#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace asln {

struct Series {
  std::string label;
  std::vector<double> x, y;
};

struct ChartOptions {
  std::string title;
  std::string x_label = "n";
  std::string y_label;
  bool log_x = true;
  bool log_y = true;
  int width = 640, height = 400;
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

/// Minimal line chart: frame, decade ticks on log axes, one polyline per
/// series. Points that cannot be placed (non-positive on a log axis, non-finite)
/// are dropped.
inline std::string line_chart_svg(const std::vector<Series>& series, const ChartOptions& opt = {}) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  const double ml = 70, mr = 150, mt = 30, mb = 45;
  const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;
  auto tx = [&](double v) { return opt.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return opt.log_y ? std::log10(v) : v; };
  auto ok = [](double v, bool lg) { return std::isfinite(v) && (!lg || v > 0); };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!ok(s.x[i], opt.log_x) || !ok(s.y[i], opt.log_y)) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  auto px = [&](double v) { return ml + (tx(v) - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return mt + ph - (ty(v) - y0) / (y1 - y0) * ph; };

  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << opt.width << "\" height=\"" << opt.height << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << ml << "\" y=\"18\" font-size=\"13\">" << detail::xml_escape(opt.title) << "</text>\n";
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  auto ticks = [](double lo, double hi, bool lg) {
    std::vector<double> t;
    if (lg) {
      for (double k = std::ceil(lo - 1e-9); k <= hi + 1e-9; k += 1) t.push_back(k);
    } else {
      const double step = std::pow(10.0, std::floor(std::log10((hi - lo) / 4)));
      for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) t.push_back(v);
    }
    return t;
  };
  auto label = [](double v, bool lg) {
    std::ostringstream s;
    if (lg) s << "1e" << static_cast<int>(std::lround(v));
    else s << v;
    return s.str();
  };
  for (double t : ticks(x0, x1, opt.log_x)) {
    const double X = ml + (t - x0) / (x1 - x0) * pw;
    os << "<line x1=\"" << X << "\" y1=\"" << mt + ph << "\" x2=\"" << X << "\" y2=\"" << mt + ph + 5
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << X << "\" y=\"" << mt + ph + 18 << "\" text-anchor=\"middle\">" << label(t, opt.log_x)
       << "</text>\n";
  }
  for (double t : ticks(y0, y1, opt.log_y)) {
    const double Y = mt + ph - (t - y0) / (y1 - y0) * ph;
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y << "\" x2=\"" << ml << "\" y2=\"" << Y
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << Y + 4 << "\" text-anchor=\"end\">" << label(t, opt.log_y)
       << "</text>\n";
  }
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << opt.height - 8 << "\" text-anchor=\"middle\">"
     << detail::xml_escape(opt.x_label) << "</text>\n";
  os << "<text x=\"14\" y=\"" << mt + ph / 2 << "\" transform=\"rotate(-90 14 " << mt + ph / 2
     << ")\" text-anchor=\"middle\">" << detail::xml_escape(opt.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = palette[k % (sizeof palette / sizeof *palette)];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!ok(s.x[i], opt.log_x) || !ok(s.y[i], opt.log_y)) continue;
      os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    os << "\"/>\n";
    const double ly = mt + 14 + 16 * static_cast<double>(k);
    os << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw + 30 << "\" y2=\"" << ly
       << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << ml + pw + 34 << "\" y=\"" << ly + 4 << "\">" << detail::xml_escape(s.label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace asln
