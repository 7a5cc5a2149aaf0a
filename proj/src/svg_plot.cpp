#include "eprb/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace eprb {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const LinePlot& plot) {
  if (plot.x.size() != plot.y.size() || plot.x.empty()) {
    throw std::invalid_argument("plot needs matching, non-empty x and y");
  }
  auto tx = [&](double v) { return plot.log_x ? std::log10(v) : v; };
  if (plot.log_x) {
    for (double v : plot.x) {
      if (!(v > 0)) throw std::invalid_argument("log axis needs positive x");
    }
  }

  double x0 = tx(*std::min_element(plot.x.begin(), plot.x.end()));
  double x1 = tx(*std::max_element(plot.x.begin(), plot.x.end()));
  double y0 = *std::min_element(plot.y.begin(), plot.y.end());
  double y1 = *std::max_element(plot.y.begin(), plot.y.end());
  for (const auto& r : plot.references) {
    y0 = std::min(y0, r.y);
    y1 = std::max(y1, r.y);
  }
  if (x1 == x0) { x0 -= 0.5; x1 += 0.5; }
  const double pad = std::max(0.05 * (y1 - y0), 1e-3);
  y0 -= pad;
  y1 += pad;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (tx(v) - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return kTop + (y1 - v) / (y1 - y0) * ph; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
    << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" "
    << "font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\">"
    << escape(plot.title) << "</text>\n";
  s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw
    << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";

  // x ticks: decades on a log axis, five even steps otherwise.
  std::vector<double> xticks;
  if (plot.log_x) {
    for (double e = std::ceil(x0); e <= std::floor(x1); e += 1.0) {
      xticks.push_back(std::pow(10.0, e));
    }
  } else {
    for (int i = 0; i <= 4; ++i) xticks.push_back(x0 + (x1 - x0) * i / 4.0);
  }
  for (double v : xticks) {
    const double x = px(v);
    s << "<line x1=\"" << x << "\" y1=\"" << kTop + ph << "\" x2=\"" << x
      << "\" y2=\"" << kTop + ph + 5 << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << x << "\" y=\"" << kTop + ph + 18
      << "\" text-anchor=\"middle\">" << fmt(v) << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = y0 + (y1 - y0) * i / 4.0;
    const double y = py(v);
    s << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << y << "\" x2=\"" << kLeft
      << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4
      << "\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
  }
  s << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15
    << "\" text-anchor=\"middle\">" << escape(plot.x_label) << "</text>\n";
  s << "<text transform=\"translate(18," << kTop + ph / 2
    << ") rotate(-90)\" text-anchor=\"middle\">" << escape(plot.y_label)
    << "</text>\n";

  for (const auto& r : plot.references) {
    const double y = py(r.y);
    s << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + pw
      << "\" y2=\"" << y << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
    s << "<text x=\"" << kLeft + pw - 4 << "\" y=\"" << y - 4
      << "\" text-anchor=\"end\" fill=\"gray\">" << escape(r.label)
      << "</text>\n";
  }

  s << "<polyline fill=\"none\" stroke=\"#c00\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < plot.x.size(); ++i) {
    s << (i ? " " : "") << px(plot.x[i]) << ',' << py(plot.y[i]);
  }
  s << "\"/>\n";
  for (std::size_t i = 0; i < plot.x.size(); ++i) {
    s << "<circle cx=\"" << px(plot.x[i]) << "\" cy=\"" << py(plot.y[i])
      << "\" r=\"3\" fill=\"#c00\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace eprb
