#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace vecmtk::cli {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v, double step) {
  char buf[32];
  const int decimals = step >= 1.0 ? 0 : static_cast<int>(std::ceil(-std::log10(step)));
  std::snprintf(buf, sizeof buf, "%.*f", std::min(decimals, 6), v);
  // "-0" looks odd on an axis.
  if (std::string(buf).find_first_not_of("-0.") == std::string::npos) return "0";
  return buf;
}

}  // namespace

std::string xml_escape(const std::string& s) {
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

std::vector<double> nice_ticks(double lo, double hi, int target) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / std::max(target, 2);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  const double step = (frac < 1.5 ? 1 : frac < 3 ? 2 : frac < 7 ? 5 : 10) * mag;
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
    ticks.push_back(std::fabs(t) < 1e-12 * step ? 0.0 : t);
  }
  return ticks;
}

void LinePlot::write(std::ostream& out) const {
  const double left = 72, right = 150, top = 40, bottom = 52;
  const double pw = width - left - right, ph = height - top - bottom;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) {
    ymin -= 1;
    ymax += 1;
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  auto X = [&](double v) { return left + (v - xmin) / (xmax - xmin) * pw; };
  auto Y = [&](double v) { return top + (ymax - v) / (ymax - ymin) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
      << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << ' ' << fmt(height)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << xml_escape(title) << "</text>\n";

  const auto xt = nice_ticks(xmin, xmax);
  const auto yt = nice_ticks(ymin, ymax);
  const double xstep = xt.size() > 1 ? xt[1] - xt[0] : 1.0;
  const double ystep = yt.size() > 1 ? yt[1] - yt[0] : 1.0;
  for (double t : yt) {
    out << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(Y(t)) << "\" x2=\"" << fmt(left + pw)
        << "\" y2=\"" << fmt(Y(t)) << "\" stroke=\"#e5e5e5\"/>\n";
    out << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(Y(t) + 4)
        << "\" text-anchor=\"end\">" << tick_label(t, ystep) << "</text>\n";
  }
  for (double t : xt) {
    out << "<line x1=\"" << fmt(X(t)) << "\" y1=\"" << fmt(top + ph) << "\" x2=\"" << fmt(X(t))
        << "\" y2=\"" << fmt(top + ph + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(X(t)) << "\" y=\"" << fmt(top + ph + 18)
        << "\" text-anchor=\"middle\">" << tick_label(t, xstep) << "</text>\n";
  }
  if (zero_line && ymin < 0 && ymax > 0) {
    out << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(Y(0)) << "\" x2=\"" << fmt(left + pw)
        << "\" y2=\"" << fmt(Y(0)) << "\" stroke=\"#888\" stroke-dasharray=\"2,2\"/>\n";
  }
  out << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(pw)
      << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(height - 12)
      << "\" text-anchor=\"middle\">" << xml_escape(x_label) << "</text>\n";
  out << "<text transform=\"translate(16," << fmt(top + ph / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kPalette[k % std::size(kPalette)];
    out << "<path fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\"";
    if (s.dashed) out << " stroke-dasharray=\"5,3\"";
    out << " d=\"";
    bool pen_down = false;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i])) {
        pen_down = false;
        continue;
      }
      out << (pen_down ? " L" : (i ? " M" : "M")) << fmt(X(s.x[i])) << ',' << fmt(Y(s.y[i]));
      pen_down = true;
    }
    out << "\"/>\n";

    const double ly = top + 14 + 18 * static_cast<double>(k);
    out << "<line x1=\"" << fmt(left + pw + 12) << "\" y1=\"" << fmt(ly) << "\" x2=\""
        << fmt(left + pw + 34) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << colour
        << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"5,3\"" : "") << "/>\n";
    out << "<text x=\"" << fmt(left + pw + 40) << "\" y=\"" << fmt(ly + 4) << "\">"
        << xml_escape(s.label) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace vecmtk::cli
