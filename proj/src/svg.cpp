// Dependency-free SVG figures built from the harness CSV tables.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "probci/harness.hpp"

namespace probci {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

std::string f2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;
  double p0 = 0.0;  // pixel at lo
  double p1 = 1.0;  // pixel at hi

  double map(double v) const {
    double t;
    if (log) {
      t = (std::log10(std::max(v, lo)) - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
    } else {
      t = (v - lo) / (hi - lo);
    }
    return p0 + t * (p1 - p0);
  }

  std::vector<double> ticks() const {
    std::vector<double> t;
    if (log) {
      for (double e = std::ceil(std::log10(lo)); e <= std::floor(std::log10(hi)) + 1e-9; e += 1.0) {
        t.push_back(std::pow(10.0, e));
      }
    } else {
      for (int i = 0; i <= 4; ++i) t.push_back(lo + (hi - lo) * i / 4.0);
    }
    return t;
  }
};

Axis fit(double lo, double hi, bool log, double p0, double p1) {
  if (log) {
    lo = std::max(lo, 1e-300);
    hi = std::max(hi, lo * 10.0);
    lo = std::pow(10.0, std::floor(std::log10(lo)));
    hi = std::pow(10.0, std::ceil(std::log10(hi)));
  } else if (hi <= lo) {
    hi = lo + (lo == 0.0 ? 1.0 : std::fabs(lo) * 0.1);
  }
  return {lo, hi, log, p0, p1};
}

class Svg {
 public:
  Svg(double w, double h) : w_(w), h_(h) {}

  void line(double x0, double y0, double x1, double y1, const std::string& color, double width = 1.0,
            const std::string& dash = "") {
    os_ << "<line x1=\"" << f2(x0) << "\" y1=\"" << f2(y0) << "\" x2=\"" << f2(x1) << "\" y2=\"" << f2(y1)
        << "\" stroke=\"" << color << "\" stroke-width=\"" << width << "\"";
    if (!dash.empty()) os_ << " stroke-dasharray=\"" << dash << "\"";
    os_ << "/>\n";
  }
  void circle(double x, double y, double r, const std::string& color) {
    os_ << "<circle cx=\"" << f2(x) << "\" cy=\"" << f2(y) << "\" r=\"" << r << "\" fill=\"" << color << "\"/>\n";
  }
  void text(double x, double y, const std::string& s, int size = 11, const std::string& anchor = "start") {
    os_ << "<text x=\"" << f2(x) << "\" y=\"" << f2(y) << "\" font-size=\"" << size
        << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">" << escape(s) << "</text>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color, double width = 1.5) {
    os_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width << "\" points=\"";
    for (const auto& [x, y] : pts) os_ << f2(x) << ',' << f2(y) << ' ';
    os_ << "\"/>\n";
  }
  void frame(const Axis& x, const Axis& y, const std::string& title, const std::string& xlabel,
             const std::string& ylabel) {
    line(x.p0, y.p0, x.p1, y.p0, "#000");
    line(x.p0, y.p0, x.p0, y.p1, "#000");
    for (double t : x.ticks()) {
      line(x.map(t), y.p0, x.map(t), y.p0 + 4, "#000");
      text(x.map(t), y.p0 + 16, label(t), 10, "middle");
    }
    for (double t : y.ticks()) {
      line(x.p0 - 4, y.map(t), x.p0, y.map(t), "#000");
      text(x.p0 - 6, y.map(t) + 3, label(t), 10, "end");
    }
    text(0.5 * (x.p0 + x.p1), y.p1 - 8, title, 12, "middle");
    text(0.5 * (x.p0 + x.p1), y.p0 + 32, xlabel, 11, "middle");
    os_ << "<text x=\"" << f2(x.p0 - 48) << "\" y=\"" << f2(0.5 * (y.p0 + y.p1))
        << "\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"middle\" transform=\"rotate(-90 "
        << f2(x.p0 - 48) << ' ' << f2(0.5 * (y.p0 + y.p1)) << ")\">" << escape(ylabel) << "</text>\n";
  }
  void legend(double x, double y, const std::vector<std::string>& names, const std::vector<std::string>& colors) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      line(x, y + 14.0 * i, x + 16, y + 14.0 * i, colors[i], 2.5);
      text(x + 20, y + 14.0 * i + 4, names[i], 10);
    }
  }
  std::string str() const {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_ << "\" viewBox=\"0 0 "
        << w_ << ' ' << h_ << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << os_.str() << "</svg>\n";
    return out.str();
  }

 private:
  double w_;
  double h_;
  std::ostringstream os_;
};

template <class T>
void push_unique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

struct Grouped {
  std::vector<std::string> confidences;
  std::vector<std::string> methods;
  std::vector<double> ps;
};

Grouped group(const CsvTable& t) {
  Grouped g;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    push_unique(g.confidences, t.text(r, "confidence"));
    push_unique(g.methods, t.text(r, "method"));
    push_unique(g.ps, t.number(r, "p_true"));
  }
  std::sort(g.ps.begin(), g.ps.end());
  return g;
}

std::vector<std::string> colors_for(std::size_t n) {
  std::vector<std::string> c;
  for (std::size_t i = 0; i < n; ++i) c.push_back(kPalette[i % std::size(kPalette)]);
  return c;
}

constexpr double kWidth = 760.0;
constexpr double kPanel = 280.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 620.0;

}  // namespace

std::string render_interval_svg(const CsvTable& summary) {
  const Grouped g = group(summary);
  const auto colors = colors_for(g.methods.size());
  Svg svg(kWidth, kPanel * std::max<std::size_t>(1, g.confidences.size()));
  double spacing = 1.0;
  for (std::size_t i = 1; i < g.ps.size(); ++i) spacing = std::min(spacing, g.ps[i] - g.ps[i - 1]);
  if (g.ps.size() < 2) spacing = g.ps.empty() ? 0.1 : std::max(g.ps[0] * 0.2, 1e-3);

  for (std::size_t ci = 0; ci < g.confidences.size(); ++ci) {
    const double top = ci * kPanel;
    double ymax = 0.0;
    for (std::size_t r = 0; r < summary.rows.size(); ++r) {
      if (summary.text(r, "confidence") == g.confidences[ci]) ymax = std::max(ymax, summary.number(r, "hi"));
    }
    const Axis x = fit(g.ps.front() - spacing, g.ps.back() + spacing, false, kLeft, kRight);
    const Axis y = fit(0.0, ymax * 1.05, false, top + kPanel - 50, top + 30);
    svg.frame(x, y, "c = " + g.confidences[ci], "true probability", "interval");
    for (double p : g.ps) svg.line(x.map(p) - 0.45 * (x.map(spacing) - x.map(0)), y.map(p),
                                   x.map(p) + 0.45 * (x.map(spacing) - x.map(0)), y.map(p), "#000", 1.0, "3,2");
    for (std::size_t r = 0; r < summary.rows.size(); ++r) {
      if (summary.text(r, "confidence") != g.confidences[ci]) continue;
      const auto mi = static_cast<std::size_t>(
          std::find(g.methods.begin(), g.methods.end(), summary.text(r, "method")) - g.methods.begin());
      const double offset = (static_cast<double>(mi) - 0.5 * (g.methods.size() - 1)) * 0.8 * spacing /
                            static_cast<double>(g.methods.size());
      const double px = x.map(summary.number(r, "p_true") + offset);
      svg.line(px, y.map(summary.number(r, "lo")), px, y.map(summary.number(r, "hi")), colors[mi], 2.0);
      svg.circle(px, y.map(summary.number(r, "center")), 2.0, colors[mi]);
    }
    svg.legend(kRight + 20, top + 40, g.methods, colors);
  }
  return svg.str();
}

std::string render_samples_svg(const CsvTable& summary) {
  const Grouped g = group(summary);
  const auto colors = colors_for(g.methods.size());
  Svg svg(kWidth, kPanel * std::max<std::size_t>(1, g.confidences.size()));
  for (std::size_t ci = 0; ci < g.confidences.size(); ++ci) {
    const double top = ci * kPanel;
    double lo = 1e300;
    double hi = 0.0;
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    for (std::size_t r = 0; r < summary.rows.size(); ++r) {
      if (summary.text(r, "confidence") != g.confidences[ci]) continue;
      const double n = summary.number(r, "n_used");
      lo = std::min(lo, n);
      hi = std::max(hi, n);
      series[summary.text(r, "method")].emplace_back(summary.number(r, "p_true"), n);
    }
    const double pad = g.ps.size() > 1 ? 0.02 * (g.ps.back() - g.ps.front()) : 0.01;
    const Axis x = fit(g.ps.front() - pad, g.ps.back() + pad, false, kLeft, kRight);
    const Axis y = fit(std::max(lo, 1.0), hi, true, top + kPanel - 50, top + 30);
    svg.frame(x, y, "c = " + g.confidences[ci], "true probability", "mean samples used");
    for (std::size_t mi = 0; mi < g.methods.size(); ++mi) {
      auto pts = series[g.methods[mi]];
      std::sort(pts.begin(), pts.end());
      for (auto& [px, py] : pts) {
        px = x.map(px);
        py = y.map(py);
      }
      svg.polyline(pts, colors[mi]);
      for (const auto& [px, py] : pts) svg.circle(px, py, 2.0, colors[mi]);
    }
    svg.legend(kRight + 20, top + 40, g.methods, colors);
  }
  return svg.str();
}

std::string render_convergence_svg(const CsvTable& trace) {
  std::vector<std::string> samplers;
  double nmin = 1e300;
  double nmax = 1.0;
  double emin = 1e300;
  double emax = 0.0;
  for (std::size_t r = 0; r < trace.rows.size(); ++r) {
    push_unique(samplers, trace.text(r, "sampler"));
    nmin = std::min(nmin, trace.number(r, "n"));
    nmax = std::max(nmax, trace.number(r, "n"));
    const double e = trace.number(r, "median_abs_error");
    if (e > 0.0) emin = std::min(emin, e);
    emax = std::max(emax, e);
  }
  if (emax <= 0.0) {
    emin = 1e-6;
    emax = 1.0;
  }
  const double floor = emin;
  Svg svg(kWidth, 360);
  const Axis x = fit(std::max(nmin, 1.0), nmax, true, kLeft, kRight);
  const Axis y = fit(floor, emax, true, 310, 30);
  std::string model = trace.rows.empty() ? "" : trace.text(0, "model");
  svg.frame(x, y, "absolute error, " + model, "samples", "|estimate - truth|");
  std::vector<std::string> colors;
  for (const auto& s : samplers) colors.push_back(s == "mc" ? "#999999" : "#000000");
  for (std::size_t si = 0; si < samplers.size(); ++si) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t r = 0; r < trace.rows.size(); ++r) {
      if (trace.text(r, "sampler") != samplers[si]) continue;
      pts.emplace_back(x.map(trace.number(r, "n")), y.map(std::max(trace.number(r, "median_abs_error"), floor)));
    }
    svg.polyline(pts, colors[si]);
  }
  svg.legend(kRight + 20, 40, samplers, colors);
  return svg.str();
}

std::string render_discrepancy_svg(const CsvTable& points, const CsvTable& summary) {
  std::vector<std::pair<std::string, std::string>> sets;  // (set, seed)
  for (std::size_t r = 0; r < points.rows.size(); ++r) {
    push_unique(sets, std::pair{points.text(r, "set"), points.text(r, "seed")});
  }
  const double side = 220.0;
  Svg svg(40 + sets.size() * (side + 40), side + 90);
  for (std::size_t si = 0; si < sets.size(); ++si) {
    const double left = 40 + si * (side + 40);
    const Axis x{0.0, 1.0, false, left, left + side};
    const Axis y{0.0, 1.0, false, 40 + side, 40};
    std::string title = sets[si].first;
    for (std::size_t r = 0; r < summary.rows.size(); ++r) {
      if (summary.text(r, "set") == sets[si].first && summary.text(r, "seed") == sets[si].second) {
        title += "  D* = " + label(summary.number(r, "star_discrepancy"));
      }
    }
    svg.frame(x, y, title, "", "");
    svg.line(left + side, 40, left + side, 40 + side, "#000");
    svg.line(left, 40, left + side, 40, "#000");
    for (std::size_t r = 0; r < points.rows.size(); ++r) {
      if (points.text(r, "set") != sets[si].first || points.text(r, "seed") != sets[si].second) continue;
      svg.circle(x.map(points.number(r, "x")), y.map(points.number(r, "y")), 1.6, kPalette[si % std::size(kPalette)]);
    }
  }
  return svg.str();
}

}  // namespace probci
