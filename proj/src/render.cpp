#include "pollerr/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pollerr/errors.hpp"

namespace pollerr {

PlotKind plot_kind_from_string(const std::string& name) {
  if (name == "histogram") return PlotKind::histogram;
  if (name == "fitted_vs_residual") return PlotKind::fitted_vs_residual;
  if (name == "qq") return PlotKind::qq;
  if (name == "pareto") return PlotKind::pareto;
  fail(errkind::invalid_argument, "unknown plot kind '" + name + "'");
}

std::string plot_kind_name(PlotKind kind) {
  switch (kind) {
    case PlotKind::histogram: return "histogram";
    case PlotKind::fitted_vs_residual: return "fitted_vs_residual";
    case PlotKind::qq: return "qq";
    case PlotKind::pareto: return "pareto";
  }
  fail(errkind::invalid_argument, "unknown plot kind");
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 72.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 24.0;
constexpr double kMarginBottom = 48.0;

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct AxisScale {
  double lo = 0.0, hi = 1.0;
  std::vector<double> ticks;
};

// Nice tick positions spanning [lo, hi].
AxisScale axis_scale(double lo, double hi) {
  AxisScale s;
  if (lo == hi) {
    lo -= 1.0;
    hi += 1.0;
  }
  double raw_step = (hi - lo) / 5.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw_step)));
  double norm = raw_step / mag;
  double step = (norm <= 1.0 ? 1.0 : norm <= 2.0 ? 2.0 : norm <= 5.0 ? 5.0 : 10.0) * mag;
  s.lo = std::floor(lo / step) * step;
  s.hi = std::ceil(hi / step) * step;
  for (double t = s.lo; t <= s.hi + step / 2.0; t += step)
    s.ticks.push_back(t);
  return s;
}

struct Mapper {
  AxisScale x, y;
  double px(double v) const {
    return kMarginLeft +
           (v - x.lo) / (x.hi - x.lo) * (kWidth - kMarginLeft - kMarginRight);
  }
  double py(double v) const {
    return kHeight - kMarginBottom -
           (v - y.lo) / (y.hi - y.lo) *
               (kHeight - kMarginTop - kMarginBottom);
  }
};

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

void open_svg(std::ostringstream& svg) {
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kWidth)
      << "\" height=\"" << fmt(kHeight) << "\" viewBox=\"0 0 " << fmt(kWidth)
      << ' ' << fmt(kHeight) << "\">\n"
      << "<rect width=\"" << fmt(kWidth) << "\" height=\"" << fmt(kHeight)
      << "\" fill=\"white\"/>\n";
}

void draw_axes(std::ostringstream& svg, const Mapper& m,
               const std::string& x_label, const std::string& y_label) {
  double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
  double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
  svg << "<g stroke=\"black\" fill=\"none\">\n"
      << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\""
      << fmt(x1) << "\" y2=\"" << fmt(y0) << "\"/>\n"
      << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\""
      << fmt(x0) << "\" y2=\"" << fmt(y1) << "\"/>\n"
      << "</g>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (double t : m.x.ticks) {
    double px = m.px(t);
    svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(y0) << "\" x2=\""
        << fmt(px) << "\" y2=\"" << fmt(y0 + 4) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(y0 + 16)
        << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
  }
  for (double t : m.y.ticks) {
    double py = m.py(t);
    svg << "<line x1=\"" << fmt(x0 - 4) << "\" y1=\"" << fmt(py) << "\" x2=\""
        << fmt(x0) << "\" y2=\"" << fmt(py) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << fmt(x0 - 6) << "\" y=\"" << fmt(py + 4)
        << "\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
  }
  svg << "<text x=\"" << fmt((x0 + x1) / 2) << "\" y=\""
      << fmt(kHeight - 10) << "\" text-anchor=\"middle\" font-size=\"13\">"
      << xml_escape(x_label) << "</text>\n"
      << "<text x=\"14\" y=\"" << fmt((y0 + y1) / 2)
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 14 "
      << fmt((y0 + y1) / 2) << ")\">" << xml_escape(y_label) << "</text>\n"
      << "</g>\n";
}

RenderedPlot render_histogram(const DiagnosticsReport& report) {
  const auto& bins = report.histogram_bins;
  if (bins.empty())
    fail(errkind::invalid_argument, "report has no histogram data");
  long max_count = 0;
  for (const auto& b : bins) max_count = std::max(max_count, b.count);
  double lo = bins.front().lower;
  double hi = bins.back().lower + bins.back().width;
  if (lo == hi) hi = lo + 1.0;

  Mapper m{axis_scale(lo, hi), axis_scale(0.0, static_cast<double>(max_count))};
  std::ostringstream svg;
  open_svg(svg);
  draw_axes(svg, m, "residual", "count");
  svg << "<g fill=\"#4878a8\" stroke=\"black\" stroke-width=\"0.5\">\n";
  for (const auto& b : bins) {
    double x = m.px(b.lower);
    double w = b.width > 0.0 ? m.px(b.lower + b.width) - x : 4.0;
    double y = m.py(static_cast<double>(b.count));
    double h = m.py(0.0) - y;
    svg << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\""
        << fmt(w) << "\" height=\"" << fmt(h) << "\"/>\n";
  }
  svg << "</g>\n</svg>\n";

  std::ostringstream csv;
  csv << "bin_lower,bin_width,count\n";
  for (const auto& b : bins)
    csv << fmt(b.lower) << ',' << fmt(b.width) << ',' << b.count << '\n';
  return {svg.str(), csv.str()};
}

RenderedPlot render_fitted_vs_residual(const DiagnosticsReport& report) {
  const auto& scatter = report.scatter;
  const auto& curve = report.lowess_curve;
  if (scatter.empty())
    fail(errkind::invalid_argument, "report has no residual data");
  double xlo = scatter.front().x, xhi = scatter.back().x;
  double ylo = 0.0, yhi = 0.0;
  for (const auto& p : scatter) {
    ylo = std::min(ylo, p.y);
    yhi = std::max(yhi, p.y);
  }
  Mapper m{axis_scale(xlo, xhi), axis_scale(ylo, yhi)};
  std::ostringstream svg;
  open_svg(svg);
  draw_axes(svg, m, "fitted value", "residual");
  svg << "<line x1=\"" << fmt(m.px(m.x.lo)) << "\" y1=\"" << fmt(m.py(0.0))
      << "\" x2=\"" << fmt(m.px(m.x.hi)) << "\" y2=\"" << fmt(m.py(0.0))
      << "\" stroke=\"#999999\" stroke-dasharray=\"4,3\"/>\n";
  svg << "<g fill=\"none\" stroke=\"black\">\n";
  for (const auto& p : scatter)
    svg << "<circle cx=\"" << fmt(m.px(p.x)) << "\" cy=\"" << fmt(m.py(p.y))
        << "\" r=\"3\"/>\n";
  svg << "</g>\n<polyline fill=\"none\" stroke=\"#c03030\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (i) svg << ' ';
    svg << fmt(m.px(curve[i].x)) << ',' << fmt(m.py(curve[i].y));
  }
  svg << "\"/>\n</svg>\n";

  std::ostringstream csv;
  csv << "fitted,residual,lowess\n";
  for (std::size_t i = 0; i < scatter.size(); ++i)
    csv << fmt(scatter[i].x) << ',' << fmt(scatter[i].y) << ','
        << fmt(curve[i].y) << '\n';
  return {svg.str(), csv.str()};
}

RenderedPlot render_qq(const DiagnosticsReport& report) {
  const auto& pts = report.qq.points;
  if (pts.empty()) fail(errkind::invalid_argument, "report has no Q-Q data");
  double xlo = pts.front().x, xhi = pts.back().x;
  double ylo = pts.front().y, yhi = pts.back().y;
  Mapper m{axis_scale(xlo, xhi), axis_scale(ylo, yhi)};
  std::ostringstream svg;
  open_svg(svg);
  draw_axes(svg, m, "theoretical quantile", "sample quantile");
  double s = report.qq.line_slope, c = report.qq.line_intercept;
  svg << "<line x1=\"" << fmt(m.px(m.x.lo)) << "\" y1=\""
      << fmt(m.py(s * m.x.lo + c)) << "\" x2=\"" << fmt(m.px(m.x.hi))
      << "\" y2=\"" << fmt(m.py(s * m.x.hi + c))
      << "\" stroke=\"#c03030\"/>\n";
  svg << "<g fill=\"none\" stroke=\"black\">\n";
  for (const auto& p : pts)
    svg << "<circle cx=\"" << fmt(m.px(p.x)) << "\" cy=\"" << fmt(m.py(p.y))
        << "\" r=\"3\"/>\n";
  svg << "</g>\n</svg>\n";

  std::ostringstream csv;
  csv << "theoretical,sample\n";
  for (const auto& p : pts) csv << fmt(p.x) << ',' << fmt(p.y) << '\n';
  return {svg.str(), csv.str()};
}

RenderedPlot render_pareto(const DiagnosticsReport& report) {
  const auto& effects = report.pareto;
  if (effects.empty())
    fail(errkind::invalid_argument, "report has no effects to plot");
  double max_mag = 0.0;
  for (const auto& e : effects)
    max_mag = std::max(max_mag, std::fabs(e.coefficient));
  AxisScale xs = axis_scale(0.0, max_mag);
  const double bar_area_top = kMarginTop;
  const double bar_area_bottom = kHeight - kMarginBottom;
  const double label_width = 180.0;
  const double x0 = label_width;
  const double x1 = kWidth - kMarginRight;
  auto px = [&](double v) {
    return x0 + (v - xs.lo) / (xs.hi - xs.lo) * (x1 - x0);
  };
  const double slot =
      (bar_area_bottom - bar_area_top) / static_cast<double>(effects.size());
  const double bar_h = slot * 0.7;

  std::ostringstream svg;
  open_svg(svg);
  svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (double t : xs.ticks) {
    svg << "<line x1=\"" << fmt(px(t)) << "\" y1=\"" << fmt(bar_area_top)
        << "\" x2=\"" << fmt(px(t)) << "\" y2=\"" << fmt(bar_area_bottom)
        << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << fmt(px(t)) << "\" y=\""
        << fmt(bar_area_bottom + 16) << "\" text-anchor=\"middle\">" << fmt(t)
        << "</text>\n";
  }
  svg << "<text x=\"" << fmt((x0 + x1) / 2) << "\" y=\"" << fmt(kHeight - 10)
      << "\" text-anchor=\"middle\" font-size=\"13\">|effect|</text>\n";
  for (std::size_t i = 0; i < effects.size(); ++i) {
    const auto& e = effects[i];
    double y = bar_area_top + slot * i + (slot - bar_h) / 2.0;
    const char* color = e.coefficient >= 0.0 ? "#4878a8" : "#c03030";
    svg << "<rect x=\"" << fmt(px(0.0)) << "\" y=\"" << fmt(y) << "\" width=\""
        << fmt(px(std::fabs(e.coefficient)) - px(0.0)) << "\" height=\""
        << fmt(bar_h) << "\" fill=\"" << color << "\"/>\n"
        << "<text x=\"" << fmt(x0 - 6) << "\" y=\""
        << fmt(y + bar_h / 2 + 4) << "\" text-anchor=\"end\">"
        << xml_escape(e.name) << "</text>\n";
  }
  svg << "</g>\n</svg>\n";

  std::ostringstream csv;
  csv << "term,coefficient,abs_coefficient\n";
  for (const auto& e : effects)
    csv << e.name << ',' << fmt(e.coefficient) << ','
        << fmt(std::fabs(e.coefficient)) << '\n';
  return {svg.str(), csv.str()};
}

}  // namespace

RenderedPlot render_report(const DiagnosticsReport& report, PlotKind kind) {
  switch (kind) {
    case PlotKind::histogram: return render_histogram(report);
    case PlotKind::fitted_vs_residual: return render_fitted_vs_residual(report);
    case PlotKind::qq: return render_qq(report);
    case PlotKind::pareto: return render_pareto(report);
  }
  fail(errkind::invalid_argument, "unknown plot kind");
}

}  // namespace pollerr
