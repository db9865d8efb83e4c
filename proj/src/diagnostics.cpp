#include "pollerr/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pollerr/errors.hpp"
#include "pollerr/special_functions.hpp"

namespace pollerr {

ResidualSet residuals(
    const FittedModel& model,
    const std::vector<std::pair<std::vector<double>, double>>& samples) {
  ResidualSet out;
  out.points.reserve(samples.size());
  for (const auto& [point, measured] : samples) {
    ResidualPoint rp;
    rp.fitted = predict(model, point).value;
    rp.sample = measured;
    rp.residual = rp.fitted - rp.sample;
    out.points.push_back(rp);
  }
  return out;
}

std::vector<HistogramBin> histogram(const std::vector<double>& values,
                                    int bins) {
  if (values.empty())
    fail(errkind::invalid_argument, "histogram needs at least one value");
  if (bins < 0) fail(errkind::invalid_argument, "bin count cannot be negative");
  const auto n = values.size();
  if (bins == 0)
    bins = static_cast<int>(
               std::ceil(std::log2(static_cast<double>(n)))) + 1;
  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it, hi = *hi_it;
  if (lo == hi) {
    // Degenerate range: a single bin holds everything.
    return {HistogramBin{lo, 0.0, static_cast<long>(n)}};
  }
  double width = (hi - lo) / bins;
  std::vector<HistogramBin> out(bins);
  for (int b = 0; b < bins; ++b) out[b] = {lo + b * width, width, 0};
  for (double v : values) {
    int b = static_cast<int>((v - lo) / width);
    if (b >= bins) b = bins - 1;  // the last interval is closed on the right
    ++out[b].count;
  }
  return out;
}

namespace {

double tricube(double u) {
  double t = 1.0 - u * u * u;
  return t * t * t;
}

// Local fit at xs over window [left, right] (inclusive). Returns false when
// every weight is zero.
bool fit_local(const std::vector<CurvePoint>& pts,
               const std::vector<double>& robustness, bool use_robustness,
               std::size_t left, std::size_t right, double xs, double x_range,
               double& ys) {
  double h = std::max(xs - pts[left].x, pts[right].x - xs);
  const double h9 = 0.999 * h;
  const double h1 = 0.001 * h;
  const std::size_t n = pts.size();

  std::vector<double> w(right - left + 1, 0.0);
  double sum = 0.0;
  std::size_t last = right;
  // Pick up ties just beyond the nominal window on the right.
  for (std::size_t j = left; j < n; ++j) {
    double r = std::fabs(pts[j].x - xs);
    if (r <= h9) {
      double wj = r > h1 ? tricube(r / h) : 1.0;
      if (use_robustness) wj *= robustness[j];
      if (j - left >= w.size()) w.resize(j - left + 1, 0.0);
      w[j - left] = wj;
      sum += wj;
      last = j;
    } else if (pts[j].x > xs) {
      break;
    }
  }
  if (sum <= 0.0) return false;
  for (auto& wj : w) wj /= sum;

  if (h > 0.0) {
    double xbar = 0.0;
    for (std::size_t j = left; j <= last; ++j) xbar += w[j - left] * pts[j].x;
    double b = xs - xbar;
    double c = 0.0;
    for (std::size_t j = left; j <= last; ++j) {
      double d = pts[j].x - xbar;
      c += w[j - left] * d * d;
    }
    if (std::sqrt(c) > 0.001 * x_range) {
      b /= c;
      for (std::size_t j = left; j <= last; ++j)
        w[j - left] *= 1.0 + b * (pts[j].x - xbar);
    }
  }
  ys = 0.0;
  for (std::size_t j = left; j <= last; ++j) ys += w[j - left] * pts[j].y;
  return true;
}

}  // namespace

std::vector<CurvePoint> lowess(const std::vector<CurvePoint>& points,
                               double span, int iterations) {
  if (!(span > 0.0 && span <= 1.0))
    fail(errkind::invalid_argument, "span must lie in (0, 1]");
  if (iterations < 0)
    fail(errkind::invalid_argument, "iterations cannot be negative");

  std::vector<CurvePoint> pts = points;
  std::stable_sort(pts.begin(), pts.end(),
                   [](const CurvePoint& a, const CurvePoint& b) {
                     return a.x < b.x;
                   });
  const std::size_t n = pts.size();
  std::set<double> distinct;
  for (const auto& p : pts) distinct.insert(p.x);
  if (distinct.size() < 2)
    fail(errkind::invalid_argument,
         "lowess needs at least 2 distinct x values");

  const std::size_t ns = std::min<std::size_t>(
      n, std::max<std::size_t>(
             2, static_cast<std::size_t>(std::ceil(span * n))));
  const double x_range = pts.back().x - pts.front().x;

  std::vector<double> smoothed(n, 0.0);
  std::vector<double> robustness(n, 1.0);
  for (int iter = 0; iter <= iterations; ++iter) {
    std::size_t left = 0, right = ns - 1;
    for (std::size_t i = 0; i < n; ++i) {
      // Slide the window right while that shrinks the radius around x_i.
      while (right < n - 1 &&
             pts[i].x - pts[left].x > pts[right + 1].x - pts[i].x) {
        ++left;
        ++right;
      }
      if (!fit_local(pts, robustness, iter > 0, left, right, pts[i].x,
                     x_range, smoothed[i]))
        smoothed[i] = pts[i].y;
    }
    if (iter == iterations) break;
    // Bisquare robustness weights from the residuals.
    std::vector<double> abs_res(n);
    for (std::size_t i = 0; i < n; ++i)
      abs_res[i] = std::fabs(pts[i].y - smoothed[i]);
    std::vector<double> sorted = abs_res;
    std::sort(sorted.begin(), sorted.end());
    double cmad = 3.0 * (sorted[n / 2] + sorted[n - 1 - n / 2]);
    for (std::size_t i = 0; i < n; ++i) {
      double r = abs_res[i];
      if (r <= 0.001 * cmad) {
        robustness[i] = 1.0;
      } else if (r > 0.999 * cmad) {
        robustness[i] = 0.0;
      } else {
        double u = r / cmad;
        double t = 1.0 - u * u;
        robustness[i] = t * t;
      }
    }
  }

  std::vector<CurvePoint> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {pts[i].x, smoothed[i]};
  return out;
}

namespace {

// Type-7 sample quantile of sorted data.
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double h = (sorted.size() - 1) * p;
  std::size_t lo = static_cast<std::size_t>(std::floor(h));
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = h - lo;
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

QqData qq_normal(const std::vector<double>& values) {
  if (values.size() < 2)
    fail(errkind::invalid_argument, "Q-Q plot needs at least 2 values");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  QqData out;
  out.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double p = (i + 0.5) / n;
    out.points[i] = {normal_quantile(p), sorted[i]};
  }
  double tq1 = normal_quantile(0.25), tq3 = normal_quantile(0.75);
  double sq1 = quantile_sorted(sorted, 0.25);
  double sq3 = quantile_sorted(sorted, 0.75);
  out.line_slope = (sq3 - sq1) / (tq3 - tq1);
  out.line_intercept = sq1 - out.line_slope * tq1;
  return out;
}

std::vector<Effect> pareto_effects(const FittedModel& model) {
  std::vector<Effect> effects;
  for (std::size_t i = 0; i < model.terms.size(); ++i) {
    if (model.terms[i].is_intercept()) continue;
    effects.push_back(Effect{model.terms[i],
                             model.terms[i].name(model.factor_names),
                             model.coefficients[i]});
  }
  std::stable_sort(effects.begin(), effects.end(),
                   [](const Effect& a, const Effect& b) {
                     return std::fabs(a.coefficient) > std::fabs(b.coefficient);
                   });
  return effects;
}

DiagnosticsReport build_report(
    const FittedModel& model,
    const std::vector<std::pair<std::vector<double>, double>>& samples) {
  DiagnosticsReport report;
  report.residual_set = residuals(model, samples);
  std::vector<double> res;
  for (const auto& p : report.residual_set.points) {
    res.push_back(p.residual);
    report.scatter.push_back({p.fitted, p.residual});
  }
  std::stable_sort(report.scatter.begin(), report.scatter.end(),
                   [](const CurvePoint& a, const CurvePoint& b) {
                     return a.x < b.x;
                   });
  report.histogram_bins = histogram(res);
  report.lowess_curve = lowess(report.scatter);
  report.qq = qq_normal(res);
  report.pareto = pareto_effects(model);
  report.r_squared = model.r_squared;
  report.adj_r_squared = model.adj_r_squared;
  return report;
}

}  // namespace pollerr
