#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pollerr/regression.hpp"

namespace pollerr {

// One validation sample: model prediction y, measurement s, residual y - s.
struct ResidualPoint {
  double fitted = 0.0;
  double sample = 0.0;
  double residual = 0.0;
};

struct ResidualSet {
  std::vector<ResidualPoint> points;
};

ResidualSet residuals(
    const FittedModel& model,
    const std::vector<std::pair<std::vector<double>, double>>& samples);

struct HistogramBin {
  double lower = 0.0;
  double width = 0.0;
  long count = 0;
};

// Equal-width bins over [min, max], right-open except the last. bins == 0
// selects Sturges' rule, ceil(log2 n) + 1.
std::vector<HistogramBin> histogram(const std::vector<double>& values,
                                    int bins = 0);

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
};

// Cleveland's LOWESS: per point, a tricube-weighted local linear fit over
// the ceil(span*n) nearest neighbors, with bisquare robustifying passes.
// Output is sorted by x and evaluated at the input x positions.
std::vector<CurvePoint> lowess(const std::vector<CurvePoint>& points,
                               double span = 2.0 / 3.0, int iterations = 3);

struct QqData {
  // x = theoretical normal quantile at (i - 0.5)/n, y = sorted sample value.
  std::vector<CurvePoint> points;
  // Line through the quartile pairs, for rendering.
  double line_slope = 0.0;
  double line_intercept = 0.0;
};

QqData qq_normal(const std::vector<double>& values);

struct Effect {
  Term term;
  std::string name;
  double coefficient = 0.0;
};

// Non-intercept terms sorted by |coefficient| descending.
std::vector<Effect> pareto_effects(const FittedModel& model);

struct DiagnosticsReport {
  ResidualSet residual_set;
  std::vector<HistogramBin> histogram_bins;
  std::vector<CurvePoint> scatter;       // (fitted, residual), sorted by x
  std::vector<CurvePoint> lowess_curve;  // smoothed residual vs fitted
  QqData qq;
  std::vector<Effect> pareto;
  double r_squared = 0.0;
  double adj_r_squared = 0.0;
};

DiagnosticsReport build_report(
    const FittedModel& model,
    const std::vector<std::pair<std::vector<double>, double>>& samples);

}  // namespace pollerr
