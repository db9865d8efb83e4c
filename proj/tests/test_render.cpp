#include <random>

#include "doctest.h"
#include "pollerr/errors.hpp"
#include "pollerr/render.hpp"

using namespace pollerr;

namespace {

// A small report with 40 residuals from a two-factor model.
DiagnosticsReport sample_report() {
  FittedModel m;
  m.factor_names = {"a", "b"};
  m.terms = {Term{}, Term{{0}}, Term{{1}}, Term{{0, 1}}};
  m.coefficients = {5.0, 2.0, -1.0, 0.5};
  m.span = 1.0;
  m.r_squared = 0.9;
  m.adj_r_squared = 0.88;

  std::vector<std::pair<std::vector<double>, double>> samples;
  std::mt19937_64 rng(17);
  auto unif = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int i = 0; i < 40; ++i) {
    std::vector<double> point{2 * unif() - 1, 2 * unif() - 1};
    double truth = 5.0 + 2.0 * point[0] - point[1] + 0.5 * point[0] * point[1];
    samples.emplace_back(point, truth + (unif() - 0.5));
  }
  return build_report(m, samples);
}

std::size_t count_occurrences(const std::string& text,
                              const std::string& needle) {
  std::size_t n = 0, pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++n;
    pos += needle.size();
  }
  return n;
}

}  // namespace

TEST_CASE("rendering is byte-deterministic") {
  DiagnosticsReport report = sample_report();
  for (auto kind : {PlotKind::histogram, PlotKind::fitted_vs_residual,
                    PlotKind::qq, PlotKind::pareto}) {
    RenderedPlot a = render_report(report, kind);
    RenderedPlot b = render_report(report, kind);
    CHECK(a.svg == b.svg);
    CHECK(a.csv == b.csv);
    CHECK(a.svg.find("<svg") == 0);
    CHECK(a.svg.find("http") != std::string::npos);  // only the xmlns
  }
}

TEST_CASE("histogram render has one bar and one CSV row per bin") {
  DiagnosticsReport report = sample_report();
  RenderedPlot plot = render_report(report, PlotKind::histogram);
  // 40 residuals -> 7 Sturges bins.
  CHECK(report.histogram_bins.size() == 7);
  CHECK(count_occurrences(plot.svg, "<rect") == 7 + 1);  // bars + background
  CHECK(count_occurrences(plot.csv, "\n") == 8);         // header + 7 rows
}

TEST_CASE("fitted-vs-residual render carries scatter, zero line and curve") {
  DiagnosticsReport report = sample_report();
  RenderedPlot plot = render_report(report, PlotKind::fitted_vs_residual);
  CHECK(count_occurrences(plot.svg, "<circle") == 40);
  CHECK(count_occurrences(plot.svg, "<polyline") == 1);
  CHECK(count_occurrences(plot.svg, "stroke-dasharray") == 1);
  CHECK(plot.csv.rfind("fitted,residual,lowess\n", 0) == 0);
  CHECK(count_occurrences(plot.csv, "\n") == 41);
}

TEST_CASE("qq render plots every point plus the quartile line") {
  DiagnosticsReport report = sample_report();
  RenderedPlot plot = render_report(report, PlotKind::qq);
  CHECK(count_occurrences(plot.svg, "<circle") == 40);
  CHECK(plot.csv.rfind("theoretical,sample\n", 0) == 0);
}

TEST_CASE("pareto render is sorted by magnitude") {
  DiagnosticsReport report = sample_report();
  RenderedPlot plot = render_report(report, PlotKind::pareto);
  CHECK(count_occurrences(plot.svg, "<rect") == 3 + 1);  // effects + background
  auto pos_a = plot.csv.find("\na,");
  auto pos_b = plot.csv.find("\nb,");
  auto pos_ab = plot.csv.find("\na:b,");
  REQUIRE(pos_a != std::string::npos);
  REQUIRE(pos_b != std::string::npos);
  REQUIRE(pos_ab != std::string::npos);
  CHECK(pos_a < pos_b);   // |2.0| before |-1.0|
  CHECK(pos_b < pos_ab);  // |-1.0| before |0.5|
}

TEST_CASE("unknown plot kind is rejected") {
  CHECK_THROWS_AS(plot_kind_from_string("spiral"), Error);
  CHECK(plot_kind_from_string("qq") == PlotKind::qq);
  CHECK(plot_kind_name(PlotKind::pareto) == "pareto");
}
