#pragma once

#include <string>

#include "pollerr/diagnostics.hpp"

namespace pollerr {

enum class PlotKind { histogram, fitted_vs_residual, qq, pareto };

PlotKind plot_kind_from_string(const std::string& name);
std::string plot_kind_name(PlotKind kind);

struct RenderedPlot {
  std::string svg;  // self-contained, byte-deterministic for fixed input
  std::string csv;  // the plotted data
};

RenderedPlot render_report(const DiagnosticsReport& report, PlotKind kind);

}  // namespace pollerr
