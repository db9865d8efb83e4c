#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pollerr/doe.hpp"
#include "pollerr/regression.hpp"
#include "pollerr/simulate.hpp"
#include "pollerr/table.hpp"

namespace pollerr {

// Campaign settings. The default factor space is the six poll factors with
// their standard actual levels; with no overrides a campaign reproduces the
// reference experiment shape.
struct CampaignConfig {
  FactorSpace factors;
  double scale = 1.0;
  int reps = 30;
  std::uint64_t seed = 1;
  std::string formula;  // empty = saturated model (all 2^k terms)
  double refine_threshold = 10.0;  // MAPE points, absolute
  int max_zoom_steps = 3;

  static CampaignConfig defaults();
  static CampaignConfig from_json(const std::string& text);
  std::string to_json() const;

  // Maps a coded point onto simulator parameters; requires the six factors
  // truth, depth, alts, weight, pop, answers (any order).
  ScenarioParams scenario_at(const std::vector<double>& coded) const;
};

// Runs the full factorial at config.scale: baseline row (std_order 0)
// first, then the 2^k corners in standard order, each measured with a
// row-derived seed. Rows whose coded point matches a reuse entry take the
// stored measurement instead of re-simulating.
struct ProbeMeasurement {
  std::vector<double> coded;
  double measured = 0.0;
};

ExperimentTable run_campaign(const CampaignConfig& config,
                             const std::vector<ProbeMeasurement>& reuse = {});

struct RefineDecision {
  bool accept = false;
  double new_scale = 0.0;  // halved scale when zooming, else the input scale
  std::vector<double> residuals;  // prediction - measurement per probe
  double max_abs_residual = 0.0;
  std::vector<ProbeMeasurement> probes;  // reusable in the next campaign
};

// Quick-feedback decision from the three diagonal probe measurements.
RefineDecision refine_step(const FittedModel& model,
                           const std::vector<ProbeMeasurement>& probes,
                           double threshold, double current_scale);

// Simulator-backed probe measurements at the diagonal points.
std::vector<ProbeMeasurement> measure_probes(const CampaignConfig& config);

struct RefinementOutcome {
  std::vector<RefineDecision> decisions;
  ExperimentTable table;   // the last campaign run
  FittedModel model;       // fitted on it
  bool converged = false;
  double final_scale = 0.0;
};

// Campaign -> fit -> probe loop, halving the scale until the probes pass or
// config.max_zoom_steps zooms have been spent.
RefinementOutcome refine_loop(CampaignConfig config);

struct ValidationPoint {
  std::string set_label;  // "mid_corners" or "random_space"
  std::vector<double> coded;
};

// Two validation sets: the center plus count-1 distinct corners of the
// half-space middle (discrete factors snapped), and count uniform points in
// [-0.5, 0.5]^k (discrete factors snapped to the nearest coded value with a
// whole actual value, ties toward zero).
std::vector<ValidationPoint> sample_validation_points(
    const FactorSpace& factors, int count_per_set, std::uint64_t seed);

struct CheckResult {
  std::string name;
  bool passed = false;
  bool informational = false;
  std::string detail;
};

struct PaperReport {
  std::vector<CheckResult> checks;
  FittedModel exp1_model;
  FittedModel exp2_model;
  FittedModel full_model;        // 64 terms on the 104 combined points
  FittedModel simplified_model;  // 13-term reference formula, same points
  ExperimentTable combined;      // the 104 rows

  bool all_passed() const;
  std::string to_text() const;
  std::string to_json() const;
};

// Re-runs the published reference analysis on the bundled fixture tables
// and compares against the published values at the pinned tolerances.
PaperReport replicate_paper();

}  // namespace pollerr
