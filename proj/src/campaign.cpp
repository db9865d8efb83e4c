#include "pollerr/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pollerr/diagnostics.hpp"
#include "pollerr/errors.hpp"
#include "pollerr/fixtures.hpp"

namespace pollerr {

namespace {

constexpr const char* kCanonicalNames[6] = {"truth", "depth",   "alts",
                                            "weight", "pop", "answers"};

FactorKind kind_from_string(const std::string& s) {
  if (s == "continuous") return FactorKind::continuous;
  if (s == "integer") return FactorKind::integer;
  if (s == "fraction") return FactorKind::fraction;
  fail(errkind::schema, "unknown factor kind '" + s + "'");
}

std::string kind_to_string(FactorKind k) {
  switch (k) {
    case FactorKind::continuous: return "continuous";
    case FactorKind::integer: return "integer";
    case FactorKind::fraction: return "fraction";
  }
  return "continuous";
}

}  // namespace

CampaignConfig CampaignConfig::defaults() {
  CampaignConfig config;
  config.factors = FactorSpace({
      Factor("truth", 0.1, 0.9, FactorKind::fraction),
      Factor("depth", 1, 5, FactorKind::integer),
      Factor("alts", 2, 10, FactorKind::integer),
      Factor("weight", 0.1, 0.9, FactorKind::fraction),
      Factor("pop", 1000, 100000, FactorKind::integer),
      Factor("answers", 0.1, 0.9, FactorKind::fraction),
  });
  return config;
}

CampaignConfig CampaignConfig::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(errkind::parse, std::string("config JSON: ") + e.what());
  }
  CampaignConfig config = defaults();
  try {
    if (j.contains("factors")) {
      std::vector<Factor> fs;
      for (const auto& f : j["factors"]) {
        fs.emplace_back(f.at("name").get<std::string>(),
                        f.at("low").get<double>(), f.at("high").get<double>(),
                        kind_from_string(f.value("kind", "continuous")));
      }
      config.factors = FactorSpace(std::move(fs));
    }
    config.scale = j.value("scale", config.scale);
    config.reps = j.value("reps", config.reps);
    config.seed = j.value("seed", config.seed);
    config.formula = j.value("formula", config.formula);
    config.refine_threshold =
        j.value("refine_threshold", config.refine_threshold);
    config.max_zoom_steps = j.value("max_zoom_steps", config.max_zoom_steps);
  } catch (const nlohmann::json::exception& e) {
    fail(errkind::schema, std::string("config JSON: ") + e.what());
  }
  if (!(config.scale > 0.0 && config.scale <= 1.0))
    fail(errkind::invalid_argument, "scale must lie in (0, 1]");
  if (config.reps < 1) fail(errkind::invalid_argument, "reps must be >= 1");
  return config;
}

std::string CampaignConfig::to_json() const {
  nlohmann::json j;
  nlohmann::json fs = nlohmann::json::array();
  for (const auto& f : factors.factors) {
    nlohmann::json jf;
    jf["name"] = f.name;
    jf["low"] = f.low_actual;
    jf["high"] = f.high_actual;
    jf["kind"] = kind_to_string(f.kind);
    fs.push_back(std::move(jf));
  }
  j["factors"] = std::move(fs);
  j["scale"] = scale;
  j["reps"] = reps;
  j["seed"] = seed;
  j["formula"] = formula;
  j["refine_threshold"] = refine_threshold;
  j["max_zoom_steps"] = max_zoom_steps;
  return j.dump(2) + "\n";
}

ScenarioParams CampaignConfig::scenario_at(
    const std::vector<double>& coded) const {
  if (coded.size() != factors.size())
    fail(errkind::invalid_argument, "coded point arity does not match config");
  for (const char* name : kCanonicalNames)
    if (factors.index_of(name) < 0)
      fail(errkind::invalid_argument,
           std::string("campaign needs a factor named '") + name + "'");
  auto actual = [&](const char* name) {
    int i = factors.index_of(name);
    return to_actual(factors[i], coded[i]);
  };
  ScenarioParams s;
  s.pr_truth = actual("truth");
  s.depth = static_cast<int>(actual("depth"));
  s.n_alts = static_cast<int>(actual("alts"));
  s.target_weight = actual("weight");
  s.population = static_cast<long>(actual("pop"));
  s.answers_fraction = actual("answers");
  return s;
}

namespace {

bool same_point(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::fabs(a[i] - b[i]) > 1e-12) return false;
  return true;
}

const ProbeMeasurement* find_reuse(
    const std::vector<ProbeMeasurement>& reuse,
    const std::vector<double>& coded) {
  for (const auto& r : reuse)
    if (same_point(r.coded, coded)) return &r;
  return nullptr;
}

double measure_point(const CampaignConfig& config,
                     const std::vector<double>& coded, std::uint64_t seed) {
  return run_setting(config.scenario_at(coded), config.reps, seed).mape;
}

}  // namespace

ExperimentTable run_campaign(const CampaignConfig& config,
                             const std::vector<ProbeMeasurement>& reuse) {
  const int k = static_cast<int>(config.factors.size());
  Design design = full_factorial(k, config.scale);

  ExperimentTable table;
  table.factor_names = config.factors.names();

  auto measure_row = [&](int label, const std::vector<double>& coded) {
    if (const auto* r = find_reuse(reuse, coded)) return r->measured;
    try {
      return measure_point(config, coded,
                           derive_seed(config.seed,
                                       static_cast<std::uint64_t>(label)));
    } catch (const Error& e) {
      throw Error(e.kind(), "standard order " + std::to_string(label) + ": " +
                                e.what());
    }
  };

  std::vector<double> origin(k, 0.0);
  table.append_row(0, origin, measure_row(0, origin));
  for (std::size_t i = 0; i < design.points.size(); ++i) {
    int label = design.order_labels[i];
    table.append_row(label, design.points[i].coded,
                     measure_row(label, design.points[i].coded));
  }
  return table;
}

RefineDecision refine_step(const FittedModel& model,
                           const std::vector<ProbeMeasurement>& probes,
                           double threshold, double current_scale) {
  if (probes.empty())
    fail(errkind::invalid_argument, "refine step needs probe measurements");
  RefineDecision decision;
  decision.probes = probes;
  for (const auto& probe : probes) {
    double r = predict(model, probe.coded).value - probe.measured;
    decision.residuals.push_back(r);
    decision.max_abs_residual =
        std::max(decision.max_abs_residual, std::fabs(r));
  }
  decision.accept = decision.max_abs_residual <= threshold;
  decision.new_scale = decision.accept ? current_scale : current_scale / 2.0;
  return decision;
}

std::vector<ProbeMeasurement> measure_probes(const CampaignConfig& config) {
  const int k = static_cast<int>(config.factors.size());
  std::vector<ProbeMeasurement> probes;
  auto points = diagonal_probe(k);
  for (std::size_t i = 0; i < points.size(); ++i) {
    ProbeMeasurement p;
    p.coded = points[i].coded;
    for (double& c : p.coded) c *= config.scale;
    // Probe seeds live in their own stream, away from campaign row labels.
    p.measured = measure_point(
        config, p.coded,
        derive_seed(config.seed, 0x700000ull + static_cast<std::uint64_t>(i)));
    probes.push_back(std::move(p));
  }
  return probes;
}

RefinementOutcome refine_loop(CampaignConfig config) {
  RefinementOutcome outcome;
  std::vector<ProbeMeasurement> reuse;
  const int k = static_cast<int>(config.factors.size());
  std::vector<Term> terms = config.formula.empty()
                                ? all_terms(k)
                                : expand_formula(config.formula,
                                                 config.factors.names());
  for (int step = 0; step <= config.max_zoom_steps; ++step) {
    outcome.table = run_campaign(config, reuse);
    // Fit on the corner rows; the baseline row is the first probe.
    ExperimentTable corners = outcome.table;
    corners.std_order.erase(corners.std_order.begin());
    corners.coded.erase(corners.coded.begin());
    corners.response.erase(corners.response.begin());
    outcome.model = fit_ols(corners, terms);

    auto probes = measure_probes(config);
    // The campaign already measured the baseline; keep that measurement.
    probes[0].measured = outcome.table.response.front();
    auto decision =
        refine_step(outcome.model, probes, config.refine_threshold,
                    config.scale);
    outcome.decisions.push_back(decision);
    outcome.final_scale = config.scale;
    if (decision.accept) {
      outcome.converged = true;
      return outcome;
    }
    config.scale = decision.new_scale;
    reuse = decision.probes;
  }
  return outcome;
}

namespace {

// Nearest coded value whose actual value is whole; ties toward zero.
double snap_to_whole_actual(const Factor& f, double coded) {
  double actual = f.midpoint() + f.half_range() * coded;
  double lo = std::floor(actual), hi = lo + 1.0;
  double c_lo = (lo - f.midpoint()) / f.half_range();
  double c_hi = (hi - f.midpoint()) / f.half_range();
  double d_lo = std::fabs(coded - c_lo), d_hi = std::fabs(coded - c_hi);
  if (d_lo < d_hi) return c_lo;
  if (d_hi < d_lo) return c_hi;
  return std::fabs(c_lo) <= std::fabs(c_hi) ? c_lo : c_hi;
}

std::vector<double> snap_discrete(const FactorSpace& factors,
                                  std::vector<double> coded) {
  for (std::size_t i = 0; i < factors.size(); ++i)
    if (factors[i].kind == FactorKind::integer)
      coded[i] = snap_to_whole_actual(factors[i], coded[i]);
  return coded;
}

}  // namespace

std::vector<ValidationPoint> sample_validation_points(
    const FactorSpace& factors, int count_per_set, std::uint64_t seed) {
  if (count_per_set < 1)
    fail(errkind::invalid_argument, "count_per_set must be >= 1");
  const std::size_t k = factors.size();
  if (count_per_set - 1 > (1 << k))
    fail(errkind::invalid_argument,
         "count exceeds the " + std::to_string(1 << k) +
             " distinct mid-space corners");

  std::vector<ValidationPoint> out;
  Rng rng(derive_seed(seed, 0));

  // Set 1: center plus distinct corners of {-0.25, +0.25}^k.
  out.push_back({"mid_corners", std::vector<double>(k, 0.0)});
  std::set<std::uint64_t> used;
  while (out.size() < static_cast<std::size_t>(count_per_set)) {
    std::uint64_t mask = rng() & ((1ull << k) - 1);
    if (!used.insert(mask).second) continue;
    std::vector<double> coded(k);
    for (std::size_t i = 0; i < k; ++i)
      coded[i] = (mask >> i) & 1ull ? 0.25 : -0.25;
    out.push_back({"mid_corners", snap_discrete(factors, std::move(coded))});
  }

  // Set 2: uniform draws over [-0.5, 0.5]^k.
  for (int n = 0; n < count_per_set; ++n) {
    std::vector<double> coded(k);
    for (std::size_t i = 0; i < k; ++i)
      coded[i] = uniform_double(rng) - 0.5;
    out.push_back({"random_space", snap_discrete(factors, std::move(coded))});
  }
  return out;
}

namespace {

ExperimentTable drop_baseline(const ExperimentTable& table) {
  ExperimentTable out;
  out.factor_names = table.factor_names;
  for (std::size_t i = 0; i < table.rows(); ++i)
    if (table.std_order[i] != 0)
      out.append_row(table.std_order[i], table.coded[i], table.response[i]);
  return out;
}

int find_point(const ExperimentTable& table, const std::vector<double>& p) {
  for (std::size_t i = 0; i < table.rows(); ++i)
    if (same_point(table.coded[i], p)) return static_cast<int>(i);
  return -1;
}

struct Tolerance {
  double value;
};

void check_close(PaperReport& report, const std::string& name, double got,
                 double want, Tolerance tol, bool informational = false) {
  CheckResult r;
  r.name = name;
  r.passed = std::fabs(got - want) <= tol.value;
  std::ostringstream os;
  os.precision(10);
  os << "got " << got << ", reference " << want << ", tolerance "
     << tol.value;
  r.detail = os.str();
  r.informational = informational;
  report.checks.push_back(std::move(r));
}

void check_true(PaperReport& report, const std::string& name, bool ok,
                const std::string& detail) {
  report.checks.push_back(CheckResult{name, ok, false, detail});
}

// Published simplified-model coefficients, keyed by canonical term name.
const std::vector<std::pair<std::string, double>> kPublishedCoefficients = {
    {"(Intercept)", 32.501266},
    {"truth", -29.023493},
    {"alts", 5.037411},
    {"weight", -16.562410},
    {"depth", 1.449934},
    {"answers", 1.856916},
    {"truth:depth", 10.044302},
    {"depth:weight", -28.397984},
    {"truth:weight", 4.175231},
    {"depth:answers", 8.535667},
    {"weight:answers", -8.402531},
    {"truth:depth:weight", 51.134829},
    {"depth:weight:answers", 25.945740},
};

const char* kSimplifiedFormula =
    "truth + alts + weight + truth*depth + depth*weight + "
    "truth*depth*weight + depth*weight*answers";

}  // namespace

bool PaperReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.informational && !c.passed) return false;
  return true;
}

std::string PaperReport::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.informational ? "INFO" : c.passed ? "PASS" : "FAIL") << "  "
       << c.name << ": " << c.detail << '\n';
  }
  os << (all_passed() ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED") << '\n';
  return os.str();
}

std::string PaperReport::to_json() const {
  nlohmann::json j;
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json jc;
    jc["name"] = c.name;
    jc["passed"] = c.passed;
    jc["informational"] = c.informational;
    jc["detail"] = c.detail;
    cs.push_back(std::move(jc));
  }
  j["checks"] = std::move(cs);
  j["all_passed"] = all_passed();
  j["full_model"] = {{"r_squared", full_model.r_squared},
                     {"adj_r_squared", full_model.adj_r_squared},
                     {"n_obs", full_model.n_obs}};
  nlohmann::json coef = nlohmann::json::object();
  for (std::size_t i = 0; i < simplified_model.terms.size(); ++i)
    coef[simplified_model.terms[i].name(simplified_model.factor_names)] =
        simplified_model.coefficients[i];
  j["simplified_model"] = {{"r_squared", simplified_model.r_squared},
                           {"adj_r_squared", simplified_model.adj_r_squared},
                           {"coefficients", std::move(coef)}};
  return j.dump(2) + "\n";
}

PaperReport replicate_paper() {
  PaperReport report;

  ExperimentTable exp1 = load_fixture("exp1");
  ExperimentTable exp2 = load_fixture("exp2");
  ExperimentTable validation = load_fixture("validation");
  const int k = static_cast<int>(exp1.k());
  std::vector<Term> saturated = all_terms(k);

  ExperimentTable exp1_corners = drop_baseline(exp1);
  ExperimentTable exp2_corners = drop_baseline(exp2);
  report.exp1_model = fit_ols(exp1_corners, saturated);
  report.exp2_model = fit_ols(exp2_corners, saturated);

  // Probe predictions and residuals of the first experiment's model.
  const std::vector<double> origin(k, 0.0);
  const std::vector<double> diag_plus(k, 0.5);
  const std::vector<double> diag_minus(k, -0.5);
  double baseline_sample = exp1.response[find_point(exp1, origin)];
  double plus_sample = exp2.response[find_point(exp2, diag_plus)];
  double minus_sample = exp2.response[find_point(exp2, diag_minus)];

  double p0 = predict(report.exp1_model, origin).value;
  double pp = predict(report.exp1_model, diag_plus).value;
  double pm = predict(report.exp1_model, diag_minus).value;
  check_close(report, "exp1 prediction at baseline", p0, 418.7087, {0.01});
  check_close(report, "exp1 prediction at +0.5 diagonal", pp, 124.8765, {0.01});
  check_close(report, "exp1 prediction at -0.5 diagonal", pm, 731.8813, {0.01});
  check_close(report, "exp1 baseline residual", p0 - baseline_sample, 384.6646,
              {0.01});
  check_close(report, "exp1 +0.5 diagonal residual", pp - plus_sample,
              110.4592, {0.01});
  check_close(report, "exp1 -0.5 diagonal residual", pm - minus_sample,
              693.6448, {0.01});

  // Second experiment: improved baseline prediction.
  double q0 = predict(report.exp2_model, origin).value;
  check_close(report, "exp2 prediction at baseline", q0, 32.89371, {0.001});
  double mean = 0.0;
  for (double v : exp2_corners.response) mean += v;
  mean /= static_cast<double>(exp2_corners.rows());
  check_close(report, "exp2 baseline prediction equals corner mean", q0, mean,
              {1e-9});

  // 104-point model: second experiment corners plus the validation set.
  report.combined = concat_tables({exp2_corners, validation});
  check_true(report, "combined fit uses 104 observations",
             report.combined.rows() == 104,
             std::to_string(report.combined.rows()) + " rows");
  report.full_model = fit_ols(report.combined, saturated);
  check_close(report, "full model R^2", report.full_model.r_squared, 0.8419,
              {0.001});
  check_close(report, "full model adjusted R^2",
              report.full_model.adj_r_squared, 0.5929, {0.002});

  // Simplified model on the same points.
  std::vector<Term> simple =
      expand_formula(kSimplifiedFormula, report.combined.factor_names);
  check_true(report, "simplified formula expands to 13 terms",
             simple.size() == 13, std::to_string(simple.size()) + " terms");
  report.simplified_model = fit_ols(report.combined, simple);
  check_close(report, "simplified model R^2",
              report.simplified_model.r_squared, 0.7846, {0.001});
  check_close(report, "simplified model adjusted R^2",
              report.simplified_model.adj_r_squared, 0.7562, {0.002});

  for (const auto& [name, want] : kPublishedCoefficients) {
    double got = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < report.simplified_model.terms.size(); ++i)
      if (report.simplified_model.terms[i].name(
              report.simplified_model.factor_names) == name)
        got = report.simplified_model.coefficients[i];
    check_close(report, "coefficient " + name, got, want, {0.01});
  }

  auto effects = pareto_effects(report.simplified_model);
  check_true(report, "largest effect is truth:depth:weight",
             !effects.empty() && effects.front().name == "truth:depth:weight",
             "largest effect: " +
                 (effects.empty() ? std::string("none") : effects.front().name));

  // Supplementary: the 105-point variant (center measurement entered twice).
  ExperimentTable with_base = concat_tables({exp2, validation});
  FittedModel full105 = fit_ols(with_base, saturated);
  {
    std::ostringstream os;
    os.precision(10);
    os << "R^2 " << full105.r_squared << ", adjusted "
       << full105.adj_r_squared << " over " << with_base.rows() << " rows";
    report.checks.push_back(
        CheckResult{"105-point full model (supplementary)", true, true,
                    os.str()});
  }
  return report;
}

}  // namespace pollerr
