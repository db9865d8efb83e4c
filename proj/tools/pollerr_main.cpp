// pollerr: poll error prediction via two-level factor experiments.
// Subcommands cover the four methodology stages: design generation, data
// generation (simulate / run-campaign), model creation (fit), and model
// validation (validate / diagnose / predict / refine / replicate-paper).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pollerr/campaign.hpp"
#include "pollerr/diagnostics.hpp"
#include "pollerr/doe.hpp"
#include "pollerr/errors.hpp"
#include "pollerr/fixtures.hpp"
#include "pollerr/regression.hpp"
#include "pollerr/render.hpp"
#include "pollerr/simulate.hpp"
#include "pollerr/table.hpp"

namespace {

using namespace pollerr;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errkind::io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errkind::io, "cannot write '" + path + "'");
  out << content;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-")
    std::cout << content;
  else
    write_file(out_path, content);
}

CampaignConfig load_config(const std::string& path) {
  if (path.empty()) return CampaignConfig::defaults();
  return CampaignConfig::from_json(read_file(path));
}

std::vector<double> parse_point(const std::string& text, std::size_t arity) {
  std::vector<double> point;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    point.push_back(std::stod(item));
  if (point.size() != arity)
    fail(errkind::invalid_argument,
         "expected " + std::to_string(arity) + " coordinates, got " +
             std::to_string(point.size()));
  return point;
}

std::vector<std::pair<std::vector<double>, double>> table_samples(
    const ExperimentTable& table) {
  std::vector<std::pair<std::vector<double>, double>> samples;
  for (std::size_t i = 0; i < table.rows(); ++i)
    samples.emplace_back(table.coded[i], table.response[i]);
  return samples;
}

int cmd_design(int k, double scale, const std::string& config_path,
               const std::string& out) {
  CampaignConfig config = load_config(config_path);
  Design design = full_factorial(k, scale);
  std::vector<std::string> names;
  if (static_cast<std::size_t>(k) == config.factors.size()) {
    names = config.factors.names();
  } else {
    for (int i = 1; i <= k; ++i) names.push_back("f" + std::to_string(i));
  }
  emit(out, design_to_csv(design, names));
  return 0;
}

int cmd_simulate(const ScenarioParams& scenario, int reps,
                 std::uint64_t seed, const std::string& out) {
  SimulationResult result = run_setting(scenario, reps, seed);
  nlohmann::json j;
  j["scenario"] = {{"truth", scenario.pr_truth},
                   {"depth", scenario.depth},
                   {"alts", scenario.n_alts},
                   {"weight", scenario.target_weight},
                   {"pop", scenario.population},
                   {"answers", scenario.answers_fraction}};
  j["true_fraction"] = result.true_fraction;
  j["estimates"] = result.estimates;
  j["mape"] = result.mape;
  emit(out, j.dump(2) + "\n");
  return 0;
}

int cmd_run_campaign(const std::string& config_path, double scale, int reps,
                     std::uint64_t seed, bool have_scale, bool have_reps,
                     bool have_seed, const std::string& out) {
  CampaignConfig config = load_config(config_path);
  if (have_scale) config.scale = scale;
  if (have_reps) config.reps = reps;
  if (have_seed) config.seed = seed;
  ExperimentTable table = run_campaign(config);
  emit(out, table_to_csv(table));
  return 0;
}

int cmd_fit(const std::vector<std::string>& data_paths,
            const std::string& formula, const std::string& out) {
  std::vector<ExperimentTable> tables;
  for (const auto& p : data_paths) tables.push_back(read_table_csv(p));
  ExperimentTable table = concat_tables(tables);
  std::vector<Term> terms =
      formula.empty() ? all_terms(static_cast<int>(table.k()))
                      : expand_formula(formula, table.factor_names);
  FittedModel model = fit_ols(table, terms);
  emit(out, model_to_json(model));
  return 0;
}

int cmd_validate(const std::string& config_path, const std::string& model_path,
                 int count, std::uint64_t seed, bool have_seed,
                 const std::string& out) {
  CampaignConfig config = load_config(config_path);
  if (have_seed) config.seed = seed;
  auto points = sample_validation_points(config.factors, count, config.seed);

  ExperimentTable table;
  table.factor_names = config.factors.names();
  int row = 0;
  for (const auto& vp : points) {
    double mape = run_setting(config.scenario_at(vp.coded), config.reps,
                              derive_seed(config.seed, 0x900000ull + row))
                      .mape;
    table.append_row(row, vp.coded, mape);
    ++row;
  }
  emit(out, table_to_csv(table));

  if (!model_path.empty()) {
    FittedModel model = model_from_json(read_file(model_path));
    ResidualSet rs = residuals(model, table_samples(table));
    double max_abs = 0.0, sum = 0.0;
    for (const auto& p : rs.points) {
      max_abs = std::max(max_abs, std::fabs(p.residual));
      sum += p.residual;
    }
    nlohmann::json j;
    j["n"] = rs.points.size();
    j["max_abs_residual"] = max_abs;
    j["mean_residual"] = sum / rs.points.size();
    std::cerr << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_diagnose(const std::string& model_path, const std::string& samples_path,
                 const std::string& out_dir) {
  FittedModel model = model_from_json(read_file(model_path));
  ExperimentTable samples = read_table_csv(samples_path);
  DiagnosticsReport report = build_report(model, table_samples(samples));

  std::filesystem::create_directories(out_dir);
  for (auto kind : {PlotKind::histogram, PlotKind::fitted_vs_residual,
                    PlotKind::qq, PlotKind::pareto}) {
    RenderedPlot plot = render_report(report, kind);
    std::string base = out_dir + "/" + plot_kind_name(kind);
    write_file(base + ".svg", plot.svg);
    write_file(base + ".csv", plot.csv);
  }
  double min_res = 0.0, max_res = 0.0;
  if (!report.residual_set.points.empty()) {
    min_res = max_res = report.residual_set.points.front().residual;
    for (const auto& p : report.residual_set.points) {
      min_res = std::min(min_res, p.residual);
      max_res = std::max(max_res, p.residual);
    }
  }
  nlohmann::json j;
  j["r_squared"] = model.r_squared;
  if (model.has_statistics()) j["adj_r_squared"] = model.adj_r_squared;
  j["min_residual"] = min_res;
  j["max_residual"] = max_res;
  write_file(out_dir + "/summary.json", j.dump(2) + "\n");
  std::cout << "wrote 4 plots + summary.json to " << out_dir << "\n";
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& point_text,
                const std::string& out) {
  FittedModel model = model_from_json(read_file(model_path));
  auto point = parse_point(point_text, model.factor_names.size());
  Prediction p = predict(model, point);
  nlohmann::json j;
  j["point"] = point;
  j["value"] = p.value;
  j["extrapolation"] = p.extrapolation;
  emit(out, j.dump(2) + "\n");
  return 0;
}

int cmd_refine(const std::string& model_path, const std::string& config_path,
               bool loop, const std::string& out) {
  CampaignConfig config = load_config(config_path);
  nlohmann::json j;
  if (loop) {
    RefinementOutcome outcome = refine_loop(config);
    j["converged"] = outcome.converged;
    j["final_scale"] = outcome.final_scale;
    j["steps"] = outcome.decisions.size();
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& d : outcome.decisions)
      steps.push_back({{"accept", d.accept},
                       {"max_abs_residual", d.max_abs_residual},
                       {"new_scale", d.new_scale}});
    j["decisions"] = std::move(steps);
  } else {
    FittedModel model = model_from_json(read_file(model_path));
    auto probes = measure_probes(config);
    RefineDecision d =
        refine_step(model, probes, config.refine_threshold, config.scale);
    j["decision"] = d.accept ? "accept" : "zoom";
    j["max_abs_residual"] = d.max_abs_residual;
    j["residuals"] = d.residuals;
    j["new_scale"] = d.new_scale;
    nlohmann::json ps = nlohmann::json::array();
    for (const auto& p : d.probes)
      ps.push_back({{"coded", p.coded}, {"measured", p.measured}});
    j["probes"] = std::move(ps);
  }
  emit(out, j.dump(2) + "\n");
  return 0;
}

int cmd_replicate(const std::string& out_dir) {
  PaperReport report = replicate_paper();
  std::cout << report.to_text();
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_file(out_dir + "/report.json", report.to_json());
    for (const char* name : {"exp1", "exp2", "validation"})
      write_file(out_dir + "/" + name + ".csv",
                 table_to_csv(load_fixture(name)));
    write_file(out_dir + "/combined.csv", table_to_csv(report.combined));
    write_file(out_dir + "/simplified_model.json",
               model_to_json(report.simplified_model));
  }
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"poll error prediction via two-level factor experiments"};
  app.require_subcommand(1);

  // design
  auto* design = app.add_subcommand("design", "emit a full factorial design");
  int k = 6;
  double d_scale = 1.0;
  std::string d_config, d_out;
  design->add_option("--k", k, "number of factors");
  design->add_option("--scale", d_scale, "coded half-range, in (0, 1]");
  design->add_option("--config", d_config, "campaign config JSON");
  design->add_option("--out,-o", d_out, "output CSV ('-' = stdout)");

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "measure one setting's MAPE with the poll simulator");
  ScenarioParams scenario;
  int s_reps = 30;
  std::uint64_t s_seed = 1;
  std::string s_out;
  simulate->add_option("--truth", scenario.pr_truth, "Pr[truth]");
  simulate->add_option("--depth", scenario.depth, "tree depth");
  simulate->add_option("--alts", scenario.n_alts, "alternatives per question");
  simulate->add_option("--weight", scenario.target_weight,
                       "target alternative weight");
  simulate->add_option("--pop", scenario.population, "population size");
  simulate->add_option("--answers", scenario.answers_fraction,
                       "fraction of true target answers");
  simulate->add_option("--reps", s_reps, "repetitions");
  simulate->add_option("--seed", s_seed, "RNG seed");
  simulate->add_option("--out,-o", s_out, "output JSON");

  // run-campaign
  auto* campaign =
      app.add_subcommand("run-campaign", "measure a full factorial campaign");
  std::string c_config, c_out;
  double c_scale = 1.0;
  int c_reps = 30;
  std::uint64_t c_seed = 1;
  campaign->add_option("--config", c_config, "campaign config JSON");
  auto* c_scale_opt = campaign->add_option("--scale", c_scale, "coded scale");
  auto* c_reps_opt = campaign->add_option("--reps", c_reps, "repetitions");
  auto* c_seed_opt = campaign->add_option("--seed", c_seed, "RNG seed");
  campaign->add_option("--out,-o", c_out, "output CSV");

  // fit
  auto* fit = app.add_subcommand("fit", "fit an OLS model to experiment CSVs");
  std::vector<std::string> f_data;
  std::string f_formula, f_out;
  fit->add_option("--data", f_data, "experiment CSV (repeatable)")
      ->required();
  fit->add_option("--formula", f_formula,
                  "term expression (default: all interactions)");
  fit->add_option("--out,-o", f_out, "model JSON output");

  // validate
  auto* validate = app.add_subcommand(
      "validate", "sample validation points and measure them");
  std::string v_config, v_model, v_out;
  int v_count = 20;
  std::uint64_t v_seed = 1;
  validate->add_option("--config", v_config, "campaign config JSON");
  validate->add_option("--model", v_model, "model JSON for residual summary");
  validate->add_option("--count", v_count, "points per validation set");
  auto* v_seed_opt = validate->add_option("--seed", v_seed, "RNG seed");
  validate->add_option("--out,-o", v_out, "measured points CSV");

  // diagnose
  auto* diagnose = app.add_subcommand(
      "diagnose", "render residual diagnostics for a fitted model");
  std::string g_model, g_samples, g_dir = "diagnostics";
  diagnose->add_option("--model", g_model, "model JSON")->required();
  diagnose->add_option("--samples", g_samples, "measured points CSV")
      ->required();
  diagnose->add_option("--out-dir", g_dir, "output directory");

  // predict
  auto* predict_cmd =
      app.add_subcommand("predict", "evaluate a model at a coded point");
  std::string p_model, p_point, p_out;
  predict_cmd->add_option("--model", p_model, "model JSON")->required();
  predict_cmd->add_option("--point", p_point, "comma-separated coded values")
      ->required();
  predict_cmd->add_option("--out,-o", p_out, "output JSON");

  // refine
  auto* refine = app.add_subcommand(
      "refine", "probe a model and decide whether to zoom in");
  std::string r_model, r_config, r_out;
  bool r_loop = false;
  refine->add_option("--model", r_model, "model JSON (omit with --loop)");
  refine->add_option("--config", r_config, "campaign config JSON");
  refine->add_flag("--loop", r_loop,
                   "run the full campaign/fit/probe refinement loop");
  refine->add_option("--out,-o", r_out, "output JSON");

  // replicate-paper
  auto* replicate = app.add_subcommand(
      "replicate-paper",
      "re-run the published reference analysis on the bundled fixtures");
  std::string rp_dir;
  replicate->add_option("--out-dir", rp_dir,
                        "directory for report.json and fixture CSVs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (design->parsed()) return cmd_design(k, d_scale, d_config, d_out);
    if (simulate->parsed()) return cmd_simulate(scenario, s_reps, s_seed, s_out);
    if (campaign->parsed())
      return cmd_run_campaign(c_config, c_scale, c_reps, c_seed,
                              c_scale_opt->count() > 0,
                              c_reps_opt->count() > 0,
                              c_seed_opt->count() > 0, c_out);
    if (fit->parsed()) return cmd_fit(f_data, f_formula, f_out);
    if (validate->parsed())
      return cmd_validate(v_config, v_model, v_count, v_seed,
                          v_seed_opt->count() > 0, v_out);
    if (diagnose->parsed()) return cmd_diagnose(g_model, g_samples, g_dir);
    if (predict_cmd->parsed()) return cmd_predict(p_model, p_point, p_out);
    if (refine->parsed()) return cmd_refine(r_model, r_config, r_loop, r_out);
    if (replicate->parsed()) return cmd_replicate(rp_dir);
  } catch (const Error& e) {
    nlohmann::json j;
    j["error"] = {{"kind", e.kind()}, {"message", e.what()}};
    std::cerr << j.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    nlohmann::json j;
    j["error"] = {{"kind", "internal"}, {"message", e.what()}};
    std::cerr << j.dump() << "\n";
    return 1;
  }
  return 0;
}
