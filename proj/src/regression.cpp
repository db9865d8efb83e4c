#include "pollerr/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "pollerr/errors.hpp"
#include "pollerr/special_functions.hpp"

namespace pollerr {

namespace {

constexpr double kRankTolerance = 1e-10;  // relative to the largest singular value

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\n\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\n\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

Term make_term(std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return Term{std::move(indices)};
}

void add_unique(std::vector<Term>& terms, Term t) {
  if (std::find(terms.begin(), terms.end(), t) == terms.end())
    terms.push_back(std::move(t));
}

}  // namespace

std::string Term::name(const std::vector<std::string>& factor_names) const {
  if (is_intercept()) return "(Intercept)";
  std::string out;
  for (std::size_t i = 0; i < factor_indices.size(); ++i) {
    if (i) out += ':';
    out += factor_names.at(factor_indices[i]);
  }
  return out;
}

std::vector<Term> expand_formula(
    const std::string& spec, const std::vector<std::string>& factor_names) {
  if (trim(spec).empty())
    fail(errkind::parse, "empty term expression");

  auto index_of = [&](const std::string& name) {
    auto it = std::find(factor_names.begin(), factor_names.end(), name);
    if (it == factor_names.end())
      fail(errkind::unknown_name, "unknown factor '" + name + "'");
    return static_cast<int>(it - factor_names.begin());
  };

  std::vector<Term> appeared;
  appeared.push_back(Term{});  // intercept
  for (const std::string& raw : split(spec, '+')) {
    std::string product = trim(raw);
    if (product.empty()) fail(errkind::parse, "empty term in expression");
    // A product is factor names joined by ':' (one interaction term) and/or
    // '*' (cross: all non-empty sub-terms of the crossed groups).
    std::vector<std::vector<int>> groups;
    for (const std::string& star_part : split(product, '*')) {
      std::vector<int> group;
      for (const std::string& name : split(star_part, ':')) {
        std::string n = trim(name);
        if (n.empty()) fail(errkind::parse, "empty factor name in '" + product + "'");
        group.push_back(index_of(n));
      }
      groups.push_back(std::move(group));
    }
    // Cross the groups: every non-empty subset of groups forms a term.
    const std::size_t g = groups.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << g); ++mask) {
      std::vector<int> indices;
      for (std::size_t j = 0; j < g; ++j)
        if (mask & (std::size_t{1} << j))
          indices.insert(indices.end(), groups[j].begin(), groups[j].end());
      add_unique(appeared, make_term(std::move(indices)));
    }
  }

  // Intercept first, then (order, first appearance).
  std::vector<Term> result;
  result.push_back(Term{});
  int max_order = 0;
  for (const auto& t : appeared) max_order = std::max(max_order, t.order());
  for (int ord = 1; ord <= max_order; ++ord)
    for (const auto& t : appeared)
      if (t.order() == ord) result.push_back(t);
  return result;
}

std::vector<Term> all_terms(int k) {
  if (k < 1 || k > 20)
    fail(errkind::invalid_argument, "all_terms supports 1 <= k <= 20");
  std::vector<Term> terms;
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    std::vector<int> idx;
    for (int j = 0; j < k; ++j)
      if (mask & (std::size_t{1} << j)) idx.push_back(j);
    terms.push_back(Term{std::move(idx)});
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Term& a, const Term& b) {
                     if (a.order() != b.order()) return a.order() < b.order();
                     return a.factor_indices < b.factor_indices;
                   });
  return terms;
}

Eigen::MatrixXd design_matrix(const ExperimentTable& table,
                              const std::vector<Term>& terms) {
  const auto n = static_cast<Eigen::Index>(table.rows());
  const auto p = static_cast<Eigen::Index>(terms.size());
  for (const auto& t : terms)
    for (int f : t.factor_indices)
      if (f < 0 || f >= static_cast<int>(table.k()))
        fail(errkind::invalid_argument, "term references factor index " +
                                            std::to_string(f) +
                                            " outside the table");
  Eigen::MatrixXd X(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      double v = 1.0;
      for (int f : terms[j].factor_indices) v *= table.coded[i][f];
      X(i, j) = v;
    }
  }
  return X;
}

FittedModel fit_ols(const ExperimentTable& table,
                    const std::vector<Term>& terms) {
  table.validate();
  if (terms.empty()) fail(errkind::invalid_argument, "no terms to fit");
  const auto n = static_cast<Eigen::Index>(table.rows());
  const auto p = static_cast<Eigen::Index>(terms.size());
  if (n < p)
    fail(errkind::under_determined,
         std::to_string(n) + " observations cannot determine " +
             std::to_string(p) + " terms");

  Eigen::MatrixXd X = design_matrix(table, terms);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = table.response[i];

  // Rank decision by singular values; solve by column-pivoted QR.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > kRankTolerance * sv(0)) ++rank;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (rank < p) {
    // The first non-pivoted column is linearly dependent on the pivoted ones.
    qr.setThreshold(kRankTolerance);
    Eigen::Index qr_rank = std::min<Eigen::Index>(qr.rank(), p - 1);
    int dep = qr.colsPermutation().indices()(qr_rank);
    fail(errkind::singular_design,
         "design matrix is rank deficient; column '" +
             terms[dep].name(table.factor_names) + "' depends on the others");
  }

  Eigen::VectorXd beta = qr.solve(y);
  Eigen::VectorXd fitted = X * beta;
  Eigen::VectorXd resid = y - fitted;

  FittedModel model;
  model.factor_names = table.factor_names;
  model.terms = terms;
  model.coefficients.assign(beta.data(), beta.data() + p);
  model.n_obs = static_cast<int>(n);
  model.df_residual = static_cast<int>(n - p);
  model.residuals.assign(resid.data(), resid.data() + n);
  for (const auto& row : table.coded)
    for (double c : row) model.span = std::max(model.span, std::fabs(c));

  double ss_res = resid.squaredNorm();
  double mean = y.mean();
  double ss_tot = (y.array() - mean).matrix().squaredNorm();
  if (model.df_residual == 0) {
    model.r_squared = 1.0;
    model.adj_r_squared = std::numeric_limits<double>::quiet_NaN();
    return model;
  }
  model.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot
                                 : (ss_res == 0.0 ? 1.0 : 0.0);
  model.adj_r_squared =
      1.0 - (1.0 - model.r_squared) * (n - 1.0) / model.df_residual;

  // sigma^2 (X'X)^-1 via the R factor: (X'X)^-1 = P R^-1 R^-T P'.
  double sigma2 = ss_res / model.df_residual;
  Eigen::MatrixXd R =
      qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  Eigen::MatrixXd Rinv =
      R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  Eigen::MatrixXd cov_perm = Rinv * Rinv.transpose();
  const auto& perm = qr.colsPermutation().indices();
  model.std_errors.resize(p);
  model.t_values.resize(p);
  model.p_values.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double var = sigma2 * cov_perm(j, j);
    int col = perm(j);
    double se = std::sqrt(std::max(var, 0.0));
    model.std_errors[col] = se;
    double t = se > 0.0 ? model.coefficients[col] / se
                        : std::numeric_limits<double>::infinity();
    model.t_values[col] = t;
    model.p_values[col] = student_t_two_sided_p(t, model.df_residual);
  }
  return model;
}

std::vector<Term> significant_terms(const FittedModel& model, double alpha) {
  if (!model.has_statistics())
    fail(errkind::insufficient_data,
         "model has no residual degrees of freedom; add observations before "
         "testing significance");
  std::vector<Term> kept;
  for (std::size_t i = 0; i < model.terms.size(); ++i)
    if (model.terms[i].is_intercept() || model.p_values[i] < alpha)
      kept.push_back(model.terms[i]);
  if (kept.empty() || !kept.front().is_intercept())
    kept.insert(kept.begin(), Term{});
  return kept;
}

Prediction predict(const FittedModel& model,
                   const std::vector<double>& point) {
  if (point.size() != model.factor_names.size())
    fail(errkind::invalid_argument,
         "prediction point arity does not match the model");
  Prediction out;
  for (std::size_t j = 0; j < model.terms.size(); ++j) {
    double v = model.coefficients[j];
    for (int f : model.terms[j].factor_indices) v *= point[f];
    out.value += v;
  }
  for (double c : point)
    if (std::fabs(c) > model.span) out.extrapolation = true;
  return out;
}

std::string model_to_json(const FittedModel& model) {
  nlohmann::json j;
  j["factors"] = model.factor_names;
  nlohmann::json terms = nlohmann::json::array();
  for (std::size_t i = 0; i < model.terms.size(); ++i) {
    nlohmann::json t;
    t["name"] = model.terms[i].name(model.factor_names);
    t["factors"] = model.terms[i].factor_indices;
    t["coefficient"] = model.coefficients[i];
    if (model.has_statistics()) {
      t["std_error"] = model.std_errors[i];
      t["t_value"] = model.t_values[i];
      t["p_value"] = model.p_values[i];
    }
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  j["r_squared"] = model.r_squared;
  if (model.has_statistics()) j["adj_r_squared"] = model.adj_r_squared;
  j["n_obs"] = model.n_obs;
  j["df_residual"] = model.df_residual;
  j["span"] = model.span;
  j["residuals"] = model.residuals;
  return j.dump(2) + "\n";
}

FittedModel model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(errkind::parse, std::string("model JSON: ") + e.what());
  }
  FittedModel model;
  try {
    model.factor_names = j.at("factors").get<std::vector<std::string>>();
    for (const auto& t : j.at("terms")) {
      model.terms.push_back(
          Term{t.at("factors").get<std::vector<int>>()});
      model.coefficients.push_back(t.at("coefficient").get<double>());
      if (t.contains("std_error")) {
        model.std_errors.push_back(t.at("std_error").get<double>());
        model.t_values.push_back(t.at("t_value").get<double>());
        model.p_values.push_back(t.at("p_value").get<double>());
      }
    }
    model.r_squared = j.at("r_squared").get<double>();
    model.adj_r_squared = j.value("adj_r_squared",
                                  std::numeric_limits<double>::quiet_NaN());
    model.n_obs = j.at("n_obs").get<int>();
    model.df_residual = j.at("df_residual").get<int>();
    model.span = j.at("span").get<double>();
    model.residuals = j.value("residuals", std::vector<double>{});
  } catch (const nlohmann::json::exception& e) {
    fail(errkind::schema, std::string("model JSON: ") + e.what());
  }
  return model;
}

}  // namespace pollerr
