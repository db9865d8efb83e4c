#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pollerr/table.hpp"

namespace pollerr {

// A model term: the set of factor positions whose coded values are
// multiplied. The empty set is the intercept.
struct Term {
  std::vector<int> factor_indices;  // sorted, unique

  bool is_intercept() const { return factor_indices.empty(); }
  int order() const { return static_cast<int>(factor_indices.size()); }
  bool operator==(const Term& other) const = default;

  std::string name(const std::vector<std::string>& factor_names) const;
};

// Expands an R-style term expression over the given factor names:
// '+' joins products, ':' is a pure interaction, 'a*b*c' adds every
// non-empty sub-term of the crossed factors. The intercept comes first;
// remaining terms are sorted by (order, first appearance).
std::vector<Term> expand_formula(const std::string& spec,
                                 const std::vector<std::string>& factor_names);

// All 2^k terms of the saturated model, sorted by (order, lexicographic).
std::vector<Term> all_terms(int k);

// One column per term; entry = product of the row's coded values over the
// term's factor indices.
Eigen::MatrixXd design_matrix(const ExperimentTable& table,
                              const std::vector<Term>& terms);

struct FittedModel {
  std::vector<std::string> factor_names;
  std::vector<Term> terms;
  std::vector<double> coefficients;
  // Empty when df_residual == 0.
  std::vector<double> std_errors;
  std::vector<double> t_values;
  std::vector<double> p_values;
  double r_squared = 0.0;
  double adj_r_squared = 0.0;  // NaN when df_residual == 0
  int n_obs = 0;
  int df_residual = 0;
  std::vector<double> residuals;
  double span = 0.0;  // max |coded| over the fitted observations

  bool has_statistics() const { return df_residual > 0; }
};

FittedModel fit_ols(const ExperimentTable& table,
                    const std::vector<Term>& terms);

// Terms with p < alpha; the intercept is always retained.
std::vector<Term> significant_terms(const FittedModel& model,
                                    double alpha = 0.05);

struct Prediction {
  double value = 0.0;
  bool extrapolation = false;
};

Prediction predict(const FittedModel& model, const std::vector<double>& point);

std::string model_to_json(const FittedModel& model);
FittedModel model_from_json(const std::string& text);

}  // namespace pollerr
