#include <cmath>
#include <random>

#include "doctest.h"
#include "pollerr/doe.hpp"
#include "pollerr/errors.hpp"
#include "pollerr/regression.hpp"
#include "testutil.hpp"

using namespace pollerr;

namespace {

const std::vector<std::string> kSix = {"truth", "depth", "alts",
                                       "weight", "pop",  "answers"};

ExperimentTable table_from_design(const Design& d,
                                  const std::vector<std::string>& names,
                                  const std::vector<double>& responses) {
  ExperimentTable t;
  t.factor_names = names;
  for (std::size_t i = 0; i < d.points.size(); ++i)
    t.append_row(d.order_labels[i], d.points[i].coded, responses[i]);
  return t;
}

std::vector<std::string> term_names(const std::vector<Term>& terms,
                                    const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (const auto& t : terms) out.push_back(t.name(names));
  return out;
}

// Independent oracle: normal equations solved by Gaussian elimination with
// partial pivoting in long double.
std::vector<double> normal_equations_fit(
    const std::vector<std::vector<double>>& X, const std::vector<double>& y) {
  const std::size_t n = X.size(), p = X[0].size();
  std::vector<std::vector<long double>> A(p,
                                          std::vector<long double>(p + 1, 0));
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = 0; b < p; ++b)
      for (std::size_t i = 0; i < n; ++i)
        A[a][b] += static_cast<long double>(X[i][a]) * X[i][b];
    for (std::size_t i = 0; i < n; ++i)
      A[a][p] += static_cast<long double>(X[i][a]) * y[i];
  }
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < p; ++r)
      if (std::fabs(static_cast<double>(A[r][col])) >
          std::fabs(static_cast<double>(A[pivot][col])))
        pivot = r;
    std::swap(A[col], A[pivot]);
    for (std::size_t r = 0; r < p; ++r) {
      if (r == col) continue;
      long double m = A[r][col] / A[col][col];
      for (std::size_t cc = col; cc <= p; ++cc) A[r][cc] -= m * A[col][cc];
    }
  }
  std::vector<double> beta(p);
  for (std::size_t i = 0; i < p; ++i)
    beta[i] = static_cast<double>(A[i][p] / A[i][i]);
  return beta;
}

}  // namespace

TEST_CASE("expand_formula basics") {
  auto simple = expand_formula("truth + alts", kSix);
  CHECK(term_names(simple, kSix) ==
        std::vector<std::string>{"(Intercept)", "truth", "alts"});

  auto crossed = expand_formula("truth*depth", kSix);
  CHECK(term_names(crossed, kSix) ==
        std::vector<std::string>{"(Intercept)", "truth", "depth",
                                 "truth:depth"});

  auto pure = expand_formula("truth:depth", kSix);
  CHECK(term_names(pure, kSix) ==
        std::vector<std::string>{"(Intercept)", "truth:depth"});

  auto triple = expand_formula("truth*depth*weight", kSix);
  CHECK(term_names(triple, kSix) ==
        std::vector<std::string>{"(Intercept)", "truth", "depth", "weight",
                                 "truth:depth", "truth:weight", "depth:weight",
                                 "truth:depth:weight"});
}

TEST_CASE("expand_formula reproduces the 13-term reference model") {
  auto terms = expand_formula(
      "truth + alts + weight + truth*depth + depth*weight + "
      "truth*depth*weight + depth*weight*answers",
      kSix);
  REQUIRE(terms.size() == 13);
  // Sorted by (order, first appearance); matches the published equation.
  CHECK(term_names(terms, kSix) ==
        std::vector<std::string>{
            "(Intercept)", "truth", "alts", "weight", "depth", "answers",
            "truth:depth", "depth:weight", "truth:weight", "depth:answers",
            "weight:answers", "truth:depth:weight", "depth:weight:answers"});
}

TEST_CASE("expand_formula deduplicates repeated mentions") {
  auto terms = expand_formula("truth + truth + truth:truth", kSix);
  CHECK(term_names(terms, kSix) ==
        std::vector<std::string>{"(Intercept)", "truth"});
}

TEST_CASE("expand_formula error paths") {
  CHECK_THROWS_AS(expand_formula("nosuch", kSix), Error);
  CHECK_THROWS_AS(expand_formula("", kSix), Error);
  CHECK_THROWS_AS(expand_formula("truth + ", kSix), Error);
}

TEST_CASE("design matrix entries are coded products") {
  ExperimentTable t;
  t.factor_names = {"a", "b"};
  t.append_row(1, {0.5, -0.5}, 0.0);
  auto terms = expand_formula("a:b", {"a", "b"});
  Eigen::MatrixXd X = design_matrix(t, terms);
  CHECK(X(0, 0) == 1.0);           // intercept
  CHECK(X(0, 1) == -0.25);         // a:b
}

TEST_CASE("design matrix of a +/-1 factorial is orthogonal") {
  Design d = full_factorial(2, 1.0);
  auto t = table_from_design(d, {"a", "b"}, {1, 2, 3, 4});
  Eigen::MatrixXd X = design_matrix(t, all_terms(2));
  Eigen::MatrixXd G = X.transpose() * X;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK_ABS(G(i, j), i == j ? 4.0 : 0.0, 1e-12);
}

TEST_CASE("saturated fit reproduces the responses exactly") {
  Design d = full_factorial(3, 1.0);
  std::vector<double> y{3.0, -1.5, 2.25, 8.0, 0.5, 4.0, -2.0, 1.0};
  auto t = table_from_design(d, {"a", "b", "c"}, y);
  FittedModel m = fit_ols(t, all_terms(3));
  CHECK(m.r_squared == 1.0);
  CHECK_FALSE(m.has_statistics());
  CHECK(std::isnan(m.adj_r_squared));
  for (double r : m.residuals) CHECK(std::fabs(r) <= 1e-12);
  // Prediction at the origin equals the intercept, which is the mean.
  double mean = 0.0;
  for (double v : y) mean += v / y.size();
  CHECK_ABS(predict(m, {0, 0, 0}).value, mean, 1e-12);
}

TEST_CASE("orthogonal-design coefficients match the closed form") {
  const double s = 0.7;
  Design d = full_factorial(3, s);
  std::mt19937_64 rng(11);
  std::vector<double> y;
  for (int i = 0; i < 8; ++i)
    y.push_back(static_cast<double>(rng() >> 11) * 0x1.0p-53 * 100.0);
  auto t = table_from_design(d, {"a", "b", "c"}, y);
  auto terms = all_terms(3);
  FittedModel m = fit_ols(t, terms);
  for (std::size_t j = 0; j < terms.size(); ++j) {
    double acc = 0.0;
    for (int i = 0; i < 8; ++i) {
      double sign = 1.0;
      for (int f : terms[j].factor_indices) sign *= d.points[i].coded[f] / s;
      acc += y[i] * sign;
    }
    double expected = acc / 8.0 / std::pow(s, terms[j].order());
    CHECK_ABS(m.coefficients[j], expected, 1e-9);
  }
}

TEST_CASE("fit matches a long-double normal-equations oracle") {
  std::mt19937_64 rng(23);
  auto unif = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int trial = 0; trial < 25; ++trial) {
    int k = 2 + static_cast<int>(unif() * 2);  // 2..3 factors, <= 8 terms
    int n = 12 + static_cast<int>(unif() * 20);
    ExperimentTable t;
    for (int f = 0; f < k; ++f)
      t.factor_names.push_back("f" + std::to_string(f + 1));
    for (int i = 0; i < n; ++i) {
      std::vector<double> point(k);
      for (auto& c : point) c = 2.0 * unif() - 1.0;
      t.append_row(i + 1, point, 10.0 * unif() - 5.0);
    }
    std::string spec = "f1";
    for (int f = 2; f <= k; ++f) spec += "*f" + std::to_string(f);
    auto terms = expand_formula(spec, t.factor_names);
    FittedModel m = fit_ols(t, terms);

    Eigen::MatrixXd X = design_matrix(t, terms);
    std::vector<std::vector<double>> Xv(n, std::vector<double>(terms.size()));
    for (int i = 0; i < n; ++i)
      for (std::size_t j = 0; j < terms.size(); ++j) Xv[i][j] = X(i, j);
    auto oracle = normal_equations_fit(Xv, t.response);
    for (std::size_t j = 0; j < terms.size(); ++j) {
      double scale = std::max(1.0, std::fabs(oracle[j]));
      CHECK(std::fabs(m.coefficients[j] - oracle[j]) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("residuals sum to zero when the intercept is present") {
  std::mt19937_64 rng(5);
  ExperimentTable t;
  t.factor_names = {"a", "b"};
  double norm_y = 0.0;
  for (int i = 0; i < 20; ++i) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double y = 3.0 + u - 2.0 * v + 0.5 * u * v + 0.1 * (u - 0.5);
    t.append_row(i + 1, {2 * u - 1, 2 * v - 1}, y);
    norm_y += y * y;
  }
  FittedModel m = fit_ols(t, expand_formula("a + b", t.factor_names));
  double sum = 0.0;
  for (double r : m.residuals) sum += r;
  CHECK(std::fabs(sum) <= 1e-9 * std::sqrt(norm_y));
  CHECK(m.adj_r_squared <= m.r_squared);
}

TEST_CASE("rank-deficient designs are rejected with the offending column") {
  ExperimentTable t;
  t.factor_names = {"a", "b"};
  // b column identical to a: a and b are confounded.
  for (int i = 0; i < 6; ++i) {
    double v = (i % 2) ? 0.5 : -0.5;
    t.append_row(i + 1, {v, v}, static_cast<double>(i));
  }
  CHECK_THROWS_WITH_AS(fit_ols(t, expand_formula("a + b", t.factor_names)),
                       doctest::Contains("rank deficient"), Error);
}

TEST_CASE("under-determined systems are rejected") {
  ExperimentTable t;
  t.factor_names = {"a", "b"};
  t.append_row(1, {1.0, -1.0}, 2.0);
  t.append_row(2, {-1.0, 1.0}, 1.0);
  CHECK_THROWS_AS(fit_ols(t, all_terms(2)), Error);
}

TEST_CASE("significant_terms filters by p-value, keeping the intercept") {
  FittedModel m;
  m.factor_names = {"a", "b"};
  m.terms = {Term{}, Term{{0}}, Term{{1}}};
  m.coefficients = {1.0, 2.0, 3.0};
  m.p_values = {0.9, 0.5, 0.5};
  m.df_residual = 10;

  auto kept = significant_terms(m, 0.05);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].is_intercept());

  m.p_values = {0.9, 0.01, 0.06};
  kept = significant_terms(m, 0.05);
  REQUIRE(kept.size() == 2);
  CHECK(kept[1] == Term{{0}});

  m.df_residual = 0;
  CHECK_THROWS_AS(significant_terms(m, 0.05), Error);
}

TEST_CASE("predict flags extrapolation beyond the fitted span") {
  Design d = full_factorial(2, 0.5);
  auto t = table_from_design(d, {"a", "b"}, {1, 2, 3, 4});
  FittedModel m = fit_ols(t, all_terms(2));
  CHECK_FALSE(predict(m, {0.5, -0.5}).extrapolation);
  CHECK_FALSE(predict(m, {0.0, 0.0}).extrapolation);
  CHECK(predict(m, {0.6, 0.0}).extrapolation);
  CHECK_THROWS_AS(predict(m, {0.0}), Error);
}

TEST_CASE("model JSON round trip") {
  Design d = full_factorial(2, 1.0);
  auto t = table_from_design(d, {"a", "b"}, {1.0, 2.5, -3.0, 4.25});
  FittedModel m = fit_ols(t, expand_formula("a + b", t.factor_names));
  FittedModel back = model_from_json(model_to_json(m));
  CHECK(back.factor_names == m.factor_names);
  REQUIRE(back.terms.size() == m.terms.size());
  for (std::size_t i = 0; i < m.terms.size(); ++i) {
    CHECK(back.terms[i] == m.terms[i]);
    CHECK(back.coefficients[i] == m.coefficients[i]);
    CHECK(back.std_errors[i] == m.std_errors[i]);
    CHECK(back.p_values[i] == m.p_values[i]);
  }
  CHECK(back.r_squared == m.r_squared);
  CHECK(back.span == m.span);
  CHECK_THROWS_AS(model_from_json("{not json"), Error);
  CHECK_THROWS_AS(model_from_json("{\"factors\": []}"), Error);
}
