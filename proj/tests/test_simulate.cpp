#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "pollerr/errors.hpp"
#include "pollerr/simulate.hpp"
#include "testutil.hpp"

using namespace pollerr;

namespace {

ScenarioParams scenario(double p, int depth, int alts, double w, long pop,
                        double answers) {
  ScenarioParams s;
  s.pr_truth = p;
  s.depth = depth;
  s.n_alts = alts;
  s.target_weight = w;
  s.population = pop;
  s.answers_fraction = answers;
  return s;
}

// Exact expectation of estimate_target over every depth-1 report outcome.
// Enumerates the m^pop joint report vectors with their probabilities.
double enumerate_expected_estimate(const PollTree& poll, const Population& pop,
                                   double pr_truth) {
  const Question& q = *poll.root;
  const std::size_t m = q.alternatives.size();
  const std::size_t n = pop.final_alternative.size();

  // Per-respondent report pmf.
  std::vector<std::vector<double>> pmf(n, std::vector<double>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      pmf[i][j] = (1.0 - pr_truth) * q.alternatives[j].weight +
                  (pop.final_alternative[i] == j ? pr_truth : 0.0);

  double expected = 0.0;
  std::vector<std::size_t> report(n, 0);
  while (true) {
    double prob = 1.0;
    std::vector<long> counts(m, 0);
    for (std::size_t i = 0; i < n; ++i) {
      prob *= pmf[i][report[i]];
      ++counts[report[i]];
    }
    ResponseTally tally;
    tally.by_question[q.id] =
        QuestionTally{static_cast<long>(n), counts};
    expected += prob * estimate_target(poll, tally, pr_truth);

    std::size_t pos = 0;
    while (pos < n && ++report[pos] == m) report[pos++] = 0;
    if (pos == n) break;
  }
  return expected;
}

}  // namespace

TEST_CASE("assign_truth splits the remainder evenly, leftovers first") {
  PollTree p2 = build_spine_poll(1, 2, 0.5);
  Population pop = assign_truth(p2, 10, 0.3);
  CHECK(pop.true_target_count == 3);
  CHECK(std::count(pop.final_alternative.begin(), pop.final_alternative.end(),
                   0u) == 3);
  CHECK(std::count(pop.final_alternative.begin(), pop.final_alternative.end(),
                   1u) == 7);

  PollTree p3 = build_spine_poll(1, 3, 0.5);
  pop = assign_truth(p3, 10, 0.5);
  CHECK(pop.true_target_count == 5);
  CHECK(std::count(pop.final_alternative.begin(), pop.final_alternative.end(),
                   1u) == 3);
  CHECK(std::count(pop.final_alternative.begin(), pop.final_alternative.end(),
                   2u) == 2);

  PollTree spine = build_spine_poll(3, 6, 0.5);
  pop = assign_truth(spine, 50500, 0.5);
  CHECK(pop.true_target_count == 25250);
  CHECK(pop.true_fraction() == doctest::Approx(0.5));
}

TEST_CASE("assign_truth rejects degenerate rounding") {
  PollTree p = build_spine_poll(1, 2, 0.5);
  CHECK_THROWS_AS(assign_truth(p, 10, 0.04), Error);   // rounds to 0
  CHECK_THROWS_AS(assign_truth(p, 10, 0.96), Error);   // rounds to 10
  CHECK_NOTHROW(assign_truth(p, 10, 0.05));            // rounds to 1
}

TEST_CASE("respondent paths share the chain and differ at the leaf") {
  PollTree p = build_spine_poll(2, 3, 0.5);
  Population pop = assign_truth(p, 6, 0.5);
  auto target_path = pop.path_of(p, 0);
  CHECK(target_path == p.target_path);
  auto sibling_path = pop.path_of(p, 5);
  CHECK(sibling_path.size() == 2);
  CHECK(sibling_path[0] == p.target_path[0]);
  CHECK(sibling_path[1].second != p.target_path[1].second);
}

TEST_CASE("randomize_one is exact at the probability extremes") {
  PollTree p = build_spine_poll(1, 2, 0.9);
  Rng rng(99);
  for (int i = 0; i < 200; ++i)
    CHECK(randomize_one(*p.root, 0, 1.0, rng) == 0);
  for (int i = 0; i < 200; ++i)
    CHECK(randomize_one(*p.root, 1, 1.0, rng) == 1);
}

TEST_CASE("randomize_one draws the mixture distribution") {
  // pr_truth=0.5, weights {0.5,0.5}, true=a1: P(report a1) = 0.75.
  PollTree p = build_spine_poll(1, 2, 0.5);
  Rng rng(4242);
  const int n = 200000;
  int hits = 0;
  for (int i = 0; i < n; ++i)
    if (randomize_one(*p.root, 0, 0.5, rng) == 0) ++hits;
  double freq = static_cast<double>(hits) / n;
  CHECK(std::fabs(freq - 0.75) < 0.005);  // ~5 sigma

  // pr_truth=0: a pure weight draw regardless of the true alternative.
  PollTree p9 = build_spine_poll(1, 2, 0.9);
  hits = 0;
  for (int i = 0; i < n; ++i)
    if (randomize_one(*p9.root, 0, 0.0, rng) == 0) ++hits;
  CHECK(std::fabs(static_cast<double>(hits) / n - 0.9) < 0.004);
}

TEST_CASE("collect_responses is exact under pr_truth = 1") {
  PollTree p = build_spine_poll(2, 3, 0.4);
  Population pop = assign_truth(p, 30, 0.4);
  Rng rng(1);
  ResponseTally tally = collect_responses(p, pop, 1.0, rng);
  CHECK(tally.by_question.at("q1").answered == 30);
  // Everyone truthfully reports the chain alternative at q1.
  CHECK(tally.by_question.at("q1").counts[0] == 30);
  CHECK(tally.by_question.at("q2").answered == 30);
  CHECK(tally.by_question.at("q2").counts[0] == 12);  // the 12 target holders
}

TEST_CASE("root answered count always equals the population") {
  PollTree p = build_spine_poll(1, 4, 0.3);
  Population pop = assign_truth(p, 57, 0.4);
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    Rng rng(seed);
    ResponseTally tally = collect_responses(p, pop, 0.3, rng);
    long total = 0;
    const auto& qt = tally.by_question.at("q1");
    for (long c : qt.counts) total += c;
    CHECK(qt.answered == 57);
    CHECK(total == 57);
  }
}

TEST_CASE("expected target reports, brute force over all 2^4 outcomes") {
  // depth 1, 2 alts, w=0.5, p=0.5, truth = 2 target + 2 sibling:
  // P(report target) is 0.75 for holders and 0.25 for others, so the
  // expected target count is 2. Enumerate all 16 report vectors.
  PollTree p = build_spine_poll(1, 2, 0.5);
  Population pop = assign_truth(p, 4, 0.5);
  const double probs[2] = {0.75, 0.25};
  double expected = 0.0;
  for (int outcome = 0; outcome < 16; ++outcome) {
    double prob = 1.0;
    int target_reports = 0;
    for (int i = 0; i < 4; ++i) {
      bool reports_target = outcome & (1 << i);
      double p_target = probs[pop.final_alternative[i] == 0 ? 0 : 1];
      prob *= reports_target ? p_target : 1.0 - p_target;
      target_reports += reports_target;
    }
    expected += prob * target_reports;
  }
  CHECK_ABS(expected, 2.0, 1e-12);

  // The simulator agrees in Monte Carlo.
  Rng rng(7);
  long total = 0;
  const int reps = 40000;
  for (int r = 0; r < reps; ++r) {
    ResponseTally tally = collect_responses(p, pop, 0.5, rng);
    total += tally.by_question.at("q1").counts[0];
  }
  CHECK(std::fabs(static_cast<double>(total) / reps - 2.0) < 0.02);
}

TEST_CASE("estimate_target inverts the mechanism") {
  PollTree p = build_spine_poll(1, 2, 0.5);
  ResponseTally tally;
  tally.by_question["q1"] = QuestionTally{4, {3, 1}};  // y = 0.75
  CHECK(estimate_target(p, tally, 0.5) == doctest::Approx(1.0));
  CHECK(estimate_target(p, tally, 1.0) == doctest::Approx(0.75));

  PollTree p9 = build_spine_poll(1, 2, 0.9);
  ResponseTally t9;
  t9.by_question["q1"] = QuestionTally{10, {8, 2}};  // y = 0.8
  CHECK_ABS(estimate_target(p9, t9, 0.1), -0.1, 1e-12);  // negative allowed

  CHECK_THROWS_AS(estimate_target(p, tally, 0.0), Error);
  ResponseTally empty;
  CHECK_THROWS_AS(estimate_target(p, empty, 0.5), Error);
}

TEST_CASE("estimator is exactly unbiased at depth 1 (small enumerations)") {
  for (double p : {0.1, 0.5, 0.9}) {
    for (double w : {0.1, 0.5, 0.9}) {
      PollTree poll = build_spine_poll(1, 2, w);
      Population pop = assign_truth(poll, 4, 0.5);
      double expected = enumerate_expected_estimate(poll, pop, p);
      CHECK(std::fabs(expected - pop.true_fraction()) <= 1e-12);
    }
  }
  // Three alternatives, uneven split.
  PollTree poll = build_spine_poll(1, 3, 0.4);
  Population pop = assign_truth(poll, 5, 0.4);
  double expected = enumerate_expected_estimate(poll, pop, 0.5);
  CHECK(std::fabs(expected - pop.true_fraction()) <= 1e-12);
}

TEST_CASE("mape formula") {
  CHECK(mape_of({0.25, 0.75}, 0.5) == doctest::Approx(50.0));
  CHECK(mape_of({0.5}, 0.5) == 0.0);
  CHECK(mape_of({-0.1}, 0.1) == doctest::Approx(200.0));
  CHECK_THROWS_AS(mape_of({}, 0.5), Error);
  CHECK_THROWS_AS(mape_of({0.1}, 0.0), Error);
}

TEST_CASE("run_setting is exact when everyone tells the truth") {
  SimulationResult r = run_setting(scenario(1.0, 2, 3, 0.4, 100, 0.3), 5, 9);
  CHECK(r.mape == 0.0);
  for (double e : r.estimates) CHECK(e == r.true_fraction);
}

TEST_CASE("run_setting is bit-deterministic in (scenario, reps, seed)") {
  auto s = scenario(0.5, 2, 4, 0.3, 500, 0.4);
  SimulationResult a = run_setting(s, 10, 1234);
  SimulationResult b = run_setting(s, 10, 1234);
  CHECK(a.estimates == b.estimates);
  CHECK(a.mape == b.mape);
  SimulationResult c = run_setting(s, 10, 1235);
  CHECK(a.estimates != c.estimates);
}

TEST_CASE("repetition seeds are decoupled") {
  // The first repetitions of two runs with the same seed coincide.
  auto s = scenario(0.5, 1, 2, 0.5, 100, 0.5);
  SimulationResult one = run_setting(s, 1, 77);
  SimulationResult many = run_setting(s, 8, 77);
  CHECK(one.estimates[0] == many.estimates[0]);
}

TEST_CASE("noise shrinks with population and truth probability") {
  // Small smoke version of the trend checks.
  double high_p = 0.0, low_p = 0.0;
  double big_pop = 0.0, small_pop = 0.0;
  const int seeds = 12;
  for (int i = 0; i < seeds; ++i) {
    high_p += run_setting(scenario(0.9, 1, 2, 0.5, 2000, 0.5), 10, 100 + i).mape;
    low_p += run_setting(scenario(0.1, 1, 2, 0.5, 2000, 0.5), 10, 200 + i).mape;
    big_pop +=
        run_setting(scenario(0.5, 1, 2, 0.5, 20000, 0.5), 10, 300 + i).mape;
    small_pop +=
        run_setting(scenario(0.5, 1, 2, 0.5, 200, 0.5), 10, 400 + i).mape;
  }
  CHECK(high_p < low_p);
  CHECK(big_pop < small_pop);
}

TEST_CASE("run_setting propagates scenario errors") {
  CHECK_THROWS_AS(run_setting(scenario(0.5, 1, 2, 0.5, 10, 0.96), 3, 1),
                  Error);  // degenerate population
  CHECK_THROWS_AS(run_setting(scenario(0.0, 1, 2, 0.5, 10, 0.5), 3, 1),
                  Error);  // non-invertible
  CHECK_THROWS_AS(run_setting(scenario(0.5, 0, 2, 0.5, 10, 0.5), 3, 1),
                  Error);  // bad depth
}
