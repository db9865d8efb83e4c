#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pollerr/poll.hpp"

namespace pollerr {

// The six experiment factors in their own units.
struct ScenarioParams {
  double pr_truth = 0.5;
  int depth = 3;
  int n_alts = 6;
  double target_weight = 0.5;
  long population = 50500;
  double answers_fraction = 0.5;

  void validate() const;
};

// Deterministic truth assignment. Every respondent follows the target chain
// to the deepest question; `final_alternative[i]` is the alternative index
// they truly hold there (the target alternative or one of its siblings).
struct Population {
  std::size_t target_alt_index = 0;
  std::vector<std::uint32_t> final_alternative;
  long true_target_count = 0;

  long size() const { return static_cast<long>(final_alternative.size()); }
  double true_fraction() const {
    return static_cast<double>(true_target_count) / size();
  }

  // Full root-to-leaf true path of respondent i.
  std::vector<std::pair<std::string, std::string>> path_of(
      const PollTree& poll, std::size_t i) const;
};

struct QuestionTally {
  long answered = 0;
  std::vector<long> counts;  // aligned with the question's alternatives
};

// The collector's view: per-question reported counts.
struct ResponseTally {
  std::map<std::string, QuestionTally> by_question;
};

struct SimulationResult {
  std::vector<double> estimates;  // one per repetition
  double true_fraction = 0.0;
  double mape = 0.0;
};

using Rng = std::mt19937_64;

// Uniform double in [0, 1) with a fixed, implementation-independent mapping.
inline double uniform_double(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Sub-seed derivation (splitmix64 mix of seed and index); keeps repetitions
// and campaign rows independent and scheduling-order free.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

Population assign_truth(const PollTree& poll, long population,
                        double answers_fraction);

// One randomized response: with probability pr_truth report the true
// alternative, otherwise draw from the question's weights (so the true
// alternative can be re-drawn). Respondents without a true alternative at
// this question draw purely from the weights.
std::size_t randomize_one(const Question& question,
                          std::optional<std::size_t> true_alt, double pr_truth,
                          Rng& rng);

ResponseTally collect_responses(const PollTree& poll,
                                const Population& population, double pr_truth,
                                Rng& rng);

// Product of per-question randomized-response inversions along the target
// chain. No clamping: estimates below 0 or above 1 propagate.
double estimate_target(const PollTree& poll, const ResponseTally& tally,
                       double pr_truth);

// MAPE between the true fraction and the estimates, in percent.
double mape_of(const std::vector<double>& estimates, double true_fraction);

// Builds the spine poll and population once, then runs n_reps collect +
// estimate rounds with per-repetition derived seeds.
SimulationResult run_setting(const ScenarioParams& scenario, int n_reps,
                             std::uint64_t seed);

}  // namespace pollerr
