#include "pollerr/simulate.hpp"

#include <cmath>
#include <unordered_map>

#include "pollerr/errors.hpp"

namespace pollerr {

void ScenarioParams::validate() const {
  if (!(pr_truth >= 0.0 && pr_truth <= 1.0))
    fail(errkind::invalid_argument, "pr_truth must lie in [0, 1]");
  if (depth < 1) fail(errkind::invalid_argument, "depth must be >= 1");
  if (n_alts < 2) fail(errkind::invalid_argument, "n_alts must be >= 2");
  if (!(target_weight > 0.0 && target_weight < 1.0))
    fail(errkind::invalid_argument, "target_weight must lie in (0, 1)");
  if (population < 1)
    fail(errkind::invalid_argument, "population must be >= 1");
  if (!(answers_fraction > 0.0 && answers_fraction < 1.0))
    fail(errkind::invalid_argument, "answers_fraction must lie in (0, 1)");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the combined value.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

// Flat, index-based view of a poll for the simulation inner loop.
struct CompiledPoll {
  struct Node {
    std::vector<double> cumulative_weight;  // prefix sums, last == 1
    std::vector<double> weight;
    std::vector<int> follow_up;  // -1 = leaf
    int chain_pos = -1;          // position on target path, -1 off-chain
    int chain_alt = -1;          // alternative index continuing the chain
  };
  std::vector<Node> nodes;
  std::vector<const Question*> questions;  // same indexing as nodes
  std::vector<int> chain_nodes;            // node index per target-path step
  std::vector<int> chain_alts;             // alternative index per step
  int root = 0;
};

int compile_question(const Question& q, CompiledPoll& cp) {
  int index = static_cast<int>(cp.nodes.size());
  cp.nodes.emplace_back();
  cp.questions.push_back(&q);
  std::vector<double> weights;
  std::vector<int> follow;
  double acc = 0.0;
  std::vector<double> cumulative;
  for (const auto& alt : q.alternatives) {
    weights.push_back(alt.weight);
    acc += alt.weight;
    cumulative.push_back(acc);
    follow.push_back(alt.follow_up ? compile_question(*alt.follow_up, cp) : -1);
  }
  if (!cumulative.empty()) cumulative.back() = 1.0;
  auto& node = cp.nodes[index];
  node.weight = std::move(weights);
  node.cumulative_weight = std::move(cumulative);
  node.follow_up = std::move(follow);
  return index;
}

CompiledPoll compile_poll(const PollTree& poll) {
  if (!poll.root) fail(errkind::invalid_argument, "poll has no root");
  CompiledPoll cp;
  cp.root = compile_question(*poll.root, cp);
  int node = cp.root;
  for (std::size_t step = 0; step < poll.target_path.size(); ++step) {
    const auto& [qid, aid] = poll.target_path[step];
    if (node < 0 || cp.questions[node]->id != qid)
      fail(errkind::validation, "target path does not match the poll tree");
    const auto& alts = cp.questions[node]->alternatives;
    int alt_index = -1;
    for (std::size_t a = 0; a < alts.size(); ++a)
      if (alts[a].id == aid) alt_index = static_cast<int>(a);
    if (alt_index < 0)
      fail(errkind::validation, "target path names unknown alternative");
    cp.nodes[node].chain_pos = static_cast<int>(step);
    cp.nodes[node].chain_alt = alt_index;
    cp.chain_nodes.push_back(node);
    cp.chain_alts.push_back(alt_index);
    node = cp.nodes[node].follow_up[alt_index];
  }
  return cp;
}

// One categorical draw from p*[j == true_alt] + (1-p)*weights; a plain
// weight draw when true_alt < 0.
inline std::size_t draw_report(const CompiledPoll::Node& node, int true_alt,
                               double pr_truth, Rng& rng) {
  double u = uniform_double(rng);
  if (true_alt >= 0) {
    // Walk the mixture CDF in alternative order.
    double acc = 0.0;
    const std::size_t m = node.weight.size();
    for (std::size_t j = 0; j + 1 < m; ++j) {
      acc += (1.0 - pr_truth) * node.weight[j];
      if (static_cast<int>(j) == true_alt) acc += pr_truth;
      if (u < acc) return j;
    }
    return m - 1;
  }
  const auto& cum = node.cumulative_weight;
  std::size_t j = 0;
  while (j + 1 < cum.size() && u >= cum[j]) ++j;
  return j;
}

struct FlatTally {
  std::vector<long> answered;
  std::vector<std::vector<long>> counts;

  explicit FlatTally(const CompiledPoll& cp) {
    answered.assign(cp.nodes.size(), 0);
    counts.resize(cp.nodes.size());
    for (std::size_t i = 0; i < cp.nodes.size(); ++i)
      counts[i].assign(cp.nodes[i].weight.size(), 0);
  }
};

void simulate_round(const CompiledPoll& cp, const Population& population,
                    double pr_truth, Rng& rng, FlatTally& tally) {
  const int last_step = static_cast<int>(cp.chain_nodes.size()) - 1;
  for (std::uint32_t final_alt : population.final_alternative) {
    int node = cp.root;
    while (node >= 0) {
      const auto& n = cp.nodes[node];
      int true_alt = -1;
      if (n.chain_pos >= 0)
        true_alt = n.chain_pos == last_step ? static_cast<int>(final_alt)
                                            : n.chain_alt;
      std::size_t reported = draw_report(n, true_alt, pr_truth, rng);
      ++tally.answered[node];
      ++tally.counts[node][reported];
      node = n.follow_up[reported];
    }
  }
}

double estimate_from_flat(const CompiledPoll& cp, const FlatTally& tally,
                          double pr_truth) {
  if (pr_truth <= 0.0)
    fail(errkind::non_invertible,
         "pr_truth = 0 admits no randomized-response inversion");
  double estimate = 1.0;
  for (std::size_t step = 0; step < cp.chain_nodes.size(); ++step) {
    int node = cp.chain_nodes[step];
    int alt = cp.chain_alts[step];
    long answered = tally.answered[node];
    if (answered < 1)
      fail(errkind::insufficient_data,
           "no responses reached chain question '" +
               cp.questions[node]->id + "'");
    double reported_fraction =
        static_cast<double>(tally.counts[node][alt]) / answered;
    double w = cp.nodes[node].weight[alt];
    estimate *= (reported_fraction - (1.0 - pr_truth) * w) / pr_truth;
  }
  return estimate;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> Population::path_of(
    const PollTree& poll, std::size_t i) const {
  std::vector<std::pair<std::string, std::string>> path(poll.target_path);
  // Only the deepest step differs from the target chain.
  const Question* q = poll.root.get();
  for (std::size_t step = 0; step + 1 < poll.target_path.size(); ++step) {
    for (const auto& alt : q->alternatives)
      if (alt.id == poll.target_path[step].second) {
        q = alt.follow_up.get();
        break;
      }
  }
  path.back().second = q->alternatives.at(final_alternative.at(i)).id;
  return path;
}

Population assign_truth(const PollTree& poll, long population,
                        double answers_fraction) {
  if (population < 1)
    fail(errkind::invalid_argument, "population must be >= 1");
  if (!(answers_fraction > 0.0 && answers_fraction < 1.0))
    fail(errkind::invalid_argument, "answers_fraction must lie in (0, 1)");
  auto report = validate_poll(poll);
  if (!report.ok())
    fail(errkind::validation, "invalid poll: " + report.violations.front());

  // Walk to the deepest chain question.
  const Question* q = poll.root.get();
  for (std::size_t step = 0; step + 1 < poll.target_path.size(); ++step)
    for (const auto& alt : q->alternatives)
      if (alt.id == poll.target_path[step].second) {
        q = alt.follow_up.get();
        break;
      }
  std::size_t target_index = 0;
  for (std::size_t a = 0; a < q->alternatives.size(); ++a)
    if (q->alternatives[a].id == poll.target_path.back().second)
      target_index = a;

  // Round half away from zero.
  long t = std::llround(population * answers_fraction);
  if (t <= 0 || t >= population)
    fail(errkind::degenerate_population,
         "answers_fraction " + std::to_string(answers_fraction) + " of " +
             std::to_string(population) +
             " respondents rounds to an all-or-nothing target count");

  Population pop;
  pop.target_alt_index = target_index;
  pop.true_target_count = t;
  pop.final_alternative.reserve(population);
  pop.final_alternative.assign(t, static_cast<std::uint32_t>(target_index));

  // Split the remainder as evenly as possible over the siblings, leftovers
  // to the earliest alternatives.
  const long rest = population - t;
  const long siblings = static_cast<long>(q->alternatives.size()) - 1;
  long share = rest / siblings;
  long leftover = rest % siblings;
  long sibling_rank = 0;
  for (std::size_t a = 0; a < q->alternatives.size(); ++a) {
    if (a == target_index) continue;
    long n = share + (sibling_rank < leftover ? 1 : 0);
    pop.final_alternative.insert(pop.final_alternative.end(), n,
                                 static_cast<std::uint32_t>(a));
    ++sibling_rank;
  }
  return pop;
}

std::size_t randomize_one(const Question& question,
                          std::optional<std::size_t> true_alt, double pr_truth,
                          Rng& rng) {
  if (true_alt && *true_alt >= question.alternatives.size())
    fail(errkind::invalid_argument,
         "true alternative index outside the question");
  CompiledPoll::Node node;
  double acc = 0.0;
  for (const auto& alt : question.alternatives) {
    node.weight.push_back(alt.weight);
    acc += alt.weight;
    node.cumulative_weight.push_back(acc);
  }
  node.cumulative_weight.back() = 1.0;
  return draw_report(node, true_alt ? static_cast<int>(*true_alt) : -1,
                     pr_truth, rng);
}

ResponseTally collect_responses(const PollTree& poll,
                                const Population& population, double pr_truth,
                                Rng& rng) {
  CompiledPoll cp = compile_poll(poll);
  FlatTally flat(cp);
  simulate_round(cp, population, pr_truth, rng, flat);
  ResponseTally tally;
  for (std::size_t i = 0; i < cp.nodes.size(); ++i) {
    if (flat.answered[i] == 0) continue;
    QuestionTally qt;
    qt.answered = flat.answered[i];
    qt.counts = flat.counts[i];
    tally.by_question[cp.questions[i]->id] = std::move(qt);
  }
  return tally;
}

double estimate_target(const PollTree& poll, const ResponseTally& tally,
                       double pr_truth) {
  if (pr_truth <= 0.0)
    fail(errkind::non_invertible,
         "pr_truth = 0 admits no randomized-response inversion");
  double estimate = 1.0;
  const Question* q = poll.root.get();
  for (std::size_t step = 0; step < poll.target_path.size(); ++step) {
    const auto& [qid, aid] = poll.target_path[step];
    auto it = tally.by_question.find(qid);
    if (it == tally.by_question.end() || it->second.answered < 1)
      fail(errkind::insufficient_data,
           "no responses reached chain question '" + qid + "'");
    const Alternative* chosen = nullptr;
    std::size_t alt_index = 0;
    for (std::size_t a = 0; a < q->alternatives.size(); ++a)
      if (q->alternatives[a].id == aid) {
        chosen = &q->alternatives[a];
        alt_index = a;
      }
    if (!chosen)
      fail(errkind::validation, "target path names unknown alternative");
    double reported_fraction =
        static_cast<double>(it->second.counts.at(alt_index)) /
        it->second.answered;
    estimate *=
        (reported_fraction - (1.0 - pr_truth) * chosen->weight) / pr_truth;
    q = chosen->follow_up.get();
  }
  return estimate;
}

double mape_of(const std::vector<double>& estimates, double true_fraction) {
  if (estimates.empty())
    fail(errkind::invalid_argument, "MAPE needs at least one estimate");
  if (!(true_fraction > 0.0))
    fail(errkind::degenerate_population,
         "MAPE is undefined for a zero true fraction");
  double sum = 0.0;
  for (double e : estimates)
    sum += std::fabs(true_fraction - e) / true_fraction;
  return 100.0 * sum / estimates.size();
}

SimulationResult run_setting(const ScenarioParams& scenario, int n_reps,
                             std::uint64_t seed) {
  scenario.validate();
  if (n_reps < 1) fail(errkind::invalid_argument, "n_reps must be >= 1");

  PollTree poll = build_spine_poll(scenario.depth, scenario.n_alts,
                                   scenario.target_weight);
  Population population =
      assign_truth(poll, scenario.population, scenario.answers_fraction);
  CompiledPoll cp = compile_poll(poll);

  SimulationResult result;
  result.true_fraction = population.true_fraction();
  result.estimates.reserve(n_reps);
  for (int rep = 0; rep < n_reps; ++rep) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(rep)));
    FlatTally flat(cp);
    simulate_round(cp, population, scenario.pr_truth, rng, flat);
    result.estimates.push_back(
        estimate_from_flat(cp, flat, scenario.pr_truth));
  }
  result.mape = mape_of(result.estimates, result.true_fraction);
  return result;
}

}  // namespace pollerr
