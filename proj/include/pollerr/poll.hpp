#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace pollerr {

struct Question;

// Answer alternative with its randomization weight; may lead to a follow-up
// question. Weights are the known distribution respondents draw from when
// not answering truthfully.
struct Alternative {
  std::string id;
  double weight = 0.0;
  std::shared_ptr<const Question> follow_up;  // null for leaves
};

struct Question {
  std::string id;
  std::vector<Alternative> alternatives;
};

// A poll tree plus the root-to-leaf chain identifying the target
// alternative whose frequency the collector estimates.
struct PollTree {
  std::shared_ptr<const Question> root;
  std::vector<std::pair<std::string, std::string>> target_path;
};

// Chain of `depth` questions; at every question the chain alternative has
// weight target_weight and each of the n_alts-1 siblings gets an equal share
// of the remainder. Only the chain alternative of a non-final question
// carries a follow-up.
PollTree build_spine_poll(int depth, int n_alts, double target_weight);

struct PollValidation {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Structural checks: weight sums, id uniqueness, alternative counts, and a
// target path that names a real root-to-leaf chain. Violations are data,
// not failures.
PollValidation validate_poll(const PollTree& poll);

// JSON persistence. The document is the root question object with a sibling
// "target_path" field; load re-validates and rejects invalid polls.
PollTree load_poll(const std::string& json_text);
std::string save_poll(const PollTree& poll);

// Number of leaf alternatives reachable from the root.
std::size_t count_leaf_alternatives(const PollTree& poll);

}  // namespace pollerr
