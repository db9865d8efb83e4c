#include "pollerr/poll.hpp"

#include <cmath>
#include <set>

#include "json.hpp"
#include "pollerr/errors.hpp"

namespace pollerr {

namespace {

constexpr double kWeightSumTolerance = 1e-9;

}  // namespace

PollTree build_spine_poll(int depth, int n_alts, double target_weight) {
  if (depth < 1)
    fail(errkind::invalid_argument, "spine poll needs depth >= 1");
  if (n_alts < 2)
    fail(errkind::invalid_argument, "spine poll needs at least 2 alternatives");
  if (!(target_weight > 0.0 && target_weight < 1.0))
    fail(errkind::invalid_argument, "target weight must lie in (0, 1)");

  const double sibling_weight = (1.0 - target_weight) / (n_alts - 1);
  std::shared_ptr<const Question> below;
  // Build bottom-up so each question can own its follow-up.
  for (int level = depth; level >= 1; --level) {
    auto q = std::make_shared<Question>();
    q->id = "q" + std::to_string(level);
    q->alternatives.reserve(n_alts);
    for (int a = 1; a <= n_alts; ++a) {
      Alternative alt;
      alt.id = "a" + std::to_string(a);
      alt.weight = a == 1 ? target_weight : sibling_weight;
      if (a == 1 && level < depth) alt.follow_up = below;
      q->alternatives.push_back(std::move(alt));
    }
    below = q;
  }

  PollTree poll;
  poll.root = below;
  for (int level = 1; level <= depth; ++level)
    poll.target_path.emplace_back("q" + std::to_string(level), "a1");
  return poll;
}

namespace {

void check_question(const Question& q, std::set<std::string>& question_ids,
                    std::vector<std::string>& violations) {
  if (!question_ids.insert(q.id).second)
    violations.push_back("duplicate question id '" + q.id + "'");
  if (q.alternatives.size() < 2)
    violations.push_back("question '" + q.id +
                         "' has fewer than 2 alternatives");
  double sum = 0.0;
  std::set<std::string> alt_ids;
  for (const auto& alt : q.alternatives) {
    if (!alt_ids.insert(alt.id).second)
      violations.push_back("question '" + q.id + "' has duplicate alternative id '" +
                           alt.id + "'");
    if (!(alt.weight > 0.0 && alt.weight < 1.0))
      violations.push_back("alternative '" + alt.id + "' of question '" + q.id +
                           "' has weight outside (0, 1)");
    sum += alt.weight;
    if (alt.follow_up) check_question(*alt.follow_up, question_ids, violations);
  }
  if (std::fabs(sum - 1.0) > kWeightSumTolerance)
    violations.push_back("weights of question '" + q.id + "' sum to " +
                         std::to_string(sum) + ", not 1");
}

}  // namespace

PollValidation validate_poll(const PollTree& poll) {
  PollValidation report;
  if (!poll.root) {
    report.violations.push_back("poll has no root question");
    return report;
  }
  std::set<std::string> question_ids;
  check_question(*poll.root, question_ids, report.violations);

  if (poll.target_path.empty()) {
    report.violations.push_back("target path is empty");
    return report;
  }
  const Question* q = poll.root.get();
  for (std::size_t i = 0; i < poll.target_path.size(); ++i) {
    const auto& [qid, aid] = poll.target_path[i];
    if (!q || q->id != qid) {
      report.violations.push_back("target path step " + std::to_string(i + 1) +
                                  " names question '" + qid +
                                  "' which is not the question reached");
      return report;
    }
    const Alternative* chosen = nullptr;
    for (const auto& alt : q->alternatives)
      if (alt.id == aid) chosen = &alt;
    if (!chosen) {
      report.violations.push_back("target path step " + std::to_string(i + 1) +
                                  ": question '" + qid +
                                  "' has no alternative '" + aid + "'");
      return report;
    }
    bool last = i + 1 == poll.target_path.size();
    if (last && chosen->follow_up)
      report.violations.push_back("target '" + aid + "' is not a leaf");
    if (!last && !chosen->follow_up) {
      report.violations.push_back("target path continues past leaf '" + aid +
                                  "'");
      return report;
    }
    q = chosen->follow_up.get();
  }
  return report;
}

namespace {

nlohmann::json question_to_json(const Question& q) {
  nlohmann::json j;
  j["id"] = q.id;
  nlohmann::json alts = nlohmann::json::array();
  for (const auto& alt : q.alternatives) {
    nlohmann::json a;
    a["id"] = alt.id;
    a["weight"] = alt.weight;
    a["follow_up"] =
        alt.follow_up ? question_to_json(*alt.follow_up) : nlohmann::json();
    alts.push_back(std::move(a));
  }
  j["alternatives"] = std::move(alts);
  return j;
}

std::shared_ptr<const Question> question_from_json(const nlohmann::json& j,
                                                   const std::string& where) {
  if (!j.is_object())
    fail(errkind::schema, where + ": expected a question object");
  auto q = std::make_shared<Question>();
  if (!j.contains("id") || !j["id"].is_string())
    fail(errkind::schema, where + ": missing or non-string field 'id'");
  q->id = j["id"].get<std::string>();
  if (!j.contains("alternatives") || !j["alternatives"].is_array())
    fail(errkind::schema,
         where + ": missing or non-array field 'alternatives'");
  for (std::size_t i = 0; i < j["alternatives"].size(); ++i) {
    const auto& a = j["alternatives"][i];
    std::string alt_where =
        where + ".alternatives[" + std::to_string(i) + "]";
    if (!a.is_object())
      fail(errkind::schema, alt_where + ": expected an alternative object");
    Alternative alt;
    if (!a.contains("id") || !a["id"].is_string())
      fail(errkind::schema, alt_where + ": missing or non-string field 'id'");
    alt.id = a["id"].get<std::string>();
    if (!a.contains("weight") || !a["weight"].is_number())
      fail(errkind::schema,
           alt_where + ": missing or non-numeric field 'weight'");
    alt.weight = a["weight"].get<double>();
    if (a.contains("follow_up") && !a["follow_up"].is_null())
      alt.follow_up = question_from_json(a["follow_up"], alt_where + ".follow_up");
    q->alternatives.push_back(std::move(alt));
  }
  return q;
}

}  // namespace

PollTree load_poll(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(errkind::parse, e.what());
  }
  PollTree poll;
  poll.root = question_from_json(j, "$");
  if (!j.contains("target_path") || !j["target_path"].is_array())
    fail(errkind::schema, "$: missing or non-array field 'target_path'");
  for (const auto& step : j["target_path"]) {
    if (!step.is_array() || step.size() != 2 || !step[0].is_string() ||
        !step[1].is_string())
      fail(errkind::schema,
           "$.target_path: each step must be a [question id, alternative id] "
           "pair");
    poll.target_path.emplace_back(step[0].get<std::string>(),
                                  step[1].get<std::string>());
  }
  auto report = validate_poll(poll);
  if (!report.ok())
    fail(errkind::validation, "invalid poll: " + report.violations.front());
  return poll;
}

std::string save_poll(const PollTree& poll) {
  nlohmann::json j = question_to_json(*poll.root);
  nlohmann::json path = nlohmann::json::array();
  for (const auto& [qid, aid] : poll.target_path)
    path.push_back(nlohmann::json::array({qid, aid}));
  j["target_path"] = std::move(path);
  return j.dump(2) + "\n";
}

namespace {

std::size_t count_leaves(const Question& q) {
  std::size_t n = 0;
  for (const auto& alt : q.alternatives)
    n += alt.follow_up ? count_leaves(*alt.follow_up) : 1;
  return n;
}

}  // namespace

std::size_t count_leaf_alternatives(const PollTree& poll) {
  return poll.root ? count_leaves(*poll.root) : 0;
}

}  // namespace pollerr
