#include <cmath>
#include <functional>

#include "doctest.h"
#include "pollerr/errors.hpp"
#include "pollerr/poll.hpp"

using namespace pollerr;

TEST_CASE("spine poll weights and target") {
  PollTree p = build_spine_poll(1, 2, 0.9);
  REQUIRE(p.root);
  REQUIRE(p.root->alternatives.size() == 2);
  CHECK(p.root->alternatives[0].weight == doctest::Approx(0.9));
  CHECK(p.root->alternatives[1].weight == doctest::Approx(0.1));
  REQUIRE(p.target_path.size() == 1);
  CHECK(p.target_path[0].second == p.root->alternatives[0].id);
  CHECK(validate_poll(p).ok());
}

TEST_CASE("two-level symmetric spine") {
  PollTree p = build_spine_poll(2, 2, 0.5);
  CHECK(p.root->alternatives[0].weight == doctest::Approx(0.5));
  REQUIRE(p.root->alternatives[0].follow_up);
  CHECK_FALSE(p.root->alternatives[1].follow_up);
  const Question& q2 = *p.root->alternatives[0].follow_up;
  CHECK(q2.alternatives.size() == 2);
  CHECK(q2.alternatives[0].weight == doctest::Approx(0.5));
  CHECK(p.target_path.size() == 2);
}

TEST_CASE("spine leaf count is depth*(alts-1)+1, by exhaustive walk") {
  for (int depth : {1, 2, 3, 5}) {
    for (int alts : {2, 3, 6, 10}) {
      PollTree p = build_spine_poll(depth, alts, 0.4);
      CHECK(count_leaf_alternatives(p) ==
            static_cast<std::size_t>(depth * (alts - 1) + 1));
      CHECK(p.target_path.size() == static_cast<std::size_t>(depth));
      CHECK(validate_poll(p).ok());
    }
  }
}

TEST_CASE("spine weights sum to one at every question") {
  PollTree p = build_spine_poll(4, 7, 0.37);
  std::function<void(const Question&)> walk = [&](const Question& q) {
    double sum = 0.0;
    for (const auto& a : q.alternatives) {
      sum += a.weight;
      if (a.follow_up) walk(*a.follow_up);
    }
    CHECK(std::fabs(sum - 1.0) <= 1e-9);
  };
  walk(*p.root);
}

TEST_CASE("spine construction rejects bad arguments") {
  CHECK_THROWS_AS(build_spine_poll(0, 2, 0.5), Error);
  CHECK_THROWS_AS(build_spine_poll(1, 1, 0.5), Error);
  CHECK_THROWS_AS(build_spine_poll(1, 2, 0.0), Error);
  CHECK_THROWS_AS(build_spine_poll(1, 2, 1.0), Error);
}

TEST_CASE("validate_poll reports weight-sum violations") {
  auto q = std::make_shared<Question>();
  q->id = "q1";
  q->alternatives = {Alternative{"a1", 0.6, nullptr},
                     Alternative{"a2", 0.6, nullptr}};
  PollTree poll{q, {{"q1", "a1"}}};
  auto report = validate_poll(poll);
  REQUIRE_FALSE(report.ok());
  CHECK(report.violations.front().find("sum") != std::string::npos);
}

TEST_CASE("validate_poll rejects a non-leaf target") {
  PollTree p = build_spine_poll(2, 2, 0.5);
  PollTree truncated = p;
  truncated.target_path.pop_back();  // now ends at the follow-up carrier
  auto report = validate_poll(truncated);
  REQUIRE_FALSE(report.ok());
  CHECK(report.violations.front().find("not a leaf") != std::string::npos);
}

TEST_CASE("validate_poll rejects dangling target paths") {
  PollTree p = build_spine_poll(1, 2, 0.5);
  p.target_path[0].second = "nope";
  CHECK_FALSE(validate_poll(p).ok());
  p.target_path.clear();
  CHECK_FALSE(validate_poll(p).ok());
}

TEST_CASE("JSON round trip preserves the tree") {
  PollTree p = build_spine_poll(3, 4, 0.25);
  std::string text = save_poll(p);
  PollTree back = load_poll(text);
  CHECK(save_poll(back) == text);  // byte-stable after one normalization
  CHECK(back.target_path == p.target_path);
  CHECK(count_leaf_alternatives(back) == count_leaf_alternatives(p));
}

TEST_CASE("hand-written JSON fixture with depth 3") {
  const char* text = R"({
    "id": "root",
    "alternatives": [
      {"id": "yes", "weight": 0.5, "follow_up": {
        "id": "mid",
        "alternatives": [
          {"id": "yes", "weight": 0.5, "follow_up": {
            "id": "leafq",
            "alternatives": [
              {"id": "yes", "weight": 0.5, "follow_up": null},
              {"id": "no", "weight": 0.5, "follow_up": null}
            ]
          }},
          {"id": "no", "weight": 0.5, "follow_up": null}
        ]
      }},
      {"id": "no", "weight": 0.5, "follow_up": null}
    ],
    "target_path": [["root", "yes"], ["mid", "yes"], ["leafq", "yes"]]
  })";
  PollTree p = load_poll(text);
  CHECK(p.target_path.size() == 3);
  CHECK(count_leaf_alternatives(p) == 4);
}

TEST_CASE("JSON errors name the offending field") {
  CHECK_THROWS_WITH_AS(load_poll("{\"id\": \"q\", \"alternatives\": ["
                                 "{\"id\": \"a\"}]}"),
                       doctest::Contains("weight"), Error);
  CHECK_THROWS_WITH_AS(load_poll("not json at all"),
                       doctest::Contains("parse"), Error);
  // Valid JSON, invalid poll (weights do not sum to 1).
  CHECK_THROWS_AS(
      load_poll("{\"id\": \"q\", \"alternatives\": ["
                "{\"id\": \"a\", \"weight\": 0.6, \"follow_up\": null},"
                "{\"id\": \"b\", \"weight\": 0.6, \"follow_up\": null}],"
                "\"target_path\": [[\"q\", \"a\"]]}"),
      Error);
}
