#include <doctest.h>

#include <algorithm>

#include "generators.hpp"
#include "jurisrank/errors.hpp"
#include "jurisrank/splits.hpp"
#include "oracles.hpp"

using namespace jurisrank;

namespace {

std::vector<SplitItem> two_guides() {
  std::vector<SplitItem> items;
  for (int i = 0; i < 10; ++i) {
    const std::string guide = i < 5 ? "g1" : "g2";
    const std::string query = guide + "-q" + std::to_string(i % 2);
    const std::string jid = "J" + std::to_string(i);
    items.push_back({pair_key(query, jid), query, guide});
  }
  return items;
}

std::map<std::string, std::string> as_names(const SplitAssignment& a) {
  std::map<std::string, std::string> out;
  for (const auto& [k, s] : a.assignment) out[k] = std::string(to_string(s));
  return out;
}

std::vector<oracle::SplitRow> rows(const std::vector<SplitItem>& items) {
  std::vector<oracle::SplitRow> out;
  for (const auto& i : items) out.push_back({i.key, i.query_id, i.guide_id});
  return out;
}

}  // namespace

TEST_CASE("held-out guide goes wholly to the unseen-article split") {
  const auto items = two_guides();
  SplitConfig config;
  config.guide_holdout = std::set<std::string>{"g2"};
  const auto a = make_splits(items, config);
  for (const auto& item : items) {
    const Split s = a.assignment.at(item.key);
    CHECK((item.guide_id == "g2") == (s == Split::kTestUnseenArticle));
  }
  CHECK(verify_splits(a, items).empty());
  CHECK(oracle::split_violations(as_names(a), rows(items)) == 0);
}

TEST_CASE("zero query holdout leaves the seen-unseen split empty") {
  gen::Engine rng(1);
  const auto items = gen::split_items(rng, 10);
  SplitConfig config;
  config.query_holdout = 0.0;
  CHECK(make_splits(items, config).count(Split::kTestSeenUnseen) == 0);
}

TEST_CASE("verify_splits examples") {
  const auto items = two_guides();
  SplitConfig config;
  config.guide_holdout = std::set<std::string>{"g2"};
  auto a = make_splits(items, config);
  CHECK(verify_splits(a, items).empty());

  // A held-out query placed in train.
  SplitAssignment leaked = a;
  const auto victim = std::find_if(items.begin(), items.end(),
                                   [](const SplitItem& i) { return i.guide_id == "g2"; });
  leaked.assignment[victim->key] = Split::kTrain;
  CHECK(!verify_splits(leaked, items).empty());

  SplitAssignment missing = a;
  missing.assignment.erase(items.front().key);
  const auto violations = verify_splits(missing, items);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find(items.front().key) != std::string::npos);

  // A seen-unseen query that also has a training pair.
  std::vector<SplitItem> q{{"q1|A", "q1", "g"}, {"q1|B", "q1", "g"}};
  SplitAssignment bad;
  bad.assignment = {{"q1|A", Split::kTestSeenUnseen}, {"q1|B", Split::kTrain}};
  CHECK(verify_splits(bad, q).size() == 1);
  bad.assignment = {{"q1|A", Split::kTestSeenSeen}, {"q1|B", Split::kVal}};
  CHECK(verify_splits(bad, q).size() == 1);
}

TEST_CASE("configuration errors") {
  const auto items = two_guides();
  SplitConfig config;
  config.train = 0.5;
  CHECK_THROWS_AS(make_splits(items, config), ConfigError);
  config = {};
  config.query_holdout = 1.5;
  CHECK_THROWS_AS(make_splits(items, config), ConfigError);
  config = {};
  config.guide_holdout = std::set<std::string>{"nope"};
  CHECK_THROWS_AS(make_splits(items, config), ConfigError);
  config = {};
  config.guide_holdout = std::set<std::string>{"g1", "g2"};
  CHECK_THROWS_AS(make_splits(items, config), InfeasibleSplit);
}

TEST_CASE("duplicate pairs and queries spanning guides are rejected") {
  auto items = two_guides();
  items.push_back(items.front());
  CHECK_THROWS_AS(make_splits(items, {}), ParseError);
  items = two_guides();
  items.push_back({"g1-q0|JX", "g1-q0", "g2"});
  CHECK_THROWS_AS(make_splits(items, {}), ParseError);
}

TEST_CASE("fuzzed datasets never violate the invariants") {
  gen::Engine rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const int n_guides = gen::uniform_int(rng, 5, 40);
    const auto items = gen::split_items(rng, n_guides);
    SplitConfig config;
    config.seed = rng();
    if (trial % 2) {
      config.guide_holdout = gen::uniform_real(rng, 0.0, 0.4);
    } else {
      config.guide_holdout = std::set<std::string>{"guide0", "guide3"};
    }
    config.query_holdout = gen::uniform_real(rng, 0.0, 0.4);
    const auto a = make_splits(items, config);
    CHECK(verify_splits(a, items).empty());
    CHECK(oracle::split_violations(as_names(a), rows(items)) == 0);
    CHECK(a.assignment.size() == items.size());
  }
}

TEST_CASE("assignment ignores input order and follows the seed") {
  gen::Engine rng(31);
  auto items = gen::split_items(rng, 20);
  SplitConfig config;
  config.guide_holdout = 0.2;
  config.query_holdout = 0.2;
  const auto a = make_splits(items, config);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(items.begin(), items.end(), rng);
    CHECK(make_splits(items, config).assignment == a.assignment);
  }
  config.seed = 14;
  CHECK(make_splits(items, config).assignment != a.assignment);
}

TEST_CASE("fractions shape the seen-seen partition") {
  gen::Engine rng(8);
  const auto items = gen::split_items(rng, 40);
  const auto a = make_splits(items, {});
  const double total = static_cast<double>(items.size());
  CHECK(a.count(Split::kTrain) / total == doctest::Approx(0.74).epsilon(0.1));
  CHECK(a.count(Split::kVal) > 0);
  CHECK(a.count(Split::kTestSeenSeen) > 0);
}

TEST_CASE("splits JSON round trip") {
  gen::Engine rng(3);
  const auto items = gen::split_items(rng, 8);
  SplitConfig config;
  config.guide_holdout = std::set<std::string>{"guide1"};
  config.query_holdout = 0.25;
  config.seed = 77;
  const auto a = make_splits(items, config);
  const auto text = splits_to_json(a);
  const auto back = splits_from_json(text);
  CHECK(back.assignment == a.assignment);
  CHECK(back.seed == 77);
  CHECK(splits_to_json(back) == text);
  CHECK(text.find(std::string(kSplitAlgorithm)) != std::string::npos);
  CHECK_THROWS_AS(splits_from_json("{\"assignment\":{\"a|b\":\"bogus\"}}"), ParseError);
}

TEST_CASE("split names") {
  for (Split s : kAllSplits) CHECK(split_from_string(to_string(s)) == s);
  CHECK(!split_from_string("test"));
}
