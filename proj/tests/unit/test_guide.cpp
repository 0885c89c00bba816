#include <doctest.h>

#include <set>

#include "generators.hpp"
#include "jurisrank/citation.hpp"
#include "jurisrank/errors.hpp"
#include "jurisrank/guide.hpp"
#include "oracles.hpp"

using namespace jurisrank;

namespace {

std::set<int> nums_of(const CitationParse& parse, std::string_view label) {
  for (const auto& r : parse.refs) {
    if (r.case_label == label) return {r.paragraph_nums.begin(), r.paragraph_nums.end()};
  }
  return {};
}

std::vector<OutlineEntry> lgbti_outline() {
  return {{"lgbti", 0, "Rights of LGBTI persons", ""},
          {"lgbti", 1, "Freedom of expression and association", ""},
          {"lgbti", 2, "Imposed silence and legal bans concerning homosexuality", ""}};
}

}  // namespace

TEST_CASE("outline with three levels is a chain with one leaf") {
  const auto outline = lgbti_outline();
  const auto guide = parse_guide_structure(outline);
  CHECK(guide.guide_id == "lgbti");
  CHECK(guide.root.title == "Rights of LGBTI persons");
  REQUIRE(guide.root.children.size() == 1);
  const auto& mid = guide.root.children[0];
  REQUIRE(mid.children.size() == 1);
  CHECK(mid.children[0].is_leaf());
  CHECK(mid.children[0].level == 2);
  CHECK(leaf_queries(guide, " > ").size() == 1);
}

TEST_CASE("single heading is its own leaf") {
  const std::vector<OutlineEntry> outline{{"g", 0, "Only", ""}};
  const auto guide = parse_guide_structure(outline);
  CHECK(guide.root.is_leaf());
  const auto queries = leaf_queries(guide, " > ");
  REQUIRE(queries.size() == 1);
  CHECK(queries[0].query_text == "Only");
}

TEST_CASE("malformed outlines") {
  const std::vector<OutlineEntry> jump{{"g", 0, "T", ""}, {"g", 2, "Deep", ""}};
  CHECK_THROWS_AS(parse_guide_structure(jump), MalformedOutline);
  CHECK_THROWS_AS(parse_guide_structure(std::vector<OutlineEntry>{}), MalformedOutline);
  const std::vector<OutlineEntry> no_root{{"g", 1, "A", ""}};
  CHECK_THROWS_AS(parse_guide_structure(no_root), MalformedOutline);
  const std::vector<OutlineEntry> two_roots{{"g", 0, "A", ""}, {"g", 0, "B", ""}};
  CHECK_THROWS_AS(parse_guide_structure(two_roots), MalformedOutline);
  const std::vector<OutlineEntry> empty_title{{"g", 0, "A", ""}, {"g", 1, "", ""}};
  CHECK_THROWS_AS(parse_guide_structure(empty_title), MalformedOutline);
  const std::vector<OutlineEntry> mixed{{"g", 0, "A", ""}, {"h", 1, "B", ""}};
  CHECK_THROWS_AS(parse_guide_structure(mixed), MalformedOutline);
}

TEST_CASE("levels may rise by one and drop by several") {
  const std::vector<OutlineEntry> outline{{"g", 0, "T", ""}, {"g", 1, "A", ""}, {"g", 2, "A1", ""},
                                          {"g", 3, "A1x", ""}, {"g", 1, "B", ""}, {"g", 2, "B1", ""},
                                          {"g", 2, "B2", ""}};
  const auto guide = parse_guide_structure(outline);
  const auto queries = leaf_queries(guide, "/");
  REQUIRE(queries.size() == 3);
  CHECK(queries[0].query_text == "T/A/A1/A1x");
  CHECK(queries[1].query_text == "T/B/B1");
  CHECK(queries[2].query_text == "T/B/B2");
}

TEST_CASE("build_query joins the path") {
  const std::vector<std::string> path{"Rights of LGBTI persons", "Freedom of expression and association",
                                      "Imposed silence and legal bans concerning homosexuality"};
  CHECK(build_query(path, " > ") ==
        "Rights of LGBTI persons > Freedom of expression and association > Imposed silence and "
        "legal bans concerning homosexuality");
  CHECK(build_query(std::vector<std::string>{"A"}, " > ") == "A");
  CHECK(build_query(std::vector<std::string>{"A", "B"}, " | ") == "A | B");
}

TEST_CASE("query ids are stable and path sensitive") {
  const std::vector<std::string> ab{"A", "B"};
  const std::vector<std::string> a_b{"AB"};
  CHECK(make_query_id("g", ab) == make_query_id("g", ab));
  CHECK(make_query_id("g", ab) != make_query_id("h", ab));
  CHECK(make_query_id("g", ab) != make_query_id("g", a_b));
  CHECK(make_query_id("g", ab).size() == 17);
  CHECK(make_query_id("g", ab).front() == 'q');
}

TEST_CASE("citation examples") {
  auto p = parse_pinpoint_citations("X v. Y, 2018, \xC2\xA7\xC2\xA7 122-125, 128-132");
  REQUIRE(p.refs.size() == 1);
  CHECK(p.refs[0].case_label == "X v. Y, 2018");
  CHECK(nums_of(p, "X v. Y, 2018") == std::set<int>{122, 123, 124, 125, 128, 129, 130, 131, 132});

  p = parse_pinpoint_citations("X v. Y, \xC2\xA7 54");
  CHECK(nums_of(p, "X v. Y") == std::set<int>{54});

  p = parse_pinpoint_citations("X v. Y, \xC2\xA7\xC2\xA7 130-125");
  CHECK(p.refs.empty());
  REQUIRE(p.issues.size() == 1);
  CHECK(p.issues[0].kind == CitationIssueKind::kMalformed);
}

TEST_CASE("citations in running prose") {
  const std::string text =
      "The Court has held (see Bayev and Others v. Russia, \xC2\xA7\xC2\xA7 61-63; Alekseyev v. Russia, "
      "no. 4916/07, \xC2\xA7 86 and 88) that bans are unjustified. See also Identoba and Others v. "
      "Georgia, 2015, \xC2\xA7 99, and Bayev and Others v. Russia, \xC2\xA7 83. Compare Dudgeon v. the "
      "United Kingdom, 22 October 1981. In Fedotova and Others v. Russia [GC], \xC2\xA7\xC2\xA7 "
      "155\xE2\x80\x93" "156, the Court confirmed.";
  const auto p = parse_pinpoint_citations(text);
  CHECK(nums_of(p, "Bayev and Others v. Russia") == std::set<int>{61, 62, 63, 83});
  CHECK(nums_of(p, "Alekseyev v. Russia") == std::set<int>{86, 88});
  CHECK(nums_of(p, "Identoba and Others v. Georgia, 2015") == std::set<int>{99});
  CHECK(nums_of(p, "Fedotova and Others v. Russia [GC]") == std::set<int>{155, 156});
  CHECK(p.refs.size() == 4);
  REQUIRE(p.issues.size() == 1);
  CHECK(p.issues[0].kind == CitationIssueKind::kMissingPinpoint);
  CHECK(p.issues[0].case_label == "Dudgeon v. the United Kingdom");
}

TEST_CASE("ibid and op. cit. are unresolvable") {
  const auto p = parse_pinpoint_citations("(ibid., \xC2\xA7 5); (op. cit., \xC2\xA7\xC2\xA7 3-4)");
  REQUIRE(p.issues.size() == 2);
  CHECK(p.issues[0].kind == CitationIssueKind::kUnresolvableLabel);
  CHECK(p.issues[1].kind == CitationIssueKind::kUnresolvableLabel);
  CHECK(p.refs.empty());
}

TEST_CASE("malformed citations do not stop the scan") {
  const auto p = parse_pinpoint_citations(
      "A v. B, \xC2\xA7\xC2\xA7 9-9; C v. D, \xC2\xA7 0; E v. F, \xC2\xA7\xC2\xA7 1-3");
  CHECK(p.issues.size() == 2);
  CHECK(nums_of(p, "E v. F") == std::set<int>{1, 2, 3});
}

TEST_CASE("format and parse round trip") {
  gen::Engine rng(5);
  const char* labels[] = {"Smith v. Jones", "Van der Berg v. the Netherlands (no. 2)",
                          "S.A.S. v. France [GC]", "Old v. New, 2004", "M\xC3\xBCller v. Austria"};
  for (int trial = 0; trial < 500; ++trial) {
    CitationRef ref;
    ref.case_label = labels[trial % 5];
    std::set<int> nums;
    const int count = gen::uniform_int(rng, 1, 12);
    while (static_cast<int>(nums.size()) < count) nums.insert(gen::uniform_int(rng, 1, 400));
    ref.paragraph_nums.assign(nums.begin(), nums.end());
    const auto text = format_citation(ref);
    const auto parsed = parse_pinpoint_citations(text);
    CAPTURE(text);
    REQUIRE(parsed.refs.size() == 1);
    CHECK(parsed.refs[0] == ref);
    CHECK(parsed.issues.empty());
  }
}

TEST_CASE("format compresses runs") {
  CHECK(format_citation({"A v. B", {3}, {}}) == "A v. B, \xC2\xA7 3");
  CHECK(format_citation({"A v. B", {1, 2, 3, 5, 7, 8}, {}}) == "A v. B, \xC2\xA7\xC2\xA7 1-3, 5, 7-8");
}

TEST_CASE("random pinpoint lists agree with range expansion") {
  gen::Engine rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::pair<int, int>> items;
    std::string list;
    const int n = gen::uniform_int(rng, 1, 6);
    for (int i = 0; i < n; ++i) {
      const int a = gen::uniform_int(rng, 1, 300);
      const int b = gen::uniform_int(rng, 0, 1) ? a : a + gen::uniform_int(rng, 1, 20);
      items.emplace_back(a, b);
      if (i > 0) list += gen::uniform_int(rng, 0, 3) == 0 ? " and " : ", ";
      list += std::to_string(a);
      if (b != a) list += (gen::uniform_int(rng, 0, 1) ? "-" : "\xE2\x80\x93") + std::to_string(b);
    }
    const std::string text = "Party v. State, \xC2\xA7\xC2\xA7 " + list + ".";
    const auto parsed = parse_pinpoint_citations(text);
    CAPTURE(text);
    REQUIRE(parsed.refs.size() == 1);
    CHECK(nums_of(parsed, "Party v. State") == oracle::expand(items));
  }
}

TEST_CASE("strip_year") {
  CHECK(strip_year("A v. B, 2018") == "A v. B");
  CHECK(!strip_year("A v. B"));
  CHECK(!strip_year("A v. B, 18"));
}

TEST_CASE("alias resolution falls back to the label without year") {
  AliasResolver resolver({{"A v. B", "001-1"}, {"C v. D, 2001", "001-2"}});
  CHECK(resolver.resolve("A v. B") == "001-1");
  CHECK(resolver.resolve("A v. B, 2010") == "001-1");
  CHECK(resolver.resolve("C v. D, 2001") == "001-2");
  CHECK(!resolver.resolve("C v. D"));
  CHECK(!resolver.resolve("E v. F"));
}

namespace {

Corpus small_corpus() {
  std::vector<Judgment> js;
  for (const char* id : {"J1", "J2", "J3"}) {
    Judgment j{id, "", {}};
    for (int n = 1; n <= 10; ++n) j.paragraphs.push_back({n, "text"});
    js.push_back(j);
  }
  js.push_back({"J4", "", {{1, "a"}, {2, "b"}}});
  return Corpus(js);
}

Guide guide_with(std::string leaf_text, std::string parent_text = "") {
  std::vector<OutlineEntry> outline{{"g", 0, "Guide", ""},
                                    {"g", 1, "Chapter", parent_text},
                                    {"g", 2, "Leaf", leaf_text}};
  return parse_guide_structure(outline);
}

Resolver table() {
  return [](std::string_view label) -> std::optional<std::string> {
    if (label == "One v. State") return "J1";
    if (label == "Two v. State") return "J2";
    if (label == "Four v. State") return "J4";
    if (label == "Gone v. State") return "J99";
    return std::nullopt;
  };
}

}  // namespace

TEST_CASE("assemble_pairs unions a leaf's pinpoints per judgment") {
  const std::vector<Guide> guides{
      guide_with("See One v. State, \xC2\xA7\xC2\xA7 2-3 and later One v. State, \xC2\xA7 5.")};
  const auto build = assemble_pairs(guides, table(), small_corpus());
  REQUIRE(build.entries.size() == 1);
  CHECK(build.entries[0].pair.judgment_id == "J1");
  CHECK(build.entries[0].pair.relevant == std::vector<int>{2, 3, 5});
  CHECK(build.entries[0].query.query_text == "Guide > Chapter > Leaf");
  CHECK(build.drops.empty());
  CHECK(build.queries.size() == 1);
}

TEST_CASE("assemble_pairs drops citations without pinpoints") {
  const std::vector<Guide> guides{guide_with("See Two v. State.")};
  const auto build = assemble_pairs(guides, table(), small_corpus());
  CHECK(build.entries.empty());
  REQUIRE(build.drops.size() == 1);
  CHECK(build.drops[0].reason == drop_reason::kMissingPinpoint);
  CHECK(build.drops[0].case_label == "Two v. State");
}

TEST_CASE("assemble_pairs drops unmapped judgments") {
  const std::vector<Guide> guides{
      guide_with("See Nobody v. State, \xC2\xA7 4 and Gone v. State, \xC2\xA7 1.")};
  const auto build = assemble_pairs(guides, table(), small_corpus());
  CHECK(build.entries.empty());
  CHECK(build.drop_counts() == std::map<std::string, std::size_t>{{"unmapped judgment", 2}});
}

TEST_CASE("assemble_pairs other drop reasons") {
  const std::vector<Guide> guides{guide_with(
      "One v. State, \xC2\xA7\xC2\xA7 9-12. Four v. State, \xC2\xA7\xC2\xA7 1-2. ibid., \xC2\xA7 3. "
      "Two v. State, \xC2\xA7\xC2\xA7 5-4.",
      "Intro (Two v. State, \xC2\xA7 1).")};
  const auto build = assemble_pairs(guides, table(), small_corpus());
  REQUIRE(build.entries.size() == 1);
  CHECK(build.entries[0].pair.relevant == std::vector<int>{9, 10});
  const auto counts = build.drop_counts();
  CHECK(counts.at(std::string(drop_reason::kUnknownParagraph)) == 2);
  CHECK(counts.at(std::string(drop_reason::kWholeJudgment)) == 1);
  CHECK(counts.at(std::string(drop_reason::kUnresolvableLabel)) == 1);
  CHECK(counts.at(std::string(drop_reason::kMalformed)) == 1);
  CHECK(counts.at(std::string(drop_reason::kNonLeafSection)) == 1);
}

TEST_CASE("every emitted pair validates and queries match leaves") {
  gen::Engine rng(23);
  const auto corpus = small_corpus();
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<OutlineEntry> outline{{"g", 0, "Guide", ""}};
    int leaves = 0;
    const int chapters = gen::uniform_int(rng, 1, 4);
    for (int c = 0; c < chapters; ++c) {
      outline.push_back({"g", 1, "Chapter " + std::to_string(c), ""});
      const int n = gen::uniform_int(rng, 1, 4);
      for (int l = 0; l < n; ++l) {
        std::string text;
        for (int k = 0; k < 3; ++k) {
          const char* who[] = {"One", "Two", "Four", "Gone", "Nobody"};
          const int a = gen::uniform_int(rng, 0, 12);
          const int b = a + gen::uniform_int(rng, 0, 3);
          text += std::string(who[gen::uniform_int(rng, 0, 4)]) + " v. State, \xC2\xA7\xC2\xA7 " +
                  std::to_string(a) + "-" + std::to_string(b) + "; ";
        }
        outline.push_back({"g", 2, "Leaf " + std::to_string(l), text});
        ++leaves;
      }
    }
    const std::vector<Guide> guides{parse_guide_structure(outline)};
    const auto build = assemble_pairs(guides, table(), corpus);
    CHECK(build.queries.size() == static_cast<std::size_t>(leaves));
    for (const auto& e : build.entries) {
      CHECK(validate_pair(e.pair, corpus.at(e.pair.judgment_id)).empty());
    }
  }
}
