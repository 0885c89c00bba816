#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include "generators.hpp"
#include "jurisrank/bm25.hpp"
#include "jurisrank/embedding_store.hpp"
#include "jurisrank/errors.hpp"
#include "jurisrank/external_scores.hpp"
#include "jurisrank/ranking.hpp"
#include "jurisrank/retrieval.hpp"
#include "jurisrank/scoring.hpp"
#include "jurisrank/tokenizer.hpp"
#include "oracles.hpp"

using namespace jurisrank;

namespace {

Judgment judgment_of(std::vector<std::string> texts, std::string id = "J") {
  Judgment j{std::move(id), "", {}};
  int num = 1;
  for (auto& t : texts) j.paragraphs.push_back({num++, std::move(t)});
  return j;
}

std::vector<std::string> texts_of(const Judgment& j) {
  std::vector<std::string> out;
  for (const auto& p : j.paragraphs) out.push_back(p.text);
  return out;
}

oracle::Rows to_rows(const Eigen::MatrixXd& m) {
  oracle::Rows out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out[static_cast<std::size_t>(r)].push_back(m(r, c));
  }
  return out;
}

}  // namespace

TEST_CASE("tokenizer") {
  CHECK(tokenize("Forced LABOUR, art. 4 §2") ==
        std::vector<std::string>{"forced", "labour", "art", "4", "2"});
  CHECK(tokenize("M\xC3\x9C" "LLER v. \xC3\x89tat") ==
        std::vector<std::string>{"m\xC3\xBCller", "v", "\xC3\xA9tat"});
  CHECK(tokenize("\xE2\x80\x9Cquoted\xE2\x80\x9D\xC2\xA0word") ==
        std::vector<std::string>{"quoted", "word"});
  CHECK(tokenize("").empty());
}

TEST_CASE("term index statistics") {
  const auto j = judgment_of({"the court held", "court of appeal", "nothing here"});
  const auto index = TermIndex::build(j);
  CHECK(index.df("court") == 2);
  CHECK(index.df("absent") == 0);
  CHECK(index.tf("court", 0) == 1);
  CHECK(index.avgdl() == doctest::Approx(8.0 / 3.0));

  std::string t10, t20, t30;
  for (int i = 0; i < 10; ++i) t10 += "a ";
  for (int i = 0; i < 20; ++i) t20 += "b ";
  for (int i = 0; i < 30; ++i) t30 += "c ";
  CHECK(TermIndex::build(judgment_of({t10, t20, t30})).avgdl() == doctest::Approx(20.0));
  CHECK(TermIndex::build(judgment_of({t10})).avgdl() == doctest::Approx(10.0));
  // Lengths are floored at one token.
  CHECK(TermIndex::build(judgment_of({"...", "a b c"})).lengths()[0] == 1.0);
}

TEST_CASE("bm25 examples") {
  const auto j = judgment_of({"forced labour in the mines", "the applicant was detained",
                              "forced labour forced labour prohibited"});
  const auto index = TermIndex::build(j);
  CHECK(bm25_score("torture", index).isZero());
  const auto scores = bm25_score("forced labour", index);
  const auto expected = oracle::bm25("forced labour", texts_of(j), 1.2, 0.75);
  for (int i = 0; i < 3; ++i) CHECK(scores[i] == doctest::Approx(expected[i]).epsilon(1e-12));
  CHECK(scores[1] == 0.0);
  CHECK(scores[2] > scores[0]);

  const auto twins = TermIndex::build(judgment_of({"same words here", "same words here", "other"}));
  const auto s = bm25_score("words", twins);
  CHECK(s[0] == s[1]);
}

TEST_CASE("bm25 matches the direct formula on random judgments") {
  gen::Engine rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const int vocab = gen::uniform_int(rng, 5, 100);
    const auto j = gen::judgment(rng, "J", gen::uniform_int(rng, 3, 50), vocab);
    const auto index = TermIndex::build(j);
    const std::string query = gen::text(rng, vocab, 1, 10);
    Bm25Params params;
    if (trial % 2) params = {gen::uniform_real(rng, 0.0, 3.0), gen::uniform_real(rng, 0.0, 1.0)};
    const auto got = bm25_score(query, index, params);
    const auto want = oracle::bm25(query, texts_of(j), params.k1, params.b);
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(std::abs(got[static_cast<Eigen::Index>(i)] - want[i]) <= 1e-6);
    }
  }
}

TEST_CASE("bm25 is monotone in term frequency") {
  gen::Engine rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    auto j = gen::judgment(rng, "J", gen::uniform_int(rng, 3, 20), 30);
    const std::string term = gen::word(gen::uniform_int(rng, 0, 29));
    const auto p = static_cast<std::size_t>(gen::uniform_int(rng, 0, static_cast<int>(j.size()) - 1));
    const double before = bm25_score(term, TermIndex::build(j))[static_cast<Eigen::Index>(p)];
    j.paragraphs[p].text += " " + term;
    const double after = bm25_score(term, TermIndex::build(j))[static_cast<Eigen::Index>(p)];
    CHECK(after >= before - 1e-12);
  }
}

TEST_CASE("bm25 parameter validation") {
  const auto index = TermIndex::build(judgment_of({"a"}));
  CHECK_THROWS_AS(bm25_score("a", index, {-1.0, 0.5}), ConfigError);
  CHECK_THROWS_AS(bm25_score("a", index, {1.0, 1.5}), ConfigError);
}

TEST_CASE("dot product") {
  Eigen::Vector2d a(1, 2), b(3, 4);
  CHECK(dot_score(a, b) == 11.0);
  CHECK(dot_score(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 5)) == 0.0);
  Eigen::Vector3d v(1, -2, 3);
  CHECK(dot_score(v, v) == doctest::Approx(v.squaredNorm()));
  CHECK(dot_score(a.transpose(), b) == 11.0);
  CHECK_THROWS_AS(dot_score(Eigen::VectorXd(a), Eigen::VectorXd(v)), DimensionError);
}

TEST_CASE("maxsim examples") {
  Eigen::MatrixXd q(1, 3);
  q << 1, 2, 2;
  Eigen::MatrixXd d(2, 3);
  d << 0, 1, 0, 2, 4, 4;
  CHECK(maxsim_score(q, d, true) == doctest::Approx(1.0));
  CHECK(maxsim_score(q, Eigen::MatrixXd::Zero(4, 3), false) == 0.0);
  CHECK(maxsim_score(q, Eigen::MatrixXd::Zero(4, 3), true) == 0.0);
  CHECK_THROWS_AS(maxsim_score(q, Eigen::MatrixXd::Zero(2, 4)), DimensionError);
  CHECK_THROWS_AS(maxsim_score(Eigen::MatrixXd(0, 3), d), DimensionError);

  Eigen::MatrixXd q2(2, 4), d3(3, 4);
  q2 << 0.5, -1, 2, 0, 1, 1, -1, 3;
  d3 << 1, 0, 0, 1, -2, 1, 0.5, 0, 0, 0, 3, -1;
  for (bool normalize : {false, true}) {
    CHECK(maxsim_score(q2, d3, normalize) ==
          doctest::Approx(oracle::maxsim(to_rows(q2), to_rows(d3), normalize)).epsilon(1e-12));
  }
}

TEST_CASE("maxsim matches the nested loop and keeps its invariants") {
  gen::Engine rng(77);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen::uniform_int(rng, 1, 8), m = gen::uniform_int(rng, 1, 12),
              dim = gen::uniform_int(rng, 1, 16);
    Eigen::MatrixXd q(n, dim), d(m, dim);
    for (Eigen::Index i = 0; i < q.size(); ++i) q.data()[i] = normal(rng);
    for (Eigen::Index i = 0; i < d.size(); ++i) d.data()[i] = normal(rng);
    const bool normalize = trial % 2 == 0;
    const double got = maxsim_score(q, d, normalize);
    CHECK(std::abs(got - oracle::maxsim(to_rows(q), to_rows(d), normalize)) <= 1e-6);

    Eigen::PermutationMatrix<Eigen::Dynamic> perm(m);
    perm.setIdentity();
    std::shuffle(perm.indices().data(), perm.indices().data() + m, rng);
    CHECK(std::abs(maxsim_score(q, perm * d, normalize) - got) <= 1e-9);

    Eigen::MatrixXd longer(m + 1, dim);
    longer.topRows(m) = d;
    for (Eigen::Index c = 0; c < dim; ++c) longer(m, c) = normal(rng);
    CHECK(maxsim_score(q, longer, normalize) >= got - 1e-12);
  }
}

TEST_CASE("single-row maxsim is the cosine and dot ranks like cosine on unit vectors") {
  gen::Engine rng(5);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd a(6), b(6);
    for (int i = 0; i < 6; ++i) {
      a[i] = normal(rng);
      b[i] = normal(rng);
    }
    const double cosine = a.dot(b) / (a.norm() * b.norm());
    CHECK(maxsim_score(a.transpose(), b.transpose(), true) == doctest::Approx(cosine).epsilon(1e-9));
  }
  Eigen::VectorXd q = Eigen::VectorXd::Random(8).normalized();
  std::vector<std::pair<double, int>> by_dot, by_cos;
  for (int i = 0; i < 20; ++i) {
    Eigen::VectorXd p = Eigen::VectorXd::Random(8).normalized();
    by_dot.emplace_back(-dot_score(q, p), i);
    by_cos.emplace_back(-q.dot(p) / (q.norm() * p.norm()), i);
  }
  std::sort(by_dot.begin(), by_dot.end());
  std::sort(by_cos.begin(), by_cos.end());
  for (int i = 0; i < 20; ++i) CHECK(by_dot[static_cast<std::size_t>(i)].second == by_cos[static_cast<std::size_t>(i)].second);
}

TEST_CASE("ranking order and ties") {
  std::vector<RankedParagraph> s{{1, 0.2}, {2, 0.9}};
  CHECK(rank_paragraphs("q", "J", s).order() == std::vector<int>{2, 1});
  std::vector<RankedParagraph> ties{{3, 1.0}, {1, 1.0}, {2, 1.0}};
  CHECK(rank_paragraphs("q", "J", ties).order() == std::vector<int>{1, 2, 3});
  gen::Engine rng(4);
  std::vector<RankedParagraph> many;
  for (int i = 1; i <= 30; ++i) many.push_back({i, static_cast<double>(gen::uniform_int(rng, 0, 4))});
  const auto reference = rank_paragraphs("q", "J", many);
  for (int t = 0; t < 10; ++t) {
    std::shuffle(many.begin(), many.end(), rng);
    CHECK(rank_paragraphs("q", "J", many) == reference);
  }
  auto order = reference.order();
  std::sort(order.begin(), order.end());
  for (int i = 0; i < 30; ++i) CHECK(order[static_cast<std::size_t>(i)] == i + 1);

  std::vector<RankedParagraph> nan{{1, std::nan("")}};
  CHECK_THROWS_AS(rank_paragraphs("q", "J", nan), InvalidScore);
  std::vector<RankedParagraph> dup{{1, 0.1}, {1, 0.2}};
  CHECK_THROWS_AS(rank_paragraphs("q", "J", dup), ParseError);
}

TEST_CASE("external score files") {
  auto scores = parse_external_scores("q1\tJ1\t1\t0.5\nq1\tJ1\t2\t-1e3\n");
  CHECK(scores.size() == 2);
  CHECK(scores.at({"q1", "J1", 2}) == -1000.0);
  CHECK_THROWS_AS(parse_external_scores("q1\tJ1\t1\t0.5\nq1\tJ1\t1\t0.5\n"), DuplicateScore);
  CHECK_THROWS_AS(parse_external_scores("q1\tJ1\t1\tNaN\n"), InvalidScore);
  CHECK_THROWS_AS(parse_external_scores("q1\tJ1\t1\tinf\n"), InvalidScore);
  CHECK_THROWS_AS(parse_external_scores("q1\tJ1\tx\t0.5\n"), ParseError);
  CHECK_THROWS_AS(parse_external_scores("q1\tJ1\t1\n"), ParseError);
  CHECK(parse_external_scores(format_external_scores(scores)) == scores);
  CHECK(pair_scores(scores, "q1", "J1") == std::map<int, double>{{1, 0.5}, {2, -1000.0}});
}

TEST_CASE("embedding store validation and file round trip") {
  EmbeddingStore::Matrix rows(3, 2);
  rows << 1, 0, 0, 1, 0.6f, 0.8f;
  EmbeddingStore single(Granularity::kSingle, true, {query_key("q1"), paragraph_key("J", 1), paragraph_key("J", 2)},
                        {}, rows);
  CHECK(single.rows("p:J:2")(0, 1) == doctest::Approx(0.8));
  CHECK_THROWS_AS(single.rows("p:J:3"), MissingEmbedding);

  EmbeddingStore::Matrix not_unit(1, 2);
  not_unit << 1, 1;
  CHECK_THROWS_AS(EmbeddingStore(Granularity::kSingle, true, {"q:x"}, {}, not_unit), DimensionError);
  CHECK_THROWS_AS(EmbeddingStore(Granularity::kToken, false, {"q:x", "q:y"}, {1, 1}, not_unit),
                  DimensionError);
  CHECK_THROWS_AS(EmbeddingStore(Granularity::kToken, false, {"q:x"}, {0}, not_unit.topRows(0)),
                  DimensionError);

  EmbeddingStore::Matrix tok(5, 3);
  tok.setRandom();
  EmbeddingStore token(Granularity::kToken, false, {"q:q1", "p:J:1", "p:J:2"}, {2, 1, 2}, tok);
  CHECK(token.token_count("p:J:2") == 2);

  const auto dir = std::filesystem::temp_directory_path() /
                   ("jurisrank_emb_" + std::to_string(std::random_device{}()));
  write_embedding_store(dir, token);
  const auto back = read_embedding_store(dir);
  CHECK(back.keys() == token.keys());
  CHECK(back.matrix() == token.matrix());
  CHECK(back.granularity() == Granularity::kToken);
  CHECK(back.token_count("q:q1") == 2);
  std::filesystem::resize_file(dir / "vectors.bin", 4);
  CHECK_THROWS_AS(read_embedding_store(dir), ParseError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("score_all with every method") {
  const auto j = judgment_of({"forced labour", "detention", "labour law"}, "J1");
  const Corpus corpus({j});
  DatasetEntry entry;
  entry.query = {"q1", "g", {"Forced labour"}, "Forced labour"};
  entry.pair = {"q1", "J1", {1}};
  const std::vector<DatasetEntry> entries{entry};

  ScoringOptions bm25;
  const auto r = score_all(entries, corpus, bm25);
  REQUIRE(r.size() == 1);
  CHECK(r[0].order() == std::vector<int>{1, 3, 2});

  EmbeddingStore::Matrix rows(4, 2);
  rows << 1, 0, 0.6f, 0.8f, 0, 1, 1, 0;
  EmbeddingStore single(Granularity::kSingle, true, {"q:q1", "p:J1:1", "p:J1:2", "p:J1:3"}, {}, rows);
  ScoringOptions dot;
  dot.method = Method::kDot;
  dot.embeddings = &single;
  CHECK(score_all(entries, corpus, dot)[0].order() == std::vector<int>{3, 1, 2});

  ScoringOptions maxsim = dot;
  maxsim.method = Method::kMaxSim;
  CHECK_THROWS_AS(score_all(entries, corpus, maxsim), ConfigError);
  EmbeddingStore token(Granularity::kToken, true, {"q:q1", "p:J1:1", "p:J1:2", "p:J1:3"}, {1, 1, 1, 1}, rows);
  maxsim.embeddings = &token;
  CHECK(score_all(entries, corpus, maxsim)[0].order() == std::vector<int>{3, 1, 2});

  ExternalScores ext{{{"q1", "J1", 1}, 0.1}, {{"q1", "J1", 2}, 0.7}, {{"q1", "J1", 3}, 0.1}};
  ScoringOptions external;
  external.method = Method::kExternal;
  external.external = &ext;
  CHECK(score_all(entries, corpus, external)[0].order() == std::vector<int>{2, 1, 3});
  ext.erase({"q1", "J1", 3});
  CHECK_THROWS_AS(score_all(entries, corpus, external), IncompleteScores);

  EmbeddingStore missing(Granularity::kSingle, true, {"q:q1"}, {}, rows.topRows(1));
  dot.embeddings = &missing;
  CHECK_THROWS_AS(score_all(entries, corpus, dot), MissingEmbedding);
}

TEST_CASE("parallel scoring equals sequential scoring") {
  gen::Engine rng(12);
  std::vector<Judgment> js;
  std::vector<DatasetEntry> entries;
  for (int i = 0; i < 30; ++i) {
    js.push_back(gen::judgment(rng, "J" + std::to_string(i), gen::uniform_int(rng, 3, 30), 40));
    DatasetEntry e;
    e.query = {"q" + std::to_string(i % 7), "g", {"x"}, gen::text(rng, 40, 2, 6)};
    e.pair = {e.query.query_id, js.back().judgment_id, {1}};
    entries.push_back(e);
  }
  const Corpus corpus(js);
  ScoringOptions one;
  ScoringOptions many;
  many.threads = 8;
  CHECK(score_all(entries, corpus, one) == score_all(entries, corpus, many));
}
