#include <sstream>

#include "doctest.h"
#include "kwe/corpus.hpp"
#include "kwe/error.hpp"

using namespace kwe;

TEST_CASE("normalize_keyword collapses whitespace and lowercases") {
  CHECK(normalize_keyword("  Fuzzy   Control ") == "fuzzy control");
  CHECK(normalize_keyword("Query\tSuggestion\n") == "query suggestion");
  CHECK(normalize_keyword("ALREADY lower") == "already lower");
  CHECK(normalize_keyword("x") == "x");
  CHECK(normalize_keyword("") == "");
  CHECK(normalize_keyword("   \t \n ") == "");
}

TEST_CASE("normalize_keyword handles unicode whitespace and case") {
  // U+00A0 no-break space and U+2003 em space count as separators.
  CHECK(normalize_keyword("deep learning") == "deep learning");
  CHECK(normalize_keyword("a b") == "a b");
  // Latin-1, Greek and Cyrillic simple case folds.
  CHECK(normalize_keyword("Naïve BAYES") == "naïve bayes");
  CHECK(normalize_keyword("ΑΒΓΔ") == "αβγδ");
  CHECK(normalize_keyword("МОСКВА") == "москва");
  CHECK(normalize_keyword("Größe") == "größe");
  // Characters without a mapping pass through untouched.
  CHECK(normalize_keyword("日本語") == "日本語");
}

TEST_CASE("keyword_words splits on single spaces") {
  CHECK(keyword_words("fuzzy control") ==
        std::vector<std::string>{"fuzzy", "control"});
  CHECK(keyword_words("single") == std::vector<std::string>{"single"});
}

namespace {

Corpus parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_jsonl(in, "test");
}

}  // namespace

TEST_CASE("parse_jsonl reads documents and ignores extra fields") {
  const Corpus c = parse_text(
      R"({"id":"a","title":"ignored","keywords":["Deep  Learning","nlp"]})"
      "\n"
      R"({"id":"b","keywords":["nlp"]})"
      "\n");
  REQUIRE(c.docs.size() == 2);
  CHECK(c.docs[0].id == "a");
  CHECK(c.docs[0].keywords ==
        std::vector<std::string>{"deep learning", "nlp"});
  CHECK(c.docs[1].keywords == std::vector<std::string>{"nlp"});
}

TEST_CASE("parse_jsonl skips blank lines and deduplicates within a document") {
  const Corpus c = parse_text(
      "\n"
      R"({"id":"a","keywords":["NLP","nlp ","ir"]})"
      "\n\n");
  REQUIRE(c.docs.size() == 1);
  CHECK(c.docs[0].keywords == std::vector<std::string>{"nlp", "ir"});
}

TEST_CASE("parse_jsonl drops empty keywords and counts them") {
  const Corpus c = parse_text(R"({"id":"a","keywords":["  ","ok"]})" "\n");
  CHECK(c.docs[0].keywords == std::vector<std::string>{"ok"});
  CHECK(c.dropped_empty_keywords == 1);
}

TEST_CASE("parse_jsonl error cases carry line context") {
  CHECK_THROWS_WITH_AS(parse_text("{oops\n"),
                       doctest::Contains("test:1"), DataError);
  CHECK_THROWS_WITH_AS(parse_text("[1,2]\n"), doctest::Contains("test:1"),
                       DataError);
  CHECK_THROWS_WITH_AS(parse_text(R"({"keywords":["x"]})" "\n"),
                       doctest::Contains("id"), DataError);
  CHECK_THROWS_WITH_AS(parse_text(R"({"id":"a","keywords":"x"})" "\n"),
                       doctest::Contains("keywords"), DataError);
  CHECK_THROWS_WITH_AS(parse_text(R"({"id":"a","keywords":["x",3]})" "\n"),
                       doctest::Contains("test:1"), DataError);
  CHECK_THROWS_WITH_AS(parse_text(R"({"id":7,"keywords":["x"]})" "\n"),
                       doctest::Contains("id"), DataError);
  // All keywords empty leaves the document without any.
  CHECK_THROWS_AS(parse_text(R"({"id":"a","keywords":["  "]})" "\n"),
                  DataError);
  CHECK_THROWS_AS(parse_text(R"({"id":"a","keywords":[]})" "\n"), DataError);
  // Empty corpus.
  CHECK_THROWS_AS(parse_text(""), DataError);
}

TEST_CASE("parse_jsonl reports duplicate document ids sorted") {
  const std::string text =
      R"({"id":"z","keywords":["a"]})" "\n"
      R"({"id":"q","keywords":["b"]})" "\n"
      R"({"id":"z","keywords":["c"]})" "\n"
      R"({"id":"q","keywords":["d"]})" "\n";
  CHECK_THROWS_WITH_AS(parse_text(text), doctest::Contains("q, z"), DataError);
}

TEST_CASE("corpus round-trips through its canonical form") {
  const Corpus c = parse_text(
      R"({"id":"a","keywords":[" Deep Learning ","nlp"]})" "\n"
      R"({"id":"b","keywords":["naïve bayes"]})" "\n");
  std::ostringstream out;
  write_corpus_jsonl(c, out);
  const Corpus again = parse_text(out.str());
  REQUIRE(again.docs.size() == c.docs.size());
  for (std::size_t i = 0; i < c.docs.size(); ++i) {
    CHECK(again.docs[i].id == c.docs[i].id);
    CHECK(again.docs[i].keywords == c.docs[i].keywords);
  }
}

TEST_CASE("build_vocab assigns first-seen ids and document frequencies") {
  const Corpus c = parse_text(
      R"({"id":"a","keywords":["deep learning","nlp"]})" "\n"
      R"({"id":"b","keywords":["nlp","graph theory"]})" "\n");
  const Vocab v = build_vocab(c);
  REQUIRE(v.keyword_count() == 3);
  CHECK(v.keywords[0] == "deep learning");
  CHECK(v.keywords[1] == "nlp");
  CHECK(v.keywords[2] == "graph theory");
  CHECK(v.keyword_df == std::vector<std::uint32_t>{1, 2, 1});
  CHECK(v.keyword_id("nlp") == 1u);
  CHECK_FALSE(v.keyword_id("absent").has_value());
  // Words in first-seen order across kept keywords.
  CHECK(v.words == std::vector<std::string>{"deep", "learning", "nlp",
                                            "graph", "theory"});
  CHECK(v.word_id("graph") == 3u);
}

TEST_CASE("build_vocab honors min_count") {
  const Corpus c = parse_text(
      R"({"id":"a","keywords":["rare","common"]})" "\n"
      R"({"id":"b","keywords":["common"]})" "\n");
  const Vocab v = build_vocab(c, 2);
  REQUIRE(v.keyword_count() == 1);
  CHECK(v.keywords[0] == "common");
  CHECK(v.words == std::vector<std::string>{"common"});
}

TEST_CASE("split_corpus is deterministic, disjoint and clamped") {
  Corpus c;
  for (int i = 0; i < 10; ++i)
    c.docs.push_back({"d" + std::to_string(i), {"k"}});

  const Split s = split_corpus(c, 0.2, 42);
  CHECK(s.test_docs.size() == 2);
  CHECK(s.train_docs.size() == 8);
  CHECK(std::is_sorted(s.train_docs.begin(), s.train_docs.end()));
  CHECK(std::is_sorted(s.test_docs.begin(), s.test_docs.end()));
  for (auto t : s.test_docs)
    CHECK(std::find(s.train_docs.begin(), s.train_docs.end(), t) ==
          s.train_docs.end());

  const Split again = split_corpus(c, 0.2, 42);
  CHECK(again.train_docs == s.train_docs);
  CHECK(again.test_docs == s.test_docs);
  const Split other = split_corpus(c, 0.2, 43);
  CHECK(other.test_docs != s.test_docs);

  // Rounded counts are clamped so both sides stay non-empty.
  CHECK(split_corpus(c, 0.01, 1).test_docs.size() == 1);
  CHECK(split_corpus(c, 0.99, 1).train_docs.size() == 1);
  CHECK_THROWS_AS(split_corpus(c, 0.0, 1), UsageError);
  CHECK_THROWS_AS(split_corpus(c, 1.0, 1), UsageError);
}

TEST_CASE("split_corpus needs at least two documents") {
  Corpus c;
  c.docs.push_back({"only", {"k"}});
  CHECK_THROWS_AS(split_corpus(c, 0.2, 1), DataError);
}

TEST_CASE("vocab tsv lists ids ascending") {
  const Corpus c = parse_text(R"({"id":"a","keywords":["b c","a"]})" "\n");
  std::ostringstream out;
  write_vocab_tsv(build_vocab(c), out);
  CHECK(out.str() == "0\tb c\n1\ta\n");
}
