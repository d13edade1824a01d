#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "symloss/io.hpp"
#include "symloss/text.hpp"

using namespace symloss;

namespace {

std::vector<Document> docs(std::initializer_list<const char*> texts) {
  std::vector<Document> out;
  int i = 0;
  for (const char* t : texts) out.push_back({"d" + std::to_string(i++), t, std::nullopt, Split::train_unlabeled});
  return out;
}

}  // namespace

TEST(Tokenize, LowercaseAndSplit) {
  EXPECT_EQ(tokenize("Hello, World!  foo-bar42"),
            (std::vector<std::string>{"hello", "world", "foo", "bar42"}));
  EXPECT_TRUE(tokenize("  ...  ").empty());
  EXPECT_EQ(tokenize("café au lait"), (std::vector<std::string>{"café", "au", "lait"}));
}

TEST(KeywordSet, NormalisesAndDedupes) {
  KeywordSet k({"Goal", "goal", "MATCH", " striker "});
  EXPECT_EQ(k.words(), (std::vector<std::string>{"goal", "match", "striker"}));
  EXPECT_THROW(KeywordSet({"", "  "}), ConfigError);
}

TEST(Vectorizer, VocabularyExamples) {
  const auto d = docs({"a b", "a c"});
  const auto v2 = build_vectorizer(std::span<const Document>(d), WeightScheme::tf, 2);
  EXPECT_EQ(v2.vocabulary(), std::vector<std::string>{"a"});
  const auto v1 = build_vectorizer(std::span<const Document>(d), WeightScheme::tf, 1);
  EXPECT_EQ(v1.vocabulary(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(v1.document_frequency(), (std::vector<std::size_t>{2, 1, 1}));
  EXPECT_THROW(build_vectorizer(std::span<const Document>(), WeightScheme::tf, 1), InvalidArgument);
  EXPECT_THROW(build_vectorizer(std::span<const Document>(d), WeightScheme::tf, 3), ConfigError);
}

TEST(Vectorizer, OrderingIsFrequencyThenToken) {
  const auto d = docs({"z y x", "z y", "z w", "w"});
  const auto v = build_vectorizer(std::span<const Document>(d), WeightScheme::tf, 1);
  EXPECT_EQ(v.vocabulary(), (std::vector<std::string>{"z", "w", "y", "x"}));
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(*v.index_of(v.vocabulary()[i]), i);
}

TEST(Vectorizer, TfIdfWeights) {
  const auto d = docs({"a a b", "a c", "c"});
  const auto v = build_vectorizer(std::span<const Document>(d), WeightScheme::tf_idf, 1);
  const auto t = v.transform("a a b");
  const double idf_a = std::log(4.0 / 3.0) + 1.0;
  const double idf_b = std::log(4.0 / 2.0) + 1.0;
  EXPECT_NEAR(t[*v.index_of("a")], 2.0 * idf_a, 1e-15);
  EXPECT_NEAR(t[*v.index_of("b")], idf_b, 1e-15);
  EXPECT_EQ(t[*v.index_of("c")], 0.0);
  const auto f = v.features("a a b");
  double n2 = 0.0;
  for (double x : f) n2 += x * x;
  EXPECT_NEAR(n2, 1.0, 1e-15);
  for (double x : v.features("unknown words only")) EXPECT_EQ(x, 0.0);
}

TEST(KeywordCosine, HandValue) {
  const Point v{2.0, 1.0, 0.0};
  const std::vector<std::size_t> kw{0};
  EXPECT_NEAR(keyword_cosine(v, kw), 2.0 / std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(keyword_cosine(v, kw), 0.8944, 1e-4);
  EXPECT_EQ(keyword_cosine(Point{0.0, 0.0, 3.0}, kw), 0.0);
}

TEST(PseudoLabel, Examples) {
  const auto d = docs({"a a b", "b c", "c c", "a b c"});
  const auto v = build_vectorizer(std::span<const Document>(d), WeightScheme::tf, 1);
  const auto split = pseudo_label(KeywordSet({"a"}), d, v, 0.5);
  EXPECT_EQ(split.pos_ids, (std::vector<std::string>{"d0", "d3"}));
  EXPECT_EQ(split.neg_ids, (std::vector<std::string>{"d1", "d2"}));
  EXPECT_NEAR(split.cosine[0], 2.0 / std::sqrt(5.0), 1e-15);
  EXPECT_EQ(split.cosine[1], 0.0);
  EXPECT_EQ(split.pseudo_pos.origin, Origin::pseudo_pos);
  EXPECT_FALSE(split.pseudo_pos.hidden_labels.has_value());
  for (double c : split.cosine) {
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
  }
}

TEST(PseudoLabel, PartitionsInput) {
  const auto d = docs({"a x", "a y", "b x", "b y", "a a", "x y"});
  const auto v = build_vectorizer(std::span<const Document>(d), WeightScheme::tf_idf, 1);
  const auto split = pseudo_label(KeywordSet({"a"}), d, v, 0.2);
  EXPECT_EQ(split.pseudo_pos.size() + split.pseudo_neg.size(), d.size());
  std::set<std::string> all(split.pos_ids.begin(), split.pos_ids.end());
  for (const auto& id : split.neg_ids) EXPECT_TRUE(all.insert(id).second);
  EXPECT_EQ(all.size(), d.size());
}

TEST(PseudoLabel, Errors) {
  const auto d = docs({"a b", "b c"});
  const auto v = build_vectorizer(std::span<const Document>(d), WeightScheme::tf, 1);
  EXPECT_THROW(pseudo_label(KeywordSet({"zzz"}), d, v, 0.5), ConfigError);
  try {
    pseudo_label(KeywordSet({"a"}), d, v, 1.0);
    FAIL() << "expected DegenerateSplit";
  } catch (const DegenerateSplit& e) {
    EXPECT_EQ(e.tau(), 1.0);
    EXPECT_NE(std::string(e.what()).find("tau"), std::string::npos);
  }
  EXPECT_THROW(pseudo_label(KeywordSet({"a"}), d, v, 1.5), InvalidArgument);
}

TEST(PseudoLabel, HiddenLabelsPassThrough) {
  auto d = docs({"a a", "a b", "b b", "c"});
  const int labels[] = {1, -1, -1, 1};
  for (std::size_t i = 0; i < d.size(); ++i) d[i].hidden_label = labels[i];
  const auto v = build_vectorizer(std::span<const Document>(d), WeightScheme::tf, 1);
  const auto split = pseudo_label(KeywordSet({"a"}), d, v, 0.5);
  EXPECT_EQ(*split.pseudo_pos.hidden_labels, (std::vector<int>{1, -1}));
  EXPECT_EQ(*split.pseudo_neg.hidden_labels, (std::vector<int>{-1, 1}));
  EXPECT_DOUBLE_EQ(*split.pseudo_pos.positive_fraction(), 0.5);
}

TEST(CorpusJsonl, ParsesAndValidates) {
  std::istringstream in(
      "{\"id\": \"x1\", \"text\": \"hello\", \"split\": \"train\"}\n"
      "\n"
      "{\"id\": 7, \"text\": \"world\", \"label\": -1, \"split\": \"test\"}\n");
  const auto c = parse_corpus_jsonl(in);
  ASSERT_EQ(c.documents.size(), 2u);
  EXPECT_EQ(c.documents[1].id, "7");
  EXPECT_EQ(*c.documents[1].hidden_label, -1);
  EXPECT_EQ(c.documents[1].split, Split::test_labeled);
  EXPECT_EQ(c.slice(Split::train_unlabeled).size(), 1u);

  std::istringstream bad("{\"id\": \"a\", \"text\": \"t\"}\n{not json}\n");
  try {
    parse_corpus_jsonl(bad, "c.jsonl");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("c.jsonl:2"), std::string::npos);
  }
  std::istringstream dup("{\"id\": \"a\", \"text\": \"t\"}\n{\"id\": \"a\", \"text\": \"u\"}\n");
  EXPECT_THROW(parse_corpus_jsonl(dup), ConfigError);
  std::istringstream unlabeled_test("{\"id\": \"a\", \"text\": \"t\", \"split\": \"test\"}\n");
  EXPECT_THROW(parse_corpus_jsonl(unlabeled_test), ConfigError);
  std::istringstream bad_label("{\"id\": \"a\", \"text\": \"t\", \"label\": 0}\n");
  EXPECT_THROW(parse_corpus_jsonl(bad_label), ConfigError);
}

TEST(Keywords, MissingFileNamesPath) {
  try {
    load_keywords("/nonexistent/keywords.txt");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/keywords.txt"), std::string::npos);
  }
}
