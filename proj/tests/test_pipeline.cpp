#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "symloss/io.hpp"
#include "symloss/pipeline.hpp"

using namespace symloss;

namespace {

const std::string kData = SYMLOSS_DATA_DIR;

Corpus mini_corpus() { return load_corpus_jsonl(kData + "/mini_corpus.jsonl"); }
KeywordSet mini_keywords() { return load_keywords(kData + "/keywords.txt"); }

double true_prior(const Corpus& c, Split s) {
  const auto docs = c.slice(s);
  double pos = 0;
  for (const auto& d : docs) pos += *d.hidden_label > 0;
  return pos / double(docs.size());
}

PipelineConfig base_config(const Corpus& c) {
  PipelineConfig cfg;
  cfg.train.seed = 1;
  cfg.train.epochs = 40;
  cfg.prior = true_prior(c, Split::validation_unlabeled);
  return cfg;
}

}  // namespace

TEST(Pipeline, BundledCorpusRegression) {
  const auto corpus = mini_corpus();
  const auto report = run_pipeline(corpus, mini_keywords(), base_config(corpus));
  ASSERT_TRUE(report.test.has_value());
  EXPECT_GT(report.test->auc, 0.5);
  ASSERT_TRUE(report.empirical_pi_pos && report.empirical_pi_neg);
  EXPECT_GT(*report.empirical_pi_pos, *report.empirical_pi_neg);
  EXPECT_TRUE(report.guarantee_holds);
  const auto& cmp = report.threshold_comparison;
  EXPECT_GE(*cmp.at("breakeven_known_prior").metrics.f1, *cmp.at("default_zero").metrics.f1);
  EXPECT_EQ(report.n_pseudo_pos + report.n_pseudo_neg, corpus.slice(Split::train_unlabeled).size());
}

TEST(Pipeline, BreakevenOnTestSplit) {
  const auto corpus = mini_corpus();
  const auto report = run_pipeline(corpus, mini_keywords(), base_config(corpus));
  ASSERT_TRUE(report.test.has_value());
  const auto& m = report.test->at_test_breakeven;
  EXPECT_LE(std::abs(m.precision - *m.recall), 1.0 / double(report.test->n_test_pos));
  EXPECT_EQ(m.tp + m.fp, report.test->n_test_pos);
}

TEST(Pipeline, Deterministic) {
  const auto corpus = mini_corpus();
  const auto cfg = base_config(corpus);
  const auto a = run_pipeline(corpus, mini_keywords(), cfg);
  const auto b = run_pipeline(corpus, mini_keywords(), cfg);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(Pipeline, WarnsForNonSymmetricLoss) {
  const auto corpus = mini_corpus();
  auto cfg = base_config(corpus);
  cfg.train.loss = LossKind::logistic;
  const auto report = run_pipeline(corpus, mini_keywords(), cfg);
  bool found = false;
  for (const auto& w : report.warnings) found |= w.find("not symmetric") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(Pipeline, ConfigurationErrors) {
  const auto corpus = mini_corpus();
  auto cfg = base_config(corpus);
  EXPECT_THROW(run_pipeline(corpus, KeywordSet({"zebra", "xylophone"}), cfg), ConfigError);
  cfg.prior.reset();
  EXPECT_THROW(run_pipeline(corpus, mini_keywords(), cfg), ConfigError);
  cfg.threshold_method = ThresholdMethod::default_zero;
  EXPECT_NO_THROW(run_pipeline(corpus, mini_keywords(), cfg));
}

TEST(Pipeline, NoTestSplitMeansNoMetrics) {
  auto corpus = mini_corpus();
  std::erase_if(corpus.documents, [](const Document& d) { return d.split == Split::test_labeled; });
  auto cfg = base_config(mini_corpus());
  const auto report = run_pipeline(corpus, mini_keywords(), cfg);
  EXPECT_FALSE(report.test.has_value());
  EXPECT_TRUE(report.threshold_comparison.empty());
  EXPECT_TRUE(to_json(report)["test"].is_null());
}

TEST(Pipeline, JsonFields) {
  const auto corpus = mini_corpus();
  const auto j = to_json(run_pipeline(corpus, mini_keywords(), base_config(corpus)));
  for (const char* key : {"loss", "tau", "n_pseudo_pos", "n_pseudo_neg", "empirical_pi_pos",
                          "empirical_pi_neg", "guarantee_holds", "threshold", "test", "warnings"})
    EXPECT_TRUE(j.contains(key)) << key;
  for (const char* key : {"auc", "metrics", "breakeven_on_test"}) EXPECT_TRUE(j["test"].contains(key)) << key;
}
