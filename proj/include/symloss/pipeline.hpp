#pragma once

// Learning from relevant keywords and unlabeled documents:
//   pseudo-label -> AUC maximisation on the pseudo split -> threshold -> evaluate.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "symloss/errors.hpp"
#include "symloss/risk.hpp"
#include "symloss/scorer.hpp"
#include "symloss/text.hpp"
#include "symloss/threshold.hpp"
#include "symloss/trainer.hpp"

namespace symloss {

struct PipelineConfig {
  double tau = 0.15;
  WeightScheme scheme = WeightScheme::tf_idf;
  std::size_t min_doc_freq = 2;
  TrainConfig train = [] {
    TrainConfig t;
    t.objective = Objective::auc;
    t.loss = LossKind::sigmoid;
    return t;
  }();
  ThresholdMethod threshold_method = ThresholdMethod::breakeven_known_prior;
  std::optional<double> prior;  // p(y=+1) of the unlabeled documents, if known
};

struct TestMetrics {
  std::size_t n_test = 0;
  std::size_t n_test_pos = 0;
  double auc = 0.0;
  ClassificationMetrics at_threshold;
  // Threshold picked on the test scores themselves with the test prior known:
  // the setting in which precision and recall meet.
  ThresholdResult test_breakeven_threshold;
  ClassificationMetrics at_test_breakeven;
};

struct ThresholdOutcome {
  ThresholdResult threshold;
  ClassificationMetrics metrics;
};

struct PipelineReport {
  std::size_t n_pseudo_pos = 0;
  std::size_t n_pseudo_neg = 0;
  std::optional<double> empirical_pi_pos;
  std::optional<double> empirical_pi_neg;
  bool guarantee_holds = false;  // empirical pi_P > pi_N
  std::size_t vocabulary_size = 0;
  std::string loss;
  double tau = 0.0;
  TrainTrace trace;
  ThresholdResult threshold;
  std::optional<TestMetrics> test;
  // Every threshold method that could be evaluated, applied to the same ranker.
  std::map<std::string, ThresholdOutcome> threshold_comparison;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<double> score_documents(const Scorer& g, const Vectorizer& vec,
                                           std::span<const Document> docs) {
  std::vector<double> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(g.score(vec.features(d.text)));
  return out;
}

}  // namespace detail

inline PipelineReport run_pipeline(const Corpus& corpus, const KeywordSet& keywords,
                                   const PipelineConfig& cfg) {
  corpus.validate();
  const auto train_docs = corpus.slice(Split::train_unlabeled);
  auto valid_docs = corpus.slice(Split::validation_unlabeled);
  const auto test_docs = corpus.slice(Split::test_labeled);
  if (train_docs.empty()) throw ConfigError("pipeline: corpus has no train_unlabeled documents");

  const LossSpec& loss = loss_spec(cfg.train.loss);
  PipelineReport report{.loss = std::string(loss.name), .tau = cfg.tau,
                        .trace = {{}, Scorer::linear(1), 0, cfg.train}};
  if (!loss.symmetric())
    report.warnings.push_back("loss '" + std::string(loss.name) +
                              "' is not symmetric; corrupted and clean AUC minimizers may differ");

  const Vectorizer vec = build_vectorizer(std::span<const Document>(train_docs), cfg.scheme,
                                          cfg.min_doc_freq);
  report.vocabulary_size = vec.size();

  PseudoSplit split = pseudo_label(keywords, train_docs, vec, cfg.tau);
  report.n_pseudo_pos = split.pseudo_pos.size();
  report.n_pseudo_neg = split.pseudo_neg.size();
  report.empirical_pi_pos = split.pseudo_pos.positive_fraction();
  report.empirical_pi_neg = split.pseudo_neg.positive_fraction();
  if (report.empirical_pi_pos && report.empirical_pi_neg) {
    report.guarantee_holds = *report.empirical_pi_pos > *report.empirical_pi_neg;
    if (!report.guarantee_holds)
      report.warnings.push_back(
          "WARNING: pseudo-labeling gives pi_P <= pi_N; the corrupted-label guarantee is void");
  }

  report.trace = train_auc(split.pseudo_pos, split.pseudo_neg, cfg.train);
  const Scorer& g = report.trace.final_scorer;

  if (valid_docs.empty()) {
    valid_docs = train_docs;
    report.warnings.push_back("no validation_unlabeled documents; thresholding on train documents");
  }
  const auto valid_scores = detail::score_documents(g, vec, valid_docs);

  std::map<std::string, ThresholdResult> candidates;
  candidates.emplace(to_string(ThresholdMethod::default_zero), default_threshold(valid_scores));
  candidates.emplace(to_string(ThresholdMethod::heuristic_pseudo_ratio),
                     heuristic_threshold(split.pseudo_pos.size(), train_docs.size(), valid_scores));
  if (cfg.prior) {
    candidates.emplace(to_string(ThresholdMethod::breakeven_known_prior),
                       select_threshold(valid_scores, *cfg.prior));
    report.warnings.push_back(
        "threshold assumes the test class prior equals the unlabeled prior; under class-prior "
        "shift prefer AUC or BER");
  } else if (cfg.threshold_method == ThresholdMethod::breakeven_known_prior) {
    throw ConfigError("threshold method 'breakeven' requires a known prior");
  }
  report.threshold = candidates.at(std::string(to_string(cfg.threshold_method)));

  if (!test_docs.empty()) {
    const auto scores = detail::score_documents(g, vec, test_docs);
    std::vector<int> truth;
    std::vector<double> sp, sn;
    for (std::size_t i = 0; i < test_docs.size(); ++i) {
      truth.push_back(*test_docs[i].hidden_label);
      (truth.back() > 0 ? sp : sn).push_back(scores[i]);
    }
    TestMetrics tm;
    tm.n_test = test_docs.size();
    tm.n_test_pos = sp.size();
    if (sp.empty() || sn.empty())
      report.warnings.push_back("test split contains a single class; AUC undefined");
    else
      tm.auc = auc_score(sp, sn);
    tm.at_threshold = classification_metrics(classify_scores(scores, report.threshold.beta), truth);
    if (!sp.empty() && !sn.empty()) {
      tm.test_breakeven_threshold =
          select_threshold(scores, static_cast<double>(sp.size()) / static_cast<double>(scores.size()));
      tm.at_test_breakeven =
          classification_metrics(classify_scores(scores, tm.test_breakeven_threshold.beta), truth);
    }
    for (const auto& [name, thr] : candidates)
      report.threshold_comparison[name] = {thr,
                                           classification_metrics(classify_scores(scores, thr.beta), truth)};
    report.test = tm;
  }
  return report;
}

}  // namespace symloss
