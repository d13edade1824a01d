#pragma once

// File formats: corpus JSONL, keyword lists, and JSON views of the reports.
// Requires nlohmann/json (vendored as json.hpp).

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "symloss/errors.hpp"
#include "symloss/pipeline.hpp"
#include "symloss/risk.hpp"
#include "symloss/text.hpp"
#include "symloss/threshold.hpp"
#include "symloss/trainer.hpp"

namespace symloss {

using json = nlohmann::ordered_json;

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("file not found: " + path.string());
  return in;
}

// One document per line: {"id": ..., "text": ..., "label": +1|-1 (optional),
// "split": "train"|"validation"|"test"}.  Blank lines are skipped.
inline Corpus parse_corpus_jsonl(std::istream& in, const std::string& source = "<stream>") {
  Corpus corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = source + ":" + std::to_string(lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ConfigError(where + ": " + e.what());
    }
    if (!j.contains("id") || !j.contains("text"))
      throw ConfigError(where + ": document needs 'id' and 'text'");
    Document d;
    d.id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
    d.text = j["text"].get<std::string>();
    if (j.contains("label") && !j["label"].is_null()) {
      const int label = j["label"].get<int>();
      if (label != 1 && label != -1) throw ConfigError(where + ": label must be +1 or -1");
      d.hidden_label = label;
    }
    d.split = j.contains("split") ? parse_split(j["split"].get<std::string>()) : Split::train_unlabeled;
    corpus.documents.push_back(std::move(d));
  }
  corpus.validate();
  return corpus;
}

inline Corpus load_corpus_jsonl(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_corpus_jsonl(in, path.string());
}

// One keyword per line; '#' starts a comment line.
inline KeywordSet load_keywords(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    words.push_back(line);
  }
  return KeywordSet(words);
}

inline json to_json(const RiskReport& r) {
  return {{"value", r.value}, {"components", r.components}, {"meta", r.meta}};
}

inline json to_json(const DecompositionCheck& d) {
  return {{"value", d.lhs},
          {"lhs", d.lhs},
          {"rhs", d.rhs},
          {"residual", d.residual},
          {"components", d.components},
          {"meta", d.meta}};
}

inline json to_json(const ThresholdResult& t) {
  return {{"beta", t.beta},
          {"achieved_positive_fraction", t.achieved_positive_fraction},
          {"method", to_string(t.method)},
          {"k", t.k},
          {"degenerate", t.degenerate}};
}

inline json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline json to_json(const ClassificationMetrics& m) {
  return {{"cer", m.cer},
          {"ber", optional_json(m.ber)},
          {"precision", m.precision},
          {"recall", optional_json(m.recall)},
          {"f1", optional_json(m.f1)},
          {"tp", m.tp},
          {"fp", m.fp},
          {"tn", m.tn},
          {"fn", m.fn}};
}

inline json to_json(const TrainConfig& c) {
  return {{"objective", to_string(c.objective)},
          {"loss", loss_spec(c.loss).name},
          {"step_size", c.step_size},
          {"optimizer", to_string(c.optimizer)},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"epsilon", c.epsilon},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"pair_batch", c.pair_batch},
          {"seed", c.seed},
          {"weight_decay", c.weight_decay},
          {"scorer", to_string(c.scorer)},
          {"hidden", c.hidden}};
}

inline json to_json(const Scorer& g) {
  return {{"kind", to_string(g.kind())},
          {"dimension", g.dimension()},
          {"hidden", g.hidden()},
          {"parameters", std::vector<double>(g.parameters().begin(), g.parameters().end())}};
}

inline json to_json(const TrainTrace& t) {
  return {{"seed", t.seed},
          {"config", to_json(t.config)},
          {"objective", t.objective},
          {"scorer", to_json(t.final_scorer)}};
}

inline json to_json(const PipelineReport& r) {
  json j = {{"loss", r.loss},
            {"tau", r.tau},
            {"vocabulary_size", r.vocabulary_size},
            {"n_pseudo_pos", r.n_pseudo_pos},
            {"n_pseudo_neg", r.n_pseudo_neg},
            {"empirical_pi_pos", optional_json(r.empirical_pi_pos)},
            {"empirical_pi_neg", optional_json(r.empirical_pi_neg)},
            {"guarantee_holds", r.guarantee_holds},
            {"threshold", to_json(r.threshold)},
            {"final_objective", r.trace.objective.empty() ? json(nullptr) : json(r.trace.objective.back())},
            {"warnings", r.warnings}};
  if (r.test) {
    j["test"] = {{"n_test", r.test->n_test},
                 {"n_test_pos", r.test->n_test_pos},
                 {"auc", r.test->auc},
                 {"metrics", to_json(r.test->at_threshold)},
                 {"breakeven_on_test",
                  {{"threshold", to_json(r.test->test_breakeven_threshold)},
                   {"metrics", to_json(r.test->at_test_breakeven)}}}};
    json cmp = json::object();
    for (const auto& [name, o] : r.threshold_comparison)
      cmp[name] = {{"threshold", to_json(o.threshold)}, {"metrics", to_json(o.metrics)}};
    j["threshold_comparison"] = cmp;
  } else {
    j["test"] = nullptr;
  }
  return j;
}

inline void write_trace_csv(std::ostream& out, const TrainTrace& t) {
  out << "epoch,objective\n";
  char buf[64];
  for (std::size_t e = 0; e < t.objective.size(); ++e) {
    std::snprintf(buf, sizeof buf, "%zu,%.12g\n", e + 1, t.objective[e]);
    out << buf;
  }
}

}  // namespace symloss
