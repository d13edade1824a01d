#pragma once

// Documents, keywords, bag-of-words vectorisation and keyword pseudo-labeling.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "symloss/distributions.hpp"
#include "symloss/errors.hpp"

namespace symloss {

enum class Split { train_unlabeled, validation_unlabeled, test_labeled };

inline std::string_view to_string(Split s) {
  switch (s) {
    case Split::train_unlabeled: return "train_unlabeled";
    case Split::validation_unlabeled: return "validation_unlabeled";
    case Split::test_labeled: return "test_labeled";
  }
  return "?";
}

inline Split parse_split(std::string_view s) {
  if (s == "train" || s == "train_unlabeled") return Split::train_unlabeled;
  if (s == "validation" || s == "valid" || s == "validation_unlabeled")
    return Split::validation_unlabeled;
  if (s == "test" || s == "test_labeled") return Split::test_labeled;
  throw ConfigError("unknown split '" + std::string(s) + "'");
}

struct Document {
  std::string id;
  std::string text;
  std::optional<int> hidden_label;  // +1 / -1, evaluation only
  Split split = Split::train_unlabeled;
};

struct Corpus {
  std::vector<Document> documents;

  void validate() const {
    std::set<std::string_view> ids;
    for (const auto& d : documents) {
      if (!ids.insert(d.id).second) throw ConfigError("duplicate document id '" + d.id + "'");
      if (d.split == Split::test_labeled && !d.hidden_label)
        throw ConfigError("test document '" + d.id + "' has no label");
      if (d.hidden_label && *d.hidden_label != 1 && *d.hidden_label != -1)
        throw ConfigError("document '" + d.id + "' label must be +1 or -1");
    }
  }

  std::vector<Document> slice(Split s) const {
    std::vector<Document> out;
    std::copy_if(documents.begin(), documents.end(), std::back_inserter(out),
                 [&](const Document& d) { return d.split == s; });
    return out;
  }
};

/// Lowercase, split on runs of ASCII non-alphanumerics.  Bytes >= 0x80 are
/// kept inside tokens so UTF-8 words survive intact.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 0x80 || std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

class KeywordSet {
 public:
  explicit KeywordSet(const std::vector<std::string>& words) {
    std::set<std::string> seen;
    for (const auto& w : words)
      for (auto& tok : tokenize(w))
        if (seen.insert(tok).second) words_.push_back(tok);
    if (words_.empty()) throw ConfigError("keyword set is empty");
  }

  const std::vector<std::string>& words() const noexcept { return words_; }

 private:
  std::vector<std::string> words_;
};

enum class WeightScheme { tf, tf_idf };

inline std::string_view to_string(WeightScheme s) { return s == WeightScheme::tf ? "tf" : "tf_idf"; }

inline WeightScheme parse_scheme(std::string_view s) {
  if (s == "tf") return WeightScheme::tf;
  if (s == "tf_idf" || s == "tfidf" || s == "tf-idf") return WeightScheme::tf_idf;
  throw ConfigError("unknown weighting scheme '" + std::string(s) + "'");
}

class Vectorizer {
 public:
  Vectorizer(std::vector<std::string> vocabulary, std::vector<std::size_t> document_frequency,
             std::size_t n_documents, WeightScheme scheme, std::size_t min_doc_freq)
      : vocabulary_(std::move(vocabulary)),
        document_frequency_(std::move(document_frequency)),
        n_documents_(n_documents),
        scheme_(scheme),
        min_doc_freq_(min_doc_freq) {
    for (std::size_t i = 0; i < vocabulary_.size(); ++i) index_.emplace(vocabulary_[i], i);
    idf_.reserve(vocabulary_.size());
    for (std::size_t df : document_frequency_)
      idf_.push_back(std::log((1.0 + double(n_documents_)) / (1.0 + double(df))) + 1.0);
  }

  std::size_t size() const noexcept { return vocabulary_.size(); }
  const std::vector<std::string>& vocabulary() const noexcept { return vocabulary_; }
  const std::vector<std::size_t>& document_frequency() const noexcept { return document_frequency_; }
  WeightScheme scheme() const noexcept { return scheme_; }
  std::size_t min_doc_freq() const noexcept { return min_doc_freq_; }

  std::optional<std::size_t> index_of(const std::string& token) const {
    auto it = index_.find(token);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Raw term weights (counts, or counts * idf) over the vocabulary.
  Point transform(std::string_view text) const {
    Point v(vocabulary_.size(), 0.0);
    for (const auto& tok : tokenize(text))
      if (auto i = index_of(tok)) v[*i] += 1.0;
    if (scheme_ == WeightScheme::tf_idf)
      for (std::size_t i = 0; i < v.size(); ++i) v[i] *= idf_[i];
    return v;
  }

  /// transform() scaled to unit Euclidean norm (zero vector stays zero).
  Point features(std::string_view text) const {
    Point v = transform(text);
    double n2 = 0.0;
    for (double x : v) n2 += x * x;
    if (n2 > 0.0) {
      const double inv = 1.0 / std::sqrt(n2);
      for (double& x : v) x *= inv;
    }
    return v;
  }

 private:
  std::vector<std::string> vocabulary_;
  std::vector<std::size_t> document_frequency_;
  std::size_t n_documents_;
  WeightScheme scheme_;
  std::size_t min_doc_freq_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> idf_;
};

/// Vocabulary = tokens with document frequency >= min_doc_freq, ordered by
/// (frequency desc, token asc).
inline Vectorizer build_vectorizer(std::span<const Document> documents, WeightScheme scheme,
                                   std::size_t min_doc_freq) {
  if (documents.empty()) throw InvalidArgument("build_vectorizer: empty corpus");
  std::map<std::string, std::size_t> df;
  for (const auto& doc : documents) {
    auto toks = tokenize(doc.text);
    std::sort(toks.begin(), toks.end());
    toks.erase(std::unique(toks.begin(), toks.end()), toks.end());
    for (auto& t : toks) ++df[t];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [tok, count] : df)
    if (count >= min_doc_freq) kept.emplace_back(tok, count);
  if (kept.empty())
    throw ConfigError("vocabulary is empty after min_doc_freq=" + std::to_string(min_doc_freq));
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> vocab;
  std::vector<std::size_t> freq;
  for (auto& [tok, count] : kept) {
    vocab.push_back(tok);
    freq.push_back(count);
  }
  return {std::move(vocab), std::move(freq), documents.size(), scheme, min_doc_freq};
}

inline Vectorizer build_vectorizer(const Corpus& corpus, WeightScheme scheme,
                                   std::size_t min_doc_freq) {
  return build_vectorizer(std::span<const Document>(corpus.documents), scheme, min_doc_freq);
}

/// Cosine between a document's term vector and the binary keyword indicator.
/// Term weights are non-negative, so the value lies in [0, 1].
inline double keyword_cosine(const Point& doc_vector, std::span<const std::size_t> keyword_index) {
  double n2 = 0.0;
  for (double x : doc_vector) n2 += x * x;
  if (n2 == 0.0 || keyword_index.empty()) return 0.0;
  double dot = 0.0;
  for (std::size_t k : keyword_index) dot += doc_vector[k];
  return dot / (std::sqrt(n2) * std::sqrt(static_cast<double>(keyword_index.size())));
}

inline std::vector<std::size_t> keyword_indices(const KeywordSet& keywords,
                                                const Vectorizer& vectorizer) {
  std::vector<std::size_t> idx;
  for (const auto& w : keywords.words())
    if (auto i = vectorizer.index_of(w)) idx.push_back(*i);
  std::sort(idx.begin(), idx.end());
  if (idx.empty()) throw ConfigError("none of the keywords occur in the vocabulary");
  return idx;
}

struct PseudoSplit {
  SampleSet pseudo_pos;
  SampleSet pseudo_neg;
  std::vector<std::string> pos_ids;
  std::vector<std::string> neg_ids;
  std::vector<double> cosine;  // per input document, input order
};

/// Document is pseudo-positive iff cosine(doc, keywords) > tau.  Sample
/// points are the unit-normalised document features.
inline PseudoSplit pseudo_label(const KeywordSet& keywords, std::span<const Document> unlabeled,
                                const Vectorizer& vectorizer, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw InvalidArgument("tau must lie in [0, 1]");
  const auto kw = keyword_indices(keywords, vectorizer);
  const bool labeled = std::all_of(unlabeled.begin(), unlabeled.end(),
                                   [](const Document& d) { return d.hidden_label.has_value(); });
  PseudoSplit out;
  out.pseudo_pos.origin = Origin::pseudo_pos;
  out.pseudo_neg.origin = Origin::pseudo_neg;
  std::vector<int> pos_labels, neg_labels;
  for (const auto& doc : unlabeled) {
    const double c = keyword_cosine(vectorizer.transform(doc.text), kw);
    out.cosine.push_back(c);
    const bool positive = c > tau;
    auto& set = positive ? out.pseudo_pos : out.pseudo_neg;
    set.points.push_back(vectorizer.features(doc.text));
    (positive ? out.pos_ids : out.neg_ids).push_back(doc.id);
    if (labeled) (positive ? pos_labels : neg_labels).push_back(*doc.hidden_label);
  }
  if (out.pseudo_pos.empty() || out.pseudo_neg.empty())
    throw DegenerateSplit("pseudo-labeling with tau=" + std::to_string(tau) + " left the " +
                              (out.pseudo_pos.empty() ? "positive" : "negative") + " side empty",
                          tau);
  if (labeled) {
    out.pseudo_pos.hidden_labels = std::move(pos_labels);
    out.pseudo_neg.hidden_labels = std::move(neg_labels);
  }
  return out;
}

}  // namespace symloss
