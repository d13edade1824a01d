#pragma once

// Turning a ranking function into a classifier: choose beta so that the
// fraction of validation scores above beta matches a known class prior.  At
// that cut the number of predicted positives equals the number of true
// positives, which is the precision-recall breakeven point.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "symloss/errors.hpp"

namespace symloss {

enum class ThresholdMethod { breakeven_known_prior, heuristic_pseudo_ratio, default_zero };

inline std::string_view to_string(ThresholdMethod m) {
  switch (m) {
    case ThresholdMethod::breakeven_known_prior: return "breakeven_known_prior";
    case ThresholdMethod::heuristic_pseudo_ratio: return "heuristic_pseudo_ratio";
    case ThresholdMethod::default_zero: return "default_zero";
  }
  return "?";
}

struct ThresholdResult {
  double beta = 0.0;
  double achieved_positive_fraction = 0.0;
  ThresholdMethod method = ThresholdMethod::breakeven_known_prior;
  std::size_t k = 0;        // requested number of positives
  bool degenerate = false;  // all validation scores equal
};

namespace detail {

inline double fraction_above(std::span<const double> scores, double beta) {
  const auto above = std::count_if(scores.begin(), scores.end(), [&](double s) { return s > beta; });
  return static_cast<double>(above) / static_cast<double>(scores.size());
}

}  // namespace detail

/// k = round-half-up(prior * n); beta is the midpoint of the k-th and (k+1)-th
/// largest scores, one unit above the maximum for k = 0 and one unit below the
/// minimum for k = n.
inline ThresholdResult select_threshold(std::span<const double> scores_validation,
                                        double target_prior) {
  if (scores_validation.empty()) throw InvalidArgument("select_threshold: no validation scores");
  if (!(target_prior > 0.0 && target_prior < 1.0))
    throw InvalidArgument("select_threshold: prior must lie in (0, 1)");
  for (double s : scores_validation)
    if (!std::isfinite(s)) throw InvalidArgument("select_threshold: non-finite score");

  std::vector<double> sorted(scores_validation.begin(), scores_validation.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const std::size_t n = sorted.size();

  ThresholdResult r;
  r.method = ThresholdMethod::breakeven_known_prior;
  r.k = std::min(n, static_cast<std::size_t>(std::floor(target_prior * static_cast<double>(n) + 0.5)));

  if (r.k == 0) {
    r.beta = sorted.front() + 1.0;
  } else if (r.k == n) {
    r.beta = sorted.back() - 1.0;
  } else if (sorted.front() == sorted.back()) {
    // No cut separates equal scores; keep everything positive and say so.
    r.degenerate = true;
    r.beta = sorted.back() - 1.0;
  } else {
    r.beta = 0.5 * (sorted[r.k - 1] + sorted[r.k]);
  }
  r.achieved_positive_fraction = detail::fraction_above(scores_validation, r.beta);
  return r;
}

/// Prior estimated as n_pseudo_pos / n_unlabeled.
inline ThresholdResult heuristic_threshold(std::size_t n_pseudo_pos, std::size_t n_unlabeled,
                                           std::span<const double> scores_validation) {
  if (n_pseudo_pos == 0 || n_pseudo_pos >= n_unlabeled)
    throw InvalidArgument("heuristic_threshold: need 0 < n_pseudo_pos < n_unlabeled");
  auto r = select_threshold(scores_validation,
                            static_cast<double>(n_pseudo_pos) / static_cast<double>(n_unlabeled));
  r.method = ThresholdMethod::heuristic_pseudo_ratio;
  return r;
}

inline ThresholdResult default_threshold(std::span<const double> scores_validation) {
  ThresholdResult r;
  r.method = ThresholdMethod::default_zero;
  r.beta = 0.0;
  if (!scores_validation.empty())
    r.achieved_positive_fraction = detail::fraction_above(scores_validation, 0.0);
  return r;
}

/// +1 iff score > beta.
inline int classify_score(double score, double beta) { return score > beta ? 1 : -1; }

template <class G, class X>
int classify(const G& g, double beta, const X& x) {
  return classify_score(static_cast<double>(g(x)), beta);
}

inline std::vector<int> classify_scores(std::span<const double> scores, double beta) {
  std::vector<int> out;
  out.reserve(scores.size());
  for (double s : scores) out.push_back(classify_score(s, beta));
  return out;
}

}  // namespace symloss
