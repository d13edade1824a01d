#pragma once

// Empirical and exact surrogate risks (CER, BER, AUC), the corrupted-risk
// decompositions and the usual evaluation metrics.
//
// Exact risks live on a DiscreteBinaryDistribution; the prediction function
// enters only through its scores on the support, so every exact routine takes
// `support_scores[i] = g(support[i])`.  Overloads accepting a callable g are
// provided for convenience.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "symloss/distributions.hpp"
#include "symloss/errors.hpp"
#include "symloss/loss.hpp"

namespace symloss {

struct RiskReport {
  double value = 0.0;
  std::map<std::string, double> components;
  std::map<std::string, std::string> meta;
};

// lhs: corrupted risk computed from the contaminated densities.
// rhs: (pi_P - pi_N) * clean risk + excess terms.
struct DecompositionCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double clean_risk = 0.0;
  double excess = 0.0;
  std::map<std::string, double> components;
  std::map<std::string, std::string> meta;
};

namespace detail {

inline std::string fmt_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void require_non_empty(std::span<const double> a, std::span<const double> b,
                              const char* what) {
  if (a.empty() || b.empty()) throw InvalidArgument(std::string(what) + ": empty sample set");
}

inline void require_scores(const DiscreteBinaryDistribution& dist,
                           std::span<const double> scores) {
  dist.validate();
  if (scores.size() != dist.size())
    throw InvalidArgument("support_scores must have one entry per support point");
}

// sum_i w_i * l(sign * s_i)
inline double weighted_loss(const LossSpec& loss, std::span<const double> w,
                            std::span<const double> s, double sign) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (w[i] != 0.0) acc += w[i] * eval_loss(loss, sign * s[i]);
  return acc;
}

// sum_i sum_j a_i b_j l(s_i - s_j)
inline double weighted_pair_loss(const LossSpec& loss, std::span<const double> a,
                                 std::span<const double> b, std::span<const double> s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (a[i] == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j)
      if (b[j] != 0.0) row += b[j] * eval_loss(loss, s[i] - s[j]);
    acc += a[i] * row;
  }
  return acc;
}

// sum_i sum_j a_i b_j gamma(s_i, s_j),  gamma(z, z') = l(z - z') + l(z' - z)
inline double weighted_pair_gap(const LossSpec& loss, std::span<const double> a,
                                std::span<const double> b, std::span<const double> s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (a[i] == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j)
      if (b[j] != 0.0) row += b[j] * symmetry_gap(loss, s[i] - s[j]);
    acc += a[i] * row;
  }
  return acc;
}

inline double mean_loss(const LossSpec& loss, std::span<const double> s, double sign) {
  double acc = 0.0;
  for (double v : s) acc += eval_loss(loss, sign * v);
  return acc / static_cast<double>(s.size());
}

}  // namespace detail

template <class G>
std::vector<double> scores_on(const G& g, const std::vector<Point>& points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& x : points) out.push_back(static_cast<double>(g(x)));
  return out;
}

// ---------------------------------------------------------------------------
// Empirical risks

/// 1/2 [ mean_{pos} l(g(x)) + mean_{neg} l(-g(x)) ]
inline RiskReport empirical_ber_risk(const LossSpec& loss, std::span<const double> scores_pos,
                                     std::span<const double> scores_neg) {
  detail::require_non_empty(scores_pos, scores_neg, "empirical_ber_risk");
  RiskReport r;
  const double pos = detail::mean_loss(loss, scores_pos, +1.0);
  const double neg = detail::mean_loss(loss, scores_neg, -1.0);
  r.value = 0.5 * (pos + neg);
  r.components = {{"pos_term", pos}, {"neg_term", neg}};
  r.meta = {{"risk", "ber"},
            {"loss", std::string(loss.name)},
            {"n_pos", std::to_string(scores_pos.size())},
            {"n_neg", std::to_string(scores_neg.size())}};
  return r;
}

template <class G>
RiskReport empirical_ber_risk(const LossSpec& loss, const SampleSet& set_pos,
                              const SampleSet& set_neg, const G& g) {
  const auto sp = scores_on(g, set_pos.points);
  const auto sn = scores_on(g, set_neg.points);
  return empirical_ber_risk(loss, sp, sn);
}

inline constexpr std::uint64_t kExactPairLimit = 10'000'000;

/// (1 / (n_p n_n)) sum_i sum_j l(g(x_i) - g(x_j)).  Exact below `pair_limit`
/// pairs; above it `pair_limit` pairs are drawn uniformly with replacement.
inline RiskReport empirical_auc_risk(const LossSpec& loss, std::span<const double> scores_pos,
                                     std::span<const double> scores_neg,
                                     std::uint64_t pair_limit = kExactPairLimit,
                                     std::uint64_t seed = 0) {
  detail::require_non_empty(scores_pos, scores_neg, "empirical_auc_risk");
  const std::uint64_t pairs =
      static_cast<std::uint64_t>(scores_pos.size()) * static_cast<std::uint64_t>(scores_neg.size());
  RiskReport r;
  r.meta = {{"risk", "auc"},
            {"loss", std::string(loss.name)},
            {"n_pos", std::to_string(scores_pos.size())},
            {"n_neg", std::to_string(scores_neg.size())}};
  double total = 0.0;
  std::uint64_t used = 0;
  if (pairs <= pair_limit) {
    for (double sp : scores_pos) {
      double row = 0.0;
      for (double sn : scores_neg) row += eval_loss(loss, sp - sn);
      total += row;
    }
    used = pairs;
    r.meta["pairs"] = "exact";
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick_p(0, scores_pos.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_n(0, scores_neg.size() - 1);
    for (std::uint64_t k = 0; k < pair_limit; ++k) {
      const std::size_t i = pick_p(rng);
      total += eval_loss(loss, scores_pos[i] - scores_neg[pick_n(rng)]);
    }
    used = pair_limit;
    r.meta["pairs"] = "subsampled";
  }
  r.value = total / static_cast<double>(used);
  r.components = {{"pair_count", static_cast<double>(used)}};
  return r;
}

template <class G>
RiskReport empirical_auc_risk(const LossSpec& loss, const SampleSet& set_pos,
                              const SampleSet& set_neg, const G& g) {
  const auto sp = scores_on(g, set_pos.points);
  const auto sn = scores_on(g, set_neg.points);
  return empirical_auc_risk(loss, sp, sn);
}

// ---------------------------------------------------------------------------
// Exact risks on a finite support

inline RiskReport exact_ber_risk(const LossSpec& loss, const DiscreteBinaryDistribution& dist,
                                 std::span<const double> support_scores) {
  detail::require_scores(dist, support_scores);
  RiskReport r;
  const double pos = detail::weighted_loss(loss, dist.p_pos, support_scores, +1.0);
  const double neg = detail::weighted_loss(loss, dist.p_neg, support_scores, -1.0);
  r.value = 0.5 * (pos + neg);
  r.components = {{"pos_term", pos}, {"neg_term", neg}};
  r.meta = {{"risk", "ber"}, {"loss", std::string(loss.name)}, {"sizes", "exact"}};
  return r;
}

/// E_P E_N [ l(g(x_P) - g(x_N)) ]
inline RiskReport exact_auc_risk(const LossSpec& loss, const DiscreteBinaryDistribution& dist,
                                 std::span<const double> support_scores) {
  detail::require_scores(dist, support_scores);
  RiskReport r;
  r.value = detail::weighted_pair_loss(loss, dist.p_pos, dist.p_neg, support_scores);
  r.components = {{"pair_term", r.value}};
  r.meta = {{"risk", "auc"}, {"loss", std::string(loss.name)}, {"sizes", "exact"}};
  return r;
}

/// prior * E_P[l(g)] + (1 - prior) * E_N[l(-g)]
inline RiskReport exact_cer_risk(const LossSpec& loss, const DiscreteBinaryDistribution& dist,
                                 std::span<const double> support_scores) {
  detail::require_scores(dist, support_scores);
  RiskReport r;
  const double pos = detail::weighted_loss(loss, dist.p_pos, support_scores, +1.0);
  const double neg = detail::weighted_loss(loss, dist.p_neg, support_scores, -1.0);
  r.value = dist.class_prior * pos + (1.0 - dist.class_prior) * neg;
  r.components = {{"pos_term", pos}, {"neg_term", neg}, {"class_prior", dist.class_prior}};
  r.meta = {{"risk", "cer"}, {"loss", std::string(loss.name)}, {"sizes", "exact"}};
  return r;
}

template <class G>
  requires std::invocable<const G&, const Point&>
RiskReport exact_ber_risk(const LossSpec& loss, const DiscreteBinaryDistribution& dist,
                          const G& g) {
  return exact_ber_risk(loss, dist, scores_on(g, dist.support));
}
template <class G>
  requires std::invocable<const G&, const Point&>
RiskReport exact_auc_risk(const LossSpec& loss, const DiscreteBinaryDistribution& dist,
                          const G& g) {
  return exact_auc_risk(loss, dist, scores_on(g, dist.support));
}
template <class G>
  requires std::invocable<const G&, const Point&>
RiskReport exact_cer_risk(const LossSpec& loss, const DiscreteBinaryDistribution& dist,
                          const G& g) {
  return exact_cer_risk(loss, dist, scores_on(g, dist.support));
}

/// Corrupted BER risk: 1/2 [ E_{P~}[l(g)] + E_{N~}[l(-g)] ].
inline double corrupted_ber_risk(const LossSpec& loss, const DiscreteBinaryDistribution& dist,
                                 const McdParams& params, std::span<const double> support_scores) {
  detail::require_scores(dist, support_scores);
  const auto c = corrupt_distribution(dist, params);
  return 0.5 * (detail::weighted_loss(loss, c.pos, support_scores, +1.0) +
                detail::weighted_loss(loss, c.neg, support_scores, -1.0));
}

/// Corrupted AUC risk: E_{P~} E_{N~} [ l(g(x) - g(x')) ].
inline double corrupted_auc_risk(const LossSpec& loss, const DiscreteBinaryDistribution& dist,
                                 const McdParams& params, std::span<const double> support_scores) {
  detail::require_scores(dist, support_scores);
  const auto c = corrupt_distribution(dist, params);
  return detail::weighted_pair_loss(loss, c.pos, c.neg, support_scores);
}

/// K (1 - pi_P + pi_N) / 2: the constant excess of any symmetric loss.
inline std::optional<double> symmetric_excess(const LossSpec& loss, const McdParams& params) {
  if (!loss.symmetry_constant) return std::nullopt;
  return *loss.symmetry_constant * (1.0 - params.pi_pos() + params.pi_neg()) / 2.0;
}

inline DecompositionCheck ber_decomposition_check(const LossSpec& loss,
                                                  const DiscreteBinaryDistribution& dist,
                                                  std::span<const double> support_scores,
                                                  const McdParams& params) {
  DecompositionCheck d;
  d.lhs = corrupted_ber_risk(loss, dist, params, support_scores);
  d.clean_risk = exact_ber_risk(loss, dist, support_scores).value;

  double gap_pos = 0.0;
  double gap_neg = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double gamma = symmetry_gap(loss, support_scores[i]);
    gap_pos += dist.p_pos[i] * gamma;
    gap_neg += dist.p_neg[i] * gamma;
  }
  d.excess = 0.5 * (params.pi_neg() * gap_pos + (1.0 - params.pi_pos()) * gap_neg);
  d.rhs = params.purity_gap() * d.clean_risk + d.excess;
  d.residual = std::abs(d.lhs - d.rhs);
  d.components = {{"clean_risk", d.clean_risk},
                  {"excess", d.excess},
                  {"expected_gap_pos", gap_pos},
                  {"expected_gap_neg", gap_neg}};
  if (auto k = symmetric_excess(loss, params)) d.components["symmetric_excess"] = *k;
  d.meta = {{"risk", "ber"},
            {"loss", std::string(loss.name)},
            {"pi_corr_pos", detail::fmt_real(params.pi_pos())},
            {"pi_corr_neg", detail::fmt_real(params.pi_neg())},
            {"sizes", "exact"}};
  return d;
}

inline DecompositionCheck auc_decomposition_check(const LossSpec& loss,
                                                  const DiscreteBinaryDistribution& dist,
                                                  std::span<const double> support_scores,
                                                  const McdParams& params) {
  DecompositionCheck d;
  d.lhs = corrupted_auc_risk(loss, dist, params, support_scores);
  d.clean_risk = exact_auc_risk(loss, dist, support_scores).value;

  const double a = params.pi_pos();
  const double b = params.pi_neg();
  const double pn = (1.0 - a) * b * detail::weighted_pair_gap(loss, dist.p_pos, dist.p_neg, support_scores);
  const double pp = a * b / 2.0 * detail::weighted_pair_gap(loss, dist.p_pos, dist.p_pos, support_scores);
  const double nn = (1.0 - a) * (1.0 - b) / 2.0 *
                    detail::weighted_pair_gap(loss, dist.p_neg, dist.p_neg, support_scores);
  d.excess = pn + pp + nn;
  d.rhs = params.purity_gap() * d.clean_risk + d.excess;
  d.residual = std::abs(d.lhs - d.rhs);
  d.components = {{"clean_risk", d.clean_risk},
                  {"excess", d.excess},
                  {"excess_pos_neg", pn},
                  {"excess_pos_pos", pp},
                  {"excess_neg_neg", nn}};
  if (auto k = symmetric_excess(loss, params)) d.components["symmetric_excess"] = *k;
  d.meta = {{"risk", "auc"},
            {"loss", std::string(loss.name)},
            {"pi_corr_pos", detail::fmt_real(a)},
            {"pi_corr_neg", detail::fmt_real(b)},
            {"sizes", "exact"}};
  return d;
}

template <class G>
  requires std::invocable<const G&, const Point&>
DecompositionCheck ber_decomposition_check(const LossSpec& loss,
                                           const DiscreteBinaryDistribution& dist, const G& g,
                                           const McdParams& params) {
  const auto s = scores_on(g, dist.support);
  return ber_decomposition_check(loss, dist, std::span<const double>(s), params);
}
template <class G>
  requires std::invocable<const G&, const Point&>
DecompositionCheck auc_decomposition_check(const LossSpec& loss,
                                           const DiscreteBinaryDistribution& dist, const G& g,
                                           const McdParams& params) {
  const auto s = scores_on(g, dist.support);
  return auc_decomposition_check(loss, dist, std::span<const double>(s), params);
}

// ---------------------------------------------------------------------------
// Metrics

// Wilcoxon-Mann-Whitney AUC with ties counted as 1/2.  Sorting the negative
// scores once and binary-searching each positive gives O((n_p + n_n) log n_n);
// the statistic is accumulated as the integer 2 * wins + ties so that the
// result is bit-identical to pair enumeration.
inline double auc_score(std::span<const double> scores_pos, std::span<const double> scores_neg) {
  detail::require_non_empty(scores_pos, scores_neg, "auc_score");
  std::vector<double> neg(scores_neg.begin(), scores_neg.end());
  std::sort(neg.begin(), neg.end());
  std::uint64_t twice = 0;
  for (double s : scores_pos) {
    const auto lo = std::lower_bound(neg.begin(), neg.end(), s);
    const auto hi = std::upper_bound(lo, neg.end(), s);
    twice += 2 * static_cast<std::uint64_t>(lo - neg.begin()) + static_cast<std::uint64_t>(hi - lo);
  }
  return static_cast<double>(twice) /
         (2.0 * static_cast<double>(scores_pos.size()) * static_cast<double>(scores_neg.size()));
}

struct ClassificationMetrics {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double cer = 0.0;
  double precision = 0.0;           // 0 when nothing is predicted positive
  std::optional<double> recall;     // undefined without true positives
  std::optional<double> f1;         // undefined for single-class truth
  std::optional<double> ber;        // undefined for single-class truth
};

inline ClassificationMetrics classification_metrics(std::span<const int> predicted,
                                                    std::span<const int> truth) {
  if (predicted.size() != truth.size())
    throw InvalidArgument("classification_metrics: length mismatch");
  if (truth.empty()) throw InvalidArgument("classification_metrics: empty input");
  ClassificationMetrics m;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool p = predicted[i] > 0;
    const bool t = truth[i] > 0;
    if (p && t) ++m.tp;
    else if (p && !t) ++m.fp;
    else if (!p && t) ++m.fn;
    else ++m.tn;
  }
  const double n = static_cast<double>(truth.size());
  m.cer = static_cast<double>(m.fp + m.fn) / n;
  m.precision = (m.tp + m.fp) == 0 ? 0.0 : double(m.tp) / double(m.tp + m.fp);
  const std::size_t positives = m.tp + m.fn;
  const std::size_t negatives = m.tn + m.fp;
  if (positives > 0) m.recall = double(m.tp) / double(positives);
  if (positives > 0 && negatives > 0) {
    const double fnr = double(m.fn) / double(positives);
    const double fpr = double(m.fp) / double(negatives);
    m.ber = 0.5 * (fnr + fpr);
    const double pr = m.precision + *m.recall;
    m.f1 = pr == 0.0 ? 0.0 : 2.0 * m.precision * *m.recall / pr;
  }
  return m;
}

}  // namespace symloss
