#pragma once

// Mutually contaminated data model.
//
// Corrupted positives are drawn from  pi_P * p(x|+) + (1 - pi_P) * p(x|-)
// and corrupted negatives from        pi_N * p(x|+) + (1 - pi_N) * p(x|-),
// with pi_P > pi_N.  Clean data is the limit pi_P = 1, pi_N = 0.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symloss/errors.hpp"

namespace symloss {

using Point = std::vector<double>;

class McdParams {
 public:
  McdParams(double pi_corr_pos, double pi_corr_neg) : pi_pos_(pi_corr_pos), pi_neg_(pi_corr_neg) {
    if (!(pi_corr_pos > 0.0 && pi_corr_pos <= 1.0))
      throw InvalidArgument("pi_corr_pos must lie in (0, 1], got " + std::to_string(pi_corr_pos));
    if (!(pi_corr_neg >= 0.0 && pi_corr_neg < 1.0))
      throw InvalidArgument("pi_corr_neg must lie in [0, 1), got " + std::to_string(pi_corr_neg));
    if (!(pi_corr_pos > pi_corr_neg))
      throw InvalidArgument("mutually contaminated data needs pi_corr_pos > pi_corr_neg");
  }

  static McdParams clean() { return {1.0, 0.0}; }

  double pi_pos() const noexcept { return pi_pos_; }
  double pi_neg() const noexcept { return pi_neg_; }
  // pi_P - pi_N: slope of the affine link between corrupted and clean risk.
  double purity_gap() const noexcept { return pi_pos_ - pi_neg_; }

  friend bool operator==(const McdParams&, const McdParams&) = default;

 private:
  double pi_pos_;
  double pi_neg_;
};

/// Positive-unlabeled (case-control): positives are clean, the unlabeled set
/// contains positives at rate `class_prior_unlabeled`.
inline McdParams pu_params(double class_prior_unlabeled) {
  if (!(class_prior_unlabeled > 0.0 && class_prior_unlabeled < 1.0))
    throw InvalidArgument("PU class prior must lie in (0, 1)");
  return {1.0, class_prior_unlabeled};
}

/// Two unlabeled sets with class priors pi_u > pi_u_prime.
inline McdParams uu_params(double pi_u, double pi_u_prime) {
  if (!(pi_u < 1.0 && pi_u > pi_u_prime && pi_u_prime > 0.0))
    throw InvalidArgument("UU priors must satisfy 1 > pi_u > pi_u_prime > 0");
  return {pi_u, pi_u_prime};
}

// Finite-support class-conditional densities; the substrate for exact risks.
struct DiscreteBinaryDistribution {
  std::vector<Point> support;
  std::vector<double> p_pos;
  std::vector<double> p_neg;
  double class_prior = 0.5;

  DiscreteBinaryDistribution() = default;
  DiscreteBinaryDistribution(std::vector<Point> support_, std::vector<double> p_pos_,
                             std::vector<double> p_neg_, double class_prior_ = 0.5)
      : support(std::move(support_)),
        p_pos(std::move(p_pos_)),
        p_neg(std::move(p_neg_)),
        class_prior(class_prior_) {
    validate();
  }

  // One-dimensional support {0, 1, ..., n-1}; convenient when only the scores
  // on the support matter.
  static DiscreteBinaryDistribution indexed(std::vector<double> p_pos_, std::vector<double> p_neg_,
                                            double class_prior_ = 0.5) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < p_pos_.size(); ++i) pts.push_back({static_cast<double>(i)});
    return {std::move(pts), std::move(p_pos_), std::move(p_neg_), class_prior_};
  }

  std::size_t size() const noexcept { return support.size(); }

  void validate() const {
    if (support.empty()) throw InvalidArgument("distribution support is empty");
    if (p_pos.size() != support.size() || p_neg.size() != support.size())
      throw InvalidArgument("density length does not match support size");
    for (const auto* p : {&p_pos, &p_neg}) {
      double total = 0.0;
      for (double v : *p) {
        if (!(v >= 0.0)) throw InvalidArgument("negative probability in density");
        total += v;
      }
      if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("density does not sum to 1");
    }
    if (!(class_prior > 0.0 && class_prior < 1.0))
      throw InvalidArgument("class prior must lie in (0, 1)");
    std::set<Point> distinct(support.begin(), support.end());
    if (distinct.size() != support.size()) throw InvalidArgument("support points must be distinct");
  }
};

struct CorruptedDensities {
  std::vector<double> pos;  // p_{pi_P}
  std::vector<double> neg;  // p_{pi_N}
};

inline CorruptedDensities corrupt_distribution(const DiscreteBinaryDistribution& clean,
                                               const McdParams& params) {
  clean.validate();
  CorruptedDensities out;
  out.pos.resize(clean.size());
  out.neg.resize(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    out.pos[i] = params.pi_pos() * clean.p_pos[i] + (1.0 - params.pi_pos()) * clean.p_neg[i];
    out.neg[i] = params.pi_neg() * clean.p_pos[i] + (1.0 - params.pi_neg()) * clean.p_neg[i];
  }
  return out;
}

enum class Origin { corr_pos, corr_neg, unlabeled, pseudo_pos, pseudo_neg };

inline std::string_view to_string(Origin o) {
  switch (o) {
    case Origin::corr_pos: return "corr_pos";
    case Origin::corr_neg: return "corr_neg";
    case Origin::unlabeled: return "unlabeled";
    case Origin::pseudo_pos: return "pseudo_pos";
    case Origin::pseudo_neg: return "pseudo_neg";
  }
  return "?";
}

// Training points plus, for evaluation only, the true labels (+1/-1).
struct SampleSet {
  std::vector<Point> points;
  Origin origin = Origin::unlabeled;
  std::optional<std::vector<int>> hidden_labels;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }

  // Fraction of hidden +1 labels, i.e. the empirical mixture proportion.
  std::optional<double> positive_fraction() const {
    if (!hidden_labels || hidden_labels->empty()) return std::nullopt;
    const auto pos = std::count(hidden_labels->begin(), hidden_labels->end(), 1);
    return static_cast<double>(pos) / static_cast<double>(hidden_labels->size());
  }
};

struct McdSample {
  SampleSet corr_pos;
  SampleSet corr_neg;
};

// Draws n_pos corrupted positives then n_neg corrupted negatives from one
// generator seeded with `seed`.  For every point the mixture coin is flipped
// first, then the chosen class-conditional sampler is invoked.
template <class PosSampler, class NegSampler>
McdSample sample_mcd(PosSampler&& sample_pos, NegSampler&& sample_neg, const McdParams& params,
                     std::size_t n_pos, std::size_t n_neg, std::uint64_t seed) {
  if (n_pos == 0 || n_neg == 0) throw InvalidArgument("sample_mcd: counts must be >= 1");
  std::mt19937_64 rng(seed);
  auto draw = [&](double pi, std::size_t n, Origin origin) {
    SampleSet set;
    set.origin = origin;
    set.points.reserve(n);
    std::vector<int> labels;
    labels.reserve(n);
    std::bernoulli_distribution coin(pi);
    for (std::size_t i = 0; i < n; ++i) {
      const bool positive = coin(rng);
      set.points.push_back(positive ? sample_pos(rng) : sample_neg(rng));
      labels.push_back(positive ? 1 : -1);
    }
    set.hidden_labels = std::move(labels);
    return set;
  };
  McdSample out;
  out.corr_pos = draw(params.pi_pos(), n_pos, Origin::corr_pos);
  out.corr_neg = draw(params.pi_neg(), n_neg, Origin::corr_neg);
  return out;
}

struct GaussianPairConfig {
  Point mean_pos;
  Point mean_neg;
  std::vector<double> covariance;  // shared diagonal
  std::size_t dimension = 0;

  void validate() const {
    if (dimension == 0) throw InvalidArgument("Gaussian dimension must be positive");
    if (mean_pos.size() != dimension || mean_neg.size() != dimension ||
        covariance.size() != dimension)
      throw InvalidArgument("Gaussian means/covariance must have length = dimension");
    for (double c : covariance)
      if (!(c > 0.0)) throw InvalidArgument("Gaussian covariance entries must be > 0");
  }
};

// Class-conditional sampler for one Gaussian of the pair (+1 or -1).
inline auto gaussian_sampler(const GaussianPairConfig& cfg, int label) {
  cfg.validate();
  Point mean = label > 0 ? cfg.mean_pos : cfg.mean_neg;
  std::vector<double> sd(cfg.covariance.size());
  std::transform(cfg.covariance.begin(), cfg.covariance.end(), sd.begin(),
                 [](double v) { return std::sqrt(v); });
  return [mean = std::move(mean), sd = std::move(sd)](std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Point x(mean.size());
    for (std::size_t d = 0; d < mean.size(); ++d) x[d] = mean[d] + sd[d] * normal(rng);
    return x;
  };
}

// Class-conditional sampler over a finite support.
inline auto discrete_sampler(const DiscreteBinaryDistribution& dist, int label) {
  const auto& probs = label > 0 ? dist.p_pos : dist.p_neg;
  return [support = dist.support, weights = probs](std::mt19937_64& rng) {
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    return support[pick(rng)];
  };
}

inline McdSample sample_gaussian_mcd(const GaussianPairConfig& cfg, const McdParams& params,
                                     std::size_t n_pos, std::size_t n_neg, std::uint64_t seed) {
  return sample_mcd(gaussian_sampler(cfg, +1), gaussian_sampler(cfg, -1), params, n_pos, n_neg,
                    seed);
}

// CSV with columns x0..x{d-1}, origin, hidden_label (empty when unknown).
inline void write_samples_csv(std::ostream& out, std::initializer_list<const SampleSet*> sets) {
  std::size_t dim = 0;
  for (const auto* s : sets)
    if (!s->empty()) {
      dim = s->points.front().size();
      break;
    }
  for (std::size_t d = 0; d < dim; ++d) out << 'x' << d << ',';
  out << "origin,hidden_label\n";
  const auto old_precision = out.precision(12);
  for (const auto* s : sets) {
    for (std::size_t i = 0; i < s->size(); ++i) {
      for (double v : s->points[i]) out << v << ',';
      out << to_string(s->origin) << ',';
      if (s->hidden_labels) out << (*s->hidden_labels)[i];
      out << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace symloss
