#pragma once

// Gradient-based minimisation of the empirical BER and AUC risks, plus two
// oracles used by the tests: exhaustive minimisation over a finite scorer
// family and a central-difference gradient check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symloss/distributions.hpp"
#include "symloss/errors.hpp"
#include "symloss/loss.hpp"
#include "symloss/risk.hpp"
#include "symloss/scorer.hpp"

namespace symloss {

enum class Objective { ber, auc };
enum class Optimizer { adam, sgd };

inline std::string_view to_string(Objective o) { return o == Objective::ber ? "ber" : "auc"; }
inline std::string_view to_string(Optimizer o) { return o == Optimizer::adam ? "adam" : "sgd"; }

struct TrainConfig {
  Objective objective = Objective::ber;
  LossKind loss = LossKind::sigmoid;
  double step_size = 0.01;
  Optimizer optimizer = Optimizer::adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t epochs = 100;
  std::size_t batch_size = 64;
  std::size_t pair_batch = 256;
  std::uint64_t seed = 0;
  double weight_decay = 0.0;
  ScorerKind scorer = ScorerKind::linear;
  std::size_t hidden = 8;

  void validate() const {
    if (epochs == 0 || batch_size == 0 || pair_batch == 0 || hidden == 0)
      throw InvalidArgument("train config counts must be positive");
    // step_size == 0 is accepted and freezes the parameters.
    if (!(step_size >= 0.0) || !std::isfinite(step_size))
      throw InvalidArgument("step_size must be a finite non-negative number");
    if (!(weight_decay >= 0.0)) throw InvalidArgument("weight_decay must be >= 0");
    if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0 && epsilon > 0.0))
      throw InvalidArgument("invalid adaptive-moment constants");
  }

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct TrainTrace {
  std::vector<double> objective;  // full-data objective after each epoch
  Scorer final_scorer;
  std::uint64_t seed = 0;
  TrainConfig config;

  friend bool operator==(const TrainTrace&, const TrainTrace&) = default;
};

namespace detail {

inline double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

inline void require_trainable(const LossSpec& loss, const SampleSet& pos, const SampleSet& neg) {
  if (!loss.differentiable())
    throw UnsupportedOperation("cannot train with the zero_one loss; pick a surrogate");
  if (pos.empty() || neg.empty()) throw InvalidArgument("training sets must be non-empty");
  const std::size_t d = pos.points.front().size();
  if (d == 0) throw InvalidArgument("training points must have at least one feature");
  for (const auto* set : {&pos, &neg})
    for (const auto& x : set->points)
      if (x.size() != d) throw InvalidArgument("training points have inconsistent dimension");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Full-data objectives and their parameter gradients

inline double ber_objective(const LossSpec& loss, const Scorer& g, const SampleSet& pos,
                            const SampleSet& neg, double weight_decay = 0.0) {
  const double risk = empirical_ber_risk(loss, pos, neg, g).value;
  return risk + weight_decay * detail::squared_norm(g.parameters());
}

inline std::vector<double> ber_objective_gradient(const LossSpec& loss, const Scorer& g,
                                                  const SampleSet& pos, const SampleSet& neg,
                                                  double weight_decay = 0.0) {
  std::vector<double> grad(g.parameter_count(), 0.0);
  const double wp = 0.5 / static_cast<double>(pos.size());
  const double wn = 0.5 / static_cast<double>(neg.size());
  for (const auto& x : pos.points) g.accumulate_gradient(x, wp * eval_grad(loss, g.score(x)), grad);
  for (const auto& x : neg.points)
    g.accumulate_gradient(x, -wn * eval_grad(loss, -g.score(x)), grad);
  const auto p = g.parameters();
  for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += 2.0 * weight_decay * p[k];
  return grad;
}

inline double auc_objective(const LossSpec& loss, const Scorer& g, const SampleSet& pos,
                            const SampleSet& neg, double weight_decay = 0.0) {
  const auto sp = score_all(g, pos);
  const auto sn = score_all(g, neg);
  return empirical_auc_risk(loss, sp, sn).value + weight_decay * detail::squared_norm(g.parameters());
}

// Exact pairwise gradient: each point receives the summed pair derivative as
// a single coefficient, so the cost is O(n_p n_n + (n_p + n_n) * params).
inline std::vector<double> auc_objective_gradient(const LossSpec& loss, const Scorer& g,
                                                  const SampleSet& pos, const SampleSet& neg,
                                                  double weight_decay = 0.0) {
  const auto sp = score_all(g, pos);
  const auto sn = score_all(g, neg);
  std::vector<double> cp(sp.size(), 0.0);
  std::vector<double> cn(sn.size(), 0.0);
  const double w = 1.0 / (static_cast<double>(sp.size()) * static_cast<double>(sn.size()));
  for (std::size_t i = 0; i < sp.size(); ++i)
    for (std::size_t j = 0; j < sn.size(); ++j) {
      const double d = eval_grad(loss, sp[i] - sn[j]) * w;
      cp[i] += d;
      cn[j] -= d;
    }
  std::vector<double> grad(g.parameter_count(), 0.0);
  for (std::size_t i = 0; i < sp.size(); ++i) g.accumulate_gradient(pos.points[i], cp[i], grad);
  for (std::size_t j = 0; j < sn.size(); ++j) g.accumulate_gradient(neg.points[j], cn[j], grad);
  const auto p = g.parameters();
  for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += 2.0 * weight_decay * p[k];
  return grad;
}

inline double full_objective(Objective objective, const LossSpec& loss, const Scorer& g,
                             const SampleSet& pos, const SampleSet& neg, double weight_decay) {
  return objective == Objective::ber ? ber_objective(loss, g, pos, neg, weight_decay)
                                     : auc_objective(loss, g, pos, neg, weight_decay);
}

inline std::vector<double> full_objective_gradient(Objective objective, const LossSpec& loss,
                                                   const Scorer& g, const SampleSet& pos,
                                                   const SampleSet& neg, double weight_decay) {
  return objective == Objective::ber ? ber_objective_gradient(loss, g, pos, neg, weight_decay)
                                     : auc_objective_gradient(loss, g, pos, neg, weight_decay);
}

// ---------------------------------------------------------------------------
// Stochastic training

namespace detail {

class ParameterUpdater {
 public:
  ParameterUpdater(const TrainConfig& cfg, std::size_t n)
      : cfg_(cfg), m_(n, 0.0), v_(n, 0.0) {}

  void apply(std::span<double> params, std::span<const double> grad) {
    ++t_;
    if (cfg_.optimizer == Optimizer::sgd) {
      for (std::size_t k = 0; k < params.size(); ++k) params[k] -= cfg_.step_size * grad[k];
      return;
    }
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (std::size_t k = 0; k < params.size(); ++k) {
      m_[k] = cfg_.beta1 * m_[k] + (1.0 - cfg_.beta1) * grad[k];
      v_[k] = cfg_.beta2 * v_[k] + (1.0 - cfg_.beta2) * grad[k] * grad[k];
      params[k] -= cfg_.step_size * (m_[k] / c1) / (std::sqrt(v_[k] / c2) + cfg_.epsilon);
    }
  }

 private:
  const TrainConfig& cfg_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::uint64_t t_ = 0;
};

inline Scorer initial_scorer(const TrainConfig& cfg, std::size_t dimension) {
  return cfg.scorer == ScorerKind::linear ? Scorer::linear(dimension)
                                          : Scorer::mlp(dimension, cfg.hidden, cfg.seed);
}

inline TrainTrace train(Objective objective, const SampleSet& pos, const SampleSet& neg,
                        const TrainConfig& cfg) {
  cfg.validate();
  const LossSpec& loss = loss_spec(cfg.loss);
  detail::require_trainable(loss, pos, neg);

  TrainTrace trace{{}, initial_scorer(cfg, pos.points.front().size()), cfg.seed, cfg};
  Scorer& g = trace.final_scorer;
  ParameterUpdater updater(cfg, g.parameter_count());

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick_pos(0, pos.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_neg(0, neg.size() - 1);
  const std::size_t steps_per_epoch =
      (std::max(pos.size(), neg.size()) + cfg.batch_size - 1) / cfg.batch_size;

  std::vector<double> grad(g.parameter_count());
  trace.objective.reserve(cfg.epochs);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t step = 0; step < steps_per_epoch; ++step) {
      std::fill(grad.begin(), grad.end(), 0.0);
      if (objective == Objective::ber) {
        // Equal-size positive and negative batches keep the 1/2 (. + .) weighting.
        const double w = 0.5 / static_cast<double>(cfg.batch_size);
        for (std::size_t b = 0; b < cfg.batch_size; ++b) {
          const auto& x = pos.points[pick_pos(rng)];
          g.accumulate_gradient(x, w * eval_grad(loss, g.score(x)), grad);
        }
        for (std::size_t b = 0; b < cfg.batch_size; ++b) {
          const auto& x = neg.points[pick_neg(rng)];
          g.accumulate_gradient(x, -w * eval_grad(loss, -g.score(x)), grad);
        }
      } else {
        const double w = 1.0 / static_cast<double>(cfg.pair_batch);
        for (std::size_t b = 0; b < cfg.pair_batch; ++b) {
          const auto& xp = pos.points[pick_pos(rng)];
          const auto& xn = neg.points[pick_neg(rng)];
          const double d = w * eval_grad(loss, g.score(xp) - g.score(xn));
          g.accumulate_gradient(xp, d, grad);
          g.accumulate_gradient(xn, -d, grad);
        }
      }
      if (cfg.weight_decay > 0.0) {
        const auto p = g.parameters();
        for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += 2.0 * cfg.weight_decay * p[k];
      }
      updater.apply(g.parameters(), grad);
    }
    trace.objective.push_back(full_objective(objective, loss, g, pos, neg, cfg.weight_decay));
  }
  return trace;
}

}  // namespace detail

/// Minimises 1/2 [mean l(g(x)) over set_pos + mean l(-g(x)) over set_neg]
/// + weight_decay * |params|^2 with mini-batch steps.  Each epoch performs
/// ceil(max(n_pos, n_neg) / batch_size) steps.
inline TrainTrace train_ber(const SampleSet& set_pos, const SampleSet& set_neg,
                            TrainConfig config) {
  config.objective = Objective::ber;
  return detail::train(Objective::ber, set_pos, set_neg, config);
}

/// Minimises the pairwise risk mean l(g(x) - g(x')) using `pair_batch`
/// uniformly drawn (pos, neg) pairs per step.
inline TrainTrace train_auc(const SampleSet& set_pos, const SampleSet& set_neg,
                            TrainConfig config) {
  config.objective = Objective::auc;
  return detail::train(Objective::auc, set_pos, set_neg, config);
}

inline TrainTrace train(const SampleSet& set_pos, const SampleSet& set_neg,
                        const TrainConfig& config) {
  return config.objective == Objective::ber ? train_ber(set_pos, set_neg, config)
                                            : train_auc(set_pos, set_neg, config);
}

// ---------------------------------------------------------------------------
// Oracles

/// Indices of every family member whose risk is within `tol` of the minimum.
template <class Candidate, class Risk>
std::vector<std::size_t> brute_force_minimizer(std::span<const Candidate> family, Risk&& risk,
                                               double tol = 1e-12) {
  if (family.empty()) throw InvalidArgument("brute_force_minimizer: empty family");
  std::vector<double> values;
  values.reserve(family.size());
  for (const auto& c : family) values.push_back(risk(c));
  const double best = *std::min_element(values.begin(), values.end());
  std::vector<std::size_t> argmin;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] <= best + tol) argmin.push_back(i);
  return argmin;
}

// Compares an analytic parameter gradient with central differences at
// `probes` random parameter vectors (entries uniform in [-scale, scale]).
// Per probe the error is |analytic - numeric| / max(|analytic|, |numeric|)
// in the Euclidean norm; the maximum over probes is returned.
inline double finite_difference_check(
    const Scorer& scorer, const std::function<double(const Scorer&)>& objective,
    const std::function<std::vector<double>(const Scorer&)>& gradient, std::size_t probes,
    std::uint64_t seed, double h = 1e-5, double scale = 1.0,
    const std::function<bool(const Scorer&)>& admissible = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-scale, scale);
  double worst = 0.0;
  Scorer g = scorer;
  for (std::size_t probe = 0; probe < probes; ++probe) {
    std::size_t tries = 0;
    do {
      if (++tries > 10000) throw InvalidArgument("finite_difference_check: no admissible probe found");
      for (double& p : g.parameters()) p = unif(rng);
    } while (admissible && !admissible(g));
    const auto analytic = gradient(g);
    double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
    for (std::size_t k = 0; k < g.parameter_count(); ++k) {
      Scorer shifted = g;
      const double base = g.parameters()[k];
      shifted.parameters()[k] = base + h;
      const double up = objective(shifted);
      shifted.parameters()[k] = base - h;
      const double down = objective(shifted);
      const double numeric = (up - down) / (2.0 * h);
      diff2 += (analytic[k] - numeric) * (analytic[k] - numeric);
      a2 += analytic[k] * analytic[k];
      n2 += numeric * numeric;
    }
    const double denom = std::max({std::sqrt(a2), std::sqrt(n2), 1e-300});
    worst = std::max(worst, std::sqrt(diff2) / denom);
  }
  return worst;
}

namespace detail {

// True when every margin the objective evaluates stays at least `gap` away
// from the loss's kinks, so a central difference cannot straddle one.
inline bool margins_clear_of_kinks(Objective objective, const LossSpec& loss, const Scorer& g,
                                   const SampleSet& pos, const SampleSet& neg, double gap) {
  const auto kinks = kink_points(loss);
  if (kinks.empty()) return true;
  auto clear = [&](double z) {
    return std::all_of(kinks.begin(), kinks.end(), [&](double k) { return std::abs(z - k) > gap; });
  };
  const auto sp = score_all(g, pos);
  const auto sn = score_all(g, neg);
  if (objective == Objective::ber)
    return std::all_of(sp.begin(), sp.end(), clear) &&
           std::all_of(sn.begin(), sn.end(), [&](double s) { return clear(-s); });
  for (double a : sp)
    for (double b : sn)
      if (!clear(a - b)) return false;
  return true;
}

}  // namespace detail

/// Probes whose margins fall within 1e-3 of a kink (hinge, ramp) are redrawn.
inline double finite_difference_check(Objective objective, const LossSpec& loss,
                                      const Scorer& scorer, const SampleSet& pos,
                                      const SampleSet& neg, std::size_t probes,
                                      std::uint64_t seed, double weight_decay = 0.0) {
  return finite_difference_check(
      scorer,
      [&](const Scorer& g) { return full_objective(objective, loss, g, pos, neg, weight_decay); },
      [&](const Scorer& g) {
        return full_objective_gradient(objective, loss, g, pos, neg, weight_decay);
      },
      probes, seed, 1e-5, 1.0,
      [&](const Scorer& g) { return detail::margins_clear_of_kinks(objective, loss, g, pos, neg, 1e-3); });
}

}  // namespace symloss
