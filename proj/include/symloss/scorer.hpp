#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symloss/distributions.hpp"
#include "symloss/errors.hpp"

namespace symloss {

enum class ScorerKind { linear, mlp };

inline std::string_view to_string(ScorerKind k) { return k == ScorerKind::linear ? "linear" : "mlp"; }

// Prediction function g: R^d -> R.
//
// Parameter layout
//   linear: [w_0 .. w_{d-1}, b]                      g(x) = w.x + b
//   mlp:    [W1 (hidden x d, row-major), b1 (hidden), w2 (hidden), b2]
//                                                    g(x) = w2.tanh(W1 x + b1) + b2
class Scorer {
 public:
  static Scorer linear(std::size_t dimension) {
    if (dimension == 0) throw InvalidArgument("scorer dimension must be positive");
    Scorer s(ScorerKind::linear, dimension, 0);
    s.params_.assign(dimension + 1, 0.0);
    return s;
  }

  static Scorer mlp(std::size_t dimension, std::size_t hidden, std::uint64_t seed) {
    if (dimension == 0 || hidden == 0) throw InvalidArgument("mlp needs dimension, hidden > 0");
    Scorer s(ScorerKind::mlp, dimension, hidden);
    s.params_.assign(hidden * dimension + 2 * hidden + 1, 0.0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> in_w(-1.0 / std::sqrt(double(dimension)),
                                                1.0 / std::sqrt(double(dimension)));
    std::uniform_real_distribution<double> out_w(-1.0 / std::sqrt(double(hidden)),
                                                 1.0 / std::sqrt(double(hidden)));
    for (std::size_t i = 0; i < hidden * dimension; ++i) s.params_[i] = in_w(rng);
    for (std::size_t h = 0; h < hidden; ++h) s.params_[s.w2_offset() + h] = out_w(rng);
    return s;
  }

  ScorerKind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t hidden() const noexcept { return hidden_; }
  std::size_t parameter_count() const noexcept { return params_.size(); }

  std::span<const double> parameters() const noexcept { return params_; }
  std::span<double> parameters() noexcept { return params_; }

  void set_parameters(std::span<const double> p) {
    if (p.size() != params_.size()) throw InvalidArgument("parameter count mismatch");
    params_.assign(p.begin(), p.end());
  }

  double score(std::span<const double> x) const {
    check_input(x);
    if (kind_ == ScorerKind::linear) {
      double s = params_[dimension_];
      for (std::size_t d = 0; d < dimension_; ++d) s += params_[d] * x[d];
      return s;
    }
    double s = params_.back();
    for (std::size_t h = 0; h < hidden_; ++h) s += params_[w2_offset() + h] * hidden_unit(x, h);
    return s;
  }

  double operator()(std::span<const double> x) const { return score(x); }

  // grad += coef * d g(x) / d params
  void accumulate_gradient(std::span<const double> x, double coef, std::span<double> grad) const {
    check_input(x);
    if (grad.size() != params_.size()) throw InvalidArgument("gradient buffer size mismatch");
    if (kind_ == ScorerKind::linear) {
      for (std::size_t d = 0; d < dimension_; ++d) grad[d] += coef * x[d];
      grad[dimension_] += coef;
      return;
    }
    for (std::size_t h = 0; h < hidden_; ++h) {
      const double a = hidden_unit(x, h);
      const double back = coef * params_[w2_offset() + h] * (1.0 - a * a);
      for (std::size_t d = 0; d < dimension_; ++d) grad[h * dimension_ + d] += back * x[d];
      grad[b1_offset() + h] += back;
      grad[w2_offset() + h] += coef * a;
    }
    grad[params_.size() - 1] += coef;
  }

  friend bool operator==(const Scorer&, const Scorer&) = default;

 private:
  Scorer(ScorerKind kind, std::size_t dimension, std::size_t hidden)
      : kind_(kind), dimension_(dimension), hidden_(hidden) {}

  std::size_t b1_offset() const noexcept { return hidden_ * dimension_; }
  std::size_t w2_offset() const noexcept { return hidden_ * dimension_ + hidden_; }

  double hidden_unit(std::span<const double> x, std::size_t h) const {
    double pre = params_[b1_offset() + h];
    const double* row = params_.data() + h * dimension_;
    for (std::size_t d = 0; d < dimension_; ++d) pre += row[d] * x[d];
    return std::tanh(pre);
  }

  void check_input(std::span<const double> x) const {
    if (x.size() != dimension_)
      throw InvalidArgument("scorer expects dimension " + std::to_string(dimension_) + ", got " +
                            std::to_string(x.size()));
  }

  ScorerKind kind_;
  std::size_t dimension_;
  std::size_t hidden_;
  std::vector<double> params_;
};

inline std::vector<double> score_all(const Scorer& g, const SampleSet& set) {
  std::vector<double> out;
  out.reserve(set.size());
  for (const auto& x : set.points) out.push_back(g.score(x));
  return out;
}

}  // namespace symloss
