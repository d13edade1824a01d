#pragma once

// Margin-based surrogate losses for binary classification.
//
// Every loss is a function of the margin z = y * g(x).  A loss is symmetric
// when l(z) + l(-z) equals a constant K for every z; that constant is what
// makes corrupted BER/AUC risks an affine function of the clean ones.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "symloss/errors.hpp"

namespace symloss {

enum class LossKind {
  zero_one,
  squared,
  hinge,
  squared_hinge,
  exponential,
  logistic,
  savage,
  tangent,
  ramp,
  sigmoid,
  unhinged,
};

enum class Tristate { yes, no, unknown };

struct LossSpec {
  std::string_view name;
  LossKind kind;
  std::optional<double> symmetry_constant;  // K, present iff symmetric
  bool convex;
  bool classification_calibrated;
  Tristate auc_consistent;

  bool symmetric() const noexcept { return symmetry_constant.has_value(); }
  bool differentiable() const noexcept { return kind != LossKind::zero_one; }
};

inline constexpr std::size_t kNumLosses = 11;

inline const std::array<LossSpec, kNumLosses>& all_losses() {
  using enum LossKind;
  static const std::array<LossSpec, kNumLosses> table{{
      {"zero_one", zero_one, 1.0, false, true, Tristate::unknown},
      {"squared", squared, std::nullopt, true, true, Tristate::unknown},
      {"hinge", hinge, std::nullopt, true, true, Tristate::no},
      {"squared_hinge", squared_hinge, std::nullopt, true, true, Tristate::unknown},
      {"exponential", exponential, std::nullopt, true, true, Tristate::unknown},
      {"logistic", logistic, std::nullopt, true, true, Tristate::unknown},
      {"savage", savage, std::nullopt, false, true, Tristate::unknown},
      {"tangent", tangent, std::nullopt, false, true, Tristate::unknown},
      {"ramp", ramp, 1.0, false, true, Tristate::yes},
      {"sigmoid", sigmoid, 1.0, false, true, Tristate::yes},
      {"unhinged", unhinged, 2.0, true, true, Tristate::unknown},
  }};
  return table;
}

inline const LossSpec& loss_spec(LossKind kind) {
  return all_losses()[static_cast<std::size_t>(kind)];
}

/// Looks up a loss by its lowercase identifier (`sigmoid`, `squared_hinge`, ...).
inline const LossSpec& loss_by_name(std::string_view name) {
  for (const auto& spec : all_losses())
    if (spec.name == name) return spec;
  throw ConfigError("unknown loss '" + std::string(name) + "'");
}

namespace detail {

inline constexpr double kExpClamp = 700.0;

// 1 / (1 + exp(-t)) without overflow for any finite t.
inline double logistic_sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

inline void require_finite(double z) {
  if (!std::isfinite(z)) throw InvalidArgument("loss evaluated at non-finite margin");
}

}  // namespace detail

inline double eval_loss(LossKind kind, double z) {
  detail::require_finite(z);
  using enum LossKind;
  switch (kind) {
    case zero_one:
      return z > 0.0 ? 0.0 : (z < 0.0 ? 1.0 : 0.5);
    case squared:
      return (1.0 - z) * (1.0 - z);
    case hinge:
      return std::max(0.0, 1.0 - z);
    case squared_hinge: {
      const double m = std::max(0.0, 1.0 - z);
      return m * m;
    }
    case exponential:
      return std::exp(std::clamp(-z, -detail::kExpClamp, detail::kExpClamp));
    case logistic:
      return std::max(-z, 0.0) + std::log1p(std::exp(-std::abs(z)));
    case savage: {
      const double s = detail::logistic_sigmoid(-2.0 * z);
      return s * s;
    }
    case tangent: {
      const double t = 2.0 * std::atan(z) - 1.0;
      return t * t;
    }
    case ramp:
      return std::max(0.0, std::min(1.0, (1.0 - z) / 2.0));
    case sigmoid:
      return detail::logistic_sigmoid(-z);
    case unhinged:
      return 1.0 - z;
  }
  throw InvalidArgument("unknown loss kind");
}

// Derivative dl/dz.  At the kinks of hinge, squared hinge and ramp the
// right-hand derivative is returned.
inline double eval_grad(LossKind kind, double z) {
  detail::require_finite(z);
  using enum LossKind;
  switch (kind) {
    case zero_one:
      throw UnsupportedOperation("zero_one loss has no usable gradient; pick a surrogate");
    case squared:
      return -2.0 * (1.0 - z);
    case hinge:
      return z < 1.0 ? -1.0 : 0.0;
    case squared_hinge:
      return -2.0 * std::max(0.0, 1.0 - z);
    case exponential:
      return -std::exp(std::clamp(-z, -detail::kExpClamp, detail::kExpClamp));
    case logistic:
      return -detail::logistic_sigmoid(-z);
    case savage: {
      const double s = detail::logistic_sigmoid(-2.0 * z);
      return -4.0 * (1.0 - s) * s * s;
    }
    case tangent: {
      const double t = 2.0 * std::atan(z) - 1.0;
      return 4.0 * t / (1.0 + z * z);
    }
    case ramp:
      return (z >= -1.0 && z < 1.0) ? -0.5 : 0.0;
    case sigmoid:
      return -detail::logistic_sigmoid(z) * detail::logistic_sigmoid(-z);
    case unhinged:
      return -1.0;
  }
  throw InvalidArgument("unknown loss kind");
}

inline double eval_loss(const LossSpec& loss, double z) { return eval_loss(loss.kind, z); }
inline double eval_grad(const LossSpec& loss, double z) { return eval_grad(loss.kind, z); }

/// gamma(z) = l(z) + l(-z); the "excess" integrand of the corrupted risks.
/// Margins at which the loss is not differentiable.
inline std::vector<double> kink_points(const LossSpec& loss) {
  switch (loss.kind) {
    case LossKind::zero_one: return {0.0};
    case LossKind::hinge: return {1.0};
    case LossKind::ramp: return {-1.0, 1.0};
    default: return {};
  }
}

inline double symmetry_gap(const LossSpec& loss, double z) {
  return eval_loss(loss, z) + eval_loss(loss, -z);
}

struct SymmetryReport {
  bool symmetric = false;
  double reference = 0.0;      // gamma(0)
  double max_deviation = 0.0;  // max |gamma(z) - gamma(0)| over the grid
  double worst_z = 0.0;
};

inline SymmetryReport check_symmetry(const LossSpec& loss, std::span<const double> grid,
                                     double tol) {
  if (grid.empty()) throw InvalidArgument("check_symmetry: empty grid");
  SymmetryReport report;
  report.reference = symmetry_gap(loss, 0.0);
  for (double z : grid) {
    const double dev = std::abs(symmetry_gap(loss, z) - report.reference);
    if (dev > report.max_deviation) {
      report.max_deviation = dev;
      report.worst_z = z;
    }
  }
  report.symmetric = report.max_deviation <= tol;
  return report;
}

}  // namespace symloss
