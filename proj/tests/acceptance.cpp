// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "symloss/config.hpp"
#include "symloss/experiments.hpp"
#include "symloss/io.hpp"
#include "symloss/pipeline.hpp"
#include "symloss/risk.hpp"
#include "symloss/trainer.hpp"

using namespace symloss;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double time_limit_s, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string timing = fmt12(secs) + " s";
  if (time_limit_s > 0 && secs >= time_limit_s) {
    v.pass = false;
    timing += " (limit " + fmt12(time_limit_s) + " s)";
  }
  if (!v.pass) ++failures;
  std::printf("[%s] %d. %s: %s; %s\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str(), timing.c_str());
  std::fflush(stdout);
}

ExperimentConfig bundled(const char* name) {
  return load_experiment_config(fs::path(SYMLOSS_CONFIG_DIR) / (std::string(name) + ".ini"));
}

std::vector<LossKind> all_kinds() {
  std::vector<LossKind> k;
  for (const auto& s : all_losses()) k.push_back(s.kind);
  return k;
}

// 1 -------------------------------------------------------------------------
Verdict identity_suite() {
  VerifyBlock vb;  // 100 instances, support <= 5
  std::size_t bad = 0, bad_sym = 0, bad_oracle = 0, rows = 0;
  double worst = 0.0;
  std::mt19937_64 rng(20240611);
  for (std::size_t i = 0; i < vb.instances; ++i) {
    const auto inst = random_mcd_instance(rng, vb.max_support, vb.score_range);
    const long double a = inst.params.pi_pos(), b = inst.params.pi_neg();
    for (const auto& s : all_losses()) {
      const auto ber = ber_decomposition_check(s, inst.dist, inst.scores, inst.params);
      const auto auc = auc_decomposition_check(s, inst.dist, inst.scores, inst.params);
      rows += 2;
      for (const auto* d : {&ber, &auc}) {
        worst = std::max(worst, d->residual);
        if (!(d->residual <= 1e-10)) ++bad;
        if (s.symmetric() && !(std::abs(d->excess - *s.symmetry_constant * (1.0 - double(a) + double(b)) / 2.0) <= 1e-12))
          ++bad_sym;
      }
      const int k = static_cast<int>(s.kind);
      const double ob = double(oracle::corrupted_ber(k, inst.dist.p_pos, inst.dist.p_neg, a, b, inst.scores));
      const double oa = double(oracle::corrupted_auc(k, inst.dist.p_pos, inst.dist.p_neg, a, b, inst.scores));
      if (std::abs(ob - ber.lhs) > 1e-10 * std::max(1.0, std::abs(ob))) ++bad_oracle;
      if (std::abs(oa - auc.lhs) > 1e-10 * std::max(1.0, std::abs(oa))) ++bad_oracle;
    }
  }
  return {bad == 0 && bad_sym == 0 && bad_oracle == 0,
          std::to_string(rows) + " checks, worst residual " + fmt12(worst) + ", " + std::to_string(bad) +
              " residual failures, " + std::to_string(bad_sym) + " symmetric-excess failures, " +
              std::to_string(bad_oracle) + " oracle mismatches"};
}

// 2 -------------------------------------------------------------------------
using Family = std::vector<std::vector<double>>;

template <class Risk>
std::vector<std::size_t> argmin(const Family& fam, Risk risk, double tol) {
  return brute_force_minimizer(std::span<const std::vector<double>>(fam), risk, tol);
}

Verdict minimizer_identity() {
  const double vals[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  Family assignments;
  for (double u : vals)
    for (double v : vals) assignments.push_back({u, v});

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::size_t mismatches = 0, comparisons = 0;
  for (int t = 0; t < 20; ++t) {
    const double p = unif(rng), q = unif(rng);
    const auto dist = DiscreteBinaryDistribution::indexed({p, 1.0 - p}, {q, 1.0 - q});
    double a = unif(rng), b = unif(rng);
    if (a < b) std::swap(a, b);
    if (a - b < 1e-3) a = std::min(1.0, b + 0.1);
    const McdParams params(a, b);
    const double ctol = 1e-12 * params.purity_gap();
    for (const auto& s : all_losses()) {
      if (!s.symmetric()) continue;
      comparisons += 2;
      if (argmin(assignments, [&](const auto& g) { return exact_ber_risk(s, dist, g).value; }, 1e-12) !=
          argmin(assignments, [&](const auto& g) { return corrupted_ber_risk(s, dist, params, g); }, ctol))
        ++mismatches;
      if (argmin(assignments, [&](const auto& g) { return exact_auc_risk(s, dist, g).value; }, 1e-12) !=
          argmin(assignments, [&](const auto& g) { return corrupted_auc_risk(s, dist, params, g); }, ctol))
        ++mismatches;
    }
  }

  // Constructed hinge instances: linear family w x + b on a 3-point support.
  auto linear_family = [&](const DiscreteBinaryDistribution& d) {
    Family f;
    for (double w : vals)
      for (double c : vals) {
        std::vector<double> s;
        for (const auto& x : d.support) s.push_back(w * x[0] + c);
        f.push_back(s);
      }
    return f;
  };
  const auto& hinge = loss_spec(LossKind::hinge);
  const McdParams hp(0.6, 0.4);
  const DiscreteBinaryDistribution hb({{-2.0}, {0.0}, {2.0}}, {0.1, 0.1, 0.8}, {0.1, 0.4, 0.5});
  const auto fb = linear_family(hb);
  const bool ber_differs =
      argmin(fb, [&](const auto& g) { return exact_ber_risk(hinge, hb, g).value; }, 1e-12) !=
      argmin(fb, [&](const auto& g) { return corrupted_ber_risk(hinge, hb, hp, g); }, 1e-12);
  const DiscreteBinaryDistribution ha({{-1.0}, {0.0}, {1.0}}, {0.1, 0.1, 0.8}, {0.1, 0.3, 0.6});
  const auto fa = linear_family(ha);
  const bool auc_differs =
      argmin(fa, [&](const auto& g) { return exact_auc_risk(hinge, ha, g).value; }, 1e-12) !=
      argmin(fa, [&](const auto& g) { return corrupted_auc_risk(hinge, ha, hp, g); }, 1e-12);

  return {mismatches == 0 && ber_differs && auc_differs,
          std::to_string(comparisons) + " symmetric argmin comparisons, " + std::to_string(mismatches) +
              " mismatches; hinge BER instance differs=" + (ber_differs ? "yes" : "no") +
              ", hinge AUC instance differs=" + (auc_differs ? "yes" : "no")};
}

// 3 -------------------------------------------------------------------------
Verdict gradient_checks() {
  auto make = [](std::size_t n, std::uint64_t seed, double shift) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    SampleSet s;
    for (std::size_t i = 0; i < n; ++i) s.points.push_back({nd(rng) + shift, nd(rng) + shift, nd(rng)});
    return s;
  };
  const auto pos = make(15, 1, 0.5), neg = make(12, 2, -0.5);
  double worst_lin = 0.0, worst_mlp = 0.0;
  std::size_t combos = 0;
  for (const auto& s : all_losses()) {
    if (!s.differentiable()) continue;
    for (auto obj : {Objective::ber, Objective::auc}) {
      worst_lin = std::max(worst_lin, finite_difference_check(obj, s, Scorer::linear(3), pos, neg, 10, 3));
      worst_mlp = std::max(worst_mlp, finite_difference_check(obj, s, Scorer::mlp(3, 5, 4), pos, neg, 10, 5));
      ++combos;
    }
  }
  return {worst_lin <= 1e-5 && worst_mlp <= 1e-4,
          std::to_string(combos) + " loss x objective combinations, max rel. err linear " + fmt12(worst_lin) +
              ", mlp " + fmt12(worst_mlp)};
}

// 4 -------------------------------------------------------------------------
Verdict robustness() {
  const auto cfg = bundled("noise_sweep");
  GaussianDataset ds = cfg.dataset;
  ds.n_train_per_class = 2000;
  const McdParams noisy(0.8, 0.3);
  std::vector<double> sig, logi, clean;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    TrainConfig t = cfg.train;
    t.objective = Objective::ber;
    sig.push_back(run_gaussian(ds, t, LossKind::sigmoid, noisy, seed).clean_test_ber);
    logi.push_back(run_gaussian(ds, t, LossKind::logistic, noisy, seed).clean_test_ber);
    clean.push_back(run_gaussian(ds, t, LossKind::sigmoid, McdParams::clean(), seed).clean_test_ber);
  }
  auto mean = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size()); };
  const double ms = mean(sig), ml = mean(logi), mc = mean(clean);
  return {ms <= ml && std::abs(ms - mc) <= 0.05,
          "mean clean-test BER sigmoid " + fmt12(ms) + ", logistic " + fmt12(ml) + ", clean-trained " + fmt12(mc)};
}

// 5 -------------------------------------------------------------------------
Verdict reductions() {
  const GaussianPairConfig g{{0.8, 0.8}, {-0.8, -0.8}, {1.0, 1.0}, 2};
  std::size_t runs = 0, equal = 0;
  for (std::uint64_t seed = 0; seed < 3; ++seed)
    for (auto obj : {Objective::ber, Objective::auc}) {
      TrainConfig t;
      t.objective = obj;
      t.epochs = 5;
      t.seed = seed;
      const auto pu = sample_gaussian_mcd(g, pu_params(0.4), 80, 120, 100 + seed);
      const auto gpu = sample_gaussian_mcd(g, McdParams(1.0, 0.4), 80, 120, 100 + seed);
      const auto uu = sample_gaussian_mcd(g, uu_params(0.7, 0.3), 100, 100, 200 + seed);
      const auto guu = sample_gaussian_mcd(g, McdParams(0.7, 0.3), 100, 100, 200 + seed);
      runs += 2;
      equal += train(pu.corr_pos, pu.corr_neg, t) == train(gpu.corr_pos, gpu.corr_neg, t);
      equal += train(uu.corr_pos, uu.corr_neg, t) == train(guu.corr_pos, guu.corr_neg, t);
    }
  return {equal == runs, std::to_string(equal) + "/" + std::to_string(runs) + " traces identical"};
}

// 6 -------------------------------------------------------------------------
Verdict auc_oracle() {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> size(1, 100);
  std::uniform_int_distribution<int> coarse(-4, 4);
  std::normal_distribution<double> nd;
  std::size_t mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> pos(size(rng)), neg(size(rng));
    const bool ties = t % 2 == 0;
    for (auto& v : pos) v = ties ? 0.25 * coarse(rng) : nd(rng);
    for (auto& v : neg) v = ties ? 0.25 * coarse(rng) : nd(rng);
    if (auc_score(pos, neg) != oracle::pair_enumeration_auc(pos, neg)) ++mismatches;
  }
  return {mismatches == 0, "1000 instances (half tie-heavy), " + std::to_string(mismatches) + " inexact"};
}

// 7, 9 ----------------------------------------------------------------------
PipelineReport bundled_pipeline() {
  const auto cfg = bundled("keywords");
  return run_pipeline(load_corpus_jsonl(cfg.keywords.corpus), load_keywords(cfg.keywords.keywords),
                      pipeline_config(cfg, cfg.seeds.front()));
}

Verdict breakeven() {
  const auto r = bundled_pipeline();
  if (!r.test) return {false, "no labeled test split"};
  const auto& m = r.test->at_test_breakeven;
  const double bound = 1.0 / double(r.test->n_test_pos);
  const double diff = std::abs(m.precision - m.recall.value_or(0.0));
  return {diff <= bound, "precision " + fmt12(m.precision) + ", recall " + fmt12(m.recall.value_or(0.0)) +
                             ", |diff| " + fmt12(diff) + " <= 1/" + std::to_string(r.test->n_test_pos)};
}

Verdict keyword_regression() {
  const auto r = bundled_pipeline();
  if (!r.test || !r.empirical_pi_pos || !r.empirical_pi_neg) return {false, "missing test metrics or purity"};
  const double fb = r.threshold_comparison.at("breakeven_known_prior").metrics.f1.value_or(0.0);
  const double fd = r.threshold_comparison.at("default_zero").metrics.f1.value_or(0.0);
  return {r.test->auc > 0.5 && *r.empirical_pi_pos > *r.empirical_pi_neg && fb >= fd,
          "test AUC " + fmt12(r.test->auc) + ", pi_P " + fmt12(*r.empirical_pi_pos) + " > pi_N " +
              fmt12(*r.empirical_pi_neg) + ", F1 breakeven " + fmt12(fb) + " >= default " + fmt12(fd)};
}

// 8 -------------------------------------------------------------------------
Verdict purity_trend() {
  const auto cfg = bundled("purity_trend");
  const auto r = gaussian_sweep(cfg, cfg.noise_grid, {Objective::auc});
  std::string detail = "gap by pi_P - pi_N:";
  for (const auto& c : r.summary) detail += " " + fmt12(c.pi_pos - c.pi_neg) + "->" + fmt12(c.mean_auc_risk_gap);
  return {r.summary.size() == 3 && gap_non_increasing_in_purity(r.summary), detail};
}

}  // namespace

int main() {
  criterion(1, "identity suite", 10.0, identity_suite);
  criterion(2, "minimizer identity", 5.0, minimizer_identity);
  criterion(3, "gradient checks", 0.0, gradient_checks);
  criterion(4, "robustness experiment", 120.0, robustness);
  criterion(5, "PU/UU equivalence", 0.0, reductions);
  criterion(6, "AUC oracle equivalence", 0.0, auc_oracle);
  criterion(7, "breakeven threshold", 0.0, breakeven);
  criterion(8, "purity trend", 0.0, purity_trend);
  criterion(9, "keyword pipeline regression", 60.0, keyword_regression);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
