#pragma once

// Experiment runners behind the CLI subcommands.  Each runner computes its
// rows, writes CSV/JSON artifacts into the output directory and evaluates the
// experiment's assertions.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "symloss/config.hpp"
#include "symloss/distributions.hpp"
#include "symloss/io.hpp"
#include "symloss/pipeline.hpp"
#include "symloss/risk.hpp"
#include "symloss/trainer.hpp"

namespace symloss {

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentOutcome {
  std::vector<Assertion> assertions;
  std::vector<std::filesystem::path> artifacts;  // relative to the output dir
  std::vector<std::string> notes;                // informational, never fail a run

  bool passed() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
  }
  void check(std::string name, bool ok, std::string detail = {}) {
    assertions.push_back({std::move(name), ok, std::move(detail)});
  }
};

inline std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Stable per-purpose seed: the same (seed, stream) always yields the same value.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw ConfigError("cannot write " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

// ---------------------------------------------------------------------------
// Identity verification

struct McdInstance {
  DiscreteBinaryDistribution dist;
  std::vector<double> scores;
  McdParams params;
};

/// Random finite-support instance: support size in [1, max_support], class
/// densities from normalised exponentials, scores uniform in
/// [-score_range, score_range], 0 <= pi_N < pi_P <= 1.
inline McdInstance random_mcd_instance(std::mt19937_64& rng, std::size_t max_support, double score_range) {
  std::uniform_int_distribution<std::size_t> size(1, max_support);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> score(-score_range, score_range);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::size_t n = size(rng);
  auto simplex = [&] {
    std::vector<double> p(n);
    double s = 0.0;
    for (auto& v : p) s += (v = expo(rng));
    for (auto& v : p) v /= s;
    double head = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) head += p[i];
    p.back() = std::max(0.0, 1.0 - head);
    return p;
  };
  auto pos = simplex();
  auto neg = simplex();
  std::vector<double> scores(n);
  for (auto& s : scores) s = score(rng);
  double a = unif(rng), b = unif(rng);
  if (a < b) std::swap(a, b);
  if (a - b < 1e-3) a = std::min(1.0, b + 0.1);
  return {DiscreteBinaryDistribution::indexed(std::move(pos), std::move(neg)), std::move(scores),
          McdParams(a, b)};
}

struct IdentityRow {
  std::string loss;
  std::size_t instance = 0;
  std::string risk;
  DecompositionCheck check;
  std::optional<double> symmetric_excess;
};

inline std::vector<IdentityRow> verify_identities(const VerifyBlock& vb, const std::vector<LossKind>& losses,
                                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<IdentityRow> rows;
  for (std::size_t i = 0; i < vb.instances; ++i) {
    const auto inst = random_mcd_instance(rng, vb.max_support, vb.score_range);
    for (LossKind k : losses) {
      const auto& loss = loss_spec(k);
      const auto sym = symmetric_excess(loss, inst.params);
      rows.push_back({std::string(loss.name), i, "ber",
                      ber_decomposition_check(loss, inst.dist, inst.scores, inst.params), sym});
      rows.push_back({std::string(loss.name), i, "auc",
                      auc_decomposition_check(loss, inst.dist, inst.scores, inst.params), sym});
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Gaussian experiments

struct GaussianRun {
  std::string loss;
  std::string objective;
  double pi_pos = 1.0;
  double pi_neg = 0.0;
  std::uint64_t seed = 0;
  double clean_test_ber = 0.0;  // zero-one BER at beta = 0
  double clean_test_auc = 0.0;
};

/// One training run: corrupted training sample drawn from `params`, scorer
/// evaluated on a clean held-out sample.  Sample draws depend only on
/// (seed, params), so runs that differ only in the loss see the same data.
inline GaussianRun run_gaussian(const GaussianDataset& ds, TrainConfig train, LossKind loss,
                                const McdParams& params, std::uint64_t seed) {
  const auto sample = sample_gaussian_mcd(ds.gaussian, params, ds.n_train_per_class, ds.n_train_per_class,
                                          derive_seed(seed, 1));
  const auto test = sample_gaussian_mcd(ds.gaussian, McdParams::clean(), ds.n_test_per_class,
                                        ds.n_test_per_class, derive_seed(seed, 2));
  train.loss = loss;
  train.seed = derive_seed(seed, 3);
  const auto trace = symloss::train(sample.corr_pos, sample.corr_neg, train);
  const Scorer& g = trace.final_scorer;
  const auto sp = score_all(g, test.corr_pos);
  const auto sn = score_all(g, test.corr_neg);
  GaussianRun run{std::string(loss_spec(loss).name), std::string(to_string(train.objective)),
                  params.pi_pos(), params.pi_neg(), seed};
  run.clean_test_ber = empirical_ber_risk(loss_spec(LossKind::zero_one), sp, sn).value;
  run.clean_test_auc = auc_score(sp, sn);
  return run;
}

struct CellSummary {
  std::string loss;
  std::string objective;
  double pi_pos = 1.0;
  double pi_neg = 0.0;
  std::size_t n = 0;
  double mean_ber = 0.0, se_ber = 0.0;
  double mean_auc = 0.0, se_auc = 0.0;
  double mean_auc_risk_gap = 0.0;  // (1 - AUC) minus the clean-trained reference's (1 - AUC)
};

namespace detail {

inline std::pair<double, double> mean_se(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() < 2) return {m, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace detail

/// Groups runs by (loss, objective, pi_P, pi_N) in first-seen order.
inline std::vector<CellSummary> summarize(const std::vector<GaussianRun>& runs,
                                          const std::vector<GaussianRun>& clean_reference = {}) {
  std::vector<CellSummary> out;
  std::vector<std::vector<const GaussianRun*>> groups;
  for (const auto& r : runs) {
    auto it = std::find_if(out.begin(), out.end(), [&](const CellSummary& c) {
      return c.loss == r.loss && c.objective == r.objective && c.pi_pos == r.pi_pos && c.pi_neg == r.pi_neg;
    });
    if (it == out.end()) {
      out.push_back({r.loss, r.objective, r.pi_pos, r.pi_neg});
      groups.emplace_back();
      it = out.end() - 1;
    }
    groups[static_cast<std::size_t>(it - out.begin())].push_back(&r);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::vector<double> ber, auc, gap;
    for (const auto* r : groups[i]) {
      ber.push_back(r->clean_test_ber);
      auc.push_back(r->clean_test_auc);
      auto ref = std::find_if(clean_reference.begin(), clean_reference.end(), [&](const GaussianRun& c) {
        return c.loss == r->loss && c.objective == r->objective && c.seed == r->seed;
      });
      if (ref != clean_reference.end()) gap.push_back(ref->clean_test_auc - r->clean_test_auc);
    }
    out[i].n = ber.size();
    std::tie(out[i].mean_ber, out[i].se_ber) = detail::mean_se(ber);
    std::tie(out[i].mean_auc, out[i].se_auc) = detail::mean_se(auc);
    if (!gap.empty()) out[i].mean_auc_risk_gap = detail::mean_se(gap).first;
  }
  return out;
}

struct SweepResult {
  std::vector<GaussianRun> runs;
  std::vector<GaussianRun> clean_reference;
  std::vector<CellSummary> summary;
};

inline SweepResult gaussian_sweep(const ExperimentConfig& cfg, const std::vector<McdParams>& grid,
                                  const std::vector<Objective>& objectives) {
  SweepResult r;
  for (Objective obj : objectives) {
    TrainConfig t = cfg.train;
    t.objective = obj;
    for (LossKind loss : cfg.losses)
      for (std::uint64_t seed : cfg.seeds) {
        r.clean_reference.push_back(run_gaussian(cfg.dataset, t, loss, McdParams::clean(), seed));
        for (const auto& p : grid) r.runs.push_back(run_gaussian(cfg.dataset, t, loss, p, seed));
      }
  }
  r.summary = summarize(r.runs, r.clean_reference);
  return r;
}

namespace detail {

inline void write_runs(const std::filesystem::path& path, const std::vector<GaussianRun>& runs) {
  CsvWriter csv(path, {"loss", "objective", "pi_pos", "pi_neg", "seed", "clean_test_ber", "clean_test_auc"});
  for (const auto& r : runs)
    csv.row({r.loss, r.objective, fmt12(r.pi_pos), fmt12(r.pi_neg), std::to_string(r.seed),
             fmt12(r.clean_test_ber), fmt12(r.clean_test_auc)});
}

inline void write_summary(const std::filesystem::path& path, const std::vector<CellSummary>& cells) {
  CsvWriter csv(path, {"loss", "objective", "pi_pos", "pi_neg", "n_seeds", "mean_ber", "se_ber", "mean_auc",
                       "se_auc", "mean_auc_risk_gap"});
  for (const auto& c : cells)
    csv.row({c.loss, c.objective, fmt12(c.pi_pos), fmt12(c.pi_neg), std::to_string(c.n), fmt12(c.mean_ber),
             fmt12(c.se_ber), fmt12(c.mean_auc), fmt12(c.se_auc), fmt12(c.mean_auc_risk_gap)});
}

inline const CellSummary* find_cell(const std::vector<CellSummary>& cells, std::string_view loss,
                                    double pi_pos, double pi_neg) {
  for (const auto& c : cells)
    if (c.loss == loss && c.pi_pos == pi_pos && c.pi_neg == pi_neg) return &c;
  return nullptr;
}

}  // namespace detail

/// True when the mean AUC-risk gap does not increase as pi_P - pi_N grows.
inline bool gap_non_increasing_in_purity(std::vector<CellSummary> cells) {
  std::sort(cells.begin(), cells.end(),
            [](const CellSummary& a, const CellSummary& b) { return a.pi_pos - a.pi_neg < b.pi_pos - b.pi_neg; });
  for (std::size_t i = 1; i < cells.size(); ++i)
    if (cells[i].mean_auc_risk_gap > cells[i - 1].mean_auc_risk_gap) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Runners

inline ExperimentOutcome run_verify_identities(const ExperimentConfig& cfg, const std::filesystem::path& out) {
  ExperimentOutcome o;
  std::size_t failures = 0, sym_failures = 0;
  double worst = 0.0;
  CsvWriter csv(out / "residuals.csv", {"seed", "loss", "instance", "risk", "lhs", "rhs", "residual",
                                        "clean_risk", "excess", "symmetric_excess"});
  for (std::uint64_t seed : cfg.seeds) {
    for (const auto& r : verify_identities(cfg.verify, cfg.losses, seed)) {
      worst = std::max(worst, r.check.residual);
      if (!(r.check.residual <= cfg.verify.tolerance)) ++failures;
      if (r.symmetric_excess && !(std::abs(r.check.excess - *r.symmetric_excess) <= cfg.verify.symmetric_tolerance))
        ++sym_failures;
      csv.row({std::to_string(seed), r.loss, std::to_string(r.instance), r.risk, fmt12(r.check.lhs),
               fmt12(r.check.rhs), fmt12(r.check.residual), fmt12(r.check.clean_risk), fmt12(r.check.excess),
               r.symmetric_excess ? fmt12(*r.symmetric_excess) : ""});
    }
  }
  o.artifacts.push_back("residuals.csv");
  o.check("residuals <= " + fmt12(cfg.verify.tolerance), failures == 0,
          std::to_string(failures) + " failures, worst " + fmt12(worst));
  o.check("symmetric excess = K(1 - pi_P + pi_N)/2", sym_failures == 0, std::to_string(sym_failures) + " failures");
  return o;
}

inline ExperimentOutcome run_noise_sweep(const ExperimentConfig& cfg, const std::filesystem::path& out) {
  ExperimentOutcome o;
  const auto r = gaussian_sweep(cfg, cfg.noise_grid, {cfg.train.objective});
  detail::write_runs(out / "runs.csv", r.runs);
  detail::write_runs(out / "clean_reference.csv", r.clean_reference);
  detail::write_summary(out / "summary.csv", r.summary);
  o.artifacts = {"runs.csv", "clean_reference.csv", "summary.csv"};

  const bool has_pair = std::count(cfg.losses.begin(), cfg.losses.end(), LossKind::sigmoid) &&
                        std::count(cfg.losses.begin(), cfg.losses.end(), LossKind::logistic);
  if (has_pair) {
    for (const auto& p : cfg.noise_grid) {
      if (p == McdParams::clean()) continue;
      const auto* s = detail::find_cell(r.summary, "sigmoid", p.pi_pos(), p.pi_neg());
      const auto* l = detail::find_cell(r.summary, "logistic", p.pi_pos(), p.pi_neg());
      o.check("sigmoid BER <= logistic BER at (" + fmt12(p.pi_pos()) + ", " + fmt12(p.pi_neg()) + ")",
              s->mean_ber <= l->mean_ber, fmt12(s->mean_ber) + " vs " + fmt12(l->mean_ber));
    }
  }
  if (cfg.clean_ber_max) {
    for (const auto& c : r.summary)
      if (c.pi_pos == 1.0 && c.pi_neg == 0.0)
        o.check(c.loss + " clean-cell BER <= " + fmt12(*cfg.clean_ber_max), c.mean_ber <= *cfg.clean_ber_max,
                fmt12(c.mean_ber));
  }
  if (cfg.assert_monotone_gap) {
    for (LossKind k : cfg.losses) {
      std::vector<CellSummary> cells;
      for (const auto& c : r.summary)
        if (c.loss == loss_spec(k).name) cells.push_back(c);
      std::string detail;
      for (const auto& c : cells) detail += fmt12(c.pi_pos - c.pi_neg) + ":" + fmt12(c.mean_auc_risk_gap) + " ";
      o.check(std::string(loss_spec(k).name) + " AUC-risk gap non-increasing in pi_P - pi_N",
              gap_non_increasing_in_purity(cells), detail);
    }
  }
  return o;
}

inline ExperimentOutcome run_loss_compare(const ExperimentConfig& cfg, const std::filesystem::path& out) {
  ExperimentOutcome o;
  const auto r = gaussian_sweep(cfg, cfg.noise_grid, {Objective::ber, Objective::auc});
  detail::write_runs(out / "runs.csv", r.runs);
  detail::write_summary(out / "summary.csv", r.summary);
  o.artifacts = {"runs.csv", "summary.csv"};
  return o;
}

// PU / UU demos: the corrupted sample is generated through the reduction.
inline ExperimentOutcome run_reduction_demo(const ExperimentConfig& cfg, const McdParams& params,
                                            const std::filesystem::path& out) {
  ExperimentOutcome o;
  const auto r = gaussian_sweep(cfg, {params}, {cfg.train.objective});
  detail::write_runs(out / "runs.csv", r.runs);
  detail::write_runs(out / "clean_reference.csv", r.clean_reference);
  detail::write_summary(out / "summary.csv", r.summary);
  o.artifacts = {"runs.csv", "clean_reference.csv", "summary.csv"};
  for (const auto& c : r.summary)
    if (loss_by_name(c.loss).symmetric())
      o.check(c.loss + " clean-test AUC > 0.5", c.mean_auc > 0.5, fmt12(c.mean_auc));
  return o;
}

inline ExperimentOutcome run_pu_demo(const ExperimentConfig& cfg, const std::filesystem::path& out) {
  return run_reduction_demo(cfg, pu_params(cfg.pu_prior), out);
}

inline ExperimentOutcome run_uu_demo(const ExperimentConfig& cfg, const std::filesystem::path& out) {
  return run_reduction_demo(cfg, uu_params(cfg.uu_pi, cfg.uu_pi_prime), out);
}

// ---------------------------------------------------------------------------
// Keywords

inline PipelineConfig pipeline_config(const ExperimentConfig& cfg, std::uint64_t seed) {
  PipelineConfig p;
  p.tau = cfg.keywords.tau;
  p.scheme = cfg.keywords.scheme;
  p.min_doc_freq = cfg.keywords.min_doc_freq;
  p.train = cfg.train;
  p.train.objective = Objective::auc;
  p.train.loss = cfg.losses.front();
  p.train.seed = seed;
  p.threshold_method = cfg.keywords.threshold_method;
  p.prior = cfg.keywords.prior;
  return p;
}

struct TauPoint {
  double tau = 0.0;
  double purity_gap = 0.0;        // empirical pi_P - pi_N of the pseudo split
  double test_auc = 0.0;
  double auc_risk_error = 0.0;    // |(1 - AUC) - (1 - AUC_reference)|
};

/// Spearman rank correlation (average ranks for ties).
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * double(i + j) + 1.0;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / double(rx.size());
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / double(ry.size());
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxx == 0 || syy == 0 ? 0.0 : sxy / std::sqrt(sxx * syy);
}

/// Test AUC of a ranker trained on the true labels of the train split.
inline double clean_reference_auc(const Corpus& corpus, const PipelineConfig& p) {
  const auto train_docs = corpus.slice(Split::train_unlabeled);
  const auto test_docs = corpus.slice(Split::test_labeled);
  const auto vec = build_vectorizer(std::span<const Document>(train_docs), p.scheme, p.min_doc_freq);
  SampleSet pos, neg;
  for (const auto& d : train_docs) (*d.hidden_label > 0 ? pos : neg).points.push_back(vec.features(d.text));
  const auto g = train_auc(pos, neg, p.train).final_scorer;
  std::vector<double> sp, sn;
  for (const auto& d : test_docs) (*d.hidden_label > 0 ? sp : sn).push_back(g.score(vec.features(d.text)));
  return auc_score(sp, sn);
}

inline std::vector<TauPoint> tau_sweep(const Corpus& corpus, const KeywordSet& keywords, PipelineConfig p,
                                       const std::vector<double>& taus) {
  const double ref = clean_reference_auc(corpus, p);
  std::vector<TauPoint> out;
  p.threshold_method = ThresholdMethod::default_zero;
  for (double tau : taus) {
    p.tau = tau;
    const auto rep = run_pipeline(corpus, keywords, p);
    TauPoint t{tau, rep.empirical_pi_pos.value_or(0.0) - rep.empirical_pi_neg.value_or(0.0),
               rep.test ? rep.test->auc : 0.0, 0.0};
    t.auc_risk_error = std::abs(t.test_auc - ref);
    out.push_back(t);
  }
  return out;
}

inline ExperimentOutcome run_keywords(const ExperimentConfig& cfg, const std::filesystem::path& out) {
  ExperimentOutcome o;
  const auto corpus = load_corpus_jsonl(cfg.keywords.corpus);
  const auto keywords = load_keywords(cfg.keywords.keywords);
  const auto p = pipeline_config(cfg, cfg.seeds.front());
  const auto report = run_pipeline(corpus, keywords, p);

  {
    std::ofstream j(out / "report.json");
    j << to_json(report).dump(2) << '\n';
  }
  {
    std::ofstream t(out / "trace.csv");
    write_trace_csv(t, report.trace);
  }
  o.artifacts = {"report.json", "trace.csv"};

  if (report.test) {
    CsvWriter csv(out / "metrics.csv",
                  {"method", "beta", "positive_fraction", "auc", "precision", "recall", "f1", "cer", "ber"});
    auto opt = [](const std::optional<double>& v) { return v ? fmt12(*v) : std::string(); };
    for (const auto& [name, t] : report.threshold_comparison)
      csv.row({name, fmt12(t.threshold.beta), fmt12(t.threshold.achieved_positive_fraction),
               fmt12(report.test->auc), fmt12(t.metrics.precision), opt(t.metrics.recall), opt(t.metrics.f1),
               fmt12(t.metrics.cer), opt(t.metrics.ber)});
    o.artifacts.push_back("metrics.csv");

    o.check("test AUC > 0.5", report.test->auc > 0.5, fmt12(report.test->auc));
    const auto& be = report.test->at_test_breakeven;
    if (be.recall)
      o.check("|precision - recall| at test breakeven <= 1/n_pos",
              std::abs(be.precision - *be.recall) <= 1.0 / double(report.test->n_test_pos),
              fmt12(be.precision) + " vs " + fmt12(*be.recall));
    const auto& cmp = report.threshold_comparison;
    if (cmp.count("breakeven_known_prior")) {
      const double fb = cmp.at("breakeven_known_prior").metrics.f1.value_or(0.0);
      const double fd = cmp.at("default_zero").metrics.f1.value_or(0.0);
      o.check("F1(breakeven) >= F1(default)", fb >= fd, fmt12(fb) + " vs " + fmt12(fd));
    }
  }
  if (report.empirical_pi_pos && report.empirical_pi_neg)
    o.check("empirical pi_P > pi_N", report.guarantee_holds,
            fmt12(*report.empirical_pi_pos) + " vs " + fmt12(*report.empirical_pi_neg));

  if (!cfg.keywords.tau_sweep.empty()) {
    const auto pts = tau_sweep(corpus, keywords, p, cfg.keywords.tau_sweep);
    CsvWriter csv(out / "tau_sweep.csv", {"tau", "purity_gap", "test_auc", "auc_risk_error"});
    std::vector<double> gap, err;
    for (const auto& t : pts) {
      csv.row({fmt12(t.tau), fmt12(t.purity_gap), fmt12(t.test_auc), fmt12(t.auc_risk_error)});
      gap.push_back(t.purity_gap);
      err.push_back(t.auc_risk_error);
    }
    o.artifacts.push_back("tau_sweep.csv");
    const double rho = spearman(gap, err);
    const bool gap_increases = std::is_sorted(gap.begin(), gap.end(), std::less_equal<>()) &&
                               std::adjacent_find(gap.begin(), gap.end()) == gap.end();
    if (gap_increases)
      o.check("tau sweep: Spearman(purity gap, AUC-risk error) <= 0", rho <= 0.0, fmt12(rho));
    else
      o.notes.push_back("tau sweep: purity gap does not increase with tau, trend check skipped (Spearman " +
                        fmt12(rho) + ")");
  }
  return o;
}

inline ExperimentOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out) {
  std::filesystem::create_directories(out);
  switch (cfg.experiment) {
    case ExperimentKind::verify_identities: return run_verify_identities(cfg, out);
    case ExperimentKind::noise_sweep: return run_noise_sweep(cfg, out);
    case ExperimentKind::loss_compare: return run_loss_compare(cfg, out);
    case ExperimentKind::pu_demo: return run_pu_demo(cfg, out);
    case ExperimentKind::uu_demo: return run_uu_demo(cfg, out);
    case ExperimentKind::keywords: return run_keywords(cfg, out);
  }
  return {};
}

}  // namespace symloss
