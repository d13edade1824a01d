#pragma once

// Experiment configuration: a flat "[section] key = value" text format.
// '#' and ';' start comments; list values are comma separated.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "symloss/distributions.hpp"
#include "symloss/errors.hpp"
#include "symloss/loss.hpp"
#include "symloss/text.hpp"
#include "symloss/threshold.hpp"
#include "symloss/trainer.hpp"

namespace symloss {

struct ConfigEntry {
  std::string value;
  std::size_t line = 0;
  mutable bool used = false;
};

class ConfigFile {
 public:
  using Section = std::map<std::string, ConfigEntry>;

  static ConfigFile parse(std::istream& in, std::string source = "<config>") {
    ConfigFile cfg;
    cfg.source_ = std::move(source);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto body = trim(strip_comment(line));
      if (body.empty()) continue;
      if (body.front() == '[') {
        if (body.back() != ']' || body.size() < 3)
          throw ConfigError(cfg.where(lineno) + ": malformed section header '" + std::string(body) + "'");
        section = std::string(trim(body.substr(1, body.size() - 2)));
        cfg.sections_[section];
        continue;
      }
      const auto eq = body.find('=');
      if (eq == std::string_view::npos)
        throw ConfigError(cfg.where(lineno) + ": expected 'key = value', got '" + std::string(body) + "'");
      if (section.empty())
        throw ConfigError(cfg.where(lineno) + ": key outside of any [section]");
      const std::string key(trim(body.substr(0, eq)));
      if (key.empty()) throw ConfigError(cfg.where(lineno) + ": empty key");
      auto [it, fresh] = cfg.sections_[section].emplace(
          key, ConfigEntry{std::string(trim(body.substr(eq + 1))), lineno, false});
      if (!fresh)
        throw ConfigError(cfg.where(lineno) + ": [" + section + "] " + key + " is set twice (first on line " +
                          std::to_string(it->second.line) + ")");
    }
    return cfg;
  }

  static ConfigFile parse_string(const std::string& text, std::string source = "<config>") {
    std::istringstream in(text);
    return parse(in, std::move(source));
  }

  static ConfigFile load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("file not found: " + path.string());
    return parse(in, path.string());
  }

  const std::string& source() const noexcept { return source_; }
  bool has_section(const std::string& s) const { return sections_.count(s) != 0; }

  const ConfigEntry* find(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    k->second.used = true;
    return &k->second;
  }

  // "file:line: [section] key: message"
  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& message) const {
    const auto* e = peek(section, key);
    throw ConfigError((e ? where(e->line) : source_) + ": [" + section + "] " + key + ": " + message);
  }

  std::optional<std::string> get_string(const std::string& section, const std::string& key) const {
    if (const auto* e = find(section, key)) return e->value;
    return std::nullopt;
  }

  std::optional<double> get_real(const std::string& section, const std::string& key) const {
    const auto* e = find(section, key);
    if (!e) return std::nullopt;
    return parse_real(section, key, e->value);
  }

  std::optional<long long> get_int(const std::string& section, const std::string& key) const {
    const auto* e = find(section, key);
    if (!e) return std::nullopt;
    return parse_int(section, key, e->value);
  }

  std::optional<bool> get_bool(const std::string& section, const std::string& key) const {
    const auto* e = find(section, key);
    if (!e) return std::nullopt;
    if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
    if (e->value == "false" || e->value == "no" || e->value == "0") return false;
    fail(section, key, "expected true/false, got '" + e->value + "'");
  }

  std::optional<std::vector<std::string>> get_list(const std::string& section,
                                                   const std::string& key) const {
    const auto* e = find(section, key);
    if (!e) return std::nullopt;
    std::vector<std::string> out;
    std::string_view rest = e->value;
    while (true) {
      const auto comma = rest.find(',');
      const auto item = trim(rest.substr(0, comma));
      if (!item.empty()) out.emplace_back(item);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return out;
  }

  std::optional<std::vector<double>> get_real_list(const std::string& section,
                                                   const std::string& key) const {
    auto items = get_list(section, key);
    if (!items) return std::nullopt;
    std::vector<double> out;
    for (const auto& s : *items) out.push_back(parse_real(section, key, s));
    return out;
  }

  std::optional<std::vector<long long>> get_int_list(const std::string& section,
                                                     const std::string& key) const {
    auto items = get_list(section, key);
    if (!items) return std::nullopt;
    std::vector<long long> out;
    for (const auto& s : *items) out.push_back(parse_int(section, key, s));
    return out;
  }

  /// Throws on the first key nobody asked for, so typos do not pass silently.
  void reject_unused() const {
    for (const auto& [section, keys] : sections_)
      for (const auto& [key, entry] : keys)
        if (!entry.used) throw ConfigError(where(entry.line) + ": [" + section + "] " + key + ": unknown key");
  }

 private:
  static std::string_view strip_comment(std::string_view s) {
    const auto pos = s.find_first_of("#;");
    return pos == std::string_view::npos ? s : s.substr(0, pos);
  }

  static std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  std::string where(std::size_t line) const { return source_ + ":" + std::to_string(line); }

  const ConfigEntry* peek(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  double parse_real(const std::string& section, const std::string& key, const std::string& text) const {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) fail(section, key, "expected a number, got '" + text + "'");
    return v;
  }

  long long parse_int(const std::string& section, const std::string& key, const std::string& text) const {
    long long v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) fail(section, key, "expected an integer, got '" + text + "'");
    return v;
  }

  std::string source_;
  std::map<std::string, Section> sections_;
};

enum class ExperimentKind { verify_identities, noise_sweep, loss_compare, pu_demo, uu_demo, keywords };

inline std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::verify_identities: return "verify_identities";
    case ExperimentKind::noise_sweep: return "noise_sweep";
    case ExperimentKind::loss_compare: return "loss_compare";
    case ExperimentKind::pu_demo: return "pu_demo";
    case ExperimentKind::uu_demo: return "uu_demo";
    case ExperimentKind::keywords: return "keywords";
  }
  return "?";
}

inline std::optional<ExperimentKind> parse_experiment_kind(std::string_view s) {
  for (auto k : {ExperimentKind::verify_identities, ExperimentKind::noise_sweep, ExperimentKind::loss_compare,
                 ExperimentKind::pu_demo, ExperimentKind::uu_demo, ExperimentKind::keywords}) {
    auto name = to_string(k);
    if (s == name) return k;
    std::string dashed(name);
    std::replace(dashed.begin(), dashed.end(), '_', '-');
    if (s == dashed) return k;
  }
  return std::nullopt;
}

struct GaussianDataset {
  GaussianPairConfig gaussian{{1.0, 1.0}, {-1.0, -1.0}, {1.0, 1.0}, 2};
  std::size_t n_train_per_class = 2000;
  std::size_t n_test_per_class = 5000;
};

struct VerifyBlock {
  std::size_t instances = 100;
  std::size_t max_support = 5;
  double score_range = 3.0;
  double tolerance = 1e-10;
  double symmetric_tolerance = 1e-12;
};

struct KeywordsBlock {
  std::filesystem::path corpus;
  std::filesystem::path keywords;
  double tau = 0.15;
  WeightScheme scheme = WeightScheme::tf_idf;
  std::size_t min_doc_freq = 2;
  ThresholdMethod threshold_method = ThresholdMethod::breakeven_known_prior;
  std::optional<double> prior;
  std::vector<double> tau_sweep;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::verify_identities;
  std::filesystem::path output_dir = "out";
  std::vector<std::uint64_t> seeds{0};
  GaussianDataset dataset;
  std::vector<McdParams> noise_grid;
  std::vector<LossKind> losses;
  TrainConfig train;
  VerifyBlock verify;
  // pu_demo: class prior of the unlabeled set.  uu_demo: the two priors.
  double pu_prior = 0.4;
  double uu_pi = 0.7;
  double uu_pi_prime = 0.3;
  bool assert_monotone_gap = false;
  std::optional<double> clean_ber_max;
  KeywordsBlock keywords;
  std::string source_text;  // echo for the manifest

  void validate() const {
    if (seeds.empty()) throw ConfigError("[experiment] seeds: at least one seed is required");
    if (losses.empty()) throw ConfigError("[losses] names: at least one loss is required");
    train.validate();
    dataset.gaussian.validate();
    const bool grid_needed =
        experiment == ExperimentKind::noise_sweep || experiment == ExperimentKind::loss_compare;
    if (grid_needed && noise_grid.empty()) throw ConfigError("[noise] grid is empty");
  }
};

namespace detail {

inline LossKind parse_loss_field(const ConfigFile& f, const std::string& section, const std::string& key,
                                 const std::string& name) {
  try {
    return loss_by_name(name).kind;
  } catch (const ConfigError& e) {
    f.fail(section, key, e.what());
  }
}

template <class T>
T positive_count(const ConfigFile& f, const std::string& section, const std::string& key, long long v) {
  if (v <= 0) f.fail(section, key, "must be a positive integer");
  return static_cast<T>(v);
}

inline TrainConfig parse_train_block(const ConfigFile& f, TrainConfig t) {
  const std::string s = "train";
  if (auto v = f.get_string(s, "objective")) {
    if (*v == "ber") t.objective = Objective::ber;
    else if (*v == "auc") t.objective = Objective::auc;
    else f.fail(s, "objective", "expected ber or auc, got '" + *v + "'");
  }
  if (auto v = f.get_string(s, "loss")) t.loss = parse_loss_field(f, s, "loss", *v);
  if (auto v = f.get_real(s, "step_size")) t.step_size = *v;
  if (auto v = f.get_string(s, "optimizer")) {
    if (*v == "adam") t.optimizer = Optimizer::adam;
    else if (*v == "sgd") t.optimizer = Optimizer::sgd;
    else f.fail(s, "optimizer", "expected adam or sgd, got '" + *v + "'");
  }
  if (auto v = f.get_real(s, "beta1")) t.beta1 = *v;
  if (auto v = f.get_real(s, "beta2")) t.beta2 = *v;
  if (auto v = f.get_real(s, "epsilon")) t.epsilon = *v;
  if (auto v = f.get_int(s, "epochs")) t.epochs = positive_count<std::size_t>(f, s, "epochs", *v);
  if (auto v = f.get_int(s, "batch_size")) t.batch_size = positive_count<std::size_t>(f, s, "batch_size", *v);
  if (auto v = f.get_int(s, "pair_batch")) t.pair_batch = positive_count<std::size_t>(f, s, "pair_batch", *v);
  if (auto v = f.get_real(s, "weight_decay")) t.weight_decay = *v;
  if (auto v = f.get_string(s, "scorer")) {
    if (*v == "linear") t.scorer = ScorerKind::linear;
    else if (*v == "mlp") t.scorer = ScorerKind::mlp;
    else f.fail(s, "scorer", "expected linear or mlp, got '" + *v + "'");
  }
  if (auto v = f.get_int(s, "hidden")) t.hidden = positive_count<std::size_t>(f, s, "hidden", *v);
  try {
    t.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(f.source() + ": [train] " + e.what());
  }
  return t;
}

inline ThresholdMethod parse_threshold_method(std::string_view s) {
  if (s == "breakeven" || s == "breakeven_known_prior") return ThresholdMethod::breakeven_known_prior;
  if (s == "heuristic" || s == "heuristic_pseudo_ratio") return ThresholdMethod::heuristic_pseudo_ratio;
  if (s == "default" || s == "default_zero") return ThresholdMethod::default_zero;
  throw ConfigError("unknown threshold method '" + std::string(s) + "'");
}

}  // namespace detail

using detail::parse_threshold_method;

/// Relative paths in the file resolve against the file's directory.
inline ExperimentConfig parse_experiment_config(const ConfigFile& f,
                                                const std::filesystem::path& base_dir = {}) {
  ExperimentConfig c;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };

  if (auto v = f.get_string("experiment", "name")) {
    auto kind = parse_experiment_kind(*v);
    if (!kind) f.fail("experiment", "name", "unknown experiment '" + *v + "'");
    c.experiment = *kind;
  }
  if (auto v = f.get_string("experiment", "output_dir")) c.output_dir = *v;
  if (auto v = f.get_int_list("experiment", "seeds")) {
    c.seeds.clear();
    for (long long s : *v) {
      if (s < 0) f.fail("experiment", "seeds", "seeds must be non-negative");
      c.seeds.push_back(static_cast<std::uint64_t>(s));
    }
  }

  auto& g = c.dataset;
  if (auto v = f.get_real_list("dataset", "mean_pos")) g.gaussian.mean_pos = *v;
  if (auto v = f.get_real_list("dataset", "mean_neg")) g.gaussian.mean_neg = *v;
  if (auto v = f.get_real_list("dataset", "covariance")) g.gaussian.covariance = *v;
  g.gaussian.dimension = g.gaussian.mean_pos.size();
  try {
    g.gaussian.validate();
  } catch (const InvalidArgument& e) {
    f.fail("dataset", "mean_pos", e.what());
  }
  if (auto v = f.get_int("dataset", "n_train_per_class"))
    g.n_train_per_class = detail::positive_count<std::size_t>(f, "dataset", "n_train_per_class", *v);
  if (auto v = f.get_int("dataset", "n_test_per_class"))
    g.n_test_per_class = detail::positive_count<std::size_t>(f, "dataset", "n_test_per_class", *v);

  const auto pi_pos = f.get_real_list("noise", "pi_pos");
  const auto pi_neg = f.get_real_list("noise", "pi_neg");
  if (pi_pos.has_value() != pi_neg.has_value())
    f.fail("noise", pi_pos ? "pi_neg" : "pi_pos", "pi_pos and pi_neg must be given together");
  if (pi_pos) {
    if (pi_pos->size() != pi_neg->size()) f.fail("noise", "pi_neg", "length must match pi_pos");
    for (std::size_t i = 0; i < pi_pos->size(); ++i) {
      try {
        c.noise_grid.emplace_back((*pi_pos)[i], (*pi_neg)[i]);
      } catch (const InvalidArgument& e) {
        f.fail("noise", "pi_pos", "grid entry " + std::to_string(i) + ": " + e.what());
      }
    }
  }
  if (auto v = f.get_bool("noise", "assert_monotone_gap")) c.assert_monotone_gap = *v;
  if (auto v = f.get_real("noise", "clean_ber_max")) c.clean_ber_max = *v;

  if (auto v = f.get_list("losses", "names"))
    for (const auto& name : *v) c.losses.push_back(detail::parse_loss_field(f, "losses", "names", name));

  c.train = detail::parse_train_block(f, c.train);

  auto& vb = c.verify;
  if (auto v = f.get_int("verify", "instances"))
    vb.instances = detail::positive_count<std::size_t>(f, "verify", "instances", *v);
  if (auto v = f.get_int("verify", "max_support"))
    vb.max_support = detail::positive_count<std::size_t>(f, "verify", "max_support", *v);
  if (auto v = f.get_real("verify", "score_range")) vb.score_range = *v;
  if (auto v = f.get_real("verify", "tolerance")) vb.tolerance = *v;
  if (auto v = f.get_real("verify", "symmetric_tolerance")) vb.symmetric_tolerance = *v;

  if (auto v = f.get_real("pu", "prior")) c.pu_prior = *v;
  if (auto v = f.get_real("uu", "pi")) c.uu_pi = *v;
  if (auto v = f.get_real("uu", "pi_prime")) c.uu_pi_prime = *v;
  try {
    (void)pu_params(c.pu_prior);
  } catch (const InvalidArgument& e) {
    f.fail("pu", "prior", e.what());
  }
  try {
    (void)uu_params(c.uu_pi, c.uu_pi_prime);
  } catch (const InvalidArgument& e) {
    f.fail("uu", "pi", e.what());
  }

  auto& kb = c.keywords;
  if (auto v = f.get_string("keywords", "corpus")) kb.corpus = resolve(*v);
  if (auto v = f.get_string("keywords", "keywords")) kb.keywords = resolve(*v);
  if (auto v = f.get_real("keywords", "tau")) kb.tau = *v;
  if (auto v = f.get_string("keywords", "scheme")) {
    try {
      kb.scheme = parse_scheme(*v);
    } catch (const ConfigError& e) {
      f.fail("keywords", "scheme", e.what());
    }
  }
  if (auto v = f.get_int("keywords", "min_doc_freq"))
    kb.min_doc_freq = detail::positive_count<std::size_t>(f, "keywords", "min_doc_freq", *v);
  if (auto v = f.get_string("keywords", "threshold_method")) {
    try {
      kb.threshold_method = parse_threshold_method(*v);
    } catch (const ConfigError& e) {
      f.fail("keywords", "threshold_method", e.what());
    }
  }
  if (auto v = f.get_real("keywords", "prior")) {
    if (!(*v > 0.0 && *v < 1.0)) f.fail("keywords", "prior", "must lie in (0, 1)");
    kb.prior = *v;
  }
  if (auto v = f.get_real_list("keywords", "tau_sweep")) kb.tau_sweep = *v;

  f.reject_unused();
  if (c.losses.empty()) c.losses.push_back(c.train.loss);
  c.validate();
  return c;
}

inline ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("file not found: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  auto cfg = parse_experiment_config(ConfigFile::parse_string(buf.str(), path.string()), path.parent_path());
  cfg.source_text = buf.str();
  return cfg;
}

}  // namespace symloss
