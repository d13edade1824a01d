// symloss: experiment runner.
//
//   symloss <subcommand> [--config FILE] [--out DIR] [--seed N]
//           [--loss NAME] [--threshold-method M] [--prior P]
//
// Without --config the bundled default for the subcommand is used.  A
// manifest.json written by an earlier run is also accepted as --config and
// replays that run.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "symloss/config.hpp"
#include "symloss/experiments.hpp"
#include "symloss/manifest.hpp"

namespace fs = std::filesystem;
using namespace symloss;

namespace {

struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> loss;
  std::optional<std::string> threshold_method;
  std::optional<double> prior;

  json to_json() const {
    json j = json::object();
    if (out) j["out"] = *out;
    if (seed) j["seed"] = *seed;
    if (loss) j["loss"] = *loss;
    if (threshold_method) j["threshold_method"] = *threshold_method;
    if (prior) j["prior"] = *prior;
    return j;
  }

  // Flags given on this command line win over the ones recorded in a manifest.
  void fill_from(const json& j) {
    if (!out && j.contains("out")) out = j["out"].get<std::string>();
    if (!seed && j.contains("seed")) seed = j["seed"].get<std::uint64_t>();
    if (!loss && j.contains("loss")) loss = j["loss"].get<std::string>();
    if (!threshold_method && j.contains("threshold_method"))
      threshold_method = j["threshold_method"].get<std::string>();
    if (!prior && j.contains("prior")) prior = j["prior"].get<double>();
  }

  void apply(ExperimentConfig& cfg) const {
    if (seed) cfg.seeds = {*seed};
    if (loss) {
      const auto kind = loss_by_name(*loss).kind;
      cfg.losses = {kind};
      cfg.train.loss = kind;
    }
    if (threshold_method) cfg.keywords.threshold_method = parse_threshold_method(*threshold_method);
    if (prior) {
      if (!(*prior > 0.0 && *prior < 1.0)) throw ConfigError("--prior must lie in (0, 1)");
      cfg.keywords.prior = *prior;
    }
  }
};

struct Loaded {
  ExperimentConfig cfg;
  std::string text;
  fs::path base_dir;
};

Loaded load(const std::string& subcommand, const std::optional<std::string>& config_path, Overrides& ov) {
  const auto expected = parse_experiment_kind(subcommand);
  fs::path path = config_path ? fs::path(*config_path)
                              : fs::path(SYMLOSS_CONFIG_DIR) / (std::string(to_string(*expected)) + ".ini");
  Loaded l;
  if (path.extension() == ".json") {
    const auto m = json::parse(read_file(path));
    l.text = m.at("config_text").get<std::string>();
    l.base_dir = m.at("base_dir").get<std::string>();
    ov.fill_from(m.at("overrides"));
  } else {
    l.text = read_file(path);
    l.base_dir = fs::absolute(path).parent_path();
  }
  l.cfg = parse_experiment_config(ConfigFile::parse_string(l.text, path.string()), l.base_dir);
  ov.apply(l.cfg);
  l.cfg.validate();

  if (l.cfg.experiment != *expected)
    throw ConfigError(path.string() + ": [experiment] name is '" + std::string(to_string(l.cfg.experiment)) +
                      "' but the subcommand is '" + subcommand + "'");
  return l;
}

int run(const std::string& subcommand, const std::optional<std::string>& config_path, Overrides ov) {
  auto l = load(subcommand, config_path, ov);
  const fs::path out = ov.out ? fs::path(*ov.out) : l.cfg.output_dir;
  const auto outcome = run_experiment(l.cfg, out);

  auto manifest = make_manifest(l.cfg, l.text, out, outcome);
  manifest["base_dir"] = l.base_dir.string();
  manifest["overrides"] = ov.to_json();
  write_manifest(out, manifest);

  for (const auto& a : outcome.assertions)
    std::cout << (a.passed ? "PASS " : "FAIL ") << a.name << (a.detail.empty() ? "" : "  [" + a.detail + "]")
              << '\n';
  for (const auto& n : outcome.notes) std::cout << "NOTE " << n << '\n';
  std::cout << "artifacts written to " << out.string() << '\n';
  return outcome.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learning from corrupted labels with symmetric losses: experiment runner"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  Overrides ov;
  app.add_option("--config", config_path, "experiment config (.ini) or a manifest.json to replay");
  app.add_option("--out", ov.out, "output directory (overrides [experiment] output_dir)");
  app.add_option("--seed", ov.seed, "run with this single seed");
  app.add_option("--loss", ov.loss, "restrict to one loss from the catalog");
  app.add_option("--threshold-method", ov.threshold_method, "keywords: breakeven, heuristic or default")
      ->check(CLI::IsMember({"breakeven", "heuristic", "default"}));
  app.add_option("--prior", ov.prior, "keywords: known class prior of the unlabeled documents");

  const char* subcommands[][2] = {
      {"verify-identities", "check the corrupted-risk decompositions on random finite instances"},
      {"noise-sweep", "train on corrupted Gaussians over a noise grid, evaluate on clean data"},
      {"loss-compare", "compare losses under both objectives on one noise grid"},
      {"pu-demo", "positive-unlabeled learning through the corrupted-label reduction"},
      {"uu-demo", "learning from two unlabeled sets through the corrupted-label reduction"},
      {"keywords", "keyword pseudo-labeling, AUC maximisation and thresholding on a corpus"},
  };
  for (const auto& [name, help] : subcommands) app.add_subcommand(name, help)->fallthrough();

  CLI11_PARSE(app, argc, argv);
  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    return run(sub, config_path, ov);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 2;
}
