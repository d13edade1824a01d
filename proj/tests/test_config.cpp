#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "symloss/config.hpp"
#include "symloss/experiments.hpp"
#include "symloss/manifest.hpp"

using namespace symloss;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text) {
  return parse_experiment_config(ConfigFile::parse_string(text, "t.ini"));
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("symloss_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const std::string kSmallSweep = R"(
[experiment]
name = noise_sweep
seeds = 0, 1
[dataset]
mean_pos = 1.5, 1.5
mean_neg = -1.5, -1.5
covariance = 0.25, 0.25
n_train_per_class = 100
n_test_per_class = 500
[noise]
pi_pos = 1.0, 0.8
pi_neg = 0.0, 0.3
clean_ber_max = 0.05
[losses]
names = sigmoid, logistic
[train]
epochs = 20
)";

}  // namespace

TEST(ConfigFile, ParsesSectionsListsAndComments) {
  const auto f = ConfigFile::parse_string("# top\n[a]\nx = 1.5 ; trailing\ny = p, q ,r\n\n[b]\nz=7\n");
  EXPECT_EQ(*f.get_real("a", "x"), 1.5);
  EXPECT_EQ(*f.get_list("a", "y"), (std::vector<std::string>{"p", "q", "r"}));
  EXPECT_EQ(*f.get_int("b", "z"), 7);
  EXPECT_FALSE(f.get_string("b", "missing").has_value());
  EXPECT_NO_THROW(f.reject_unused());
}

TEST(ConfigFile, Diagnostics) {
  EXPECT_NE(error_of("[experiment]\nname = verify_identities\n[losses]\nnames = sigmoid, sigmod\n")
                .find("t.ini:4: [losses] names: unknown loss 'sigmod'"),
            std::string::npos);
  EXPECT_NE(error_of("[train]\nepochs = ten\n").find("t.ini:2: [train] epochs: expected an integer"),
            std::string::npos);
  EXPECT_NE(error_of("[train]\nstepsize = 0.1\n").find("t.ini:2: [train] stepsize: unknown key"),
            std::string::npos);
  EXPECT_NE(error_of("x = 1\n").find("t.ini:1: key outside"), std::string::npos);
  EXPECT_NE(error_of("[a\n").find("t.ini:1: malformed section"), std::string::npos);
  EXPECT_NE(error_of("[train]\nepochs = 1\nepochs = 2\n").find("set twice"), std::string::npos);
  EXPECT_NE(error_of("[experiment]\nname = bogus\n").find("[experiment] name"), std::string::npos);
  EXPECT_NE(error_of("[noise]\npi_pos = 0.4\npi_neg = 0.6\n").find("[noise] pi_pos"), std::string::npos);
  EXPECT_NE(error_of("[experiment]\nname = noise_sweep\n").find("grid is empty"), std::string::npos);
  EXPECT_NE(error_of("[experiment]\nseeds =\n").find("seeds"), std::string::npos);
  EXPECT_NE(error_of("[train]\nstep_size = -1\n").find("[train]"), std::string::npos);
}

TEST(ExperimentConfig, Defaults) {
  const auto c = parse("[experiment]\nname = verify-identities\n");
  EXPECT_EQ(c.experiment, ExperimentKind::verify_identities);
  EXPECT_EQ(c.losses, std::vector<LossKind>{LossKind::sigmoid});
  EXPECT_EQ(c.seeds, std::vector<std::uint64_t>{0});
}

TEST(ExperimentConfig, BundledConfigsParse) {
  for (const char* name : {"verify_identities", "noise_sweep", "loss_compare", "pu_demo", "uu_demo", "keywords"}) {
    const auto c = load_experiment_config(fs::path(SYMLOSS_CONFIG_DIR) / (std::string(name) + ".ini"));
    EXPECT_EQ(to_string(c.experiment), name);
  }
}

TEST(Experiments, VerifyIdentitiesSingleRow) {
  auto c = parse("[experiment]\nname = verify_identities\n[losses]\nnames = sigmoid\n[verify]\ninstances = 1\n");
  const auto out = scratch("verify1");
  const auto o = run_experiment(c, out);
  EXPECT_TRUE(o.passed());
  std::ifstream csv(out / "residuals.csv");
  std::string line;
  std::size_t rows = 0;
  std::getline(csv, line);
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 2u);  // one BER row and one AUC row
}

TEST(Experiments, NoiseSweepWithCleanCell) {
  const auto out = scratch("sweep");
  const auto o = run_experiment(parse(kSmallSweep), out);
  for (const auto& a : o.assertions) EXPECT_TRUE(a.passed) << a.name << " " << a.detail;
  bool clean_checked = false;
  for (const auto& a : o.assertions) clean_checked |= a.name.find("clean-cell") != std::string::npos;
  EXPECT_TRUE(clean_checked);
}

TEST(Experiments, ManifestReproducesArtifacts) {
  const auto cfg = parse(kSmallSweep);
  const auto a = scratch("rep_a"), b = scratch("rep_b");
  const auto ma = make_manifest(cfg, kSmallSweep, a, run_experiment(cfg, a));
  const auto mb = make_manifest(cfg, kSmallSweep, b, run_experiment(parse(kSmallSweep), b));
  EXPECT_EQ(ma.dump(), mb.dump());
  ASSERT_FALSE(ma["artifacts"].empty());
  for (const auto& art : ma["artifacts"]) {
    const auto path = art["path"].get<std::string>();
    EXPECT_EQ(read_file(a / path), read_file(b / path)) << path;
    EXPECT_EQ(art["sha256"].get<std::string>().size(), 64u);
  }
}

TEST(Experiments, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Experiments, SpearmanExamples) {
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3}, {3, 2, 1}), -1.0);
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3}, {10, 20, 30}), 1.0);
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3}, {5, 5, 5}), 0.0);
}

TEST(Experiments, DeriveSeedIsStable) {
  EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
  EXPECT_NE(derive_seed(1, 2), derive_seed(2, 1));
}

TEST(Experiments, KeywordsMissingFileNamesPath) {
  auto c = load_experiment_config(fs::path(SYMLOSS_CONFIG_DIR) / "keywords.ini");
  c.keywords.keywords = "/nonexistent/kw.txt";
  c.keywords.tau_sweep.clear();
  try {
    run_experiment(c, scratch("kwmissing"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/kw.txt"), std::string::npos);
  }
}

TEST(Experiments, KeywordsThresholdMethodsOnBundledCorpus) {
  auto c = load_experiment_config(fs::path(SYMLOSS_CONFIG_DIR) / "keywords.ini");
  c.keywords.tau_sweep.clear();
  const auto o = run_experiment(c, scratch("kw"));
  EXPECT_TRUE(o.passed());
  bool f1_checked = false;
  for (const auto& a : o.assertions) f1_checked |= a.name == "F1(breakeven) >= F1(default)";
  EXPECT_TRUE(f1_checked);
}
