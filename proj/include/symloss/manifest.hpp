#pragma once

// Run manifest: config echo, seeds and SHA-256 of every artifact.
// Requires OpenSSL (libcrypto).

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "symloss/config.hpp"
#include "symloss/errors.hpp"
#include "symloss/experiments.hpp"
#include "symloss/io.hpp"

namespace symloss {

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("file not found: " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// `config_text` must be enough to reproduce the run: it is what a replay
/// feeds back through the config parser.
inline json make_manifest(const ExperimentConfig& cfg, const std::string& config_text,
                          const std::filesystem::path& out, const ExperimentOutcome& outcome) {
  json artifacts = json::array();
  for (const auto& a : outcome.artifacts) {
    const auto bytes = read_file(out / a);
    artifacts.push_back({{"path", a.generic_string()}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
  }
  json assertions = json::array();
  for (const auto& a : outcome.assertions)
    assertions.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
  return {{"experiment", to_string(cfg.experiment)},
          {"seeds", cfg.seeds},
          {"config_text", config_text},
          {"artifacts", artifacts},
          {"assertions", assertions},
          {"notes", outcome.notes},
          {"passed", outcome.passed()}};
}

inline void write_manifest(const std::filesystem::path& out, const json& manifest) {
  std::ofstream f(out / "manifest.json");
  f << manifest.dump(2) << '\n';
}

}  // namespace symloss
