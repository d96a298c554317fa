#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "emlab/config.hpp"

namespace emlab {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct OutputFile {
  std::string file;  // relative to the output directory
  std::uint64_t bytes = 0;
  std::string fnv1a64;  // 16 hex digits
};

struct ExperimentManifest {
  std::string experiment;
  /// Every parameter the run read, with defaults filled in.
  Config config;
  std::uint64_t seed = 0;
  std::string started;  // UTC, ISO 8601
  std::string finished;
  std::vector<OutputFile> outputs;
  std::vector<CheckResult> checks;

  bool passed() const;
};

struct ExperimentInfo {
  std::string name;
  std::string summary;
};

const std::vector<ExperimentInfo>& experiment_catalog();
bool is_experiment(std::string_view name);

/// Thrown for an unknown experiment name.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Runs one experiment, writing its data files and `<name>.manifest.json`
/// into `out` (created if missing). Throws UsageError for unknown names and
/// std::runtime_error when files cannot be written.
ExperimentManifest run_experiment(const std::string& name, const Config& config, std::uint64_t seed,
                                  const std::filesystem::path& out);

std::string manifest_to_json(const ExperimentManifest& manifest);
ExperimentManifest manifest_from_json(std::string_view text);

/// 64-bit FNV-1a of a byte string.
std::uint64_t fnv1a64(std::string_view bytes);

struct ManifestReport {
  std::filesystem::path manifest;
  std::string experiment;
  bool checks_passed = false;
  /// Missing files, size or hash mismatches, unreadable manifests.
  std::vector<std::string> problems;

  bool ok() const { return checks_passed && problems.empty(); }
};

/// Re-verifies every `*.manifest.json` in `out`: listed files exist with
/// the recorded size and hash, and every recorded check passed.
std::vector<ManifestReport> verify_manifests(const std::filesystem::path& out);

}  // namespace emlab
