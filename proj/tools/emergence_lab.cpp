// emergence-lab: run, list and re-check experiments.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "emlab/config.hpp"
#include "emlab/experiments.hpp"

namespace {

constexpr int kUsage = 2;
constexpr int kIo = 3;
constexpr int kCheckFailed = 1;

int do_run(const std::string& experiment, const std::string& config_path, std::uint64_t seed,
           const std::string& out) {
  if (!emlab::is_experiment(experiment)) {
    std::fprintf(stderr, "unknown experiment '%s'; see `emergence-lab list`\n", experiment.c_str());
    return kUsage;
  }
  emlab::Config config;
  try {
    if (!config_path.empty()) config = emlab::Config::load(config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config: %s\n", e.what());
    return kUsage;
  }
  emlab::ExperimentManifest m;
  try {
    m = emlab::run_experiment(experiment, config, seed, out);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kIo;
  }
  for (const auto& c : m.checks) {
    std::printf("%s  %s%s%s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.empty() ? "" : "  ",
                c.detail.c_str());
  }
  std::printf("%zu outputs, %zu checks, manifest %s\n", m.outputs.size(), m.checks.size(),
              (std::filesystem::path(out) / (experiment + ".manifest.json")).c_str());
  return m.passed() ? 0 : kCheckFailed;
}

int do_check(const std::string& out) {
  std::vector<emlab::ManifestReport> reports;
  try {
    reports = emlab::verify_manifests(out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kIo;
  }
  if (reports.empty()) {
    std::fprintf(stderr, "no manifests in %s\n", out.c_str());
    return kIo;
  }
  bool ok = true;
  for (const auto& r : reports) {
    std::printf("%s  %s\n", r.ok() ? "OK  " : "BAD ", r.manifest.filename().c_str());
    for (const auto& p : r.problems) std::printf("      %s\n", p.c_str());
    ok = ok && r.ok();
  }
  return ok ? 0 : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emergence and entropy experiments for low-dimensional maps"};
  app.require_subcommand(1);

  std::string experiment, config_path, out = "out";
  std::uint64_t seed = 1;
  auto* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("--experiment", experiment, "Experiment name (see list)")->required();
  run->add_option("--config", config_path, "key=value config file");
  run->add_option("--seed", seed, "Random seed")->capture_default_str();
  run->add_option("--out", out, "Output directory")->capture_default_str();

  auto* list = app.add_subcommand("list", "List experiments");

  std::string check_out = "out";
  auto* check = app.add_subcommand("check", "Re-verify manifests and data files in a directory");
  check->add_option("--out", check_out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  if (*run) return do_run(experiment, config_path, seed, out);
  if (*list) {
    for (const auto& e : emlab::experiment_catalog()) std::printf("%-32s %s\n", e.name.c_str(), e.summary.c_str());
    return 0;
  }
  if (*check) return do_check(check_out);
  return kUsage;
}
