#pragma once

// Command-line driver: config loading, dispatch, artifacts, exit codes.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bolab/cli/selftest.hpp"
#include "bolab/experiments/run.hpp"
#include "bolab/solver/trajectory_io.hpp"

#ifndef BOLAB_VERSION
#define BOLAB_VERSION "unknown"
#endif

namespace bolab {

enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_numerical = 2 };

struct CliInvocation {
  std::string subcommand;
  std::string config_path;
  std::string output_dir = "out";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  int threads = default_threads();
  int verbosity = 1;
};

namespace detail {

inline void write_json(const std::filesystem::path& p, const nlohmann::json& j) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw ValidationError("cannot open " + p.string() + " for writing");
  os << j.dump(2) << '\n';
}

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::optional<ExperimentKind> kind_of(const std::string& sub) {
  if (sub == "solve") return ExperimentKind::conservation;
  if (sub == "gauge-check") return ExperimentKind::gauge_residual;
  if (sub == "smoothing") return ExperimentKind::smoothing;
  if (sub == "growth") return ExperimentKind::growth;
  if (sub == "bilinear") return ExperimentKind::bilinear;
  return std::nullopt;
}

/// Config JSON with overrides applied and the kind checked against the
/// subcommand.
inline nlohmann::json resolve_config(const CliInvocation& inv) {
  nlohmann::json j = inv.config_path.empty() ? nlohmann::json::object()
                                             : load_json_file(inv.config_path);
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& o : inv.overrides) apply_override(j, o);
  if (inv.seed) j["seed"] = *inv.seed;
  if (const auto k = kind_of(inv.subcommand)) {
    const std::string want = to_string(*k);
    if (!j.contains("kind")) {
      j["kind"] = want;
    } else if (!j["kind"].is_string() || j["kind"].get<std::string>() != want) {
      throw ValidationError("subcommand '" + inv.subcommand + "' expects kind '" +
                            want + "', config has " + j["kind"].dump());
    }
  }
  return j;
}

inline int execute(const CliInvocation& inv, nlohmann::json& manifest) {
  namespace fs = std::filesystem;
  const fs::path out = inv.output_dir;
  fs::create_directories(out);
  std::vector<std::string> files;

  if (inv.subcommand == "selftest") {
    const auto results = run_selftest();
    nlohmann::json arr = nlohmann::json::array();
    bool ok = true;
    for (const auto& r : results) {
      ok = ok && r.pass;
      arr.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
      if (inv.verbosity > 0)
        std::printf("%s %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    }
    write_json(out / "selftest.json", {{"checks", arr}, {"pass", ok}});
    files.push_back("selftest.json");
    manifest["outputs"] = files;
    return ok ? exit_ok : exit_numerical;
  }

  const nlohmann::json cj = resolve_config(inv);
  const ExperimentConfig cfg = parse_experiment_config(cj);
  manifest["config"] = to_json(cfg);
  manifest["seed"] = cfg.seed;
  if (cfg.data_seed_set) manifest["data_seed"] = cfg.data_gen.seed;

  ExperimentResult res;
  if (inv.subcommand == "solve")
    res = run_conservation(cfg, inv.threads, true);
  else if (inv.subcommand == "norms")
    res = run_norms(cfg, inv.threads);
  else
    res = run_experiment(cfg, inv.threads);

  for (const auto& [name, tr] : res.trajectories) {
    write_trajectory((out / (name + ".bin")).string(), tr, BOLAB_VERSION);
    files.push_back(name + ".bin");
  }
  for (const auto& t : res.tables) {
    t.write((out / (t.name + ".csv")).string());
    files.push_back(t.name + ".csv");
  }
  nlohmann::json summary = res.summary;
  summary["kind"] = to_string(cfg.kind);
  summary["warnings"] = res.warnings;
  write_json(out / "summary.json", summary);
  files.push_back("summary.json");
  manifest["outputs"] = files;
  manifest["warnings"] = res.warnings.size();
  if (inv.verbosity > 0)
    std::printf("%s: wrote %zu files to %s\n", inv.subcommand.c_str(), files.size(),
                out.string().c_str());
  if (inv.verbosity > 1)
    for (const auto& w : res.warnings) std::printf("warning: %s\n", w.c_str());
  return exit_ok;
}

inline void write_error(const CliInvocation& inv, const std::string& type,
                        const std::string& message, int code) {
  std::fprintf(stderr, "error (%s): %s\n", type.c_str(), message.c_str());
  try {
    std::filesystem::create_directories(inv.output_dir);
    write_json(std::filesystem::path(inv.output_dir) / "error.json",
               {{"error", type}, {"message", message}, {"exit_code", code},
                {"subcommand", inv.subcommand}, {"version", BOLAB_VERSION}});
  } catch (...) {
  }
}

}  // namespace detail

/// Runs one invocation and returns its exit code: 0 on success, 1 for
/// validation errors, 2 for numerical failures. On failure error.json is
/// written to the output directory.
inline int run(const CliInvocation& inv) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = detail::utc_timestamp();
  nlohmann::json manifest = {{"subcommand", inv.subcommand},
                             {"version", BOLAB_VERSION},
                             {"threads", inv.threads},
                             {"started", started},
                             {"overrides", inv.overrides},
                             {"config_path", inv.config_path}};
  int code = exit_ok;
  try {
    code = detail::execute(inv, manifest);
  } catch (const NumericalError& e) {
    detail::write_error(inv, "numerical", e.what(), exit_numerical);
    return exit_numerical;
  } catch (const Error& e) {
    detail::write_error(inv, "validation", e.what(), exit_validation);
    return exit_validation;
  } catch (const nlohmann::json::exception& e) {
    detail::write_error(inv, "validation", e.what(), exit_validation);
    return exit_validation;
  } catch (const std::filesystem::filesystem_error& e) {
    detail::write_error(inv, "validation", e.what(), exit_validation);
    return exit_validation;
  } catch (const std::exception& e) {
    detail::write_error(inv, "numerical", e.what(), exit_numerical);
    return exit_numerical;
  }
  manifest["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  manifest["exit_code"] = code;
  try {
    detail::write_json(std::filesystem::path(inv.output_dir) / "manifest.json", manifest);
  } catch (const Error& e) {
    detail::write_error(inv, "validation", e.what(), exit_validation);
    return exit_validation;
  }
  return code;
}

/// Parses argv and runs the selected subcommand.
inline int main_entry(int argc, char** argv) {
  CLI::App app{"Pseudospectral lab for the periodic Benjamin-Ono equation", "bolab"};
  app.set_version_flag("--version", BOLAB_VERSION);
  app.require_subcommand(1);
  CliInvocation inv;
  int verbose = 0;
  bool quiet = false;
  std::uint64_t seed = 0;
  const char* subs[][2] = {
      {"solve", "Integrate the equation and write trajectories and conservation data"},
      {"gauge-check", "Residuals of the gauge and primitive equations"},
      {"smoothing", "Resolution scaling of the smoothing residual"},
      {"growth", "Long-time growth of the H^s norm"},
      {"bilinear", "Ensemble sweep of the bilinear estimate ratio"},
      {"norms", "Norms and dyadic splits of the initial data"},
      {"selftest", "Run the built-in invariant checks"}};
  std::vector<CLI::App*> apps;
  for (auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s[0], s[1]);
    sub->add_option("--config,-c", inv.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out,-o", inv.output_dir, "Output directory");
    sub->add_option("--set", inv.overrides, "Override key=value (dotted path)")->take_all();
    sub->add_option("--threads,-j", inv.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Top-level seed");
    sub->add_flag("--verbose,-v", verbose, "More output");
    sub->add_flag("--quiet,-q", quiet, "No progress output");
    apps.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_validation;
  }
  for (CLI::App* a : apps)
    if (a->parsed()) {
      inv.subcommand = a->get_name();
      if (a->count("--seed")) inv.seed = seed;
    }
  inv.verbosity = quiet ? 0 : 1 + verbose;
  return run(inv);
}

}  // namespace bolab
