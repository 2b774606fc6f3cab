#pragma once

// Subcommand implementations behind tools/banditlab. Each returns a process
// exit status and writes human-readable output to `out`/`err`.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "banditlab/config.hpp"

namespace banditlab {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,     // schema, usage and I/O errors
  kExitDiverged = 3,  // some agent diverged in more than half of its runs
};

struct RunOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out_dir;  // overrides output.dir
  std::optional<std::size_t> threads;
  std::optional<std::uint64_t> seed;             // overrides master_seed
};

// --threads, then BANDITLAB_THREADS, then the hardware concurrency.
std::size_t resolve_threads(std::optional<std::size_t> flag);

// Runs every experiment in the config and writes <out>/<agent>.csv,
// <out>/summary.json and, when enabled, <out>/regret.svg. Scenario configs
// write into <out>/<scenario>/.
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);
// Same as cmd_run but the config must carry a "grid" section.
int cmd_grid(const RunOptions& options, std::ostream& out, std::ostream& err);

// `rho` and `gamma` are inline JSON schedule specs or paths to JSON files.
int cmd_certify(const std::string& rho, const std::string& gamma, std::uint64_t horizon,
                std::ostream& out, std::ostream& err);

int cmd_plot(const std::vector<std::filesystem::path>& csvs, const std::filesystem::path& svg,
             std::size_t smoothing_window, std::ostream& out, std::ostream& err);

// Quick numeric sanity checks; one PASS/FAIL line each.
int cmd_selftest(std::ostream& out, std::ostream& err);

// The summary.json document for one finished experiment.
Json summary_json(const ExperimentConfig& config, const RunAggregate& aggregate, RankBy rank_by);

}  // namespace banditlab
