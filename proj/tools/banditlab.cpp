#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "banditlab/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"softmax policy-gradient bandit experiments"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  std::size_t threads = 0;
  std::uint64_t seed = 0;

  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "experiment config (JSON)")->required();
    cmd->add_option("--out", out_dir, "output directory (overrides output.dir)");
    cmd->add_option("--threads", threads, "worker threads (default: BANDITLAB_THREADS or all cores)");
    cmd->add_option("--seed", seed, "master seed (overrides the config)");
  };
  CLI::App* run = app.add_subcommand("run", "run the experiment(s) in a config");
  add_run_flags(run);
  CLI::App* grid = app.add_subcommand("grid", "run a config's hyperparameter grid");
  add_run_flags(grid);

  std::string rho, gamma;
  std::uint64_t horizon = 2000;
  CLI::App* cert = app.add_subcommand("certify", "check schedule hypotheses over a horizon");
  cert->add_option("--rho", rho, "rho schedule: inline JSON or file")->required();
  cert->add_option("--gamma", gamma, "gamma schedule: inline JSON or file")->required();
  cert->add_option("--horizon", horizon, "number of steps to scan");

  std::vector<std::string> csvs;
  std::string svg_out;
  std::size_t window = 1;
  CLI::App* plot = app.add_subcommand("plot", "render curve CSVs to SVG");
  plot->add_option("csv", csvs, "curve CSV files")->required();
  plot->add_option("--out", svg_out, "output SVG")->required();
  plot->add_option("--smoothing", window, "moving-average window")->check(CLI::PositiveNumber);

  CLI::App* selftest = app.add_subcommand("selftest", "quick numeric sanity checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : banditlab::kExitUsage;
  }

  banditlab::RunOptions opts;
  opts.config = config;
  if (!out_dir.empty()) opts.out_dir = out_dir;
  if (threads > 0) opts.threads = threads;
  if (run->count("--seed") + grid->count("--seed") > 0) opts.seed = seed;

  if (*run) return banditlab::cmd_run(opts, std::cout, std::cerr);
  if (*grid) return banditlab::cmd_grid(opts, std::cout, std::cerr);
  if (*cert) return banditlab::cmd_certify(rho, gamma, horizon, std::cout, std::cerr);
  if (*plot) {
    std::vector<std::filesystem::path> paths(csvs.begin(), csvs.end());
    return banditlab::cmd_plot(paths, svg_out, window, std::cout, std::cerr);
  }
  if (*selftest) return banditlab::cmd_selftest(std::cout, std::cerr);
  return banditlab::kExitUsage;
}
