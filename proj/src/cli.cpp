#include "banditlab/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "banditlab/csv.hpp"
#include "banditlab/errors.hpp"
#include "banditlab/policy_core.hpp"
#include "banditlab/svg.hpp"

namespace banditlab {
namespace {

void report_config_error(std::ostream& err, const ConfigError& e) {
  err << "error: " << e.what() << '\n';
}

Json read_json_arg(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') {
    try {
      return Json::parse(arg);
    } catch (const Json::parse_error& e) {
      throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
  }
  std::ifstream in(arg);
  if (!in) throw ConfigError("", "cannot read '" + arg + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON in '") + arg + "': " + e.what());
  }
}

CurveBundle bundle_of(const RunAggregate& agg) {
  CurveBundle b;
  for (const auto& a : agg.agents) {
    Curve c;
    c.name = a.name;
    for (std::size_t t = 0; t < a.mean_regret.size(); ++t) {
      c.t.push_back(static_cast<double>(t));
      c.mean.push_back(a.mean_regret[t]);
      c.ci_lo.push_back(a.mean_regret[t] - a.ci_half_width[t]);
      c.ci_hi.push_back(a.mean_regret[t] + a.ci_half_width[t]);
    }
    b.curves.push_back(std::move(c));
  }
  return b;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("", "cannot write '" + path.string() + "'");
  out << text;
}

int execute(const RunOptions& options, bool require_grid, std::ostream& out, std::ostream& err) {
  ConfigFile file;
  try {
    file = load_config(options.config);
  } catch (const ConfigError& e) {
    report_config_error(err, e);
    return kExitUsage;
  }
  if (require_grid && !file.grid) {
    err << "error: /grid: the grid command needs a \"grid\" section\n";
    return kExitUsage;
  }
  if (options.seed) file.experiment.master_seed = *options.seed;
  const RankBy rank_by = file.grid ? file.grid->rank_by : file.output.rank_by;
  const std::filesystem::path root = options.out_dir ? *options.out_dir
                                                     : std::filesystem::path(file.output.dir);
  const std::size_t threads = resolve_threads(options.threads);

  int status = kExitOk;
  try {
    for (auto [name, cfg] : file.expand()) {
      if (options.seed) cfg.master_seed = *options.seed;
      const std::filesystem::path dir = name.empty() ? root : root / name;
      std::filesystem::create_directories(dir);

      const RunAggregate agg = run_many(cfg, threads);
      if (file.output.csv) {
        for (const auto& a : agg.agents) write_curve_csv(dir / (a.name + ".csv"), a);
      }
      if (file.output.svg) {
        SvgOptions svg;
        svg.smoothing_window = file.output.smoothing_window;
        svg.title = name.empty() ? "mean regret" : "mean regret (" + name + ")";
        write_text(dir / "regret.svg", render_svg(bundle_of(agg), svg));
      }
      const Json summary = summary_json(cfg, agg, rank_by);
      write_text(dir / "summary.json", summary.dump(2) + "\n");

      out << (name.empty() ? std::string() : "[" + name + "] ") << "best by "
          << to_string(rank_by) << ": " << summary["argmin"].get<std::string>() << '\n';
      for (const auto& a : agg.agents) {
        if (2 * a.divergence_count > agg.M) {
          err << "error: agent '" << a.name << "' diverged in " << a.divergence_count << " of "
              << agg.M << " runs\n";
          status = kExitDiverged;
        }
      }
    }
  } catch (const ConfigError& e) {
    report_config_error(err, e);
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return status;
}

}  // namespace

std::size_t resolve_threads(std::optional<std::size_t> flag) {
  if (flag && *flag > 0) return *flag;
  if (const char* env = std::getenv("BANDITLAB_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

Json summary_json(const ExperimentConfig& config, const RunAggregate& agg, RankBy rank_by) {
  const Ranking ranking = rank_agents(agg, rank_by);
  Json agents = Json::array();
  for (std::size_t i = 0; i < agg.agents.size(); ++i) {
    const AgentAggregate& a = agg.agents[i];
    Json j;
    j["name"] = a.name;
    j["final_window_mean_regret"] = final_window_mean(a.mean_regret);
    j["final_window_mean_empirical_regret"] = final_window_mean(a.mean_empirical_regret);
    j["final_mean_regret"] = a.mean_regret.back();
    j["final_ci_half_width"] = a.ci_half_width.back();
    j["divergence_count"] = a.divergence_count;
    j["mean_min_pi_best"] = a.mean_min_pi_best;
    j["min_min_pi_best"] = a.min_min_pi_best;

    const AgentConfig& ac = config.agent(a.name);
    std::optional<HypothesisReport> cert;
    if (const auto* pg = std::get_if<PgConfig>(&ac.params)) {
      if (pg->gamma_l2 && agg.T >= 2) {
        cert = certify(pg->rho, *pg->gamma_l2, agg.T);
        j["schedules"] = to_json(*cert);
      }
    }
    if (a.diagnostics && agg.T >= 100) {
      j["convergence"] = to_json(convergence_report(*a.diagnostics, cert));
    }
    agents.push_back(std::move(j));
  }
  return Json{{"config", to_json(config)},
              {"rank_by", std::string(to_string(rank_by))},
              {"argmin", agg.agents[ranking.argmin].name},
              {"agents", std::move(agents)}};
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  return execute(options, false, out, err);
}

int cmd_grid(const RunOptions& options, std::ostream& out, std::ostream& err) {
  return execute(options, true, out, err);
}

int cmd_certify(const std::string& rho, const std::string& gamma, std::uint64_t horizon,
                std::ostream& out, std::ostream& err) {
  try {
    const ScheduleSpec r = parse_schedule(read_json_arg(rho), "/rho");
    const ScheduleSpec g = parse_schedule(read_json_arg(gamma), "/gamma");
    if (horizon < 2) throw ConfigError("/horizon", "horizon must be >= 2");
    out << to_json(certify(r, g, horizon)).dump(2) << '\n';
  } catch (const ConfigError& e) {
    report_config_error(err, e);
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

int cmd_plot(const std::vector<std::filesystem::path>& csvs, const std::filesystem::path& svg,
             std::size_t smoothing_window, std::ostream& out, std::ostream& err) {
  try {
    if (csvs.empty()) throw ConfigError("", "no CSV files given");
    CurveBundle bundle;
    for (const auto& p : csvs) bundle.curves.push_back(read_curve_csv(p));
    SvgOptions options;
    options.smoothing_window = smoothing_window;
    write_text(svg, render_svg(bundle, options));
    out << "wrote " << svg.string() << '\n';
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

int cmd_selftest(std::ostream& out, std::ostream& /*err*/) {
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    out << (ok ? "PASS " : "FAIL ") << name << '\n';
    if (!ok) ++failures;
  };

  {
    const Policy pi = softmax(PreferenceVector({1.0, 0.0}));
    check("softmax", std::abs(pi[0] - 1.0 / (1.0 + std::exp(-1.0))) < 1e-12);
  }
  {
    std::mt19937_64 gen(7);
    std::normal_distribution<double> nd(0.0, 1.0);
    double worst = 0.0;
    for (int inst = 0; inst < 20; ++inst) {
      std::vector<double> h(5), q(5);
      for (auto& x : h) x = nd(gen);
      for (auto& x : q) x = nd(gen);
      const ArmStats stats(q);
      const auto g = grad_l0(PreferenceVector(h), stats);
      for (std::size_t a = 0; a < h.size(); ++a) {
        auto hp = h, hm = h;
        hp[a] += 1e-5;
        hm[a] -= 1e-5;
        const double fd = (objective_l_gamma(PreferenceVector(hp), stats, 0.0) -
                           objective_l_gamma(PreferenceVector(hm), stats, 0.0)) /
                          2e-5;
        worst = std::max(worst, std::abs(fd - g[a]) / std::max(1e-8, std::abs(g[a])));
      }
    }
    check("gradient finite difference", worst < 1e-5);
  }
  {
    const auto rep = certify(ScheduleSpec::constant(0.1), ScheduleSpec::linear(1.0, 0.2), 2000);
    check("schedule certificate", std::abs(rep.c_rho_gamma_inf - 5.0 / 3.0) < 1e-9 && rep.t0 == 0);
  }
  {
    ExperimentConfig cfg;
    cfg.T = 50;
    cfg.M = 4;
    AgentConfig a;
    a.name = "pg";
    a.params = PgConfig{};
    cfg.agents.push_back(a);
    std::ostringstream one, many;
    write_curve_csv(one, run_many(cfg, 1).agents[0]);
    write_curve_csv(many, run_many(cfg, 3).agents[0]);
    check("thread-count determinism", one.str() == many.str());
  }
  return failures == 0 ? kExitOk : kExitFailure;
}

}  // namespace banditlab
