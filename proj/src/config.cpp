#include "banditlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string_view>

#include "banditlab/errors.hpp"

namespace banditlab {
namespace {

std::string escape_token(std::string_view key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string child(const std::string& pointer, std::string_view key) {
  return pointer + "/" + escape_token(key);
}

std::string child(const std::string& pointer, std::size_t index) {
  return pointer + "/" + std::to_string(index);
}

// Read access to one JSON object with a closed set of keys.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string pointer, std::initializer_list<std::string_view> allowed)
      : j_(j), pointer_(std::move(pointer)) {
    if (!j_.is_object()) throw ConfigError(pointer_, "expected an object");
    for (const auto& item : j_.items()) {
      if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
        throw ConfigError(child(pointer_, item.key()), "unknown key");
      }
    }
  }

  bool has(std::string_view key) const {
    const auto it = j_.find(std::string(key));
    return it != j_.end() && !it->is_null();
  }

  const Json& at(std::string_view key) const {
    if (!has(key)) throw ConfigError(child(pointer_, key), "required key is missing");
    return j_.at(std::string(key));
  }

  std::string path(std::string_view key) const { return child(pointer_, key); }

  double number(std::string_view key, std::optional<double> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw ConfigError(path(key), "required key is missing");
    }
    const Json& v = j_.at(std::string(key));
    if (!v.is_number()) throw ConfigError(path(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path(key), "expected a finite number");
    return d;
  }

  std::uint64_t unsigned_integer(std::string_view key, std::optional<std::uint64_t> fallback) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw ConfigError(path(key), "required key is missing");
    }
    const Json& v = j_.at(std::string(key));
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ConfigError(path(key), "expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(std::string_view key, bool fallback) const {
    if (!has(key)) return fallback;
    const Json& v = j_.at(std::string(key));
    if (!v.is_boolean()) throw ConfigError(path(key), "expected a boolean");
    return v.get<bool>();
  }

  std::string string(std::string_view key, std::optional<std::string> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw ConfigError(path(key), "required key is missing");
    }
    const Json& v = j_.at(std::string(key));
    if (!v.is_string()) throw ConfigError(path(key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(std::string_view key) const {
    const Json& v = at(key);
    if (!v.is_array()) throw ConfigError(path(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
        throw ConfigError(child(path(key), i), "expected a finite number");
      }
      out.push_back(v[i].get<double>());
    }
    return out;
  }

 private:
  const Json& j_;
  std::string pointer_;
};

RankBy parse_rank_by(const ObjectReader& r, std::string_view key) {
  const std::string s = r.string(key, "true_regret");
  const auto v = rank_by_from_string(s);
  if (!v) throw ConfigError(r.path(key), "expected true_regret or empirical_regret");
  return *v;
}

std::optional<ScheduleSpec> parse_optional_schedule(const ObjectReader& r, std::string_view key) {
  if (!r.has(key)) return std::nullopt;
  return parse_schedule(r.at(key), r.path(key));
}

H0Spec parse_h0(const Json& j, const std::string& pointer) {
  ObjectReader r(j, pointer, {"kind", "value", "values"});
  const std::string kind = r.string("kind");
  H0Spec h0;
  if (kind == "zeros") {
    h0.kind = H0Spec::Kind::kZeros;
    if (r.has("value") || r.has("values")) throw ConfigError(pointer, "zeros takes no value");
  } else if (kind == "biased") {
    h0.kind = H0Spec::Kind::kBiased;
    h0.value = r.number("value", 5.0);
    if (r.has("values")) throw ConfigError(r.path("values"), "biased takes 'value'");
  } else if (kind == "explicit") {
    h0.kind = H0Spec::Kind::kExplicit;
    h0.values = r.numbers("values");
    if (r.has("value")) throw ConfigError(r.path("value"), "explicit takes 'values'");
  } else {
    throw ConfigError(r.path("kind"), "expected zeros, biased or explicit");
  }
  return h0;
}

// PG fields shared by agents and grid base agents.
PgConfig parse_pg_fields(const ObjectReader& r, const std::string& pointer, bool rho_required) {
  PgConfig pg;
  if (rho_required || r.has("rho")) pg.rho = parse_schedule(r.at("rho"), r.path("rho"));
  pg.gamma_l2 = parse_optional_schedule(r, "gamma_l2");
  pg.gamma_ent = parse_optional_schedule(r, "gamma_ent");
  if (r.has("h0")) pg.h0 = parse_h0(r.at("h0"), r.path("h0"));
  pg.use_baseline = r.boolean("use_baseline", true);
  const std::string form = r.string("entropy_form", "log");
  if (form == "log") {
    pg.entropy_one_plus_log = false;
  } else if (form == "one_plus_log") {
    pg.entropy_one_plus_log = true;
  } else {
    throw ConfigError(r.path("entropy_form"), "expected log or one_plus_log");
  }
  const std::string est = r.string("entropy_estimator", "componentwise");
  const auto e = entropy_estimator_from_string(est);
  if (!e) throw ConfigError(r.path("entropy_estimator"), "expected sampled_action or componentwise");
  pg.entropy_estimator = *e;
  (void)pointer;
  return pg;
}

Json schedule_or_null(const std::optional<ScheduleSpec>& s) {
  return s ? to_json(*s) : Json(nullptr);
}

}  // namespace

bool is_valid_agent_name(const std::string& name) {
  if (name.empty() || name == "." || name == "..") return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '.' || c == '-';
  });
}

ScheduleSpec parse_schedule(const Json& j, const std::string& pointer) {
  ObjectReader r(j, pointer, {"kind", "c1", "c2", "alpha", "companion"});
  const auto kind = schedule_kind_from_string(r.string("kind"));
  if (!kind) {
    throw ConfigError(r.path("kind"),
                      "expected constant, linear, power, log, loglog or cumulative_rho");
  }
  ScheduleSpec spec;
  spec.kind = *kind;
  spec.c1 = r.number("c1");
  spec.c2 = r.number("c2", 0.0);
  spec.alpha = r.number("alpha", 1.0);
  if (*kind != ScheduleKind::kPower && r.has("alpha")) {
    throw ConfigError(r.path("alpha"), "alpha applies to power schedules only");
  }
  if (*kind == ScheduleKind::kConstant && r.has("c2")) {
    throw ConfigError(r.path("c2"), "constant schedules take c1 only");
  }
  if (r.has("companion")) {
    spec.companion =
        std::make_shared<const ScheduleSpec>(parse_schedule(r.at("companion"), r.path("companion")));
  }
  try {
    spec.validate();
  } catch (const ScheduleError& e) {
    throw ConfigError(pointer, e.what());
  }
  return spec;
}

RewardSpec parse_reward(const Json& j, const std::string& pointer) {
  ObjectReader r(j, pointer, {"kind", "sigma", "nu", "rescale", "q_star"});
  RewardSpec spec;
  const std::string kind = r.string("kind", "gaussian");
  if (kind == "gaussian") {
    spec.kind = RewardKind::kGaussian;
    if (r.has("nu")) throw ConfigError(r.path("nu"), "nu applies to student_t only");
    spec.sigma = r.number("sigma", 1.0);
    if (!(spec.sigma > 0.0)) throw ConfigError(r.path("sigma"), "sigma must be > 0");
  } else if (kind == "student_t") {
    spec.kind = RewardKind::kStudentT;
    if (r.has("sigma")) throw ConfigError(r.path("sigma"), "sigma applies to gaussian only");
    spec.nu = r.number("nu");
    if (!(spec.nu > 1.0)) throw ConfigError(r.path("nu"), "nu must be > 1");
  } else {
    throw ConfigError(r.path("kind"), "expected gaussian or student_t");
  }
  spec.rescale = r.boolean("rescale", true);
  if (r.has("q_star")) {
    const std::string qp = r.path("q_star");
    ObjectReader q(r.at("q_star"), qp, {"source", "mean", "std", "values"});
    const std::string source = q.string("source", "sampled");
    if (source == "sampled") {
      spec.q_star.mean = q.number("mean", 4.0);
      spec.q_star.std = q.number("std", 1.0);
      if (!(spec.q_star.std >= 0.0)) throw ConfigError(q.path("std"), "std must be >= 0");
      if (q.has("values")) throw ConfigError(q.path("values"), "values needs source explicit");
    } else if (source == "explicit") {
      spec.q_star.explicit_values = true;
      spec.q_star.values = q.numbers("values");
      if (q.has("mean") || q.has("std")) throw ConfigError(qp, "explicit q_star takes values only");
    } else {
      throw ConfigError(q.path("source"), "expected sampled or explicit");
    }
  }
  return spec;
}

AgentConfig parse_agent(const Json& j, const std::string& pointer) {
  if (!j.is_object()) throw ConfigError(pointer, "expected an object");
  const std::string type = j.contains("type") && j.at("type").is_string()
                               ? j.at("type").get<std::string>()
                               : std::string("pg");
  AgentConfig agent;
  if (type == "pg") {
    ObjectReader r(j, pointer,
                   {"name", "type", "rho", "gamma_l2", "gamma_ent", "h0", "use_baseline",
                    "entropy_form", "entropy_estimator"});
    agent.name = r.string("name");
    agent.params = parse_pg_fields(r, pointer, true);
  } else if (type == "ucb") {
    ObjectReader r(j, pointer, {"name", "type", "explore_c"});
    agent.name = r.string("name");
    UcbConfig ucb;
    ucb.explore_c = r.number("explore_c", std::sqrt(2.0));
    if (!(ucb.explore_c > 0.0)) throw ConfigError(r.path("explore_c"), "must be > 0");
    agent.params = ucb;
  } else {
    throw ConfigError(child(pointer, "type"), "expected pg or ucb");
  }
  if (!is_valid_agent_name(agent.name)) {
    throw ConfigError(child(pointer, "name"), "agent names use [A-Za-z0-9_.-] only");
  }
  return agent;
}

ExperimentConfig parse_experiment(const Json& j, const std::string& pointer) {
  ObjectReader r(j, pointer,
                 {"k", "T", "M", "master_seed", "reward", "agents", "metrics",
                  "couple_reward_noise"});
  ExperimentConfig cfg;
  cfg.k = static_cast<std::size_t>(r.unsigned_integer("k", 10));
  cfg.T = static_cast<std::size_t>(r.unsigned_integer("T", 2000));
  cfg.M = static_cast<std::size_t>(r.unsigned_integer("M", 1000));
  cfg.master_seed = r.unsigned_integer("master_seed", 0);
  if (cfg.k < 2) throw ConfigError(r.path("k"), "k must be >= 2");
  if (cfg.T < 1) throw ConfigError(r.path("T"), "T must be >= 1");
  if (cfg.M < 2) throw ConfigError(r.path("M"), "M must be >= 2 for confidence intervals");
  if (r.has("reward")) cfg.reward = parse_reward(r.at("reward"), r.path("reward"));
  if (cfg.reward.q_star.explicit_values && cfg.reward.q_star.values.size() != cfg.k) {
    throw ConfigError(r.path("reward") + "/q_star/values", "must have k entries");
  }
  if (r.has("agents")) {
    const Json& agents = r.at("agents");
    if (!agents.is_array()) throw ConfigError(r.path("agents"), "expected an array");
    for (std::size_t i = 0; i < agents.size(); ++i) {
      const std::string p = child(r.path("agents"), i);
      AgentConfig a = parse_agent(agents[i], p);
      for (const auto& prev : cfg.agents) {
        if (prev.name == a.name) throw ConfigError(p + "/name", "duplicate agent name");
      }
      if (const auto* pg = std::get_if<PgConfig>(&a.params)) {
        if (pg->h0.kind == H0Spec::Kind::kExplicit && pg->h0.values.size() != cfg.k) {
          throw ConfigError(p + "/h0/values", "must have k entries");
        }
      }
      cfg.agents.push_back(std::move(a));
    }
  }
  if (r.has("metrics")) {
    const Json& m = r.at("metrics");
    if (!m.is_array()) throw ConfigError(r.path("metrics"), "expected an array");
    for (std::size_t i = 0; i < m.size(); ++i) {
      const std::string p = child(r.path("metrics"), i);
      if (!m[i].is_string()) throw ConfigError(p, "expected a string");
      const std::string s = m[i].get<std::string>();
      if (s == "diagnostics") {
        cfg.diagnostics = true;
      } else if (s != "true_regret" && s != "empirical_regret") {
        throw ConfigError(p, "expected true_regret, empirical_regret or diagnostics");
      }
    }
  }
  cfg.couple_reward_noise = r.boolean("couple_reward_noise", false);
  return cfg;
}

ConfigFile parse_config(const Json& doc) {
  ObjectReader r(doc, "", {"experiment", "grid", "scenarios", "output"});
  ConfigFile file;
  file.experiment = parse_experiment(r.at("experiment"), r.path("experiment"));

  if (r.has("grid")) {
    const std::string gp = r.path("grid");
    ObjectReader g(r.at("grid"), gp,
                   {"axis", "values", "c1_values", "c2_values", "base_agent", "rank_by"});
    GridConfig grid;
    const auto kind = grid_kind_from_string(g.string("axis"));
    if (!kind) {
      throw ConfigError(g.path("axis"), "expected rho_constant, rho_linear or gamma_ent_constant");
    }
    grid.axis.kind = *kind;
    if (*kind == GridAxis::Kind::kRhoLinear) {
      grid.axis.c1_values = g.numbers("c1_values");
      grid.axis.c2_values = g.numbers("c2_values");
      if (g.has("values")) throw ConfigError(g.path("values"), "rho_linear takes c1_values/c2_values");
    } else {
      grid.axis.values = g.numbers("values");
      if (g.has("c1_values") || g.has("c2_values")) {
        throw ConfigError(gp, "c1_values/c2_values apply to rho_linear only");
      }
    }
    if (g.has("base_agent")) {
      const std::string bp = g.path("base_agent");
      ObjectReader b(g.at("base_agent"), bp,
                     {"rho", "gamma_l2", "gamma_ent", "h0", "use_baseline", "entropy_form",
                      "entropy_estimator"});
      grid.axis.base = parse_pg_fields(b, bp, false);
    }
    grid.rank_by = parse_rank_by(g, "rank_by");
    try {
      file.experiment.agents = expand_grid(grid.axis);
      for (const auto& a : file.experiment.agents) std::get<PgConfig>(a.params).rho.validate();
    } catch (const std::exception& e) {
      throw ConfigError(gp, e.what());
    }
    file.grid = std::move(grid);
  } else if (file.experiment.agents.empty()) {
    throw ConfigError("/experiment/agents", "at least one agent is required");
  }

  if (r.has("scenarios")) {
    const Json& s = r.at("scenarios");
    if (!s.is_array() || s.empty()) throw ConfigError(r.path("scenarios"), "expected a nonempty array");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string p = child(r.path("scenarios"), i);
      ObjectReader sr(s[i], p, {"name", "k", "reward"});
      ScenarioConfig sc;
      sc.name = sr.string("name");
      if (!is_valid_agent_name(sc.name)) throw ConfigError(sr.path("name"), "use [A-Za-z0-9_.-] only");
      for (const auto& prev : file.scenarios) {
        if (prev.name == sc.name) throw ConfigError(sr.path("name"), "duplicate scenario name");
      }
      if (sr.has("k")) {
        sc.k = static_cast<std::size_t>(sr.unsigned_integer("k", std::nullopt));
        if (*sc.k < 2) throw ConfigError(sr.path("k"), "k must be >= 2");
      }
      if (sr.has("reward")) sc.reward = parse_reward(sr.at("reward"), sr.path("reward"));
      file.scenarios.push_back(std::move(sc));
    }
  }

  if (r.has("output")) {
    const std::string op = r.path("output");
    ObjectReader o(r.at("output"), op, {"dir", "csv", "svg", "smoothing_window", "rank_by"});
    file.output.dir = o.string("dir", "out");
    file.output.csv = o.boolean("csv", true);
    file.output.svg = o.boolean("svg", false);
    file.output.smoothing_window = static_cast<std::size_t>(o.unsigned_integer("smoothing_window", 1));
    if (file.output.smoothing_window < 1) {
      throw ConfigError(o.path("smoothing_window"), "must be >= 1");
    }
    file.output.rank_by = parse_rank_by(o, "rank_by");
  }

  for (const auto& [name, cfg] : file.expand()) {
    try {
      cfg.validate();
    } catch (const std::exception& e) {
      throw ConfigError(name.empty() ? "/experiment" : "/scenarios", e.what());
    }
  }
  return file;
}

std::vector<std::pair<std::string, ExperimentConfig>> ConfigFile::expand() const {
  std::vector<std::pair<std::string, ExperimentConfig>> out;
  if (scenarios.empty()) {
    out.emplace_back("", experiment);
    return out;
  }
  for (const auto& s : scenarios) {
    ExperimentConfig cfg = experiment;
    if (s.k) cfg.k = *s.k;
    if (s.reward) cfg.reward = *s.reward;
    out.emplace_back(s.name, std::move(cfg));
  }
  return out;
}

ConfigFile load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path.string() + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

// Serialization ---------------------------------------------------------------

Json to_json(const ScheduleSpec& spec) {
  Json j;
  j["kind"] = std::string(to_string(spec.kind));
  j["c1"] = spec.c1;
  if (spec.kind != ScheduleKind::kConstant) j["c2"] = spec.c2;
  if (spec.kind == ScheduleKind::kPower) j["alpha"] = spec.alpha;
  if (spec.companion) j["companion"] = to_json(*spec.companion);
  return j;
}

Json to_json(const RewardSpec& spec) {
  Json j;
  j["kind"] = std::string(to_string(spec.kind));
  if (spec.kind == RewardKind::kGaussian) {
    j["sigma"] = spec.sigma;
  } else {
    j["nu"] = spec.nu;
  }
  j["rescale"] = spec.rescale;
  if (spec.q_star.explicit_values) {
    j["q_star"] = {{"source", "explicit"}, {"values", spec.q_star.values}};
  } else {
    j["q_star"] = {{"source", "sampled"}, {"mean", spec.q_star.mean}, {"std", spec.q_star.std}};
  }
  return j;
}

Json to_json(const AgentConfig& agent) {
  Json j;
  j["name"] = agent.name;
  if (const auto* pg = std::get_if<PgConfig>(&agent.params)) {
    j["type"] = "pg";
    j["rho"] = to_json(pg->rho);
    j["gamma_l2"] = schedule_or_null(pg->gamma_l2);
    j["gamma_ent"] = schedule_or_null(pg->gamma_ent);
    switch (pg->h0.kind) {
      case H0Spec::Kind::kZeros: j["h0"] = {{"kind", "zeros"}}; break;
      case H0Spec::Kind::kBiased: j["h0"] = {{"kind", "biased"}, {"value", pg->h0.value}}; break;
      case H0Spec::Kind::kExplicit: j["h0"] = {{"kind", "explicit"}, {"values", pg->h0.values}}; break;
    }
    j["use_baseline"] = pg->use_baseline;
    j["entropy_form"] = pg->entropy_one_plus_log ? "one_plus_log" : "log";
    j["entropy_estimator"] = std::string(to_string(pg->entropy_estimator));
  } else {
    j["type"] = "ucb";
    j["explore_c"] = std::get<UcbConfig>(agent.params).explore_c;
  }
  return j;
}

Json to_json(const ExperimentConfig& cfg) {
  Json agents = Json::array();
  for (const auto& a : cfg.agents) agents.push_back(to_json(a));
  Json metrics = Json::array({"true_regret", "empirical_regret"});
  if (cfg.diagnostics) metrics.push_back("diagnostics");
  return Json{{"k", cfg.k},
              {"T", cfg.T},
              {"M", cfg.M},
              {"master_seed", cfg.master_seed},
              {"reward", to_json(cfg.reward)},
              {"agents", agents},
              {"metrics", metrics},
              {"couple_reward_noise", cfg.couple_reward_noise}};
}

Json to_json(const HypothesisReport& rep) {
  return Json{{"horizon", rep.horizon},
              {"gamma_decreasing", rep.gamma_decreasing},
              {"t0", rep.t0},
              {"t0_found", rep.t0_found},
              {"c_rho_gamma_inf", rep.c_rho_gamma_inf},
              {"c_rho_gamma_argmin", rep.c_rho_gamma_argmin},
              {"sum_rho", rep.sum_rho},
              {"sum_rho_sq", rep.sum_rho_sq},
              {"sum_rho_gamma", rep.sum_rho_gamma},
              {"cv_pi_partial_sum", rep.cv_pi_partial_sum},
              {"rho_hypothesis", std::string(to_string(rep.rho_hypothesis))},
              {"gamma_hypothesis", std::string(to_string(rep.gamma_hypothesis))}};
}

Json to_json(const ConvergenceReport& rep) {
  Json j{{"length", rep.length},
         {"running_mean_grad_10", rep.running_mean_grad_10},
         {"running_mean_grad_50", rep.running_mean_grad_50},
         {"running_mean_grad_100", rep.running_mean_grad_100},
         {"max_gamma_h_norm_sq", rep.max_gamma_h_norm_sq},
         {"argmax_gamma_h_norm_sq", rep.argmax_gamma_h_norm_sq},
         {"t0", rep.t0},
         {"gamma_h_norm_sq_at_t0", rep.gamma_h_norm_sq_at_t0},
         {"avg_policy_regret_initial", rep.avg_policy_regret_initial},
         {"avg_policy_regret_final", rep.avg_policy_regret_final}};
  if (rep.schedules) j["schedules"] = to_json(*rep.schedules);
  return j;
}

}  // namespace banditlab
