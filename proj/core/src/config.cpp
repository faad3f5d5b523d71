#include "diffmdp/config.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "diffmdp/parallel.hpp"

namespace diffmdp {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& context,
                  std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError("config: unknown key '" + item.key() + "' in " + context);
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

unsigned ExperimentConfig::effective_threads() const {
  return threads == 0 ? default_thread_count() : threads;
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");

  require_keys(root, "top level",
               {"model", "alpha", "h_list", "grid", "action_net", "kernel",
                "solver", "rollout", "coupling", "lyapunov", "longrun", "x0",
                "master_seed", "out_dir", "threads", "kernel_file"});

  ExperimentConfig cfg;
  if (!root.contains("model")) throw ConfigError("config: missing 'model'");
  cfg.model_id = root.at("model").get<std::string>();
  read(root, "alpha", cfg.alpha);
  if (!root.contains("h_list")) throw ConfigError("config: missing 'h_list'");
  cfg.h_list = root.at("h_list").get<std::vector<double>>();

  if (root.contains("grid")) {
    const json& g = root.at("grid");
    require_keys(g, "grid", {"counts"});
    if (g.contains("counts"))
      cfg.grid_counts = g.at("counts").get<std::vector<std::uint32_t>>();
  }
  if (root.contains("action_net")) {
    const json& a = root.at("action_net");
    require_keys(a, "action_net", {"counts"});
    if (a.contains("counts"))
      cfg.action_counts = a.at("counts").get<std::vector<std::uint32_t>>();
  }
  if (root.contains("kernel")) {
    const json& k = root.at("kernel");
    require_keys(k, "kernel", {"estimator", "samples", "substeps"});
    if (k.contains("estimator"))
      cfg.estimator = estimator_kind_from_string(k.at("estimator").get<std::string>());
    read(k, "samples", cfg.kernel_samples);
    read(k, "substeps", cfg.kernel_substeps);
  }
  if (root.contains("solver")) {
    const json& s = root.at("solver");
    require_keys(s, "solver", {"vi_tol", "rvi_tol", "iteration_cap"});
    read(s, "vi_tol", cfg.vi_tol);
    read(s, "rvi_tol", cfg.rvi_tol);
    read(s, "iteration_cap", cfg.iteration_cap);
  }
  if (root.contains("rollout")) {
    const json& r = root.at("rollout");
    require_keys(r, "rollout",
                 {"replications", "tol", "ergodic_replications", "ergodic_horizon",
                  "burn_in", "dt_substeps"});
    read(r, "replications", cfg.disc_replications);
    read(r, "tol", cfg.disc_tol);
    read(r, "ergodic_replications", cfg.erg_replications);
    read(r, "ergodic_horizon", cfg.erg_horizon);
    read(r, "burn_in", cfg.erg_burn_in);
    read(r, "dt_substeps", cfg.dt_substeps);
  }
  if (root.contains("coupling")) {
    const json& c = root.at("coupling");
    require_keys(c, "coupling", {"replications", "horizon"});
    read(c, "replications", cfg.coupling_replications);
    read(c, "horizon", cfg.coupling_horizon);
  }
  if (root.contains("lyapunov")) {
    const json& l = root.at("lyapunov");
    require_keys(l, "lyapunov", {"slack", "epsilon_slack"});
    read(l, "slack", cfg.lyap_slack);
    read(l, "epsilon_slack", cfg.epsilon_slack);
  }
  if (root.contains("longrun")) {
    const json& l = root.at("longrun");
    require_keys(l, "longrun", {"horizon", "burn_in", "dt"});
    read(l, "horizon", cfg.longrun_horizon);
    read(l, "burn_in", cfg.longrun_burn_in);
    read(l, "dt", cfg.longrun_dt);
  }
  if (root.contains("x0")) cfg.x0 = root.at("x0").get<Vec>();
  read(root, "master_seed", cfg.master_seed);
  read(root, "out_dir", cfg.out_dir);
  read(root, "threads", cfg.threads);
  if (root.contains("kernel_file"))
    cfg.kernel_file = root.at("kernel_file").get<std::string>();

  // Validation.
  const BenchmarkModel bench = make_benchmark(cfg.model_id);
  if (cfg.h_list.empty()) throw ConfigError("config: h_list must be nonempty");
  for (double h : cfg.h_list)
    if (!(h > 0.0)) throw ConfigError("config: h values must be positive");
  for (std::size_t i = 1; i < cfg.h_list.size(); ++i)
    if (cfg.h_list[i] >= cfg.h_list[i - 1])
      throw ConfigError("config: h_list must be strictly decreasing");
  for (double tol : {cfg.vi_tol, cfg.rvi_tol, cfg.disc_tol, cfg.lyap_slack,
                     cfg.epsilon_slack})
    if (!(tol > 0.0)) throw ConfigError("config: tolerances must be positive");
  if (cfg.alpha <= 0.0) throw ConfigError("config: alpha must be positive");
  if (cfg.action_counts.empty()) {
    const bool uncontrolled = bench.model.control_box.degenerate();
    cfg.action_counts.assign(bench.model.control_box.dim(), uncontrolled ? 1u : 5u);
  }
  if (cfg.action_counts.size() != bench.model.control_box.dim())
    throw ConfigError("config: action_net counts dimension mismatch");
  if (cfg.x0 && static_cast<int>(cfg.x0->size()) != bench.model.dim)
    throw ConfigError("config: x0 dimension mismatch");
  if (cfg.kernel_file && !std::filesystem::exists(*cfg.kernel_file))
    throw ConfigError("config: kernel_file '" + *cfg.kernel_file + "' does not exist");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config(text);
}

SweepSettings sweep_settings(const ExperimentConfig& config,
                             const BenchmarkModel& bench) {
  SweepSettings s;
  s.alpha = config.alpha;
  s.x0 = config.start_point(bench);
  s.h_list = config.h_list;
  s.action_counts = config.action_counts;
  s.grid_counts = config.grid_counts;
  s.estimator = config.estimator;
  s.kernel_samples = config.kernel_samples;
  s.kernel_substeps = config.kernel_substeps;
  s.vi_tol = config.vi_tol;
  s.rvi_tol = config.rvi_tol;
  s.iteration_cap = config.iteration_cap;
  s.disc_replications = config.disc_replications;
  s.disc_tol = config.disc_tol;
  s.erg_replications = config.erg_replications;
  s.erg_horizon = config.erg_horizon;
  s.erg_burn_in = config.erg_burn_in;
  s.dt_substeps = config.dt_substeps;
  s.coupling_replications = config.coupling_replications;
  s.coupling_horizon = config.coupling_horizon;
  s.master_seed = config.master_seed;
  s.threads = config.effective_threads();
  return s;
}

}  // namespace diffmdp
