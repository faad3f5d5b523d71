#include "diffmdp/io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace diffmdp {

using nlohmann::json;

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

void save_solution(const SolutionRecord& record, const std::string& path) {
  json j;
  j["kind"] =
      record.solution.kind == SolutionKind::Discounted ? "discounted" : "ergodic";
  j["h"] = record.h;
  j["beta"] = record.beta;
  j["alpha"] = record.alpha;
  if (record.solution.gain)
    j["gain"] = *record.solution.gain;
  else
    j["gain"] = nullptr;
  j["anchor"] = record.solution.anchor;
  j["residual"] = record.solution.residual;
  j["iterations"] = record.solution.iterations;
  j["values"] = record.solution.values;
  j["policy"] = record.policy.action;
  write_text_file(path, j.dump(2) + "\n");
}

SolutionRecord load_solution(const std::string& path) {
  json j = json::parse(read_text_file(path));
  SolutionRecord record;
  record.solution.kind = j.at("kind").get<std::string>() == "discounted"
                             ? SolutionKind::Discounted
                             : SolutionKind::Ergodic;
  record.h = j.at("h").get<double>();
  record.beta = j.at("beta").get<double>();
  record.alpha = j.at("alpha").get<double>();
  if (!j.at("gain").is_null()) record.solution.gain = j.at("gain").get<double>();
  record.solution.anchor = j.at("anchor").get<std::size_t>();
  record.solution.residual = j.at("residual").get<double>();
  record.solution.iterations = j.at("iterations").get<std::uint64_t>();
  record.solution.values = j.at("values").get<Vec>();
  record.policy.action = j.at("policy").get<std::vector<std::uint32_t>>();
  return record;
}

void save_measure(const EmpiricalMeasure& measure, const std::string& path) {
  std::ostringstream out;
  for (std::size_t i = 0; i < measure.support.size(); ++i) {
    for (double c : measure.support[i]) out << format_double(c) << '\t';
    out << format_double(measure.weights[i]) << '\n';
  }
  write_text_file(path, out.str());
}

std::string continuous_drift_report_json(const ContinuousDriftReport& report) {
  json j;
  j["check"] = "continuous_drift";
  j["pass"] = report.pass;
  j["worst_violation"] = report.worst_violation;
  j["location"] = {{"node", report.worst_node},
                   {"action", report.worst_action},
                   {"x", report.worst_x}};
  j["constants"] = {{"slack", report.slack}};
  j["v_nonnegative"] = report.sanity.nonnegative;
  j["inf_compact_proxy"] = report.sanity.interior_minimum;
  return j.dump(2) + "\n";
}

std::string discrete_drift_report_json(const DiscreteDriftReport& report) {
  json j;
  j["check"] = "discrete_drift";
  j["pass"] = report.pass;
  j["feasible"] = report.feasible;
  j["worst_violation"] = report.worst_outside;
  j["location"] = {{"node", report.worst_node}, {"action", report.worst_action}};
  j["constants"] = {{"c0_hat", report.c0_hat},
                    {"epsilon", report.epsilon},
                    {"denom", report.denom},
                    {"threshold", report.threshold}};
  j["khat_count"] = report.khat_count;
  j["khat_strictly_interior"] = report.khat_strictly_interior;
  j["v_nonnegative"] = report.sanity.nonnegative;
  j["inf_compact_proxy"] = report.sanity.interior_minimum;
  return j.dump(2) + "\n";
}

std::string sweep_csv(const SweepTable& table) {
  std::ostringstream out;
  out << "h,grid_n,actions_m,samples,J_star_x0,rho_h,rollout_disc_mean,"
         "rollout_disc_se,rollout_erg_mean,rollout_erg_se,gap_vs_ref,"
         "coupling_Z,runtime_s,master_seed\n";
  for (const auto& r : table.rows) {
    out << format_double(r.h) << ',' << r.grid_n << ',' << r.actions_m << ','
        << r.samples << ',' << format_double(r.j_star_x0) << ','
        << format_double(r.rho_h) << ',' << format_double(r.rollout_disc_mean)
        << ',' << format_double(r.rollout_disc_se) << ','
        << format_double(r.rollout_erg_mean) << ','
        << format_double(r.rollout_erg_se) << ',' << format_double(r.gap_vs_ref)
        << ',' << format_double(r.coupling_z) << ',' << format_double(r.runtime_s)
        << ',' << r.master_seed << '\n';
  }
  return out.str();
}

std::string coupling_csv(const CouplingTable& table) {
  std::ostringstream out;
  out << "h,sampling_steps,Z\n";
  for (const auto& r : table.rows)
    out << format_double(r.h) << ',' << r.sampling_steps << ','
        << format_double(r.z) << '\n';
  out << "# fitted_loglog_slope," << format_double(table.fitted_slope) << '\n';
  return out.str();
}

void write_manifest(const std::string& path, const std::string& command,
                    const std::string& config_path, std::uint64_t master_seed) {
  json j;
  j["command"] = command;
  j["config"] = config_path;
  j["config_fnv1a64"] =
      config_path.empty() ? 0ull : fnv1a64(read_text_file(config_path));
  j["master_seed"] = master_seed;
  j["version"] = "0.1.0";
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  j["wall_clock_unix_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace diffmdp
