#include <cstring>
#include <fstream>

#include <json.hpp>

#include "diffmdp/io.hpp"

namespace diffmdp {

namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'D', 'M', 'D', 'P', 'K', 'R', 'N', '1'};

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ConfigError("kernel file: truncated");
  return value;
}

}  // namespace

void save_kernel(const TransitionKernel& kernel, const std::string& path) {
  json header;
  header["dim"] = kernel.grid.dim();
  header["h"] = kernel.h;
  json box = json::array();
  for (const auto& ax : kernel.grid.box().axes) box.push_back({ax.lo, ax.hi});
  header["grid"] = {{"box", box}, {"counts", kernel.grid.counts()}};
  json actions = json::array();
  for (const auto& a : kernel.actions.actions) actions.push_back(a);
  header["actions"] = actions;
  header["action_cover_radius"] = kernel.actions.cover_radius;
  header["estimator"] = {{"kind", to_string(kernel.meta.kind)},
                         {"samples", kernel.meta.samples},
                         {"substeps", kernel.meta.substeps},
                         {"seed",
                          {{"master", kernel.meta.seed.master_seed},
                           {"stream", kernel.meta.seed.stream_id}}}};
  header["pre_renorm_max_dev"] = kernel.pre_renorm_max_dev;
  const std::string header_text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(header_text.size()));
  out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
  for (const auto& per_action : kernel.rows) {
    for (const auto& row : per_action) {
      put<std::uint32_t>(out, static_cast<std::uint32_t>(row.size()));
      for (const auto& e : row) {
        put<std::uint32_t>(out, e.col);
        put<double>(out, e.p);
      }
    }
  }
  if (!out) throw ConfigError("error while writing '" + path + "'");
}

TransitionKernel load_kernel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open kernel file '" + path + "'");
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw ConfigError("'" + path + "' is not a kernel file");
  const auto header_len = get<std::uint32_t>(in);
  std::string header_text(header_len, '\0');
  in.read(header_text.data(), header_len);
  if (!in) throw ConfigError("kernel file: truncated header");

  json header = json::parse(header_text);
  TransitionKernel kernel;
  kernel.h = header.at("h").get<double>();
  std::vector<Interval> axes;
  for (const auto& pair : header.at("grid").at("box"))
    axes.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
  auto counts = header.at("grid").at("counts").get<std::vector<std::uint32_t>>();
  kernel.grid = Grid(Box(std::move(axes)), std::move(counts));
  for (const auto& a : header.at("actions"))
    kernel.actions.actions.push_back(a.get<Vec>());
  kernel.actions.cover_radius = header.at("action_cover_radius").get<double>();
  const auto& est = header.at("estimator");
  kernel.meta.kind = estimator_kind_from_string(est.at("kind").get<std::string>());
  kernel.meta.samples = est.at("samples").get<std::uint64_t>();
  kernel.meta.substeps = est.at("substeps").get<std::uint32_t>();
  kernel.meta.seed.master_seed = est.at("seed").at("master").get<std::uint64_t>();
  kernel.meta.seed.stream_id = est.at("seed").at("stream").get<std::uint64_t>();
  kernel.pre_renorm_max_dev = header.at("pre_renorm_max_dev").get<double>();

  const std::size_t n = kernel.grid.size();
  const std::size_t m = kernel.actions.size();
  kernel.rows.assign(m, std::vector<SparseRow>(n));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto nnz = get<std::uint32_t>(in);
      SparseRow& row = kernel.rows[a][i];
      row.resize(nnz);
      for (auto& e : row) {
        e.col = get<std::uint32_t>(in);
        e.p = get<double>(in);
        if (e.col >= n) throw ConfigError("kernel file: column out of range");
      }
    }
  }
  return kernel;
}

}  // namespace diffmdp
