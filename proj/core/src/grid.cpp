#include "diffmdp/grid.hpp"

#include <cmath>

namespace diffmdp {

Grid::Grid(Box box, std::vector<std::uint32_t> counts)
    : box_(std::move(box)), counts_(std::move(counts)) {
  if (box_.dim() != counts_.size())
    throw ConfigError("grid: box and counts dimension mismatch");
  if (box_.dim() == 0) throw ConfigError("grid: empty box");
  spacing_.resize(box_.dim());
  size_ = 1;
  for (std::size_t i = 0; i < box_.dim(); ++i) {
    const auto& ax = box_.axes[i];
    if (!std::isfinite(ax.lo) || !std::isfinite(ax.hi) || ax.hi <= ax.lo)
      throw ConfigError("grid: non-finite or empty box axis");
    if (counts_[i] < 2) throw ConfigError("grid: need at least 2 nodes per axis");
    spacing_[i] = ax.width() / static_cast<double>(counts_[i] - 1);
    size_ *= counts_[i];
  }
}

void Grid::coordinate(std::size_t node, MutView out) const {
  // Row-major: the last axis varies fastest.
  for (std::size_t i = box_.dim(); i-- > 0;) {
    const std::size_t k = node % counts_[i];
    node /= counts_[i];
    out[i] = box_.axes[i].lo + static_cast<double>(k) * spacing_[i];
  }
}

Vec Grid::coordinate(std::size_t node) const {
  Vec out(dim());
  coordinate(node, out);
  return out;
}

std::size_t Grid::index(const std::vector<std::uint32_t>& multi) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < multi.size(); ++i)
    idx = idx * counts_[i] + multi[i];
  return idx;
}

std::vector<std::uint32_t> Grid::multi_index(std::size_t node) const {
  std::vector<std::uint32_t> multi(dim());
  for (std::size_t i = dim(); i-- > 0;) {
    multi[i] = static_cast<std::uint32_t>(node % counts_[i]);
    node /= counts_[i];
  }
  return multi;
}

std::size_t Grid::nearest(ConstView x) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < dim(); ++i) {
    const double clipped = box_.axes[i].clip(x[i]);
    auto k = static_cast<long>(
        std::lround((clipped - box_.axes[i].lo) / spacing_[i]));
    k = std::max(0l, std::min<long>(k, counts_[i] - 1));
    idx = idx * counts_[i] + static_cast<std::size_t>(k);
  }
  return idx;
}

bool Grid::is_boundary(std::size_t node) const {
  const auto multi = multi_index(node);
  for (std::size_t i = 0; i < multi.size(); ++i)
    if (multi[i] == 0 || multi[i] == counts_[i] - 1) return true;
  return false;
}

Grid build_grid(const Box& box, const std::vector<std::uint32_t>& counts) {
  return Grid(box, counts);
}

Grid build_default_grid(const Box& box, double sigma_min, double h) {
  if (sigma_min <= 0.0 || h <= 0.0)
    throw ConfigError("default grid: sigma_min and h must be positive");
  const double target = sigma_min * std::sqrt(h) / 2.0;
  std::vector<std::uint32_t> counts(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) {
    const auto half_cells =
        std::max(1l, std::lround(box.axes[i].width() / (2.0 * target)));
    counts[i] = static_cast<std::uint32_t>(2 * half_cells + 1);
  }
  return Grid(box, counts);
}

ActionNet build_action_net(const Box& control_box,
                           const std::vector<std::uint32_t>& per_axis_counts) {
  if (control_box.dim() != per_axis_counts.size())
    throw ConfigError("action net: control box and counts dimension mismatch");
  for (auto c : per_axis_counts)
    if (c < 1) throw ConfigError("action net: counts must be >= 1");

  const std::size_t dim = control_box.dim();
  std::size_t total = 1;
  for (auto c : per_axis_counts) total *= c;

  ActionNet net;
  net.actions.reserve(total);
  double diag2 = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const auto n = per_axis_counts[i];
    if (n > 1) {
      const double step = control_box.axes[i].width() / static_cast<double>(n - 1);
      diag2 += step * step;
    }
  }
  net.cover_radius = 0.5 * std::sqrt(diag2);

  std::vector<std::uint32_t> multi(dim, 0);
  for (std::size_t k = 0; k < total; ++k) {
    Vec a(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const auto& ax = control_box.axes[i];
      const auto n = per_axis_counts[i];
      a[i] = (n == 1) ? ax.center()
                      : ax.lo + ax.width() * static_cast<double>(multi[i]) /
                                    static_cast<double>(n - 1);
    }
    net.actions.push_back(std::move(a));
    for (std::size_t i = dim; i-- > 0;) {
      if (++multi[i] < per_axis_counts[i]) break;
      multi[i] = 0;
    }
  }
  return net;
}

void deposit_cloud_in_cell(const Grid& grid, ConstView point,
                           std::vector<Deposit>& out) {
  out.clear();
  const std::size_t d = grid.dim();
  // Per axis: lower cell corner and the fractional offset inside the cell.
  std::uint32_t base[8];
  double frac[8];
  if (d > 8) throw ConfigError("deposition supports dimension <= 8");
  for (std::size_t i = 0; i < d; ++i) {
    const auto& ax = grid.box().axes[i];
    const double y = ax.clip(point[i]);
    double t = (y - ax.lo) / grid.spacing(i);
    const double max_cell = static_cast<double>(grid.counts()[i] - 2);
    double cell = std::floor(t);
    if (cell > max_cell) cell = max_cell;  // exact upper edge
    if (cell < 0.0) cell = 0.0;
    base[i] = static_cast<std::uint32_t>(cell);
    frac[i] = t - cell;
  }
  const std::size_t corners = std::size_t{1} << d;
  std::vector<std::uint32_t> multi(d);
  for (std::size_t corner = 0; corner < corners; ++corner) {
    double w = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      const bool upper = (corner >> i) & 1u;
      multi[i] = base[i] + (upper ? 1u : 0u);
      w *= upper ? frac[i] : (1.0 - frac[i]);
    }
    if (w != 0.0) out.push_back({grid.index(multi), w});
  }
}

}  // namespace diffmdp
