#pragma once

#include <cstdint>
#include <vector>

#include "diffmdp/types.hpp"

namespace diffmdp {

/// Uniform rectangular grid over an axis-aligned box, row-major node
/// indexing with node 0 at the lower corner.
class Grid {
public:
  Grid() = default;
  Grid(Box box, std::vector<std::uint32_t> counts);

  std::size_t dim() const { return box_.dim(); }
  std::size_t size() const { return size_; }
  const Box& box() const { return box_; }
  const std::vector<std::uint32_t>& counts() const { return counts_; }
  double spacing(std::size_t axis) const { return spacing_[axis]; }

  Vec coordinate(std::size_t node) const;
  void coordinate(std::size_t node, MutView out) const;
  std::size_t index(const std::vector<std::uint32_t>& multi) const;
  std::vector<std::uint32_t> multi_index(std::size_t node) const;

  /// Closest node to x (x clipped to the box first).
  std::size_t nearest(ConstView x) const;

  bool is_boundary(std::size_t node) const;

private:
  Box box_;
  std::vector<std::uint32_t> counts_;
  Vec spacing_;
  std::size_t size_ = 0;
};

Grid build_grid(const Box& box, const std::vector<std::uint32_t>& counts);

/// Default spacing rule: delta = sigma_min * sqrt(h) / 2 per axis, rounded
/// to the nearest odd count so the box center is a node.
Grid build_default_grid(const Box& box, double sigma_min, double h);

/// Finite lattice of actions covering the control box, including
/// endpoints. cover_radius is half the lattice cell diagonal.
struct ActionNet {
  std::vector<Vec> actions;
  double cover_radius = 0.0;

  std::size_t size() const { return actions.size(); }
};

ActionNet build_action_net(const Box& control_box,
                           const std::vector<std::uint32_t>& per_axis_counts);

/// Multilinear (cloud-in-cell) deposition of a point onto the 2^d
/// surrounding nodes. The point is clipped to the box; weights are
/// nonnegative, sum to 1, and preserve the clipped point's coordinates
/// exactly: sum_j w_j x_j = clip(y).
struct Deposit {
  std::size_t node;
  double weight;
};

void deposit_cloud_in_cell(const Grid& grid, ConstView point,
                           std::vector<Deposit>& out);

}  // namespace diffmdp
