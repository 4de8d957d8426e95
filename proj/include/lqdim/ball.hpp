#pragma once

#include <cstdint>
#include <vector>

#include "lqdim/dyadic.hpp"

namespace lqdim {

// Prefix-sum index over a measure's atoms for closed-ball mass queries.
// Balls are closed over atom positions; radii are expressed in grid cells
// (radius r corresponds to r * 2^level cells).
class BallMassIndex {
 public:
  explicit BallMassIndex(const DyadicMeasure& mu);

  // Sum of masses with index in [lo, hi] (inclusive).
  double mass_between(GridIndex lo, GridIndex hi) const;

  // Mass of the closed ball of the given radius (in cells) around the grid
  // point `center`: atoms j with |j - center| <= radius_cells.
  double ball_mass(GridIndex center, double radius_cells) const;

  // Open-ball variant: atoms j with |j - center| < radius_cells.
  double open_ball_mass(GridIndex center, double radius_cells) const;

  std::size_t atom_count() const { return indices_.size(); }
  const std::vector<GridIndex>& atom_indices() const { return indices_; }

 private:
  std::vector<GridIndex> indices_;
  std::vector<double> prefix_;  // prefix_[i] = sum of masses[0..i-1]
};

// Per-level view of a set: for each coarser level j it exposes the sorted
// unique level-j indices and rank arrays, so "how many level-j cells meet
// the set within an index window" is O(log n).
class SetLevelIndex {
 public:
  explicit SetLevelIndex(const DyadicSet& a);

  int level() const { return level_; }
  std::size_t point_count() const { return points_.size(); }

  // Number of level-j cells meeting { points in [lo, hi] } (window at the
  // native level, inclusive).
  std::int64_t cells_in_window(int j, GridIndex lo, GridIndex hi) const;

  // Number of level-j cells meeting the whole set.
  std::int64_t cell_count(int j) const;

 private:
  void ensure_rank(int j) const;

  int level_ = 0;
  std::vector<GridIndex> points_;
  // rank_[j][i] = number of distinct level-j cells among points_[0..i].
  mutable std::vector<std::vector<std::int64_t>> rank_;
};

}  // namespace lqdim
