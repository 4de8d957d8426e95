#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lqdim/errors.hpp"

namespace lqdim {

using GridIndex = std::int64_t;

inline constexpr int kMaxLevel = 48;
inline constexpr double kMassDriftTolerance = 1e-9;
inline constexpr double kMassFloor = 1e-15;
inline constexpr std::uint64_t kDefaultWorkCap = std::uint64_t{1} << 34;

// Position of grid index k at level m, i.e. k * 2^-m.
inline double grid_position(GridIndex k, int level) {
  return std::ldexp(static_cast<double>(k), -level);
}

// Atomic probability measure on the grid 2^-level * Z. Atoms are stored as
// parallel (index, mass) arrays sorted by index; masses are strictly positive
// and sum to 1 after construction (the constructor renormalizes).
class DyadicMeasure {
 public:
  DyadicMeasure() = default;

  // Sorts, merges duplicate indices and renormalizes total mass to 1.
  static DyadicMeasure from_atoms(int level,
                                  std::vector<std::pair<GridIndex, double>> atoms);

  // Trusts the caller: indices sorted and unique, masses positive, total
  // mass already 1 up to accumulation error. Used where exact mass
  // preservation matters (e.g. discretization).
  static DyadicMeasure from_sorted_unchecked(int level,
                                             std::vector<GridIndex> indices,
                                             std::vector<double> masses);

  static DyadicMeasure dirac(int level, GridIndex k = 0);
  static DyadicMeasure uniform(int level);  // Lebesgue on [0,1)

  int level() const { return level_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  std::span<const GridIndex> indices() const { return indices_; }
  std::span<const double> masses() const { return masses_; }
  GridIndex min_index() const { return indices_.front(); }
  GridIndex max_index() const { return indices_.back(); }

  double position(std::size_t i) const {
    return grid_position(indices_[i], level_);
  }
  // Diameter of the support (distance between extreme atoms).
  double support_diameter() const {
    if (empty()) return 0.0;
    return grid_position(max_index() - min_index(), level_);
  }

  double total_mass() const;

  // Throws if any structural invariant fails.
  void validate() const;

 private:
  int level_ = 0;
  std::vector<GridIndex> indices_;
  std::vector<double> masses_;
};

// Sparse set of grid points k * 2^-level (equivalently, of the dyadic cells
// [k 2^-level, (k+1) 2^-level) they anchor).
class DyadicSet {
 public:
  DyadicSet() = default;

  static DyadicSet from_indices(int level, std::vector<GridIndex> indices);
  static DyadicSet full(int level);  // all cells of [0,1)
  static DyadicSet singleton(int level, GridIndex k = 0);

  int level() const { return level_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  std::span<const GridIndex> indices() const { return indices_; }
  GridIndex min_index() const { return indices_.front(); }
  GridIndex max_index() const { return indices_.back(); }
  double support_diameter() const {
    if (empty()) return 0.0;
    return grid_position(max_index() - min_index(), level_);
  }
  bool contains(GridIndex k) const;

  void validate() const;

 private:
  int level_ = 0;
  std::vector<GridIndex> indices_;
};

// Collapses mass onto the coarser grid: each level-`target_level` cell
// receives the sum of the fine masses it contains. Total mass is preserved
// exactly up to accumulation error.
DyadicMeasure discretize(const DyadicMeasure& mu, int target_level);

// Set counterpart: the level-`target_level` cells meeting the set.
DyadicSet coarsen(const DyadicSet& a, int target_level);

// Support of a measure as a set on the same grid.
DyadicSet support_set(const DyadicMeasure& mu);

// Uniform probability measure on a set.
DyadicMeasure uniform_on(const DyadicSet& a);

// JSON: {"level": m, "atoms": [[k, mass], ...]} with atoms sorted by k.
void to_json(nlohmann::json& j, const DyadicMeasure& mu);
void from_json(const nlohmann::json& j, DyadicMeasure& mu);
// JSON: {"level": m, "indices": [k, ...]}
void to_json(nlohmann::json& j, const DyadicSet& a);
void from_json(const nlohmann::json& j, DyadicSet& a);

}  // namespace lqdim
