#include "lqdim/ball.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lqdim {

BallMassIndex::BallMassIndex(const DyadicMeasure& mu)
    : indices_(mu.indices().begin(), mu.indices().end()) {
  prefix_.resize(indices_.size() + 1, 0.0);
  const auto ws = mu.masses();
  for (std::size_t i = 0; i < ws.size(); ++i) prefix_[i + 1] = prefix_[i] + ws[i];
}

double BallMassIndex::mass_between(GridIndex lo, GridIndex hi) const {
  if (lo > hi) return 0.0;
  const auto first = std::lower_bound(indices_.begin(), indices_.end(), lo);
  const auto last = std::upper_bound(indices_.begin(), indices_.end(), hi);
  const std::size_t a = static_cast<std::size_t>(first - indices_.begin());
  const std::size_t b = static_cast<std::size_t>(last - indices_.begin());
  return prefix_[b] - prefix_[a];
}

double BallMassIndex::ball_mass(GridIndex center, double radius_cells) const {
  const double c = static_cast<double>(center);
  const GridIndex lo = static_cast<GridIndex>(std::ceil(c - radius_cells));
  const GridIndex hi = static_cast<GridIndex>(std::floor(c + radius_cells));
  return mass_between(lo, hi);
}

double BallMassIndex::open_ball_mass(GridIndex center, double radius_cells) const {
  const double c = static_cast<double>(center);
  const GridIndex lo = static_cast<GridIndex>(std::floor(c - radius_cells)) + 1;
  const GridIndex hi = static_cast<GridIndex>(std::ceil(c + radius_cells)) - 1;
  return mass_between(lo, hi);
}

SetLevelIndex::SetLevelIndex(const DyadicSet& a)
    : level_(a.level()),
      points_(a.indices().begin(), a.indices().end()),
      rank_(static_cast<std::size_t>(a.level()) + 1) {}

void SetLevelIndex::ensure_rank(int j) const {
  auto& r = rank_[static_cast<std::size_t>(j)];
  if (!r.empty() || points_.empty()) return;
  const int shift = level_ - j;
  r.resize(points_.size());
  std::int64_t count = 0;
  GridIndex prev = 0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const GridIndex cell = points_[i] >> shift;
    if (i == 0 || cell != prev) ++count;
    prev = cell;
    r[i] = count;
  }
}

std::int64_t SetLevelIndex::cells_in_window(int j, GridIndex lo,
                                            GridIndex hi) const {
  if (j < 0 || j > level_) throw std::invalid_argument("bad level in window query");
  if (points_.empty() || lo > hi) return 0;
  const auto first = std::lower_bound(points_.begin(), points_.end(), lo);
  const auto last = std::upper_bound(points_.begin(), points_.end(), hi);
  if (first == last) return 0;
  ensure_rank(j);
  const auto& r = rank_[static_cast<std::size_t>(j)];
  const std::size_t a = static_cast<std::size_t>(first - points_.begin());
  const std::size_t b = static_cast<std::size_t>(last - points_.begin()) - 1;
  const std::int64_t before = (a == 0) ? 0 : r[a - 1];
  std::int64_t count = r[b] - before;
  // The first in-window point may share its level-j cell with the point just
  // before the window; ranks only count "new" cells, so correct for it.
  if (a > 0) {
    const int shift = level_ - j;
    if ((points_[a - 1] >> shift) == (points_[a] >> shift)) ++count;
  }
  return count;
}

std::int64_t SetLevelIndex::cell_count(int j) const {
  if (points_.empty()) return 0;
  ensure_rank(j);
  return rank_[static_cast<std::size_t>(j)].back();
}

}  // namespace lqdim
