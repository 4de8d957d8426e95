// Independent brute-force oracles used to pin expected values. These stay
// deliberately naive and share no code with the implementation paths they
// check.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "lqdim/dyadic.hpp"

namespace oracles {

using lqdim::DyadicMeasure;
using lqdim::DyadicSet;
using lqdim::GridIndex;

// Quadratic double loop over all atom pairs, accumulating into an ordered
// map in (i, j) order.
inline DyadicMeasure brute_convolve(const DyadicMeasure& a, const DyadicMeasure& b) {
  std::map<GridIndex, double> acc;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      acc[a.indices()[i] + b.indices()[j]] += a.masses()[i] * b.masses()[j];
  std::vector<GridIndex> idx;
  std::vector<double> mass;
  for (const auto& [k, w] : acc) {
    idx.push_back(k);
    mass.push_back(w);
  }
  return DyadicMeasure::from_sorted_unchecked(a.level(), std::move(idx),
                                              std::move(mass));
}

// Direct power sum in plain double arithmetic.
inline double brute_lq_norm_pow(const DyadicMeasure& mu, double q) {
  double s = 0.0;
  for (double w : mu.masses()) s += std::pow(w, q);
  return s;
}

// Exact middle-thirds Cantor measure of the interval [lo, hi) in [0, 1],
// by the self-similar subdivision mu(A) = (mu(3A) + mu(3A - 2)) / 2.
// Endpoints are exact rationals num / 2^m scaled by 3^depth, so templated
// on a wide integer type.
// Interval endpoints like 1/4 cycle under x -> 3x mod 2, and the exact
// values they produce (1/3, ...) are non-dyadic, so the recursion cannot
// terminate exactly. Each level halves the contribution, so cutting off at
// depth d leaves an absolute error below 2^-d.
inline double cantor_measure_interval(double lo, double hi, int depth = 0) {
  if (hi <= 0.0 || lo >= 1.0) return 0.0;
  lo = std::max(lo, 0.0);
  hi = std::min(hi, 1.0);
  if (lo <= 0.0 && hi >= 1.0) return 1.0;
  if (hi <= lo) return 0.0;  // atomless: points (and FP-collapsed intervals) are null
  if (depth > 80) return 0.5;
  return 0.5 * (cantor_measure_interval(3.0 * lo, 3.0 * hi, depth + 1) +
                cantor_measure_interval(3.0 * lo - 2.0, 3.0 * hi - 2.0, depth + 1));
}

// Exact triadic ball mass of the Cantor-Lebesgue measure (closed balls have
// the same measure as half-open intervals: the measure is atomless).
inline double cantor_ball_mass(double center, double radius) {
  return cantor_measure_interval(center - radius, center + radius);
}

// Dyadic cells of [0,1) meeting the middle-thirds Cantor set, by enumerating
// triadic construction intervals until they fit in one cell.
inline std::set<GridIndex> cantor_cells(int level) {
  std::set<GridIndex> cells;
  const double width = std::ldexp(1.0, -level);
  struct Piece {
    double lo, hi;
  };
  std::vector<Piece> stack{{0.0, 1.0}};
  while (!stack.empty()) {
    const Piece p = stack.back();
    stack.pop_back();
    if (p.hi - p.lo <= width) {
      const double cells_scale = std::ldexp(1.0, level);
      for (GridIndex k = static_cast<GridIndex>(std::floor(p.lo * cells_scale));
           k <= static_cast<GridIndex>(std::floor(p.hi * cells_scale)); ++k)
        if (k < (GridIndex{1} << level)) cells.insert(k);  // universe [0,1)
      continue;
    }
    const double third = (p.hi - p.lo) / 3.0;
    stack.push_back({p.lo, p.lo + third});
    stack.push_back({p.hi - third, p.hi});
  }
  return cells;
}

// Deterministic random sparse measures for fuzzing.
struct Fuzzer {
  std::mt19937_64 rng;

  explicit Fuzzer(std::uint64_t seed) : rng(seed) {}

  DyadicMeasure measure(int level, int max_atoms) {
    std::uniform_int_distribution<int> count_dist(1, max_atoms);
    std::uniform_int_distribution<GridIndex> idx_dist(0, (GridIndex{1} << level) - 1);
    std::uniform_real_distribution<double> mass_dist(1e-6, 1.0);
    const int n = count_dist(rng);
    std::vector<std::pair<GridIndex, double>> atoms;
    atoms.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) atoms.emplace_back(idx_dist(rng), mass_dist(rng));
    return DyadicMeasure::from_atoms(level, std::move(atoms));
  }

  DyadicSet set(int level, int max_points) {
    std::uniform_int_distribution<int> count_dist(1, max_points);
    std::uniform_int_distribution<GridIndex> idx_dist(0, (GridIndex{1} << level) - 1);
    const int n = count_dist(rng);
    std::vector<GridIndex> idx;
    idx.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx.push_back(idx_dist(rng));
    return DyadicSet::from_indices(level, std::move(idx));
  }
};

}  // namespace oracles
