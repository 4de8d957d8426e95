#include "lqdim/generate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace lqdim::gen {

namespace {

constexpr int kMaxSubdivisionDepth = 4000;

// Returns true when [lo, hi] fits inside one level-m cell (a right endpoint
// exactly on a boundary belongs to the cell below it). On success writes the
// cell index.
bool piece_cell(double lo, double hi, int level, GridIndex* cell) {
  const double cells = std::ldexp(1.0, level);
  const GridIndex lo_cell = static_cast<GridIndex>(std::floor(lo * cells));
  const double hi_scaled = hi * cells;
  GridIndex hi_cell = static_cast<GridIndex>(std::floor(hi_scaled));
  if (static_cast<double>(hi_cell) == hi_scaled && hi_cell > lo_cell) --hi_cell;
  *cell = lo_cell;
  return hi_cell == lo_cell;
}

DyadicMeasure generate_ifs(const IfsSpec& spec, int level) {
  validate_spec(spec);
  const auto [h0, h1] = ifs_hull(spec);
  const double H = h1 - h0;
  if (!(H > 0.0)) {
    const GridIndex cell =
        static_cast<GridIndex>(std::floor(h0 * std::ldexp(1.0, level)));
    return DyadicMeasure::dirac(level, cell);
  }
  // A piece [lo, hi] is phi_w([h0, h1]); phi_w is affine with |slope|
  // (hi-lo)/H and sign `flipped`. Orientation must be tracked because
  // negative ratios reverse children left-to-right.
  struct Frame {
    double lo, hi, mass;
    bool flipped;
  };
  std::vector<std::pair<GridIndex, double>> atoms;
  std::function<void(const Frame&, int)> walk = [&](const Frame& p, int depth) {
    if (p.hi - p.lo <= std::ldexp(1.0, -level)) {
      GridIndex cell;
      if (piece_cell(p.lo, p.hi, level, &cell) || p.mass <= kMassFloor) {
        atoms.emplace_back(cell, p.mass);
        return;
      }
    }
    if (depth >= kMaxSubdivisionDepth)
      throw ResourceLimitError(
          "subdivision depth bound exceeded (contraction too slow)");
    const double scale = (p.hi - p.lo) / H;
    for (std::size_t i = 0; i < spec.maps.size(); ++i) {
      const double a = spec.maps[i](h0);
      const double b = spec.maps[i](h1);
      const double ca = std::min(a, b), cb = std::max(a, b);
      double lo, hi;
      if (!p.flipped) {
        lo = p.lo + (ca - h0) * scale;
        hi = p.lo + (cb - h0) * scale;
      } else {
        lo = p.hi - (cb - h0) * scale;
        hi = p.hi - (ca - h0) * scale;
      }
      walk({lo, hi, p.mass * spec.weights[i],
            p.flipped != (spec.maps[i].ratio < 0.0)},
           depth + 1);
    }
  };
  walk({h0, h1, 1.0, false}, 0);
  return DyadicMeasure::from_atoms(level, std::move(atoms));
}

DyadicMeasure generate_moran(const MoranSpec& spec, int level) {
  validate_spec(spec);
  std::vector<std::pair<GridIndex, double>> atoms;
  std::vector<int> word;
  std::function<void(double, double, double, int)> walk =
      [&](double lo, double hi, double mass, int depth) {
        if (hi - lo <= std::ldexp(1.0, -level)) {
          GridIndex cell;
          if (piece_cell(lo, hi, level, &cell) || mass <= kMassFloor) {
            atoms.emplace_back(cell, mass);
            return;
          }
        }
        if (depth >= kMaxSubdivisionDepth)
          throw ResourceLimitError(
              "subdivision depth bound exceeded (contraction too slow)");
        const auto children = spec.rule(word);
        for (std::size_t i = 0; i < children.size(); ++i) {
          word.push_back(static_cast<int>(i));
          walk(children[i].lo, children[i].hi, mass * children[i].weight,
               depth + 1);
          word.pop_back();
        }
      };
  walk(spec.root_lo, spec.root_hi, 1.0, 0);
  return DyadicMeasure::from_atoms(level, std::move(atoms));
}

DyadicMeasure generate_digit_pattern(const DigitPatternSpec& spec, int level) {
  validate_spec(spec);
  std::vector<int> free_positions;
  for (int pos = 1; pos <= level; ++pos) {
    bool forced = false;
    for (const auto& [a, b] : spec.forced_zero_blocks)
      if (pos >= a && pos <= b) {
        forced = true;
        break;
      }
    if (!forced) free_positions.push_back(pos);
  }
  const int f = static_cast<int>(free_positions.size());
  if (f > 26)
    throw ResourceLimitError("digit pattern has " + std::to_string(f) +
                             " free digits; atom count 2^f too large");
  const std::size_t count = std::size_t{1} << f;
  std::vector<GridIndex> idx(count);
  std::vector<double> mass(count, std::ldexp(1.0, -f));
  for (std::size_t c = 0; c < count; ++c) {
    GridIndex k = 0;
    for (int i = 0; i < f; ++i)
      if ((c >> (f - 1 - i)) & 1U)
        k += GridIndex{1} << (level - free_positions[static_cast<std::size_t>(i)]);
    idx[c] = k;  // increasing in c: earlier positions are more significant
  }
  return DyadicMeasure::from_sorted_unchecked(level, std::move(idx),
                                              std::move(mass));
}

}  // namespace

DyadicMeasure generate(const MeasureSpec& spec, int level) {
  if (level < 0 || level > kMaxLevel) throw std::invalid_argument("bad level");
  return std::visit(
      [&](const auto& s) -> DyadicMeasure {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LebesgueSpec>) {
          return DyadicMeasure::uniform(level);
        } else if constexpr (std::is_same_v<T, DiracSpec>) {
          return DyadicMeasure::dirac(level);
        } else if constexpr (std::is_same_v<T, ExplicitSpec>) {
          validate_spec(s);
          if (s.level != level)
            throw std::invalid_argument("explicit spec level mismatch");
          return DyadicMeasure::from_atoms(level, s.atoms);
        } else if constexpr (std::is_same_v<T, IfsSpec>) {
          return generate_ifs(s, level);
        } else if constexpr (std::is_same_v<T, MoranSpec>) {
          return generate_moran(s, level);
        } else if constexpr (std::is_same_v<T, DigitPatternSpec>) {
          return generate_digit_pattern(s, level);
        } else if constexpr (std::is_same_v<T, DigitBlocksSpec>) {
          validate_spec(s);
          return generate_digit_pattern(digit_blocks_to_pattern(s), level);
        } else if constexpr (std::is_same_v<T, AhlforsCantorSpec>) {
          return generate_ahlfors_example(s.alpha, level);
        } else {
          return generate_symmetric_cantor(s.alpha, level);
        }
      },
      spec);
}

namespace {

// Marks the cells meeting each stopping-depth piece. Piece endpoints of IFS
// attractor hulls lie in the attractor, so for an IFS this is the exact
// dyadic cell cover of the limit set.
void mark_interval_cells(double lo, double hi, int level,
                         std::vector<GridIndex>& out) {
  const double cells = std::ldexp(1.0, level);
  const GridIndex a = static_cast<GridIndex>(std::floor(lo * cells));
  const GridIndex b = static_cast<GridIndex>(std::floor(hi * cells));
  for (GridIndex k = a; k <= b; ++k) out.push_back(k);
}

DyadicSet set_from_ifs(const IfsSpec& spec, int level) {
  validate_spec(spec);
  const auto [h0, h1] = ifs_hull(spec);
  std::vector<GridIndex> marks;
  if (!(h1 - h0 > 0.0)) {
    mark_interval_cells(h0, h0, level, marks);
    return DyadicSet::from_indices(level, std::move(marks));
  }
  const double H = h1 - h0;
  std::function<void(double, double, bool, int)> walk = [&](double lo, double hi,
                                                            bool flipped, int depth) {
    if (hi - lo <= std::ldexp(1.0, -level)) {
      mark_interval_cells(lo, hi, level, marks);
      return;
    }
    if (depth >= kMaxSubdivisionDepth)
      throw ResourceLimitError("subdivision depth bound exceeded");
    const double scale = (hi - lo) / H;
    for (const auto& f : spec.maps) {
      const double a = f(h0);
      const double b = f(h1);
      const double ca = std::min(a, b), cb = std::max(a, b);
      double clo, chi;
      if (!flipped) {
        clo = lo + (ca - h0) * scale;
        chi = lo + (cb - h0) * scale;
      } else {
        clo = hi - (cb - h0) * scale;
        chi = hi - (ca - h0) * scale;
      }
      walk(clo, chi, flipped != (f.ratio < 0.0), depth + 1);
    }
  };
  walk(h0, h1, false, 0);
  return DyadicSet::from_indices(level, std::move(marks));
}

DyadicSet set_from_moran(const MoranSpec& spec, int level) {
  validate_spec(spec);
  std::vector<GridIndex> marks;
  std::vector<int> word;
  std::function<void(double, double, int)> walk = [&](double lo, double hi,
                                                      int depth) {
    if (hi - lo <= std::ldexp(1.0, -level)) {
      mark_interval_cells(lo, hi, level, marks);
      return;
    }
    if (depth >= kMaxSubdivisionDepth)
      throw ResourceLimitError("subdivision depth bound exceeded");
    const auto children = spec.rule(word);
    for (std::size_t i = 0; i < children.size(); ++i) {
      word.push_back(static_cast<int>(i));
      walk(children[i].lo, children[i].hi, depth + 1);
      word.pop_back();
    }
  };
  walk(spec.root_lo, spec.root_hi, 0);
  return DyadicSet::from_indices(level, std::move(marks));
}

}  // namespace

DyadicSet generate_set(const MeasureSpec& spec, int level) {
  if (level < 0 || level > kMaxLevel) throw std::invalid_argument("bad level");
  return std::visit(
      [&](const auto& s) -> DyadicSet {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LebesgueSpec>) {
          return DyadicSet::full(level);
        } else if constexpr (std::is_same_v<T, DiracSpec>) {
          return DyadicSet::singleton(level);
        } else if constexpr (std::is_same_v<T, IfsSpec>) {
          return set_from_ifs(s, level);
        } else if constexpr (std::is_same_v<T, MoranSpec>) {
          return set_from_moran(s, level);
        } else if constexpr (std::is_same_v<T, AhlforsCantorSpec>) {
          return set_from_ifs(central_cantor_spec(ahlfors_example_ratio(s.alpha)),
                              level);
        } else {
          // explicit / digit-pattern supports are exact cell covers already
          return support_set(generate(MeasureSpec{s}, level));
        }
      },
      spec);
}

DyadicMeasure generate_ahlfors_example(double alpha, int level) {
  return generate(MeasureSpec{central_cantor_spec(ahlfors_example_ratio(alpha))},
                  level);
}

DyadicMeasure generate_digit_blocks(std::span<const long long> block_starts,
                                    int level) {
  DigitBlocksSpec s;
  s.block_starts.assign(block_starts.begin(), block_starts.end());
  return generate(MeasureSpec{s}, level);
}

DyadicMeasure generate_symmetric_cantor(double alpha, int level) {
  const double xi = ahlfors_example_ratio(alpha);
  // maps on [-1/2, 1/2]: x -> xi x -+ (1 - xi)/2; hull is [-1/2, 1/2]
  IfsSpec spec{{{xi, -(1.0 - xi) / 2.0}, {xi, (1.0 - xi) / 2.0}}, {0.5, 0.5}};
  return generate(MeasureSpec{spec}, level);
}

std::vector<IntInterval> central_cantor_intervals(std::int64_t num,
                                                  std::int64_t den, int depth) {
  if (num <= 0 || den <= 0 || 2 * num >= den)
    throw std::invalid_argument("central Cantor ratio must be in (0, 1/2)");
  // grid denominator den^depth; piece endpoints are exact integers
  std::int64_t unit = 1;
  for (int d = 0; d < depth; ++d) {
    if (unit > std::numeric_limits<std::int64_t>::max() / den)
      throw ResourceLimitError("cantor interval grid overflows 64 bits");
    unit *= den;
  }
  std::vector<IntInterval> pieces{{0, unit}};
  std::int64_t len = unit;
  for (int d = 0; d < depth; ++d) {
    len = len / den * num;  // exact: len is divisible by den^(depth-d)
    std::vector<IntInterval> next;
    next.reserve(pieces.size() * 2);
    for (const auto& p : pieces) {
      next.push_back({p.lo, p.lo + len});
      next.push_back({p.hi - len, p.hi});
    }
    pieces = std::move(next);
  }
  return pieces;
}

int cantor_depth_for_level(std::int64_t num, std::int64_t den, int level) {
  // smallest depth with (num/den)^depth <= 2^-level
  const double step = std::log2(static_cast<double>(den) / static_cast<double>(num));
  return static_cast<int>(std::ceil(static_cast<double>(level) / step));
}

DimensionEstimate lq_dimension_estimate(const MeasureSpec& spec, double q,
                                        std::span<const int> levels, int window) {
  return lq_dimension_scan([&spec](int m) { return generate(spec, m); }, q, levels,
                           window);
}

DimensionEstimate linf_dimension_estimate(const MeasureSpec& spec,
                                          std::span<const int> levels, int window) {
  return linf_dimension_scan([&spec](int m) { return generate(spec, m); }, levels,
                             window);
}

}  // namespace lqdim::gen
