#pragma once

#include <cstdint>
#include <vector>

#include "lqdim/dimension.hpp"
#include "lqdim/dyadic.hpp"
#include "lqdim/measure_spec.hpp"

namespace lqdim::gen {

// Closed interval with exact integer endpoints on an implicit uniform grid.
struct IntInterval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;  // hi >= lo; hi == lo is a degenerate point
};

// Builds the level-m discretization of the spec's measure. Interval
// constructions are subdivided until every piece fits in one dyadic cell;
// pieces straddling a cell boundary are refined further by the construction
// itself, so cell masses are exact up to the 1e-15 residual floor.
// Deterministic for a fixed spec and level.
DyadicMeasure generate(const MeasureSpec& spec, int level);

// The level-m cells meeting the spec's limit set (for interval
// constructions, the cells meeting the stopping-depth pieces; exact for IFS
// attractors whose piece endpoints lie in the attractor).
DyadicSet generate_set(const MeasureSpec& spec, int level);

// Uniform Bernoulli measure on the central Cantor set with ratio
// 2^{-1/alpha}, Ahlfors alpha-regular with constant
// ahlfors_example_constant(alpha).
DyadicMeasure generate_ahlfors_example(double alpha, int level);

// The forced-zero digit-block measure with E = union_j [n_j, 2 n_j].
DyadicMeasure generate_digit_blocks(std::span<const long long> block_starts,
                                    int level);

// Central Cantor measure re-centered so the support is symmetric around 0
// (atoms pair up as k <-> -k-1, the half-cell shift of left-endpoint
// collapse).
DyadicMeasure generate_symmetric_cantor(double alpha, int level);

// Exact construction intervals of the central Cantor set with rational
// ratio num/den at the given depth, scaled to the integer grid den^depth.
// For the middle thirds set (1/3) every bridge/gap ratio is exactly 1.
std::vector<IntInterval> central_cantor_intervals(std::int64_t num,
                                                  std::int64_t den, int depth);

// Triadic depth whose pieces are no wider than 2^-level.
int cantor_depth_for_level(std::int64_t num, std::int64_t den, int level);

// Spec-level dimension estimates (measure generation per level).
DimensionEstimate lq_dimension_estimate(const MeasureSpec& spec, double q,
                                        std::span<const int> levels,
                                        int window = 4);
DimensionEstimate linf_dimension_estimate(const MeasureSpec& spec,
                                          std::span<const int> levels,
                                          int window = 4);

}  // namespace lqdim::gen
