#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "lqdim/dimension.hpp"
#include "lqdim/dyadic.hpp"
#include "lqdim/measure_spec.hpp"

namespace lqdim::sums {

// Cell-sum convention. Two grid cells can sum into the adjacent cell, so
// kNeighbor also includes index k+1 for every pair sum k: the result is a
// superset of the cells meeting the true sumset. kExact keeps the pure
// grid-point sums.
enum class SumsetPadding { kNeighbor, kExact };

DyadicSet sumset(const DyadicSet& a, const DyadicSet& b,
                 SumsetPadding pad = SumsetPadding::kNeighbor,
                 std::uint64_t work_cap = kDefaultWorkCap);

// Every grid cell between the extremes is occupied.
bool interval_detect(const DyadicSet& a);

// Per-scale box-counting exponents log2 N_m(A) / m.
DimensionEstimate box_dimension_scan(
    const std::function<DyadicSet(int)>& at_level, std::span<const int> levels,
    int window = 4);

struct NFoldRow {
  int n = 1;
  int level = 0;
  std::int64_t cell_count = 0;
  double box_exponent = 0.0;
  bool is_interval = false;
};

struct NFoldReport {
  std::vector<NFoldRow> rows;
  std::optional<int> first_interval_n;
};

// Repeated sumsets A, A+A, ..., nA with per-n cell counts, box exponents and
// interval detection.
NFoldReport nfold_sumset_experiment(const DyadicSet& base, int n_max,
                                    SumsetPadding pad = SumsetPadding::kNeighbor,
                                    std::uint64_t work_cap = kDefaultWorkCap);

// Box-dimension wrapper generating the set from a spec at each level.
DimensionEstimate box_dimension_estimate(const gen::MeasureSpec& spec,
                                         std::span<const int> levels,
                                         int window = 4);

void to_json(nlohmann::json& j, const NFoldReport& r);
// columns: n, level, N_m, box_estimate, is_interval
std::string nfold_csv(const NFoldReport& r);

}  // namespace lqdim::sums
