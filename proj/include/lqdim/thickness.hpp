#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "lqdim/dyadic.hpp"
#include "lqdim/generate.hpp"

namespace lqdim::sums {

using gen::IntInterval;

// One split of the maximal-gap derivation: the bridge, the removed gap, and
// the local ratio min(|left|, |right|) / |gap|. Children index into the
// node pool (-1 for leaves).
struct DerivationNode {
  IntInterval bridge;
  std::optional<IntInterval> gap;
  double tau_local = std::numeric_limits<double>::infinity();
  int left = -1;
  int right = -1;
};

struct DerivationTree {
  std::vector<DerivationNode> nodes;
  int root = -1;
};

struct ThicknessReport {
  double tau = std::numeric_limits<double>::infinity();
  bool is_infinite = true;  // no gaps: the input is an interval at resolution
  DerivationTree derivation;
  int resolution_level = 0;
  // Gaps narrower than the floor are invisible, so tau upper-bounds the
  // thickness of the underlying compact set at this resolution.
  bool resolution_bounded = true;
};

// Maximal-gap derivation over disjoint closed integer intervals (degenerate
// [a,a] points allowed). Complementary intervals narrower than `gap_floor`
// are not treated as gaps. Ratios are compared in exact integer arithmetic.
ThicknessReport derive_thickness(std::vector<IntInterval> pieces,
                                 std::int64_t gap_floor = 1,
                                 int resolution_level = 0);

// Union-of-cells reading of a dyadic set: runs [k1..k2] become closed
// intervals [k1, k2+1] on the level grid.
ThicknessReport derive_thickness(const DyadicSet& a);

struct AstelsResult {
  double sum = 0.0;
  bool pass = false;
  // Side condition "largest gap <= smallest diameter", when interval data
  // was supplied; `borderline` flags equality within one grid cell.
  std::optional<bool> side_condition;
  bool borderline = false;
};

// Sum of tau/(tau+1) (an infinite tau contributes 1) against the threshold 1.
AstelsResult astels_check(std::span<const double> taus);

struct GapDiam {
  std::int64_t largest_gap = 0;
  std::int64_t smallest_diameter = 0;
};
AstelsResult astels_check(std::span<const double> taus,
                          std::span<const GapDiam> geometry);

// Constant conversions between uniform perfectness (constant K), lower
// dimension and thickness. Logs are base 2.
double up_to_lowerdim(double K);              // dim_L > 1 / (log2(2K) + 1)
double lowerdim_to_up(double t, double c_t);  // K = (2 / c_t)^{1/t}
double up_to_thickness(double K);             // tau >= 1 / K

struct ThicknessToUP {
  double K = 0.0;
  // The bound needs tau strictly above 2/(K-1); K = 1 + 2/tau works only
  // with an infinitesimal margin.
  bool strict_margin = true;
};
ThicknessToUP thickness_to_up(double tau);

void to_json(nlohmann::json& j, const ThicknessReport& r);

}  // namespace lqdim::sums
