#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lqdim/dyadic.hpp"

namespace lqdim {

// Multi-scale dimension estimate: the per-scale normalized exponents plus a
// point estimate (largest scale) and a least-squares slope over a trailing
// window. The liminf itself is not computable; experiments decide which
// summary to trust.
struct DimensionEstimate {
  double q = 2.0;             // > 1, ignored when is_infinity
  bool is_infinity = false;
  double dual_exponent = 2.0; // q' = q / (q - 1)
  std::vector<std::pair<int, double>> per_scale;  // (m, exponent), m increasing
  double point_estimate = 0.0;
  double slope_estimate = 0.0;
  int window = 0;

  void validate() const;
};

void to_json(nlohmann::json& j, const DimensionEstimate& e);

// Builds the point/slope summaries from raw (m, -log2 ||.||_q^q) data.
// `unnormalized` pairs are (m, y) with y the unnormalized exponent; the
// per-scale value is y / ((q-1) m) for finite q and y / m otherwise.
DimensionEstimate summarize_scales(std::vector<std::pair<int, double>> unnormalized,
                                   double q, bool is_infinity, int window);

// Per-scale L^q exponents of the measures produced by `at_level`.
// Levels must be nonempty and strictly increasing; q > 1.
DimensionEstimate lq_dimension_scan(
    const std::function<DyadicMeasure(int)>& at_level, double q,
    std::span<const int> levels, int window = 4);

// Frostman-exponent proxy (the q = infinity estimate). For each support atom
// the best exponent witness log2 nu(B(x, 2^-i)) / (-i) over the fine dyadic
// radii i in [ceil(m/2), m] is taken, then the minimum over atoms, clamped
// to [0,1]. Coarser radii only constrain the Frostman constant, not the
// exponent, so they are left out of the sweep.
double frostman_exponent(const DyadicMeasure& mu);

DimensionEstimate linf_dimension_scan(
    const std::function<DyadicMeasure(int)>& at_level,
    std::span<const int> levels, int window = 4);

}  // namespace lqdim
