#include "lqdim/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lqdim/ball.hpp"
#include "lqdim/norms.hpp"

namespace lqdim {

void DimensionEstimate::validate() const {
  if (!is_infinity && !(q > 1.0)) throw std::logic_error("q must exceed 1");
  for (std::size_t i = 1; i < per_scale.size(); ++i)
    if (per_scale[i].first <= per_scale[i - 1].first)
      throw std::logic_error("scales not strictly increasing");
}

void to_json(nlohmann::json& j, const DimensionEstimate& e) {
  nlohmann::json scales = nlohmann::json::array();
  for (const auto& [m, v] : e.per_scale) scales.push_back({m, v});
  j = nlohmann::json{{"q", e.is_infinity ? nlohmann::json("inf") : nlohmann::json(e.q)},
                     {"dual_exponent", e.is_infinity ? nlohmann::json("1") : nlohmann::json(e.dual_exponent)},
                     {"per_scale", std::move(scales)},
                     {"point_estimate", e.point_estimate},
                     {"slope_estimate", e.slope_estimate},
                     {"window", e.window}};
}

DimensionEstimate summarize_scales(std::vector<std::pair<int, double>> unnormalized,
                                   double q, bool is_infinity, int window) {
  if (unnormalized.empty()) throw std::invalid_argument("no scales");
  DimensionEstimate est;
  est.q = q;
  est.is_infinity = is_infinity;
  est.dual_exponent = is_infinity ? 1.0 : q / (q - 1.0);
  const double qfac = is_infinity ? 1.0 : (q - 1.0);
  for (const auto& [m, y] : unnormalized)
    est.per_scale.emplace_back(m, y / (qfac * static_cast<double>(m)));
  est.point_estimate = est.per_scale.back().second;

  const int n = static_cast<int>(unnormalized.size());
  const int w = std::min(std::max(window, 2), n);
  est.window = w;
  if (n < 2) {
    est.slope_estimate = est.point_estimate;
    est.validate();
    return est;
  }
  // least-squares slope of y against x = (q-1) m over the trailing window
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = n - w; i < n; ++i) {
    const double x = qfac * static_cast<double>(unnormalized[static_cast<std::size_t>(i)].first);
    const double y = unnormalized[static_cast<std::size_t>(i)].second;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = w * sxx - sx * sx;
  est.slope_estimate = (denom != 0.0) ? (w * sxy - sx * sy) / denom : est.point_estimate;
  est.validate();
  return est;
}

namespace {

void check_levels(std::span<const int> levels) {
  if (levels.empty()) throw std::invalid_argument("levels list empty");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1) throw std::invalid_argument("levels must be >= 1");
    if (i > 0 && levels[i] <= levels[i - 1])
      throw std::invalid_argument("levels must be strictly increasing");
  }
}

}  // namespace

DimensionEstimate lq_dimension_scan(
    const std::function<DyadicMeasure(int)>& at_level, double q,
    std::span<const int> levels, int window) {
  if (!(q > 1.0)) throw std::invalid_argument("q must exceed 1");
  check_levels(levels);
  std::vector<std::pair<int, double>> raw;
  raw.reserve(levels.size());
  for (int m : levels) {
    const DyadicMeasure mu = at_level(m);
    if (mu.level() != m) throw std::logic_error("generator returned wrong level");
    raw.emplace_back(m, -lq_norm_log2(mu, q));
  }
  return summarize_scales(std::move(raw), q, /*is_infinity=*/false, window);
}

double frostman_exponent(const DyadicMeasure& mu) {
  const int m = mu.level();
  if (m < 1) throw std::invalid_argument("frostman exponent needs level >= 1");
  const std::size_t n = mu.size();
  if (n == 1) return 0.0;  // single atom: every ball carries full mass

  const auto idx = mu.indices();
  const auto ws = mu.masses();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + ws[i];

  std::vector<double> witness(n, 0.0);
  const int i_lo = std::max(1, (m + 1) / 2);
  for (int i = i_lo; i <= m; ++i) {
    const GridIndex w = GridIndex{1} << (m - i);
    // sliding closed window [k - w, k + w] over the sorted atoms
    std::size_t lo = 0, hi = 0;
    for (std::size_t t = 0; t < n; ++t) {
      while (lo < n && idx[lo] < idx[t] - w) ++lo;
      while (hi + 1 < n && idx[hi + 1] <= idx[t] + w) ++hi;
      const double mass = prefix[hi + 1] - prefix[lo];
      const double ratio = std::log2(mass) / -static_cast<double>(i);
      if (ratio > witness[t]) witness[t] = ratio;
    }
  }
  const double value = *std::min_element(witness.begin(), witness.end());
  return std::clamp(value, 0.0, 1.0);
}

DimensionEstimate linf_dimension_scan(
    const std::function<DyadicMeasure(int)>& at_level,
    std::span<const int> levels, int window) {
  check_levels(levels);
  std::vector<std::pair<int, double>> raw;
  raw.reserve(levels.size());
  for (int m : levels) {
    const DyadicMeasure mu = at_level(m);
    if (mu.level() != m) throw std::logic_error("generator returned wrong level");
    raw.emplace_back(m, frostman_exponent(mu) * static_cast<double>(m));
  }
  return summarize_scales(std::move(raw), /*q=*/2.0, /*is_infinity=*/true, window);
}

}  // namespace lqdim
