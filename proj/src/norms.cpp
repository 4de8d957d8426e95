#include "lqdim/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lqdim {

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

double log2_sum_exp2(std::span<const double> terms) {
  if (terms.empty()) throw std::invalid_argument("empty term list");
  const double top = *std::max_element(terms.begin(), terms.end());
  std::vector<double> scaled(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i)
    scaled[i] = std::exp2(terms[i] - top);
  return top + std::log2(pairwise_sum(scaled));
}

double lq_norm_log2(const DyadicMeasure& mu, double q) {
  if (!(q > 1.0))
    throw std::invalid_argument("q must exceed 1 (q = 1 has no normalization)");
  std::vector<double> terms(mu.size());
  const auto ws = mu.masses();
  for (std::size_t i = 0; i < ws.size(); ++i) terms[i] = q * std::log2(ws[i]);
  return log2_sum_exp2(terms);
}

double linf_norm(const DyadicMeasure& mu) {
  const auto ws = mu.masses();
  return *std::max_element(ws.begin(), ws.end());
}

double density_lq_norm_log2(const DyadicMeasure& mu, double q) {
  return static_cast<double>(mu.level()) * (q - 1.0) + lq_norm_log2(mu, q);
}

double normalized_exponent(const DyadicMeasure& mu, double q) {
  if (mu.level() == 0)
    throw std::invalid_argument("scale exponent undefined at level 0");
  return -lq_norm_log2(mu, q) / ((q - 1.0) * static_cast<double>(mu.level()));
}

}  // namespace lqdim
