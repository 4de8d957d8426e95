#include "lqdim/convolve.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace lqdim {

namespace {

constexpr GridIndex kDenseRangeLimit = GridIndex{1} << 27;
constexpr GridIndex kChunkSize = GridIndex{1} << 24;

DyadicMeasure convolve_dense(const DyadicMeasure& mu, const DyadicMeasure& nu,
                             GridIndex base, GridIndex range) {
  std::vector<double> acc(static_cast<std::size_t>(range), 0.0);
  const auto ai = mu.indices();
  const auto aw = mu.masses();
  const auto bi = nu.indices();
  const auto bw = nu.masses();
  // gapless nu (e.g. repeated self-convolutions filling an interval): the
  // inner loop reduces to an axpy; the accumulation order is unchanged
  const bool nu_contiguous =
      nu.max_index() - nu.min_index() + 1 == static_cast<GridIndex>(nu.size());
  for (std::size_t i = 0; i < ai.size(); ++i) {
    const GridIndex off = ai[i] - base;
    const double w = aw[i];
    if (nu_contiguous) {
      double* dst = acc.data() + static_cast<std::size_t>(off + bi[0]);
      for (std::size_t j = 0; j < bw.size(); ++j) dst[j] += w * bw[j];
    } else {
      for (std::size_t j = 0; j < bi.size(); ++j)
        acc[static_cast<std::size_t>(off + bi[j])] += w * bw[j];
    }
  }
  std::vector<GridIndex> idx;
  std::vector<double> mass;
  for (GridIndex k = 0; k < range; ++k) {
    const double w = acc[static_cast<std::size_t>(k)];
    if (w > 0.0) {
      idx.push_back(base + k);
      mass.push_back(w);
    }
  }
  return DyadicMeasure::from_sorted_unchecked(mu.level(), std::move(idx),
                                              std::move(mass));
}

// Output ranges too wide for one dense buffer are processed in fixed-size
// chunks; each output cell belongs to one chunk and receives its
// contributions in the same (i, j) order as the plain double loop, so the
// result is bit-identical to the dense path.
DyadicMeasure convolve_chunked(const DyadicMeasure& mu, const DyadicMeasure& nu,
                               GridIndex base, GridIndex range) {
  const auto ai = mu.indices();
  const auto aw = mu.masses();
  const auto bi = nu.indices();
  const auto bw = nu.masses();
  std::vector<GridIndex> idx;
  std::vector<double> mass;
  std::vector<double> acc(static_cast<std::size_t>(kChunkSize));
  for (GridIndex chunk = 0; chunk < range; chunk += kChunkSize) {
    const GridIndex chunk_lo = base + chunk;
    const GridIndex chunk_len = std::min(kChunkSize, range - chunk);
    std::fill(acc.begin(), acc.begin() + static_cast<std::size_t>(chunk_len), 0.0);
    bool touched = false;
    for (std::size_t i = 0; i < ai.size(); ++i) {
      // nu indices landing in [chunk_lo, chunk_lo + chunk_len)
      const GridIndex lo = chunk_lo - ai[i];
      const auto first = std::lower_bound(bi.begin(), bi.end(), lo);
      const auto last = std::lower_bound(bi.begin(), bi.end(), lo + chunk_len);
      const double w = aw[i];
      for (auto it = first; it != last; ++it) {
        acc[static_cast<std::size_t>(*it - lo)] += w * bw[static_cast<std::size_t>(it - bi.begin())];
        touched = true;
      }
    }
    if (!touched) continue;
    for (GridIndex k = 0; k < chunk_len; ++k) {
      const double w = acc[static_cast<std::size_t>(k)];
      if (w > 0.0) {
        idx.push_back(chunk_lo + k);
        mass.push_back(w);
      }
    }
  }
  return DyadicMeasure::from_sorted_unchecked(mu.level(), std::move(idx),
                                              std::move(mass));
}

}  // namespace

DyadicMeasure convolve(const DyadicMeasure& mu, const DyadicMeasure& nu,
                       std::uint64_t work_cap) {
  if (mu.level() != nu.level())
    throw std::invalid_argument("convolution requires equal levels");
  if (mu.empty() || nu.empty()) throw std::invalid_argument("empty operand");
  const std::uint64_t work =
      static_cast<std::uint64_t>(mu.size()) * static_cast<std::uint64_t>(nu.size());
  if (work > work_cap)
    throw ResourceLimitError(
        "convolution pair work " + std::to_string(work) + " exceeds cap " +
        std::to_string(work_cap) + "; discretize to a coarser level first");

  const GridIndex base = mu.min_index() + nu.min_index();
  const GridIndex range = mu.max_index() + nu.max_index() - base + 1;
  if (range <= kDenseRangeLimit) return convolve_dense(mu, nu, base, range);
  return convolve_chunked(mu, nu, base, range);
}

}  // namespace lqdim
