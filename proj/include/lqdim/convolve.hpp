#pragma once

#include <cstdint>

#include "lqdim/dyadic.hpp"

namespace lqdim {

// Exact discrete convolution on a shared grid:
//   out(k) = sum_j mu(j) nu(k - j).
// Both measures must live at the same level. The pair work |mu|*|nu| is
// checked against `work_cap` before any allocation; exceeding it raises
// ResourceLimitError (coarsen first: norms at coarser levels stay
// comparable). Accumulation order is canonical (mu outer, nu inner), so the
// result is bit-reproducible.
DyadicMeasure convolve(const DyadicMeasure& mu, const DyadicMeasure& nu,
                       std::uint64_t work_cap = kDefaultWorkCap);

}  // namespace lqdim
