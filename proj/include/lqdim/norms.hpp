#pragma once

#include <span>
#include <vector>

#include "lqdim/dyadic.hpp"

namespace lqdim {

// Pairwise (cascade) summation; fixes the reduction order so results are
// independent of how callers partition work.
double pairwise_sum(std::span<const double> v);

// log2(sum_i 2^{t_i}), computed stably around the max term.
double log2_sum_exp2(std::span<const double> terms);

// log2 ||mu||_q^q = log2 sum_x mu(x)^q, accumulated in the log2 domain.
// Requires q > 1.
double lq_norm_log2(const DyadicMeasure& mu, double q);

// Largest atom mass.
double linf_norm(const DyadicMeasure& mu);

// log2 ||nu_m||_q^q for the density approximation nu_m = 2^m sum nu(Q) 1_Q:
// exactly m(q-1) + lq_norm_log2(mu, q).
double density_lq_norm_log2(const DyadicMeasure& mu, double q);

// Normalized scale-m exponent  -log2 ||mu||_q^q / ((q-1) m).
// For a probability measure supported on [0,1) this lies in [0, 1 + eps].
double normalized_exponent(const DyadicMeasure& mu, double q);

}  // namespace lqdim
