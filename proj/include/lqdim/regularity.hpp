#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lqdim/dyadic.hpp"

namespace lqdim::reg {

// Violating (center, radius) pair found by a sweep, with the two ball
// masses (or counts) that broke the inequality.
struct Witness {
  GridIndex center = 0;
  int radius_exp = 0;  // radius 2^-radius_exp
  double small_ball = 0.0;
  double big_ball = 0.0;
};

struct CheckResult {
  bool pass = false;
  std::optional<Witness> witness;
  explicit operator bool() const { return pass; }
};

// kAllCells sweeps every grid point within reach of the support; it is
// exhaustive and meant for small instances (transfer checks).
enum class CenterMode { kSupportAtoms, kAllCells };

// Does nu(B(x, N r)) >= 2^gamma nu(B(x, r)) hold for all swept centers and
// dyadic radii r in [2^-m, diam]? Pairs whose N r-ball swallows the whole
// support are skipped. Zero-diameter supports are rejected as degenerate.
CheckResult check_uniformly_perfect(const DyadicMeasure& mu, double N,
                                    double gamma,
                                    CenterMode mode = CenterMode::kSupportAtoms);

// Grid search: smallest passing N, ties broken toward the largest gamma.
std::optional<std::pair<double, double>> fit_uniform_perfectness(
    const DyadicMeasure& mu, std::span<const double> N_grid,
    std::span<const double> gamma_grid);

std::span<const double> default_up_N_grid();
std::span<const double> default_up_gamma_grid();

// Set version (the annulus form): if A is not inside B(x, K r) then A meets
// B(x, K r) \ B(x, r); centers at set points, dyadic radii.
CheckResult check_uniformly_perfect_set(const DyadicSet& a, double K);
std::optional<double> fit_uniform_perfectness_set(const DyadicSet& a,
                                                  std::span<const double> K_grid);

// Two-sided Ahlfors bounds C^-1 r^alpha <= nu(B(x,r)) <= C r^alpha over
// support centers and dyadic radii in (K_cutoff 2^-m, 1); the fine cutoff
// avoids the atomic regime where the lower bound is vacuous.
inline constexpr int kAhlforsFineCutoffCells = 16;

struct AhlforsFit {
  double C = 1.0;
  double alpha = 0.5;
  double residual_log2 = 0.0;  // max |log2 mass + alpha i|; C = 2^residual
};

bool check_ahlfors(const DyadicMeasure& mu, double C, double alpha,
                   int fine_cutoff_cells = kAhlforsFineCutoffCells);
AhlforsFit fit_ahlfors(const DyadicMeasure& mu,
                       int fine_cutoff_cells = kAhlforsFineCutoffCells);

// Ahlfors (C, alpha) regularity implies (N, gamma) uniform perfectness with
// N = 2 (2^gamma C^2)^{1/alpha} + 1.
double ahlfors_to_up_constants(double C, double alpha, double gamma);

// Ahlfors (C, alpha) regularity implies dyadic k-porosity with
// k = ceil((3 + 2 log2 C) / (1 - alpha)).
int ahlfors_porosity_k(double C, double alpha);

// Does every level-n cell meeting the set contain an empty level-(n+k)
// subcell, for n = 0 .. level-k?
struct PorosityResult {
  bool pass = false;
  int witness_level = -1;        // n of the full cell on failure
  GridIndex witness_cell = 0;
  explicit operator bool() const { return pass; }
};
PorosityResult check_dyadic_porosity(const DyadicSet& a, int k);

// Smallest k in [1, level-1] passing the porosity check, if any.
std::optional<int> fit_porosity_k(const DyadicSet& a, int k_max);

// Does C nu(B(x,r)) >= nu(B(x,2r)) hold at support centers over dyadic r?
CheckResult check_doubling(const DyadicMeasure& mu, double C);
std::optional<double> fit_doubling(const DyadicMeasure& mu,
                                   std::span<const double> C_grid);

// Doubling constant C plus a K-uniformly-perfect support yield an
// (N, gamma)-uniformly perfect measure: N = 2K+1, M = ceil(log2(N+1)),
// gamma = log2(1 + C^-M).
struct DoublingUP {
  double N = 0.0;
  int M = 0;
  double gamma = 0.0;
};
DoublingUP doubling_up_constants(double C_doubling, double K_support);

// Largest grid t such that level-j cell counts inside balls satisfy
// count >= c_t (R/r)^t across all swept (x, r, R); c_t is the witnessed
// minimum ratio. Covering counts are proxied by dyadic cell counts, so the
// witness floor absorbs the ball-to-cell constant.
struct LowerDimEstimate {
  double t = 0.0;
  double c_t = 1.0;
};
LowerDimEstimate estimate_lower_dimension(const DyadicSet& a,
                                          double witness_floor = 0.8,
                                          double t_step = 0.05);

// The finite-scale gap-chain bound: for a (2^N, gamma)-uniformly perfect
// measure and cells I in D_{(s+1)D}, J in D_{sD} with I inside the middle
// half of J and the support not inside J,
//   nu(I) <= 2^{-gamma floor((D-1)/N)} nu(J).
CheckResult check_gap_chain(const DyadicMeasure& mu, int up_log2_N,
                            double gamma, int D);

// Fitted summary of every regularity diagnostic for one measure, plus the
// verdict on a caller-requested (N, gamma) pair when one is supplied.
struct RegularityReport {
  std::optional<std::pair<double, double>> uniform_perfect;  // (N, gamma)
  std::optional<std::pair<double, double>> requested_up;
  std::optional<bool> requested_up_pass;
  std::optional<AhlforsFit> ahlfors;
  std::optional<double> doubling_constant;
  std::optional<int> porosity_k;
  LowerDimEstimate lower_dim;
  double diameter = 0.0;
};

RegularityReport build_regularity_report(
    const DyadicMeasure& mu,
    std::optional<std::pair<double, double>> requested_up = std::nullopt);
void to_json(nlohmann::json& j, const RegularityReport& r);

}  // namespace lqdim::reg
