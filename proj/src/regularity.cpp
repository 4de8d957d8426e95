#include "lqdim/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lqdim/ball.hpp"

namespace lqdim::reg {

namespace {

// Dyadic radius exponents i with 2^-i in [2^-m, diam]: i in [i_min, m].
int radius_floor_exp(double diam) {
  if (diam >= 1.0) return 0;
  return std::max(0, static_cast<int>(std::floor(-std::log2(diam))));
}

std::vector<GridIndex> sweep_centers(const DyadicMeasure& mu, CenterMode mode,
                                     GridIndex pad) {
  std::vector<GridIndex> centers(mu.indices().begin(), mu.indices().end());
  if (mode == CenterMode::kSupportAtoms) return centers;
  // every grid point within `pad` of the support; duplicates removed
  std::vector<GridIndex> all;
  for (GridIndex k : centers)
    for (GridIndex j = k - pad; j <= k + pad; ++j) all.push_back(j);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

}  // namespace

CheckResult check_uniformly_perfect(const DyadicMeasure& mu, double N,
                                    double gamma, CenterMode mode) {
  if (!(N > 1.0)) throw std::invalid_argument("N must exceed 1");
  if (!(gamma > 0.0) || gamma > 1.0)
    throw std::invalid_argument("gamma must lie in (0, 1]");
  const double diam = mu.support_diameter();
  if (diam <= 0.0)
    throw DegenerateSupportError("uniform perfectness needs a support of positive diameter");
  const int m = mu.level();
  if (!(N * std::ldexp(1.0, -m) < diam))
    throw std::invalid_argument("N 2^-m must stay below the support diameter");

  const double factor = std::exp2(gamma);
  const GridIndex span = mu.max_index() - mu.min_index();
  BallMassIndex balls(mu);
  const auto centers =
      sweep_centers(mu, mode, GridIndex{1} << std::max(0, m - radius_floor_exp(diam)));

  for (int i = radius_floor_exp(diam); i <= m; ++i) {
    const double r_cells = std::ldexp(1.0, m - i);
    const double Nr_cells = N * r_cells;
    // support centers always swallow the support once N r covers the span
    if (mode == CenterMode::kSupportAtoms && Nr_cells >= static_cast<double>(span))
      continue;
    for (GridIndex x : centers) {
      // skip (x, r) when the support sits inside B(x, N r)
      if (static_cast<double>(mu.min_index() - x) >= -Nr_cells &&
          static_cast<double>(mu.max_index() - x) <= Nr_cells)
        continue;
      // Open small ball against a closed big ball: an atom exactly r from x
      // stands for a half-open cell reaching past the continuum ball, so
      // counting it fully would overstate the small side and fail balanced
      // cases (Lebesgue at N = 3, gamma = 1) by one atom.
      const double small = balls.open_ball_mass(x, r_cells);
      if (small == 0.0) continue;
      const double big = balls.ball_mass(x, Nr_cells);
      if (big < factor * small)
        return {false, Witness{x, i, small, big}};
    }
  }
  return {true, std::nullopt};
}

namespace {
// N = 3 is the smallest grid entry: even Lebesgue measure fails N = 2 with
// gamma = 1 (balls centered just inside the boundary double by less than 2x).
constexpr double kDefaultNGrid[] = {3, 5, 9, 17, 33, 65};
constexpr double kDefaultGammaGrid[] = {1.0, 0.75, 0.5, 0.25, 0.125, 0.0625};
}  // namespace

std::span<const double> default_up_N_grid() { return kDefaultNGrid; }
std::span<const double> default_up_gamma_grid() { return kDefaultGammaGrid; }

std::optional<std::pair<double, double>> fit_uniform_perfectness(
    const DyadicMeasure& mu, std::span<const double> N_grid,
    std::span<const double> gamma_grid) {
  std::vector<double> Ns(N_grid.begin(), N_grid.end());
  std::vector<double> gs(gamma_grid.begin(), gamma_grid.end());
  std::sort(Ns.begin(), Ns.end());
  std::sort(gs.begin(), gs.end(), std::greater<>());
  const double diam = mu.support_diameter();
  if (diam <= 0.0)
    throw DegenerateSupportError("uniform perfectness needs a support of positive diameter");
  for (double N : Ns) {
    if (!(N * std::ldexp(1.0, -mu.level()) < diam)) continue;
    for (double g : gs)
      if (check_uniformly_perfect(mu, N, g).pass) return std::make_pair(N, g);
  }
  return std::nullopt;
}

CheckResult check_uniformly_perfect_set(const DyadicSet& a, double K) {
  if (!(K > 1.0)) throw std::invalid_argument("K must exceed 1");
  const double diam = a.support_diameter();
  if (diam <= 0.0)
    throw DegenerateSupportError("set uniform perfectness needs positive diameter");
  const int m = a.level();
  const auto idx = a.indices();
  for (int i = radius_floor_exp(diam); i <= m; ++i) {
    const double r_cells = std::ldexp(1.0, m - i);
    const double Kr_cells = K * r_cells;
    for (GridIndex x : idx) {
      if (static_cast<double>(a.min_index() - x) >= -Kr_cells &&
          static_cast<double>(a.max_index() - x) <= Kr_cells)
        continue;  // A inside B(x, K r)
      // is there a set point in B(x, K r) \ B(x, r)?
      const GridIndex in_lo = static_cast<GridIndex>(std::ceil(x - Kr_cells));
      const GridIndex in_hi = static_cast<GridIndex>(std::floor(x + Kr_cells));
      const GridIndex ex_lo = static_cast<GridIndex>(std::ceil(x - r_cells));
      const GridIndex ex_hi = static_cast<GridIndex>(std::floor(x + r_cells));
      auto count_in = [&](GridIndex lo, GridIndex hi) -> std::int64_t {
        if (lo > hi) return 0;
        const auto f = std::lower_bound(idx.begin(), idx.end(), lo);
        const auto l = std::upper_bound(idx.begin(), idx.end(), hi);
        return l - f;
      };
      if (count_in(in_lo, in_hi) - count_in(std::max(ex_lo, in_lo),
                                            std::min(ex_hi, in_hi)) <= 0)
        return {false, Witness{x, i, 0.0, 0.0}};
    }
  }
  return {true, std::nullopt};
}

std::optional<double> fit_uniform_perfectness_set(const DyadicSet& a,
                                                  std::span<const double> K_grid) {
  std::vector<double> Ks(K_grid.begin(), K_grid.end());
  std::sort(Ks.begin(), Ks.end());
  for (double K : Ks)
    if (check_uniformly_perfect_set(a, K).pass) return K;
  return std::nullopt;
}

namespace {

// Per-radius extremes of log2 nu(B(x, 2^-i)) over support centers, for the
// Ahlfors sweep i in [1, m - cutoff_exp].
struct LogMassEnvelope {
  std::vector<int> exps;
  std::vector<double> lo, hi;
};

LogMassEnvelope log_mass_envelope(const DyadicMeasure& mu, int fine_cutoff_cells) {
  const int m = mu.level();
  const int cutoff_exp = static_cast<int>(std::round(std::log2(fine_cutoff_cells)));
  const int i_max = m - cutoff_exp - 1;
  // skip radii beyond a quarter of the diameter: those balls see the global
  // boundary, not the local scaling
  const int i_min =
      std::max(1, static_cast<int>(std::ceil(-std::log2(mu.support_diameter()))) + 2);
  if (i_max < i_min)
    throw std::invalid_argument("empty Ahlfors sweep range; level too coarse");
  BallMassIndex balls(mu);
  LogMassEnvelope env;
  for (int i = i_min; i <= i_max; ++i) {
    const double r_cells = std::ldexp(1.0, m - i);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (GridIndex x : mu.indices()) {
      const double w = balls.ball_mass(x, r_cells);
      const double lw = std::log2(w);
      lo = std::min(lo, lw);
      hi = std::max(hi, lw);
    }
    env.exps.push_back(i);
    env.lo.push_back(lo);
    env.hi.push_back(hi);
  }
  return env;
}

double envelope_residual(const LogMassEnvelope& env, double alpha) {
  double res = 0.0;
  for (std::size_t t = 0; t < env.exps.size(); ++t) {
    const double ai = alpha * env.exps[t];
    res = std::max({res, std::abs(env.lo[t] + ai), std::abs(env.hi[t] + ai)});
  }
  return res;
}

}  // namespace

bool check_ahlfors(const DyadicMeasure& mu, double C, double alpha,
                   int fine_cutoff_cells) {
  if (C < 1.0) throw std::invalid_argument("C must be >= 1");
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("alpha must lie in (0,1]");
  const auto env = log_mass_envelope(mu, fine_cutoff_cells);
  return envelope_residual(env, alpha) <= std::log2(C) + 1e-12;
}

AhlforsFit fit_ahlfors(const DyadicMeasure& mu, int fine_cutoff_cells) {
  const auto env = log_mass_envelope(mu, fine_cutoff_cells);
  // residual(alpha) is convex piecewise linear; ternary search suffices
  double lo = 1e-3, hi = 1.0 - 1e-3;
  for (int it = 0; it < 200; ++it) {
    const double a = lo + (hi - lo) / 3.0;
    const double b = hi - (hi - lo) / 3.0;
    if (envelope_residual(env, a) <= envelope_residual(env, b))
      hi = b;
    else
      lo = a;
  }
  const double alpha = 0.5 * (lo + hi);
  const double res = envelope_residual(env, alpha);
  return {std::exp2(res), alpha, res};
}

double ahlfors_to_up_constants(double C, double alpha, double gamma) {
  if (C < 1.0 || !(alpha > 0.0) || !(alpha < 1.0) || !(gamma > 0.0) || gamma > 1.0)
    throw std::invalid_argument("need C >= 1, alpha in (0,1), gamma in (0,1]");
  return 2.0 * std::pow(std::exp2(gamma) * C * C, 1.0 / alpha) + 1.0;
}

int ahlfors_porosity_k(double C, double alpha) {
  if (C < 1.0 || !(alpha > 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("need C >= 1 and alpha in (0,1)");
  return static_cast<int>(std::ceil((3.0 + 2.0 * std::log2(C)) / (1.0 - alpha)));
}

PorosityResult check_dyadic_porosity(const DyadicSet& a, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (k >= a.level()) throw std::invalid_argument("k must stay below the set level");
  if (a.empty()) throw std::invalid_argument("empty set");
  const int m = a.level();
  for (int n = 0; n + k <= m; ++n) {
    // group the occupied level-(n+k) cells by their level-n ancestor
    const int fine_shift = m - (n + k);
    const int gap_shift = k;
    const GridIndex full = GridIndex{1} << k;
    GridIndex current_parent = 0;
    GridIndex prev_fine = 0;
    GridIndex count = 0;
    bool open = false;
    for (GridIndex x : a.indices()) {
      const GridIndex fine = x >> fine_shift;
      if (open && fine == prev_fine) continue;  // same fine cell
      const GridIndex parent = fine >> gap_shift;
      if (!open || parent != current_parent) {
        if (open && count >= full)
          return {false, n, current_parent};
        current_parent = parent;
        count = 1;
        open = true;
      } else {
        ++count;
      }
      prev_fine = fine;
    }
    if (open && count >= full) return {false, n, current_parent};
  }
  return {true, -1, 0};
}

std::optional<int> fit_porosity_k(const DyadicSet& a, int k_max) {
  const int hi = std::min(k_max, a.level() - 1);
  for (int k = 1; k <= hi; ++k)
    if (check_dyadic_porosity(a, k).pass) return k;
  return std::nullopt;
}

CheckResult check_doubling(const DyadicMeasure& mu, double C) {
  if (C < 1.0) throw std::invalid_argument("C must be >= 1");
  const int m = mu.level();
  BallMassIndex balls(mu);
  for (int i = 0; i <= m; ++i) {
    const double r_cells = std::ldexp(1.0, m - i);
    for (GridIndex x : mu.indices()) {
      const double small = balls.ball_mass(x, r_cells);
      const double big = balls.ball_mass(x, 2.0 * r_cells);
      if (C * small < big) return {false, Witness{x, i, small, big}};
    }
  }
  return {true, std::nullopt};
}

std::optional<double> fit_doubling(const DyadicMeasure& mu,
                                   std::span<const double> C_grid) {
  std::vector<double> Cs(C_grid.begin(), C_grid.end());
  std::sort(Cs.begin(), Cs.end());
  for (double C : Cs)
    if (check_doubling(mu, C).pass) return C;
  return std::nullopt;
}

DoublingUP doubling_up_constants(double C_doubling, double K_support) {
  if (C_doubling < 1.0) throw std::invalid_argument("doubling constant must be >= 1");
  if (!(K_support > 1.0)) throw std::invalid_argument("K must exceed 1");
  DoublingUP out;
  out.N = 2.0 * K_support + 1.0;
  out.M = static_cast<int>(std::ceil(std::log2(out.N + 1.0)));
  out.gamma = std::log2(1.0 + std::pow(C_doubling, -out.M));
  return out;
}

LowerDimEstimate estimate_lower_dimension(const DyadicSet& a,
                                          double witness_floor, double t_step) {
  if (a.empty()) throw std::invalid_argument("empty set");
  const int m = a.level();
  const double diam = a.support_diameter();
  if (a.size() == 1 || diam <= 0.0) return {0.0, 1.0};

  SetLevelIndex levels(a);
  const int i_min = radius_floor_exp(diam);
  // M[d] = min over swept (x, R=2^-i, r=2^-j) with d = j - i of the level-j
  // cell count inside B(x, R)
  std::vector<std::int64_t> min_count(static_cast<std::size_t>(m) + 1, -1);
  const auto idx = a.indices();
  for (int j = i_min + 1; j <= m; ++j) {
    for (int i = i_min; i < j; ++i) {
      const GridIndex w = GridIndex{1} << (m - i);
      std::int64_t local = -1;
      for (GridIndex x : idx) {
        const std::int64_t c = levels.cells_in_window(j, x - w, x + w);
        if (local < 0 || c < local) local = c;
      }
      auto& slot = min_count[static_cast<std::size_t>(j - i)];
      if (slot < 0 || local < slot) slot = local;
    }
  }

  // A ball 2^kIsolationExp times wider than a cell still covering a single
  // cell means a point is isolated at this resolution: R/r is unbounded
  // with count 1 in the limit, so t = 0.
  constexpr int kIsolationExp = 6;
  if (m - i_min >= kIsolationExp &&
      min_count[static_cast<std::size_t>(kIsolationExp)] <= 1)
    return {0.0, 1.0};

  LowerDimEstimate best{0.0, 1.0};
  for (double t = 0.0; t <= 1.0 + 1e-9; t += t_step) {
    double c_t = std::numeric_limits<double>::infinity();
    for (std::size_t d = 1; d < min_count.size(); ++d) {
      if (min_count[d] < 0) continue;
      c_t = std::min(c_t, static_cast<double>(min_count[d]) /
                              std::exp2(t * static_cast<double>(d)));
    }
    if (!std::isfinite(c_t)) break;
    if (c_t >= witness_floor)
      best = {t, c_t};
    else
      break;  // c_t is nonincreasing in t
  }
  return best;
}

CheckResult check_gap_chain(const DyadicMeasure& mu, int up_log2_N, double gamma,
                            int D) {
  if (up_log2_N < 1) throw std::invalid_argument("log2 N must be >= 1");
  if (D < 2) throw std::invalid_argument("D must be >= 2");
  const int m = mu.level();
  const double cut =
      std::exp2(-gamma * std::floor(static_cast<double>(D - 1) / up_log2_N));
  BallMassIndex balls(mu);
  for (int s = 0; (s + 1) * D <= m; ++s) {
    const int coarse_shift = m - s * D;
    const int fine_shift = m - (s + 1) * D;
    // enumerate occupied fine cells I and their coarse parents J
    GridIndex prev_fine = 0;
    bool first = true;
    for (GridIndex x : mu.indices()) {
      const GridIndex fine = x >> fine_shift;
      if (!first && fine == prev_fine) continue;
      first = false;
      prev_fine = fine;
      const GridIndex coarse = fine >> D;
      // I inside the middle half of J?
      const GridIndex off = fine - (coarse << D);
      const GridIndex quarter = GridIndex{1} << (D - 2);
      if (off < quarter || off + 1 > 3 * quarter) continue;
      // support not inside J?
      const GridIndex j_lo = coarse << coarse_shift;
      const GridIndex j_hi = j_lo + (GridIndex{1} << coarse_shift) - 1;
      if (mu.min_index() >= j_lo && mu.max_index() <= j_hi) continue;
      const double nu_I =
          balls.mass_between(fine << fine_shift,
                             (fine << fine_shift) + (GridIndex{1} << fine_shift) - 1);
      const double nu_J = balls.mass_between(j_lo, j_hi);
      if (nu_I > cut * nu_J + 1e-15)
        return {false, Witness{fine, (s + 1) * D, nu_I, nu_J}};
    }
  }
  return {true, std::nullopt};
}

RegularityReport build_regularity_report(
    const DyadicMeasure& mu, std::optional<std::pair<double, double>> requested_up) {
  RegularityReport r;
  r.diameter = mu.support_diameter();
  if (r.diameter > 0.0) {
    r.uniform_perfect =
        fit_uniform_perfectness(mu, default_up_N_grid(), default_up_gamma_grid());
    if (requested_up) {
      r.requested_up = requested_up;
      r.requested_up_pass =
          check_uniformly_perfect(mu, requested_up->first, requested_up->second).pass;
    }
    if (mu.level() >= 7) {
      try {
        r.ahlfors = fit_ahlfors(mu);
      } catch (const std::invalid_argument&) {
      }
    }
    constexpr double kDoublingGrid[] = {1.5, 2, 3, 4, 6, 8, 16, 32};
    r.doubling_constant = fit_doubling(mu, kDoublingGrid);
    const DyadicSet supp = support_set(mu);
    r.porosity_k = fit_porosity_k(supp, mu.level() - 1);
    r.lower_dim = estimate_lower_dimension(supp);
  }
  return r;
}

void to_json(nlohmann::json& j, const RegularityReport& r) {
  j = nlohmann::json::object();
  if (r.uniform_perfect)
    j["uniform_perfect"] = {{"N", r.uniform_perfect->first},
                            {"gamma", r.uniform_perfect->second}};
  else
    j["uniform_perfect"] = nullptr;
  if (r.requested_up)
    j["requested_uniform_perfect"] = {{"N", r.requested_up->first},
                                      {"gamma", r.requested_up->second},
                                      {"pass", *r.requested_up_pass}};
  if (r.ahlfors)
    j["ahlfors"] = {{"C", r.ahlfors->C},
                    {"alpha", r.ahlfors->alpha},
                    {"residual_log2", r.ahlfors->residual_log2}};
  else
    j["ahlfors"] = nullptr;
  j["doubling_constant"] =
      r.doubling_constant ? nlohmann::json(*r.doubling_constant) : nlohmann::json(nullptr);
  j["porosity_k"] = r.porosity_k ? nlohmann::json(*r.porosity_k) : nlohmann::json(nullptr);
  j["lower_dim"] = {{"t", r.lower_dim.t}, {"c_t", r.lower_dim.c_t}};
  j["diameter"] = r.diameter;
}

}  // namespace lqdim::reg
