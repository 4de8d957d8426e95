#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "lqdim/dyadic.hpp"

namespace lqdim::uni {

// Branching structure of a (D, ell, R_s)-uniform set at level m = D * ell:
// every level-sD cell meeting the leaves has exactly branching[s] children
// D levels down. full_scales lists the s with branching[s] >= 2^{(1-delta)D}.
struct UniformTree {
  int D = 1;
  int ell = 1;
  std::vector<std::int64_t> branching;
  DyadicSet leaves;
  double delta = 0.1;
  std::vector<int> full_scales;

  int level() const { return D * ell; }
  // Throws if the branching sequence does not match the leaves.
  void validate() const;
};

void to_json(nlohmann::json& j, const UniformTree& t);

// For each s in [0, ell), the multiset of child counts
// { N_{(s+1)D}(A cap J) : J in D_sD(A) }, sorted ascending.
std::vector<std::vector<std::int64_t>> branching_profile(const DyadicSet& a,
                                                         int D, int ell);

// The branching sequence R_s if every level's child counts are constant.
std::optional<std::vector<std::int64_t>> is_uniform(const DyadicSet& a, int D,
                                                    int ell);

enum class UniformizeObjective { kCount, kLqNorm };

struct UniformizeResult {
  UniformTree tree;
  DyadicMeasure retained;      // mu restricted to the leaves, renormalized
  double retained_mass = 0.0;  // mu(leaves) before renormalization
  double leaf_retention = 0.0; // |leaves| / |support|
  double retained_lq_log2 = 0.0;  // log2 ||mu|_A||_q^q (kLqNorm only)
};

// Extracts a uniform subset of the support. Levels are processed fine to
// coarse: at each level the cells are bucketed into the D+1 dyadic branching
// classes 2^j <= R < 2^{j+1}, the class with the largest retained objective
// weight wins (ties toward deeper branching), and each kept cell is trimmed
// to its 2^j heaviest children (ties toward the leftmost). Retains at least
// (2(D+1))^-ell of the leaf count (kCount) resp. of ||mu||_q^q (kLqNorm).
// Already-uniform inputs are returned unchanged.
UniformizeResult uniformize(const DyadicMeasure& mu, int D, int ell,
                            UniformizeObjective objective, double q = 2.0,
                            double delta = 0.1);

// Per-scale saturation: does every point sit in the middle half of its
// level-sD cell? One flag per s in [0, ell).
std::vector<bool> saturation_check(const DyadicSet& a, int D, int ell);

// The scale set S = { s : R_s >= 2^{(1-delta)D} } together with the bracket
//   -log2||nu||_q^q / (q-1) - m delta <= D|S| <= -log2||mu||_q^q / (q-1) + m delta
// evaluated for caller-supplied norms (log2 ||.||_q^q).
struct ScaleSetBracket {
  std::vector<int> S;
  std::int64_t D_times_S = 0;
  double lower = 0.0;
  double upper = 0.0;
  bool holds = false;
};

ScaleSetBracket branching_scale_set(const UniformTree& tree, double delta,
                                    double q, double log2_mu_norm_qq,
                                    double log2_nu_norm_qq);

}  // namespace lqdim::uni
