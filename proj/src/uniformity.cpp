#include "lqdim/uniformity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lqdim/norms.hpp"

namespace lqdim::uni {

namespace {

void check_shape(const DyadicSet& a, int D, int ell) {
  if (D < 1 || ell < 1) throw std::invalid_argument("need D >= 1 and ell >= 1");
  if (a.level() != D * ell)
    throw std::invalid_argument("set level must equal D * ell");
  if (a.empty()) throw std::invalid_argument("empty set");
}

std::vector<int> full_scales_for(const std::vector<std::int64_t>& branching,
                                 int D, double delta) {
  std::vector<int> out;
  const double threshold = std::exp2((1.0 - delta) * D);
  for (std::size_t s = 0; s < branching.size(); ++s)
    if (static_cast<double>(branching[s]) >= threshold)
      out.push_back(static_cast<int>(s));
  return out;
}

}  // namespace

void UniformTree::validate() const {
  if (static_cast<int>(branching.size()) != ell)
    throw std::logic_error("branching sequence length != ell");
  const auto profile = branching_profile(leaves, D, ell);
  std::int64_t expected_leaves = 1;
  for (int s = 0; s < ell; ++s) {
    for (std::int64_t c : profile[static_cast<std::size_t>(s)])
      if (c != branching[static_cast<std::size_t>(s)])
        throw std::logic_error("cell branching deviates from R_s");
    expected_leaves *= branching[static_cast<std::size_t>(s)];
  }
  // leaf count equals the product of branching numbers times the number of
  // occupied root cells
  const std::int64_t roots =
      static_cast<std::int64_t>(profile.empty() ? 1 : profile[0].size());
  if (static_cast<std::int64_t>(leaves.size()) != expected_leaves * roots)
    throw std::logic_error("leaf count != product of branching numbers");
}

void to_json(nlohmann::json& j, const UniformTree& t) {
  j = nlohmann::json{{"D", t.D},
                     {"ell", t.ell},
                     {"branching", t.branching},
                     {"delta", t.delta},
                     {"full_scales", t.full_scales},
                     {"leaves", nlohmann::json::object()}};
  to_json(j["leaves"], t.leaves);
}

std::vector<std::vector<std::int64_t>> branching_profile(const DyadicSet& a,
                                                         int D, int ell) {
  check_shape(a, D, ell);
  const int m = a.level();
  std::vector<std::vector<std::int64_t>> profile(static_cast<std::size_t>(ell));
  for (int s = 0; s < ell; ++s) {
    const int child_shift = m - (s + 1) * D;
    std::vector<std::int64_t> counts;
    bool first = true;
    GridIndex prev_child = 0, prev_parent = 0;
    for (GridIndex x : a.indices()) {
      const GridIndex child = x >> child_shift;
      if (!first && child == prev_child) continue;
      const GridIndex parent = child >> D;
      if (first || parent != prev_parent) {
        counts.push_back(1);
      } else {
        ++counts.back();
      }
      prev_child = child;
      prev_parent = parent;
      first = false;
    }
    std::sort(counts.begin(), counts.end());
    profile[static_cast<std::size_t>(s)] = std::move(counts);
  }
  return profile;
}

std::optional<std::vector<std::int64_t>> is_uniform(const DyadicSet& a, int D,
                                                    int ell) {
  const auto profile = branching_profile(a, D, ell);
  std::vector<std::int64_t> R(static_cast<std::size_t>(ell));
  for (int s = 0; s < ell; ++s) {
    const auto& counts = profile[static_cast<std::size_t>(s)];
    if (counts.empty()) return std::nullopt;
    if (counts.front() != counts.back()) return std::nullopt;
    R[static_cast<std::size_t>(s)] = counts.front();
  }
  return R;
}

namespace {

// A cell at some block level: the contiguous run [begin, end) of surviving
// leaves below it, and its objective weight.
struct Cell {
  GridIndex id;
  std::size_t begin, end;
  double weight;
};

int floor_log2(std::int64_t v) {
  int j = 0;
  while (v >= 2) {
    v >>= 1;
    ++j;
  }
  return j;
}

}  // namespace

UniformizeResult uniformize(const DyadicMeasure& mu, int D, int ell,
                            UniformizeObjective objective, double q,
                            double delta) {
  const DyadicSet supp = support_set(mu);
  check_shape(supp, D, ell);
  const int m = mu.level();

  // fixed point: an already-uniform support is returned as-is
  if (auto R = is_uniform(supp, D, ell)) {
    UniformTree tree{D, ell, *R, supp, delta, full_scales_for(*R, D, delta)};
    UniformizeResult out{std::move(tree), mu, 1.0, 1.0, 0.0};
    if (objective == UniformizeObjective::kLqNorm)
      out.retained_lq_log2 = lq_norm_log2(mu, q);
    return out;
  }

  std::vector<GridIndex> leaves(mu.indices().begin(), mu.indices().end());
  std::vector<double> leaf_weight(leaves.size());
  for (std::size_t i = 0; i < leaves.size(); ++i)
    leaf_weight[i] = objective == UniformizeObjective::kCount
                         ? 1.0
                         : std::pow(mu.masses()[i], q);

  std::vector<std::int64_t> branching(static_cast<std::size_t>(ell), 0);

  // Fine to coarse: after processing level s every surviving level-s cell
  // has exactly 2^{j_s} children, and deeper levels are untouched because
  // only whole child subtrees are dropped.
  for (int s = ell - 1; s >= 0; --s) {
    const int child_shift = m - (s + 1) * D;
    const int parent_shift = m - s * D;

    // child cells with their leaf ranges and weights
    std::vector<Cell> children;
    for (std::size_t i = 0; i < leaves.size();) {
      const GridIndex id = leaves[i] >> child_shift;
      std::size_t j = i;
      double w = 0.0;
      while (j < leaves.size() && (leaves[j] >> child_shift) == id)
        w += leaf_weight[j++];
      children.push_back({id, i, j, w});
      i = j;
    }
    // parents as ranges over the children array
    struct Parent {
      std::size_t begin, end;  // child range
      int cls;
      double kept_weight;
      std::vector<std::size_t> kept;  // child indices, chosen later
    };
    std::vector<Parent> parents;
    for (std::size_t c = 0; c < children.size();) {
      const GridIndex pid = children[c].id >> D;
      std::size_t e = c;
      while (e < children.size() && (children[e].id >> D) == pid) ++e;
      parents.push_back({c, e, floor_log2(static_cast<std::int64_t>(e - c)), 0.0, {}});
      c = e;
    }
    // per parent: the 2^cls heaviest children (ties to the left), then the
    // class with the largest total kept weight wins
    std::vector<double> class_weight(static_cast<std::size_t>(D) + 1, 0.0);
    for (auto& p : parents) {
      const std::size_t keep = std::size_t{1} << p.cls;
      std::vector<std::size_t> order(p.end - p.begin);
      std::iota(order.begin(), order.end(), p.begin);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) {
                         return children[a].weight > children[b].weight;
                       });
      order.resize(keep);
      std::sort(order.begin(), order.end());
      p.kept = std::move(order);
      for (std::size_t c : p.kept) p.kept_weight += children[c].weight;
      class_weight[static_cast<std::size_t>(p.cls)] += p.kept_weight;
    }
    int best_cls = 0;
    for (int j = 1; j <= D; ++j)
      if (class_weight[static_cast<std::size_t>(j)] >=
          class_weight[static_cast<std::size_t>(best_cls)])
        best_cls = j;
    branching[static_cast<std::size_t>(s)] = std::int64_t{1} << best_cls;

    // survivors: leaves under kept children of parents in the winning class
    std::vector<GridIndex> next_leaves;
    std::vector<double> next_weight;
    for (const auto& p : parents) {
      if (p.cls != best_cls) continue;
      for (std::size_t c : p.kept)
        for (std::size_t i = children[c].begin; i < children[c].end; ++i) {
          next_leaves.push_back(leaves[i]);
          next_weight.push_back(leaf_weight[i]);
        }
    }
    leaves = std::move(next_leaves);
    leaf_weight = std::move(next_weight);
    (void)parent_shift;
  }

  // assemble the retained measure (restriction, then renormalized)
  std::vector<std::pair<GridIndex, double>> atoms;
  atoms.reserve(leaves.size());
  double kept_mass = 0.0;
  double kept_norm = 0.0;
  {
    const auto idx = mu.indices();
    const auto ws = mu.masses();
    std::size_t cursor = 0;
    for (GridIndex k : leaves) {
      while (idx[cursor] != k) ++cursor;
      atoms.emplace_back(k, ws[cursor]);
      kept_mass += ws[cursor];
      kept_norm += std::pow(ws[cursor], q);
    }
  }
  UniformizeResult out;
  out.tree = UniformTree{D,     ell,   branching, DyadicSet::from_indices(m, leaves),
                         delta, full_scales_for(branching, D, delta)};
  out.retained = DyadicMeasure::from_atoms(m, std::move(atoms));
  out.retained_mass = kept_mass;
  out.leaf_retention =
      static_cast<double>(leaves.size()) / static_cast<double>(mu.size());
  out.retained_lq_log2 =
      objective == UniformizeObjective::kLqNorm ? std::log2(kept_norm) : 0.0;
  out.tree.validate();
  return out;
}

std::vector<bool> saturation_check(const DyadicSet& a, int D, int ell) {
  check_shape(a, D, ell);
  const int m = a.level();
  std::vector<bool> pass(static_cast<std::size_t>(ell), true);
  for (int s = 0; s < ell; ++s) {
    const GridIndex W = GridIndex{1} << (m - s * D);
    for (GridIndex x : a.indices()) {
      const GridIndex off = x & (W - 1);  // offset within the level-sD cell
      if (4 * off < W || 4 * off > 3 * W) {
        pass[static_cast<std::size_t>(s)] = false;
        break;
      }
    }
  }
  return pass;
}

ScaleSetBracket branching_scale_set(const UniformTree& tree, double delta,
                                    double q, double log2_mu_norm_qq,
                                    double log2_nu_norm_qq) {
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("delta must lie in (0,1)");
  ScaleSetBracket out;
  out.S = full_scales_for(tree.branching, tree.D, delta);
  out.D_times_S = static_cast<std::int64_t>(tree.D) *
                  static_cast<std::int64_t>(out.S.size());
  const double mdelta = static_cast<double>(tree.level()) * delta;
  out.lower = -log2_nu_norm_qq / (q - 1.0) - mdelta;
  out.upper = -log2_mu_norm_qq / (q - 1.0) + mdelta;
  const double ds = static_cast<double>(out.D_times_S);
  out.holds = out.lower <= ds && ds <= out.upper;
  return out;
}

}  // namespace lqdim::uni
