#include "lqdim/thickness.hpp"

#include <algorithm>
#include <stdexcept>

namespace lqdim::sums {

namespace {

// Exact comparison a/b < c/d for nonnegative numerators, positive
// denominators.
bool ratio_less(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  return static_cast<__int128>(a) * d < static_cast<__int128>(c) * b;
}

struct Builder {
  const std::vector<IntInterval>& pieces;
  std::int64_t gap_floor;
  DerivationTree tree;
  // running minimum ratio as an exact fraction num/den; den == 0 means "no
  // split seen yet"
  std::int64_t min_num = 0, min_den = 0;

  int build(std::size_t lo, std::size_t hi) {  // pieces [lo, hi]
    // widest visible gap, leftmost on ties
    std::size_t cut = 0;
    std::int64_t best = 0;
    for (std::size_t t = lo; t < hi; ++t) {
      const std::int64_t g = pieces[t + 1].lo - pieces[t].hi;
      if (g >= gap_floor && g > best) {
        best = g;
        cut = t;
      }
    }
    DerivationNode node;
    node.bridge = {pieces[lo].lo, pieces[hi].hi};
    if (best == 0) {  // no visible gap: leaf bridge
      const int id = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back(node);
      return id;
    }
    node.gap = IntInterval{pieces[cut].hi, pieces[cut + 1].lo};
    const std::int64_t left_w = pieces[cut].hi - pieces[lo].lo;
    const std::int64_t right_w = pieces[hi].hi - pieces[cut + 1].lo;
    const std::int64_t num = std::min(left_w, right_w);
    node.tau_local = static_cast<double>(num) / static_cast<double>(best);
    if (min_den == 0 || ratio_less(num, best, min_num, min_den)) {
      min_num = num;
      min_den = best;
    }
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(node);
    const int l = build(lo, cut);
    const int r = build(cut + 1, hi);
    tree.nodes[static_cast<std::size_t>(id)].left = l;
    tree.nodes[static_cast<std::size_t>(id)].right = r;
    return id;
  }
};

}  // namespace

ThicknessReport derive_thickness(std::vector<IntInterval> pieces,
                                 std::int64_t gap_floor, int resolution_level) {
  if (pieces.empty()) throw std::invalid_argument("empty interval list");
  if (gap_floor < 1) throw std::invalid_argument("gap floor must be >= 1");
  std::sort(pieces.begin(), pieces.end(),
            [](const IntInterval& a, const IntInterval& b) { return a.lo < b.lo; });
  for (const auto& p : pieces)
    if (p.hi < p.lo) throw std::invalid_argument("interval with hi < lo");
  // merge touching/overlapping pieces and gaps below the floor
  std::vector<IntInterval> merged;
  for (const auto& p : pieces) {
    if (!merged.empty() && p.lo - merged.back().hi < gap_floor)
      merged.back().hi = std::max(merged.back().hi, p.hi);
    else
      merged.push_back(p);
  }

  ThicknessReport rep;
  rep.resolution_level = resolution_level;
  Builder b{merged, gap_floor, {}, 0, 0};
  b.tree.root = b.build(0, merged.size() - 1);
  rep.derivation = std::move(b.tree);
  if (b.min_den == 0) {
    rep.tau = std::numeric_limits<double>::infinity();
    rep.is_infinite = true;
  } else {
    rep.tau = static_cast<double>(b.min_num) / static_cast<double>(b.min_den);
    rep.is_infinite = false;
  }
  return rep;
}

ThicknessReport derive_thickness(const DyadicSet& a) {
  if (a.empty()) throw std::invalid_argument("empty set");
  std::vector<IntInterval> pieces;
  const auto idx = a.indices();
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && idx[j + 1] == idx[j] + 1) ++j;
    pieces.push_back({idx[i], idx[j] + 1});  // closed cell union
    i = j + 1;
  }
  return derive_thickness(std::move(pieces), 1, a.level());
}

namespace {

AstelsResult astels_sum(std::span<const double> taus) {
  AstelsResult out;
  for (double tau : taus) {
    if (tau < 0.0) throw std::invalid_argument("thickness must be nonnegative");
    out.sum += std::isinf(tau) ? 1.0 : tau / (tau + 1.0);
  }
  out.pass = out.sum >= 1.0;
  return out;
}

}  // namespace

AstelsResult astels_check(std::span<const double> taus) {
  return astels_sum(taus);
}

AstelsResult astels_check(std::span<const double> taus,
                          std::span<const GapDiam> geometry) {
  AstelsResult out = astels_sum(taus);
  std::int64_t max_gap = 0;
  std::int64_t min_diam = std::numeric_limits<std::int64_t>::max();
  for (const auto& g : geometry) {
    max_gap = std::max(max_gap, g.largest_gap);
    min_diam = std::min(min_diam, g.smallest_diameter);
  }
  out.side_condition = max_gap <= min_diam;
  out.borderline = std::llabs(max_gap - min_diam) <= 1;
  return out;
}

double up_to_lowerdim(double K) {
  if (!(K > 1.0)) throw std::invalid_argument("K must exceed 1");
  return 1.0 / (std::log2(2.0 * K) + 1.0);
}

double lowerdim_to_up(double t, double c_t) {
  if (!(t > 0.0) || t > 1.0) throw std::invalid_argument("t must lie in (0,1]");
  if (!(c_t > 0.0)) throw std::invalid_argument("c_t must be positive");
  return std::pow(2.0 / c_t, 1.0 / t);
}

double up_to_thickness(double K) {
  if (!(K > 1.0)) throw std::invalid_argument("K must exceed 1");
  return 1.0 / K;
}

ThicknessToUP thickness_to_up(double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (std::isinf(tau)) return {1.0, false};  // intervals: any K > 1 works
  return {1.0 + 2.0 / tau, true};
}

void to_json(nlohmann::json& j, const ThicknessReport& r) {
  j = nlohmann::json{{"tau", r.is_infinite ? nlohmann::json("inf") : nlohmann::json(r.tau)},
                     {"is_infinite", r.is_infinite},
                     {"resolution_level", r.resolution_level},
                     {"resolution_bounded", r.resolution_bounded},
                     {"splits", nlohmann::json::array()}};
  for (const auto& n : r.derivation.nodes) {
    if (!n.gap) continue;
    j["splits"].push_back({{"bridge", {n.bridge.lo, n.bridge.hi}},
                           {"gap", {n.gap->lo, n.gap->hi}},
                           {"tau_local", n.tau_local}});
  }
}

}  // namespace lqdim::sums
