#include "lqdim/dyadic.hpp"

#include <algorithm>
#include <stdexcept>

#include "lqdim/norms.hpp"

namespace lqdim {

namespace {

void check_level(int level) {
  if (level < 0 || level > kMaxLevel)
    throw std::invalid_argument("level must be in [0, " +
                                std::to_string(kMaxLevel) + "]");
}

}  // namespace

DyadicMeasure DyadicMeasure::from_atoms(
    int level, std::vector<std::pair<GridIndex, double>> atoms) {
  check_level(level);
  if (atoms.empty()) throw std::invalid_argument("measure needs at least one atom");
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  DyadicMeasure mu;
  mu.level_ = level;
  mu.indices_.reserve(atoms.size());
  mu.masses_.reserve(atoms.size());
  for (const auto& [k, w] : atoms) {
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("atom masses must be positive and finite");
    if (!mu.indices_.empty() && mu.indices_.back() == k) {
      mu.masses_.back() += w;
    } else {
      mu.indices_.push_back(k);
      mu.masses_.push_back(w);
    }
  }
  const double total = pairwise_sum(mu.masses_);
  if (!(total > 0.0) || !std::isfinite(total))
    throw std::invalid_argument("total mass must be positive");
  if (total != 1.0) {
    for (double& w : mu.masses_) w /= total;
  }
  return mu;
}

DyadicMeasure DyadicMeasure::from_sorted_unchecked(int level,
                                                   std::vector<GridIndex> indices,
                                                   std::vector<double> masses) {
  check_level(level);
  DyadicMeasure mu;
  mu.level_ = level;
  mu.indices_ = std::move(indices);
  mu.masses_ = std::move(masses);
  return mu;
}

DyadicMeasure DyadicMeasure::dirac(int level, GridIndex k) {
  return from_sorted_unchecked(level, {k}, {1.0});
}

DyadicMeasure DyadicMeasure::uniform(int level) {
  check_level(level);
  const GridIndex n = GridIndex{1} << level;
  std::vector<GridIndex> idx(static_cast<std::size_t>(n));
  std::vector<double> mass(static_cast<std::size_t>(n),
                           std::ldexp(1.0, -level));
  for (GridIndex k = 0; k < n; ++k) idx[static_cast<std::size_t>(k)] = k;
  return from_sorted_unchecked(level, std::move(idx), std::move(mass));
}

double DyadicMeasure::total_mass() const { return pairwise_sum(masses_); }

void DyadicMeasure::validate() const {
  check_level(level_);
  if (indices_.size() != masses_.size())
    throw std::logic_error("index/mass arrays out of sync");
  if (indices_.empty()) throw std::logic_error("empty measure");
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (!(masses_[i] > 0.0) || !std::isfinite(masses_[i]))
      throw std::logic_error("non-positive atom mass");
    if (i > 0 && indices_[i] <= indices_[i - 1])
      throw std::logic_error("indices not strictly increasing");
  }
  if (std::abs(total_mass() - 1.0) > kMassDriftTolerance)
    throw std::logic_error("total mass drifted from 1");
}

DyadicSet DyadicSet::from_indices(int level, std::vector<GridIndex> indices) {
  check_level(level);
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  DyadicSet a;
  a.level_ = level;
  a.indices_ = std::move(indices);
  return a;
}

DyadicSet DyadicSet::full(int level) {
  check_level(level);
  const GridIndex n = GridIndex{1} << level;
  std::vector<GridIndex> idx(static_cast<std::size_t>(n));
  for (GridIndex k = 0; k < n; ++k) idx[static_cast<std::size_t>(k)] = k;
  DyadicSet a;
  a.level_ = level;
  a.indices_ = std::move(idx);
  return a;
}

DyadicSet DyadicSet::singleton(int level, GridIndex k) {
  return from_indices(level, {k});
}

bool DyadicSet::contains(GridIndex k) const {
  return std::binary_search(indices_.begin(), indices_.end(), k);
}

void DyadicSet::validate() const {
  check_level(level_);
  for (std::size_t i = 1; i < indices_.size(); ++i)
    if (indices_[i] <= indices_[i - 1])
      throw std::logic_error("set indices not strictly increasing");
}

DyadicMeasure discretize(const DyadicMeasure& mu, int target_level) {
  if (target_level < 0) throw std::invalid_argument("target level negative");
  if (target_level > mu.level())
    throw std::invalid_argument("target level exceeds measure level");
  const int shift = mu.level() - target_level;
  if (shift == 0) return mu;

  std::vector<GridIndex> idx;
  std::vector<double> mass;
  idx.reserve(mu.size());
  mass.reserve(mu.size());
  const auto ks = mu.indices();
  const auto ws = mu.masses();
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const GridIndex coarse = ks[i] >> shift;  // floor division
    if (!idx.empty() && idx.back() == coarse) {
      mass.back() += ws[i];
    } else {
      idx.push_back(coarse);
      mass.push_back(ws[i]);
    }
  }
  return DyadicMeasure::from_sorted_unchecked(target_level, std::move(idx),
                                              std::move(mass));
}

DyadicSet coarsen(const DyadicSet& a, int target_level) {
  if (target_level < 0) throw std::invalid_argument("target level negative");
  if (target_level > a.level())
    throw std::invalid_argument("target level exceeds set level");
  const int shift = a.level() - target_level;
  if (shift == 0) return a;
  std::vector<GridIndex> idx;
  idx.reserve(a.size());
  for (GridIndex k : a.indices()) {
    const GridIndex coarse = k >> shift;
    if (idx.empty() || idx.back() != coarse) idx.push_back(coarse);
  }
  DyadicSet out = DyadicSet::from_indices(target_level, std::move(idx));
  return out;
}

DyadicSet support_set(const DyadicMeasure& mu) {
  std::vector<GridIndex> idx(mu.indices().begin(), mu.indices().end());
  return DyadicSet::from_indices(mu.level(), std::move(idx));
}

DyadicMeasure uniform_on(const DyadicSet& a) {
  if (a.empty()) throw std::invalid_argument("empty set");
  std::vector<GridIndex> idx(a.indices().begin(), a.indices().end());
  std::vector<double> mass(idx.size(), 1.0 / static_cast<double>(idx.size()));
  return DyadicMeasure::from_sorted_unchecked(a.level(), std::move(idx),
                                              std::move(mass));
}

void to_json(nlohmann::json& j, const DyadicMeasure& mu) {
  nlohmann::json atoms = nlohmann::json::array();
  for (std::size_t i = 0; i < mu.size(); ++i)
    atoms.push_back({mu.indices()[i], mu.masses()[i]});
  j = nlohmann::json{{"level", mu.level()}, {"atoms", std::move(atoms)}};
}

void from_json(const nlohmann::json& j, DyadicMeasure& mu) {
  std::vector<std::pair<GridIndex, double>> atoms;
  for (const auto& a : j.at("atoms"))
    atoms.emplace_back(a.at(0).get<GridIndex>(), a.at(1).get<double>());
  mu = DyadicMeasure::from_atoms(j.at("level").get<int>(), std::move(atoms));
}

void to_json(nlohmann::json& j, const DyadicSet& a) {
  j = nlohmann::json{{"level", a.level()},
                     {"indices", std::vector<GridIndex>(a.indices().begin(),
                                                        a.indices().end())}};
}

void from_json(const nlohmann::json& j, DyadicSet& a) {
  a = DyadicSet::from_indices(j.at("level").get<int>(),
                              j.at("indices").get<std::vector<GridIndex>>());
}

}  // namespace lqdim
