#include "lqdim/sumsets.hpp"

#include "lqdim/generate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lqdim::sums {

DyadicSet sumset(const DyadicSet& a, const DyadicSet& b, SumsetPadding pad,
                 std::uint64_t work_cap) {
  if (a.level() != b.level())
    throw std::invalid_argument("sumset requires equal levels");
  if (a.empty() || b.empty()) throw std::invalid_argument("empty operand");
  const std::uint64_t work =
      static_cast<std::uint64_t>(a.size()) * static_cast<std::uint64_t>(b.size());
  if (work > work_cap)
    throw ResourceLimitError("sumset pair work " + std::to_string(work) +
                             " exceeds cap " + std::to_string(work_cap));

  const GridIndex base = a.min_index() + b.min_index();
  const GridIndex top = a.max_index() + b.max_index() + 1;  // room for padding
  std::vector<bool> hit(static_cast<std::size_t>(top - base + 1), false);
  for (GridIndex x : a.indices())
    for (GridIndex y : b.indices()) {
      const GridIndex k = x + y - base;
      hit[static_cast<std::size_t>(k)] = true;
      if (pad == SumsetPadding::kNeighbor)
        hit[static_cast<std::size_t>(k + 1)] = true;
    }
  std::vector<GridIndex> idx;
  for (std::size_t t = 0; t < hit.size(); ++t)
    if (hit[t]) idx.push_back(base + static_cast<GridIndex>(t));
  return DyadicSet::from_indices(a.level(), std::move(idx));
}

bool interval_detect(const DyadicSet& a) {
  if (a.empty()) throw std::invalid_argument("empty set");
  return static_cast<GridIndex>(a.size()) == a.max_index() - a.min_index() + 1;
}

DimensionEstimate box_dimension_scan(
    const std::function<DyadicSet(int)>& at_level, std::span<const int> levels,
    int window) {
  if (levels.empty()) throw std::invalid_argument("levels list empty");
  std::vector<std::pair<int, double>> raw;
  raw.reserve(levels.size());
  for (int m : levels) {
    const DyadicSet a = at_level(m);
    if (a.level() != m) throw std::logic_error("generator returned wrong level");
    raw.emplace_back(m, std::log2(static_cast<double>(a.size())));
  }
  return summarize_scales(std::move(raw), /*q=*/2.0, /*is_infinity=*/true, window);
}

NFoldReport nfold_sumset_experiment(const DyadicSet& base, int n_max,
                                    SumsetPadding pad, std::uint64_t work_cap) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  NFoldReport rep;
  DyadicSet current = base;
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) current = sumset(current, base, pad, work_cap);
    NFoldRow row;
    row.n = n;
    row.level = current.level();
    row.cell_count = static_cast<std::int64_t>(current.size());
    row.box_exponent = std::log2(static_cast<double>(current.size())) /
                       static_cast<double>(current.level());
    row.is_interval = interval_detect(current);
    if (row.is_interval && !rep.first_interval_n) rep.first_interval_n = n;
    rep.rows.push_back(row);
    if (row.is_interval) break;  // further sums stay intervals
  }
  return rep;
}

DimensionEstimate box_dimension_estimate(const gen::MeasureSpec& spec,
                                         std::span<const int> levels, int window) {
  return box_dimension_scan([&spec](int m) { return gen::generate_set(spec, m); },
                            levels, window);
}

void to_json(nlohmann::json& j, const NFoldReport& r) {
  j = nlohmann::json{{"rows", nlohmann::json::array()},
                     {"first_interval_n", r.first_interval_n
                                              ? nlohmann::json(*r.first_interval_n)
                                              : nlohmann::json(nullptr)}};
  for (const auto& row : r.rows)
    j["rows"].push_back({{"n", row.n},
                         {"level", row.level},
                         {"cell_count", row.cell_count},
                         {"box_exponent", row.box_exponent},
                         {"is_interval", row.is_interval}});
}

std::string nfold_csv(const NFoldReport& r) {
  std::ostringstream os;
  os << "n,level,N_m,box_estimate,is_interval\n";
  for (const auto& row : r.rows)
    os << row.n << ',' << row.level << ',' << row.cell_count << ','
       << row.box_exponent << ',' << (row.is_interval ? 1 : 0) << '\n';
  return os.str();
}

}  // namespace lqdim::sums
