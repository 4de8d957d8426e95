#include "lqdim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lqdim/ball.hpp"
#include "lqdim/convolve.hpp"
#include "lqdim/generate.hpp"
#include "lqdim/norms.hpp"
#include "lqdim/regularity.hpp"
#include "lqdim/sumsets.hpp"
#include "lqdim/thickness.hpp"
#include "lqdim/uniformity.hpp"

namespace lqdim::cli {

namespace {

std::vector<int> default_levels(const std::string& experiment, int max_level) {
  std::vector<int> out;
  const int hi = experiment == "repeated" ? std::min(20, max_level)
                                          : std::min(24, max_level);
  for (int m = 12; m <= hi; ++m) out.push_back(m);
  return out;
}

int top_level(const ExperimentConfig& cfg) { return cfg.levels.back(); }

// Probe level for precondition fits; fits sweep every atom, so cap the cost.
int probe_level(const ExperimentConfig& cfg) {
  return std::min(top_level(cfg), 16);
}

RunResult precondition_unmet(const ExperimentConfig& cfg, const std::string& why) {
  RunResult out;
  out.code = ExitCode::kPreconditionUnmet;
  out.report = {{"experiment", cfg.experiment},
                {"status", "precondition-unmet"},
                {"reason", why}};
  return out;
}

nlohmann::json config_echo(const ExperimentConfig& cfg) {
  nlohmann::json specs = nlohmann::json::array();
  for (const auto& s : cfg.measures) specs.push_back(gen::spec_to_json(s));
  return {{"experiment", cfg.experiment}, {"measures", specs},
          {"q", cfg.qs},           {"levels", cfg.levels},
          {"eta", cfg.eta},        {"sigma", cfg.sigma},
          {"p", cfg.p},            {"delta", cfg.delta},
          {"n_max", cfg.n_max},    {"D", cfg.D},
          {"seed", cfg.seed},      {"max_work", cfg.max_work}};
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.experiment = j.at("experiment").get<std::string>();
  std::transform(cfg.experiment.begin(), cfg.experiment.end(),
                 cfg.experiment.begin(), [](unsigned char c) { return std::tolower(c); });
  if (j.contains("measures"))
    for (const auto& s : j.at("measures"))
      cfg.measures.push_back(gen::spec_from_json(s));
  if (j.contains("mu")) cfg.measures.insert(cfg.measures.begin(), gen::spec_from_json(j.at("mu")));
  if (j.contains("nu")) cfg.measures.push_back(gen::spec_from_json(j.at("nu")));
  if (j.contains("q")) {
    if (j.at("q").is_array())
      cfg.qs = j.at("q").get<std::vector<double>>();
    else
      cfg.qs = {j.at("q").get<double>()};
  }
  cfg.max_level = j.value("max_level", 26);
  if (j.contains("levels")) {
    if (j.at("levels").is_array()) {
      cfg.levels = j.at("levels").get<std::vector<int>>();
    } else {
      const int from = j.at("levels").at("from").get<int>();
      const int to = j.at("levels").at("to").get<int>();
      for (int m = from; m <= to; ++m) cfg.levels.push_back(m);
    }
  } else {
    cfg.levels = default_levels(cfg.experiment, cfg.max_level);
  }
  cfg.eta = j.value("eta", cfg.eta);
  cfg.sigma = j.value("sigma", cfg.sigma);
  cfg.p = j.value("p", cfg.p);
  cfg.a = j.value("a", cfg.a);
  if (j.contains("check_N") && j.contains("check_gamma"))
    cfg.check_up = std::make_pair(j.at("check_N").get<double>(),
                                  j.at("check_gamma").get<double>());
  cfg.delta = j.value("delta", cfg.delta);
  cfg.n_max = j.value("n_max", cfg.n_max);
  cfg.D = j.value("D", cfg.D);
  cfg.ell = j.value("ell", cfg.ell);
  cfg.objective = j.value("objective", cfg.objective);
  cfg.max_work = j.value("max_work", cfg.max_work);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.out_dir = j.value("out", cfg.out_dir);

  if (cfg.experiment.empty() || cfg.levels.empty())
    throw SpecError("config", "experiment tag and levels are required");
  for (double q : cfg.qs)
    if (!(q > 1.0)) throw SpecError("config", "q entries must exceed 1");
  for (std::size_t i = 0; i < cfg.levels.size(); ++i) {
    if (cfg.levels[i] < 1 || cfg.levels[i] > cfg.max_level)
      throw SpecError("config", "levels must lie in [1, max_level]");
    if (i > 0 && cfg.levels[i] <= cfg.levels[i - 1])
      throw SpecError("config", "levels must be strictly increasing");
  }
  for (auto& s : cfg.measures) {
    gen::validate_spec(s);
    // standing reduction: affine systems are conjugated onto [0, 1]
    if (auto* ifs = std::get_if<gen::IfsSpec>(&s)) *ifs = gen::normalized(*ifs);
  }
  return cfg;
}

RunResult run_improvement(const ExperimentConfig& cfg) {
  if (cfg.measures.empty()) throw SpecError("config", "improvement needs mu (and nu)");
  const gen::MeasureSpec& mu_spec = cfg.measures[0];
  const gen::MeasureSpec& nu_spec =
      cfg.measures.size() > 1 ? cfg.measures[1] : cfg.measures[0];

  // nu must be uniformly perfect at the probe level; Diracs, other
  // degenerate supports and diameters below `a` are rejected before any
  // convolution runs
  std::optional<std::pair<double, double>> up;
  try {
    const DyadicMeasure nu_probe = gen::generate(nu_spec, probe_level(cfg));
    if (nu_probe.support_diameter() < cfg.a)
      return precondition_unmet(cfg, "nu support diameter below the configured floor a");
    up = reg::fit_uniform_perfectness(nu_probe, reg::default_up_N_grid(),
                                      reg::default_up_gamma_grid());
  } catch (const DegenerateSupportError& e) {
    return precondition_unmet(cfg, std::string("nu degenerate: ") + e.what());
  }
  if (!up)
    return precondition_unmet(cfg, "nu failed uniform perfectness fitting");

  const DyadicMeasure mu_top = gen::generate(mu_spec, top_level(cfg));
  const double top_exponent = normalized_exponent(mu_top, cfg.qs.front());
  if (top_exponent > 1.0 - cfg.eta)
    return precondition_unmet(cfg, "eta-precondition unmet: exponent " +
                                       std::to_string(top_exponent) +
                                       " exceeds 1 - eta");

  RunResult out;
  out.report = {{"config", config_echo(cfg)},
                {"nu_uniform_perfect", {{"N", up->first}, {"gamma", up->second}}},
                {"per_q", nlohmann::json::array()}};
  std::vector<nlohmann::json> rows_per_q(cfg.qs.size(), nlohmann::json::array());
  for (int m : cfg.levels) {
    const DyadicMeasure mu = gen::generate(mu_spec, m);
    const DyadicMeasure nu = gen::generate(nu_spec, m);
    const DyadicMeasure conv = convolve(mu, nu, cfg.max_work);
    for (std::size_t t = 0; t < cfg.qs.size(); ++t) {
      const double q = cfg.qs[t];
      const double e_mu = normalized_exponent(mu, q);
      const double e_nu = normalized_exponent(nu, q);
      const double e_conv = normalized_exponent(conv, q);
      const double gain = e_conv - e_mu;
      rows_per_q[t].push_back({{"m", m},
                               {"exponent_mu", e_mu},
                               {"exponent_nu", e_nu},
                               {"exponent_conv", e_conv},
                               {"improvement", gain}});
      out.table.push_back({cfg.experiment, std::nullopt, m, q, e_conv, gain});
    }
  }
  for (std::size_t t = 0; t < cfg.qs.size(); ++t)
    out.report["per_q"].push_back({{"q", cfg.qs[t]}, {"rows", std::move(rows_per_q[t])}});
  return out;
}

RunResult run_repeated(const ExperimentConfig& cfg) {
  if (cfg.measures.empty()) throw SpecError("config", "repeated needs measures");
  const int m = top_level(cfg);
  auto spec_at = [&](int n) -> const gen::MeasureSpec& {
    return cfg.measures[std::min<std::size_t>(static_cast<std::size_t>(n - 1),
                                              cfg.measures.size() - 1)];
  };
  for (std::size_t i = 0; i < cfg.measures.size(); ++i) {
    try {
      const DyadicMeasure probe = gen::generate(cfg.measures[i], probe_level(cfg));
      if (probe.support_diameter() < cfg.a)
        return precondition_unmet(cfg, "factor " + std::to_string(i) +
                                           " support diameter below the floor a");
      if (!reg::fit_uniform_perfectness(probe, reg::default_up_N_grid(),
                                        reg::default_up_gamma_grid()))
        return precondition_unmet(cfg, "factor " + std::to_string(i) +
                                           " failed uniform perfectness fitting");
    } catch (const DegenerateSupportError& e) {
      return precondition_unmet(cfg, std::string("factor degenerate: ") + e.what());
    }
  }

  RunResult out;
  out.report = {{"config", config_echo(cfg)}, {"per_q", nlohmann::json::array()}};
  std::vector<DyadicMeasure> folds;  // folds[n-1] = nu_1 * ... * nu_n
  folds.push_back(gen::generate(spec_at(1), m));
  for (int n = 2; n <= cfg.n_max; ++n)
    folds.push_back(convolve(gen::generate(spec_at(n), m), folds.back(), cfg.max_work));

  for (double q : cfg.qs) {
    nlohmann::json rows = nlohmann::json::array();
    bool monotone = true;
    double prev = -1.0;
    for (int n = 1; n <= cfg.n_max; ++n) {
      const DyadicMeasure& fold = folds[static_cast<std::size_t>(n - 1)];
      const double e = normalized_exponent(fold, q);
      // Young pathway: a Frostman floor from the L2 norms of the two halves
      const double linf_proxy = -std::log2(linf_norm(fold)) / static_cast<double>(m);
      if (n > 1 && e < prev - 1e-6) monotone = false;
      rows.push_back({{"n", n},
                      {"exponent", e},
                      {"linf_exponent_proxy", linf_proxy}});
      out.table.push_back(
          {cfg.experiment, n, m, q, e,
           n > 1 ? std::optional<double>(e - prev) : std::nullopt});
      prev = e;
    }
    out.report["per_q"].push_back(
        {{"q", q}, {"rows", std::move(rows)}, {"monotone_nondecreasing", monotone}});
  }
  return out;
}

RunResult run_porous_dual(const ExperimentConfig& cfg) {
  if (cfg.measures.size() < 2)
    throw SpecError("config", "porous_dual needs mu and nu");
  const gen::MeasureSpec& mu_spec = cfg.measures[0];
  const gen::MeasureSpec& nu_spec = cfg.measures[1];
  const int m = top_level(cfg);

  const DyadicMeasure mu_probe = gen::generate(mu_spec, probe_level(cfg));
  const auto k = reg::fit_porosity_k(support_set(mu_probe), probe_level(cfg) - 1);
  if (!k)
    return precondition_unmet(cfg, "mu support failed dyadic porosity fitting");

  const DyadicMeasure nu_top = gen::generate(nu_spec, m);
  const double nu_exponent = normalized_exponent(nu_top, cfg.p);
  if (nu_exponent < cfg.sigma)
    return precondition_unmet(cfg, "nu L^p exponent " + std::to_string(nu_exponent) +
                                       " below sigma (norm too close to maximal)");

  RunResult out;
  out.report = {{"config", config_echo(cfg)},
                {"mu_porosity_k", *k},
                {"nu_lp_exponent", nu_exponent},
                {"per_q", nlohmann::json::array()}};
  std::vector<nlohmann::json> rows_per_q(cfg.qs.size(), nlohmann::json::array());
  for (int level : cfg.levels) {
    const DyadicMeasure mu = gen::generate(mu_spec, level);
    const DyadicMeasure nu = gen::generate(nu_spec, level);
    const DyadicMeasure conv = convolve(mu, nu, cfg.max_work);
    for (std::size_t t = 0; t < cfg.qs.size(); ++t) {
      const double q = cfg.qs[t];
      const double e_mu = normalized_exponent(mu, q);
      const double e_conv = normalized_exponent(conv, q);
      rows_per_q[t].push_back({{"m", level},
                               {"exponent_mu", e_mu},
                               {"exponent_conv", e_conv},
                               {"improvement", e_conv - e_mu}});
      out.table.push_back(
          {cfg.experiment, std::nullopt, level, q, e_conv, e_conv - e_mu});
    }
  }
  for (std::size_t t = 0; t < cfg.qs.size(); ++t)
    out.report["per_q"].push_back({{"q", cfg.qs[t]}, {"rows", std::move(rows_per_q[t])}});
  return out;
}

RunResult run_infty_jump(const ExperimentConfig& cfg) {
  if (cfg.measures.empty()) throw SpecError("config", "infty_jump needs a measure");
  const auto* sym = std::get_if<gen::SymmetricCantorSpec>(&cfg.measures[0]);
  if (!sym)
    return precondition_unmet(cfg, "infty_jump requires a symmetric_cantor spec");
  const double alpha = sym->alpha;
  const int m = top_level(cfg);

  const DyadicMeasure mu = gen::generate(cfg.measures[0], m);
  // symmetry about the half-cell: atom k pairs with atom -k-1
  {
    const auto idx = mu.indices();
    const auto ws = mu.masses();
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const GridIndex partner = -idx[i] - 1;
      const auto it = std::lower_bound(idx.begin(), idx.end(), partner);
      if (it == idx.end() || *it != partner ||
          std::abs(ws[static_cast<std::size_t>(it - idx.begin())] - ws[i]) > 1e-12)
        return precondition_unmet(cfg, "support is not symmetric around 0");
    }
  }

  const DyadicMeasure two = convolve(mu, mu, cfg.max_work);
  const DyadicMeasure three = convolve(mu, two, cfg.max_work);
  const double f1 = frostman_exponent(mu);
  const double f2 = frostman_exponent(two);
  const double f3 = frostman_exponent(three);

  // stall bound at the origin: (mu*mu)(B(0,r)) >= C^-3 2^-2a r^a
  const double C = gen::ahlfors_example_constant(alpha);
  const double bound_factor = std::pow(C, -3.0) * std::exp2(-2.0 * alpha);
  BallMassIndex balls(two);
  nlohmann::json stall = nlohmann::json::array();
  bool stall_ok = true;
  for (int i = 2; i <= m - 2; ++i) {
    const double r = std::ldexp(1.0, -i);
    const double mass = balls.ball_mass(0, std::ldexp(1.0, m - i));
    const double bound = bound_factor * std::pow(r, alpha);
    const bool ok = mass >= bound;
    stall_ok = stall_ok && ok;
    stall.push_back({{"radius_exp", i}, {"mass", mass}, {"bound", bound}, {"ok", ok}});
  }

  RunResult out;
  out.report = {{"config", config_echo(cfg)},
                {"alpha", alpha},
                {"ahlfors_constant", C},
                {"frostman", {{"one_fold", f1}, {"two_fold", f2}, {"three_fold", f3}}},
                {"two_fold_stall", f2 - alpha},
                {"three_fold_jump", f3 - f2},
                {"stall_bound_ok", stall_ok},
                {"stall_sweep", std::move(stall)}};
  out.table.push_back({cfg.experiment, 1, m, std::nullopt, f1, std::nullopt});
  out.table.push_back({cfg.experiment, 2, m, std::nullopt, f2, f2 - f1});
  out.table.push_back({cfg.experiment, 3, m, std::nullopt, f3, f3 - f2});
  return out;
}

RunResult run_regularity(const ExperimentConfig& cfg) {
  if (cfg.measures.empty()) throw SpecError("config", "regularity needs a measure");
  const int m = top_level(cfg);
  const DyadicMeasure mu = gen::generate(cfg.measures[0], m);
  const reg::RegularityReport report = reg::build_regularity_report(mu, cfg.check_up);
  const sums::ThicknessReport thick = sums::derive_thickness(support_set(mu));

  RunResult out;
  nlohmann::json jr, jt;
  reg::to_json(jr, report);
  sums::to_json(jt, thick);
  out.report = {{"config", config_echo(cfg)},
                {"level", m},
                {"regularity", std::move(jr)},
                {"thickness", std::move(jt)}};
  if (report.ahlfors)
    out.table.push_back({cfg.experiment, std::nullopt, m, std::nullopt,
                         report.ahlfors->alpha, std::nullopt});
  return out;
}

RunResult run_sumset(const ExperimentConfig& cfg) {
  if (cfg.measures.empty()) throw SpecError("config", "sumset needs a set spec");
  const int m = top_level(cfg);
  const DyadicSet base = gen::generate_set(cfg.measures[0], m);
  const sums::NFoldReport rep =
      sums::nfold_sumset_experiment(base, cfg.n_max, sums::SumsetPadding::kNeighbor,
                                    cfg.max_work);
  RunResult out;
  nlohmann::json jr;
  sums::to_json(jr, rep);
  out.report = {{"config", config_echo(cfg)}, {"nfold", std::move(jr)}};
  out.extra_files.emplace_back("nfold.csv", sums::nfold_csv(rep));
  for (const auto& row : rep.rows)
    out.table.push_back({cfg.experiment, row.n, row.level, std::nullopt,
                         row.box_exponent, std::nullopt});
  return out;
}

RunResult run_uniformize(const ExperimentConfig& cfg) {
  if (cfg.measures.empty()) throw SpecError("config", "uniformize needs a measure");
  const int m = top_level(cfg);
  if (cfg.D < 1 || m % cfg.D != 0)
    throw SpecError("config", "level must be a multiple of D");
  const int ell = cfg.ell > 0 ? cfg.ell : m / cfg.D;
  if (ell * cfg.D != m) throw SpecError("config", "ell * D must equal the level");
  const DyadicMeasure mu = gen::generate(cfg.measures[0], m);
  const auto objective = cfg.objective == "lq_norm"
                             ? uni::UniformizeObjective::kLqNorm
                             : uni::UniformizeObjective::kCount;
  const double q = cfg.qs.front();
  const uni::UniformizeResult res = uni::uniformize(mu, cfg.D, ell, objective, q,
                                                    cfg.delta);
  const auto bracket = uni::branching_scale_set(res.tree, cfg.delta, q,
                                                lq_norm_log2(mu, q),
                                                lq_norm_log2(mu, q));
  RunResult out;
  nlohmann::json jt;
  uni::to_json(jt, res.tree);
  out.report = {{"config", config_echo(cfg)},
                {"tree", std::move(jt)},
                {"leaf_retention", res.leaf_retention},
                {"retained_mass", res.retained_mass},
                {"scale_set",
                 {{"S", bracket.S},
                  {"D_times_S", bracket.D_times_S},
                  {"lower", bracket.lower},
                  {"upper", bracket.upper},
                  {"holds", bracket.holds}}}};
  out.table.push_back({cfg.experiment, std::nullopt, m, q, res.leaf_retention,
                       std::nullopt});
  return out;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment == "improvement") return run_improvement(cfg);
  if (cfg.experiment == "repeated") return run_repeated(cfg);
  if (cfg.experiment == "porous_dual") return run_porous_dual(cfg);
  if (cfg.experiment == "infty_jump") return run_infty_jump(cfg);
  if (cfg.experiment == "regularity") return run_regularity(cfg);
  if (cfg.experiment == "sumset") return run_sumset(cfg);
  if (cfg.experiment == "uniformize") return run_uniformize(cfg);
  throw SpecError("config", "unknown experiment '" + cfg.experiment + "'");
}

std::string csv_table(const std::vector<CsvRow>& rows) {
  std::ostringstream os;
  os << "experiment,n,m,q,exponent,improvement\n";
  auto cell = [&os](const auto& v) {
    if (v) os << *v;
  };
  for (const auto& r : rows) {
    os << r.experiment << ',';
    cell(r.n);
    os << ',';
    cell(r.m);
    os << ',';
    cell(r.q);
    os << ',';
    cell(r.exponent);
    os << ',';
    cell(r.improvement);
    os << '\n';
  }
  return os.str();
}

namespace {

void write_atomic(const std::filesystem::path& path, const std::string& body) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << body;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

void write_outputs(const RunResult& result, const std::string& out_dir) {
  const std::filesystem::path dir = out_dir.empty() ? "." : out_dir;
  std::filesystem::create_directories(dir);
  write_atomic(dir / "report.json", result.report.dump(2) + "\n");
  write_atomic(dir / "table.csv", csv_table(result.table));
  for (const auto& [name, body] : result.extra_files) write_atomic(dir / name, body);
}

}  // namespace lqdim::cli
