// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "lqdim/lqdim.hpp"

using namespace lqdim;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

struct Criterion {
  std::string name;
  std::vector<std::string> notes;
  bool ok = true;

  void expect(bool cond, const std::string& detail) {
    if (!cond) {
      ok = false;
      notes.push_back(detail);
    }
  }
};

void run(const std::string& name, const std::function<void(Criterion&)>& body) {
  Criterion c{name, {}, true};
  const auto t0 = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.notes.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  std::printf("[%s] %s (%.1fs)\n", c.ok ? "PASS" : "FAIL", name.c_str(), secs);
  for (const auto& note : c.notes) std::printf("       %s\n", note.c_str());
  std::fflush(stdout);
  if (!c.ok) ++g_failures;
}

DyadicMeasure fuzz_measure(std::mt19937_64& rng, int level, int max_atoms) {
  std::uniform_int_distribution<int> count(1, max_atoms);
  std::uniform_int_distribution<GridIndex> cell(0, (GridIndex{1} << level) - 1);
  std::uniform_real_distribution<double> mass(1e-6, 1.0);
  std::vector<std::pair<GridIndex, double>> atoms;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) atoms.emplace_back(cell(rng), mass(rng));
  return DyadicMeasure::from_atoms(level, std::move(atoms));
}

gen::MeasureSpec thirds() { return gen::MeasureSpec{gen::middle_thirds_spec()}; }

}  // namespace

int main() {
  run("C1 convexity: ||mu*nu||_q <= ||mu||_q on 500 fuzzed pairs", [](Criterion& c) {
    std::mt19937_64 rng(1001);
    for (int rep = 0; rep < 500; ++rep) {
      const int level = 5 + rep % 9;
      auto mu = fuzz_measure(rng, level, 160);
      auto nu = fuzz_measure(rng, level, 160);
      auto conv = convolve(mu, nu);
      for (double q : {1.5, 2.0, 4.0}) {
        const double lhs = lq_norm_log2(conv, q) / q;
        const double rhs = lq_norm_log2(mu, q) / q;
        c.expect(lhs <= rhs + 1e-12, "violation at rep " + std::to_string(rep) +
                                         " q=" + std::to_string(q));
      }
    }
  });

  run("C2 young bound: linf(mu*nu) <= ||mu||_2 ||nu||_2 on the same corpus",
      [](Criterion& c) {
        std::mt19937_64 rng(1001);
        for (int rep = 0; rep < 500; ++rep) {
          const int level = 5 + rep % 9;
          auto mu = fuzz_measure(rng, level, 160);
          auto nu = fuzz_measure(rng, level, 160);
          auto conv = convolve(mu, nu);
          const double lhs = std::log2(linf_norm(conv));
          const double rhs =
              lq_norm_log2(mu, 2.0) / 2.0 + lq_norm_log2(nu, 2.0) / 2.0;
          c.expect(lhs <= rhs + 1e-12, "violation at rep " + std::to_string(rep));
        }
      });

  run("C3 discretize-convolve comparability with C_q = 2^q on 200 pairs",
      [](Criterion& c) {
        std::mt19937_64 rng(1003);
        for (int rep = 0; rep < 200; ++rep) {
          const int m = 4 + rep % 13;  // m <= 16
          auto mu = fuzz_measure(rng, m + 6, 250);
          auto nu = fuzz_measure(rng, m + 6, 250);
          auto fine_first = discretize(convolve(mu, nu), m);
          auto coarse_first = convolve(discretize(mu, m), discretize(nu, m));
          for (double q : {1.5, 2.0, 4.0}) {
            const double a = lq_norm_log2(fine_first, q);
            const double b = lq_norm_log2(coarse_first, q);
            c.expect(a <= b + q + 1e-9 && b <= a + q + 1e-9,
                     "violation at rep " + std::to_string(rep));
          }
        }
      });

  run("C4 convolution equals the quadratic oracle on 100 instances",
      [](Criterion& c) {
        std::mt19937_64 rng(1004);
        for (int rep = 0; rep < 100; ++rep) {
          const int level = 6 + rep % 7;
          auto mu = fuzz_measure(rng, level, 1000);
          auto nu = fuzz_measure(rng, level, 1000);
          auto fast = convolve(mu, nu);
          // oracle: double loop into an ordered map, same (i, j) order
          std::map<GridIndex, double> acc;
          for (std::size_t i = 0; i < mu.size(); ++i)
            for (std::size_t j = 0; j < nu.size(); ++j)
              acc[mu.indices()[i] + nu.indices()[j]] +=
                  mu.masses()[i] * nu.masses()[j];
          bool same = fast.size() == acc.size();
          if (same) {
            std::size_t t = 0;
            for (const auto& [k, w] : acc) {
              if (fast.indices()[t] != k || fast.masses()[t] != w) {
                same = false;
                break;
              }
              ++t;
            }
          }
          c.expect(same, "mismatch at rep " + std::to_string(rep));
        }
      });

  run("C5 cantor-lebesgue exponent at m = 24 within 0.05 of log2/log3",
      [](Criterion& c) {
        const double target = std::log(2.0) / std::log(3.0);
        auto mu = gen::generate(thirds(), 24);
        for (double q : {1.5, 2.0, 4.0}) {
          const double e = normalized_exponent(mu, q);
          c.expect(std::abs(e - target) < 0.05,
                   "q=" + std::to_string(q) + " exponent " + std::to_string(e));
        }
      });

  run("C6 convolution improvement for the middle thirds at q = 2", [](Criterion& c) {
    for (int m = 16; m <= 24; ++m) {
      auto mu = gen::generate(thirds(), m);
      auto conv = convolve(mu, mu);
      const double gain = normalized_exponent(conv, 2.0) - normalized_exponent(mu, 2.0);
      c.expect(gain > 0.0, "no gain at m=" + std::to_string(m));
      if (m == 24)
        c.expect(gain >= 0.05, "gain at 24 only " + std::to_string(gain));
    }
  });

  run("C7 repeated self-convolution reaches 0.95 by n = 4 at level 20",
      [](Criterion& c) {
        auto mu = gen::generate(thirds(), 20);
        DyadicMeasure fold = mu;
        double prev = -1.0;
        for (int n = 1; n <= 4; ++n) {
          if (n > 1) fold = convolve(mu, fold, std::uint64_t{1} << 36);
          const double e = normalized_exponent(fold, 2.0);
          c.expect(e > prev, "not strictly increasing at n=" + std::to_string(n));
          if (n == 4) c.expect(e >= 0.95, "n=4 exponent " + std::to_string(e));
          prev = e;
        }
      });

  run("C8 sparse-digit stall: exponent f(m)/m exactly, improvement <= 0.02",
      [](Criterion& c) {
        const std::vector<long long> blocks{16, 96};
        const auto pattern = gen::digit_blocks_to_pattern(gen::DigitBlocksSpec{blocks});
        for (int m : {8, 16, 24, 32}) {
          auto mu = gen::generate_digit_blocks(blocks, m);
          const double f = static_cast<double>(gen::free_digit_count(pattern, m));
          const double e = normalized_exponent(mu, 2.0);
          c.expect(std::abs(e - f / m) < 1e-12,
                   "exponent at m=" + std::to_string(m) + " not f(m)/m");
        }
        // stall scale m = 2 n_1 = 32: a single free run of length 15
        auto mu = gen::generate_digit_blocks(blocks, 32);
        auto sq = convolve(mu, mu, std::uint64_t{1} << 35);
        const double gain =
            normalized_exponent(sq, 2.0) - normalized_exponent(mu, 2.0);
        c.expect(gain <= 0.02, "stall improvement " + std::to_string(gain));
        // analytic cross-check: the square of a uniform run is triangular
        const double n = std::ldexp(1.0, 15);
        const double tri = (2.0 * n * n + 1.0) / (3.0 * n * n * n);
        const double expected = (-std::log2(tri) - 15.0) / 32.0;
        c.expect(std::abs(gain - expected) < 1e-9,
                 "gain deviates from the triangular formula");
      });

  run("C9 constant formulas reproduce the reference values", [](Criterion& c) {
    c.expect(std::abs(reg::ahlfors_to_up_constants(1.0, 0.5, 1.0) - 9.0) < 1e-12,
             "ahlfors_to_up(1, 1/2, 1) != 9");
    c.expect(reg::ahlfors_porosity_k(1.0, 0.5) == 6, "porosity_k(1, 1/2) != 6");
    c.expect(reg::ahlfors_porosity_k(2.0, 0.5) == 10, "porosity_k(2, 1/2) != 10");
    c.expect(std::abs(sums::up_to_lowerdim(2.0) - 1.0 / 3.0) < 1e-12,
             "up_to_lowerdim(2) != 1/3");
    c.expect(std::abs(sums::up_to_thickness(2.0) - 0.5) < 1e-12,
             "up_to_thickness(2) != 1/2");
    c.expect(std::abs(sums::lowerdim_to_up(0.5, 0.5) - 16.0) < 1e-12,
             "lowerdim_to_up(1/2, 1/2) != 16");
  });

  run("C10 generated ahlfors examples pass the formula constants at level 20",
      [](Criterion& c) {
        for (double alpha : {0.4, 0.5, 0.63}) {
          const double C = gen::ahlfors_example_constant(alpha);
          auto mu = gen::generate_ahlfors_example(alpha, 20);
          for (double gamma : {0.5, 1.0}) {
            const double N = reg::ahlfors_to_up_constants(C, alpha, gamma);
            c.expect(reg::check_uniformly_perfect(mu, N, gamma).pass,
                     "uniform perfectness failed at alpha=" + std::to_string(alpha) +
                         " gamma=" + std::to_string(gamma));
          }
          const int k = reg::ahlfors_porosity_k(C, alpha);
          c.expect(k < 20, "porosity k out of range at alpha=" + std::to_string(alpha));
          c.expect(reg::check_dyadic_porosity(support_set(mu), k).pass,
                   "porosity failed at alpha=" + std::to_string(alpha));
        }
      });

  run("C11 discretization transfer (N,g) -> (2N+1,g) on 50 instances",
      [](Criterion& c) {
        std::mt19937_64 rng(424242);
        std::uniform_real_distribution<double> ratio(0.12, 0.42);
        for (int rep = 0; rep < 50; ++rep) {
          auto fine =
              gen::generate(gen::MeasureSpec{gen::central_cantor_spec(ratio(rng))}, 14);
          auto up = reg::fit_uniform_perfectness(fine, reg::default_up_N_grid(),
                                                 reg::default_up_gamma_grid());
          c.expect(up.has_value(), "no fit at rep " + std::to_string(rep));
          if (!up) continue;
          auto coarse = discretize(fine, 9);
          c.expect(
              reg::check_uniformly_perfect(coarse, 2 * up->first + 1, up->second).pass,
              "transfer failed at rep " + std::to_string(rep));
        }
      });

  run("C12 thickness: tau(thirds) = 1 exactly; interval inf; isolated 0",
      [](Criterion& c) {
        for (int lvl : {12, 15, 18}) {
          const int depth = gen::cantor_depth_for_level(1, 3, lvl);
          auto rep =
              sums::derive_thickness(gen::central_cantor_intervals(1, 3, depth), 1, lvl);
          c.expect(!rep.is_infinite && rep.tau == 1.0,
                   "thirds tau != 1 at level " + std::to_string(lvl));
        }
        auto interval = sums::derive_thickness(std::vector<gen::IntInterval>{{0, 100}});
        c.expect(interval.is_infinite, "interval tau not infinite");
        auto isolated =
            sums::derive_thickness(std::vector<gen::IntInterval>{{0, 0}, {5, 11}});
        c.expect(isolated.tau == 0.0, "isolated point tau != 0");
      });

  run("C13 thirds 2-fold sumset is an interval; astels([1,1]) sums to 1",
      [](Criterion& c) {
        auto s = gen::generate_set(thirds(), 16);
        c.expect(sums::interval_detect(sums::sumset(s, s)), "2-fold sum not an interval");
        auto astels = sums::astels_check(std::vector<double>{1.0, 1.0});
        c.expect(astels.sum == 1.0, "sum not exactly 1");
        c.expect(astels.pass, "criterion not passed");
      });

  run("C14 symmetric alpha = 1/2 example: stall bound and three-fold jump",
      [](Criterion& c) {
        const double alpha = 0.5;
        auto mu = gen::generate_symmetric_cantor(alpha, 20);
        auto two = convolve(mu, mu);
        auto three = convolve(mu, two);
        const double C = gen::ahlfors_example_constant(alpha);
        const double factor = std::pow(C, -3.0) * std::exp2(-2.0 * alpha);
        BallMassIndex balls(two);
        for (int i = 2; i <= 18; ++i) {
          const double mass = balls.ball_mass(0, std::ldexp(1.0, 20 - i));
          const double bound = factor * std::pow(std::ldexp(1.0, -i), alpha);
          c.expect(mass >= bound, "stall bound fails at radius 2^-" + std::to_string(i));
        }
        const double f2 = frostman_exponent(two);
        const double f3 = frostman_exponent(three);
        c.expect(f3 - f2 >= 0.03, "three-fold jump only " + std::to_string(f3 - f2));
      });

  run("C15 uniformize: uniform output and leaf retention on 200 fuzzed inputs",
      [](Criterion& c) {
        std::mt19937_64 rng(777);
        for (int rep = 0; rep < 200; ++rep) {
          const int D = 1 + static_cast<int>(rng() % 3);
          const int ell = 2 + static_cast<int>(rng() % 3);
          const int m = D * ell;  // up to 2^12 leaves
          std::uniform_int_distribution<GridIndex> cell(0, (GridIndex{1} << m) - 1);
          std::vector<GridIndex> pts;
          const int n = 1 + static_cast<int>(rng() % 512);
          for (int i = 0; i < n; ++i) pts.push_back(cell(rng));
          auto nu = uniform_on(DyadicSet::from_indices(m, pts));
          auto res = uni::uniformize(nu, D, ell, uni::UniformizeObjective::kCount);
          c.expect(uni::is_uniform(res.tree.leaves, D, ell).has_value(),
                   "output not uniform at rep " + std::to_string(rep));
          const double bound =
              std::pow(2.0 * (D + 1), -ell) * static_cast<double>(nu.size());
          c.expect(static_cast<double>(res.tree.leaves.size()) >= bound - 1e-9,
                   "retention below the bound at rep " + std::to_string(rep));
        }
      });

  run("C16 box exponents: sparse-digit plus thirds beats the sparse factor",
      [](Criterion& c) {
        const std::vector<long long> fact{1, 2, 6, 24};
        for (int m = 16; m <= 24; ++m) {
          auto f1 = support_set(gen::generate_digit_blocks(fact, m));
          auto f2 = gen::generate_set(thirds(), m);
          auto sum = sums::sumset(f1, f2);
          const double e1 = std::log2(static_cast<double>(f1.size())) / m;
          const double es = std::log2(static_cast<double>(sum.size())) / m;
          c.expect(es - e1 >= 0.02, "gap below 0.02 at m=" + std::to_string(m));
        }
      });

  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return 1;
}
