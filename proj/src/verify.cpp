#include "shoga/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "shoga/game.hpp"
#include "shoga/game_maps.hpp"
#include "shoga/hodge.hpp"
#include "shoga/parallel.hpp"
#include "shoga/subset_transforms.hpp"
#include "shoga/values.hpp"

namespace shoga {

namespace {

double unit(std::mt19937_64& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

// Nonnegative Harsanyi dividends make the game convex, hence superadditive
// and cohesive.
TuGame random_superadditive_game(int n, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::vector<double> dividends(std::size_t{1} << n, 0.0);
  for (std::uint32_t s = 1; s < dividends.size(); ++s) dividends[s] = unit(eng);
  subset_sum_in_place(dividends, n);
  return TuGame(n, std::move(dividends));
}

// u(A) = u(N∖A) with u(N) = 0: a kernel member of the associated-game map.
TuGame random_kernel_game(int n, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  const std::uint32_t full = (1u << n) - 1;
  std::vector<double> w(std::size_t{1} << n, 0.0);
  for (std::uint32_t s = 1; s < full; ++s) {
    const std::uint32_t comp = full ^ s;
    if (s > comp) continue;
    const double v = 2.0 * unit(eng) - 1.0;
    w[s] = v;
    w[comp] = v;
  }
  return TuGame(n, std::move(w));
}

std::vector<TuGame> random_suite(int n, int count, std::uint64_t seed) {
  std::vector<TuGame> suite;
  suite.reserve(count);
  for (int i = 0; i < count; ++i)
    suite.push_back(random_game(n, seed + 1000003ull * i));
  return suite;
}

void track(double& worst, double residual) { worst = std::max(worst, residual); }

ClaimResult run_claim(const std::string& name, const std::string& detail,
                      const std::function<bool(double&)>& body) {
  ClaimResult result{name, false, 0.0, detail};
  try {
    result.pass = body(result.max_residual);
  } catch (const std::exception& e) {
    result.pass = false;
    result.detail = std::string("error: ") + e.what();
  }
  return result;
}

bool match_table(const TuGame& got, const std::vector<double>& expected, double& worst) {
  bool ok = true;
  for (std::uint32_t s = 0; s < got.table_size(); ++s) {
    track(worst, std::abs(got.worth(s) - expected[s]));
    if (got.worth(s) != expected[s]) ok = false;
  }
  return ok;
}

}  // namespace

std::vector<ClaimResult> verify_paper(const VerifyOptions& options) {
  const int max_n = std::clamp(options.max_n, 2, 8);
  const std::uint64_t seed = options.seed;
  std::vector<ClaimResult> results;

  results.push_back(run_claim("example-1-glove-table", "n=3, exact", [&](double& worst) {
    const TuGame c = shoga_game(glove_game());
    std::vector<double> expected(8, 0.0);
    expected[Coalition::of({1}).mask()] = 0.5;
    expected[Coalition::of({2, 3}).mask()] = 0.5;
    expected[Coalition::of({1, 2}).mask()] = 1.0;
    expected[Coalition::of({1, 3}).mask()] = 1.0;
    expected[Coalition::of({1, 2, 3}).mask()] = 1.0;
    return match_table(c, expected, worst);
  }));

  results.push_back(run_claim(
      "example-2-bankruptcy-table", "E=200, c=(100,200,300); superadditivity flips",
      [&](double& worst) {
        const TuGame u = bankruptcy_game(200.0, std::vector<double>{100.0, 200.0, 300.0});
        const TuGame c = shoga_game(u);
        std::vector<double> expected(8, 100.0);
        expected[0] = 0.0;
        expected[Coalition::of({1}).mask()] = 50.0;
        expected[Coalition::of({2, 3}).mask()] = 150.0;
        expected[Coalition::of({1, 2, 3}).mask()] = 200.0;
        return match_table(c, expected, worst) && is_superadditive(u) && !is_superadditive(c);
      }));

  results.push_back(run_claim(
      "example-3-airport-table", "costs=(12,28,28,30); both superadditive", [&](double& worst) {
        const TuGame u = airport_game(std::vector<double>{12.0, 28.0, 28.0, 30.0});
        const TuGame c = shoga_game(u);
        const std::uint32_t four = Coalition::of({4}).mask();
        const std::uint32_t two_three = Coalition::of({2, 3}).mask();
        std::vector<double> expected(16, -16.0);
        expected[0] = 0.0;
        expected[Coalition::of({1}).mask()] = -6.0;
        expected[Coalition::of({2, 3, 4}).mask()] = -24.0;
        expected[Coalition::of({1, 2, 3, 4}).mask()] = -30.0;
        for (std::uint32_t s = 1; s < 16; ++s)
          if ((s & two_three) != 0 && (s & four) == 0) expected[s] = -14.0;
        return match_table(c, expected, worst) && is_superadditive(u) && is_superadditive(c);
      }));

  const GameMap shoga_map = make_game_map("shoga");
  const GameMap shoga_scaled_map = make_game_map("shoga-scaled");

  results.push_back(run_claim(
      "axioms-shoga", "AvEFF NLL BLT CS LIN on random+basis suites, n=2.." + std::to_string(max_n),
      [&](double& worst) {
        bool ok = true;
        for (int n = 2; n <= max_n; ++n) {
          std::vector<TuGame> suite = random_suite(n, 40, seed + n);
          for (int p = 1; p <= n; ++p)
            suite.push_back(unanimity_game(n, Coalition::single(p)));
          suite.push_back(unanimity_game(n, Coalition::full(n)));
          for (Axiom ax : {Axiom::kAvEff, Axiom::kNll, Axiom::kBlt, Axiom::kCs, Axiom::kLin}) {
            const AxiomReport report = check_axiom(shoga_map, ax, suite);
            track(worst, report.max_residual);
            ok = ok && report.pass;
          }
        }
        return ok;
      }));

  results.push_back(run_claim(
      "axioms-shoga-scaled", "EFF NLL BLT CS LIN on random suites, n=2.." + std::to_string(max_n),
      [&](double& worst) {
        bool ok = true;
        for (int n = 2; n <= max_n; ++n) {
          const std::vector<TuGame> suite = random_suite(n, 40, seed + 100 + n);
          for (Axiom ax : {Axiom::kEff, Axiom::kNll, Axiom::kBlt, Axiom::kCs, Axiom::kLin}) {
            const AxiomReport report = check_axiom(shoga_scaled_map, ax, suite);
            track(worst, report.max_residual);
            ok = ok && report.pass;
          }
        }
        return ok;
      }));

  results.push_back(run_claim(
      "dual-breaks-constant-sum", "CS counterexample on the glove game", [&](double& worst) {
        const std::vector<TuGame> suite{glove_game()};
        const AxiomReport report = check_axiom(make_game_map("dual"), Axiom::kCs, suite);
        track(worst, report.max_residual);
        if (report.pass || !report.witness) return false;
        // the witness must re-evaluate to a violation
        const TuGame image = dual(report.witness->game);
        const std::uint32_t s = report.witness->coalition.mask();
        const std::uint32_t full = image.grand().mask();
        return std::abs(image.worth(s) + image.worth(full ^ s) - image.grand_worth()) > kSolverTol;
      }));

  results.push_back(run_claim("uniqueness-basis-cases",
                              "images of unanimity games take values in {0, 1/2, 1}, exact, n<=" +
                                  std::to_string(max_n),
                              [&](double& worst) {
                                bool ok = true;
                                for (int n = 1; n <= max_n; ++n) {
                                  const BasisCheckReport report = verify_uniqueness_on_basis(n);
                                  track(worst, report.failures == 0 ? 0.0 : 1.0);
                                  ok = ok && report.pass();
                                }
                                return ok;
                              }));

  results.push_back(run_claim(
      "value-consistency", "shapley/banzhaf invariant under the map, 30 games per n",
      [&](double& worst) {
        bool ok = true;
        for (int n = 2; n <= max_n; ++n) {
          const std::vector<TuGame> suite = random_suite(n, 30, seed + 200 + n);
          for (const char* value : {"shapley", "banzhaf"}) {
            const ConsistencyReport report = associated_consistency_check(value, shoga_map, suite);
            track(worst, report.max_residual);
            ok = ok && report.pass;
          }
        }
        return ok;
      }));

  results.push_back(run_claim(
      "generalized-value-identity", "half weights on {empty, complement} reproduce the map",
      [&](double& worst) {
        for (int n = 2; n <= max_n; ++n) {
          const GeneralizedWeights q = GeneralizedWeights::shoga_weights(n);
          for (const TuGame& u : random_suite(n, 10, seed + 300 + n)) {
            const std::vector<double> psi = generalized_value(q, u);
            const TuGame c = shoga_game(u);
            for (std::uint32_t s = 1; s < u.table_size(); ++s)
              track(worst, std::abs(psi[s] - c.worth(s)));
          }
        }
        return worst <= kExactTol;
      }));

  results.push_back(run_claim(
      "group-rationality", "cohesive games: coalition value dominates the worth",
      [&](double& worst) {
        for (int n = 2; n <= max_n; ++n) {
          const GeneralizedWeights q = GeneralizedWeights::shoga_weights(n);
          for (int i = 0; i < 10; ++i) {
            const TuGame u = random_superadditive_game(n, seed + 400 + 31 * n + i);
            const std::vector<double> psi = generalized_value(q, u);
            for (std::uint32_t s = 1; s < u.table_size(); ++s)
              track(worst, std::max(0.0, u.worth(s) - psi[s]));
          }
        }
        return worst <= kExactTol;
      }));

  results.push_back(run_claim(
      "kernel-characterization", "complement-symmetric games map to zero", [&](double& worst) {
        bool ok = true;
        for (int n = 2; n <= max_n; ++n) {
          for (int i = 0; i < 10; ++i) {
            const TuGame u = random_kernel_game(n, seed + 500 + 31 * n + i);
            ok = ok && kernel_membership(u);
            const TuGame c = shoga_game(u);
            for (std::uint32_t s = 0; s < u.table_size(); ++s) track(worst, std::abs(c.worth(s)));
          }
          ok = ok && !kernel_membership(glove_game());
        }
        return ok && worst <= kExactTol;
      }));

  results.push_back(run_claim(
      "quotient-link", "two-block quotient Shapley equals the associated worths",
      [&](double& worst) {
        for (int n = 2; n <= max_n; ++n) {
          for (const TuGame& u : random_suite(n, 10, seed + 600 + n)) {
            const TuGame c = shoga_game(u);
            const std::uint32_t full = u.grand().mask();
            for (std::uint32_t s = 1; s < full; ++s) {
              const auto [first, second] = shoga_via_quotient(u, Coalition(s));
              track(worst, std::abs(first - c.worth(s)));
              track(worst, std::abs(second - c.worth(full ^ s)));
              track(worst, std::abs(first + second - u.grand_worth()));
            }
          }
        }
        return worst <= kExactTol;
      }));

  results.push_back(run_claim(
      "mobius-synergy-inverse", "dividend and synergy transforms invert each other",
      [&](double& worst) {
        for (int n = 2; n <= max_n; ++n) {
          for (const TuGame& u : random_suite(n, 10, seed + 700 + n)) {
            const TuGame round1 = synergy(mobius(u));
            const TuGame round2 = mobius(synergy(u));
            for (std::uint32_t s = 0; s < u.table_size(); ++s) {
              track(worst, std::abs(round1.worth(s) - u.worth(s)));
              track(worst, std::abs(round2.worth(s) - u.worth(s)));
            }
          }
        }
        return worst <= 1e-10;
      }));

  results.push_back(run_claim(
      "potential-differential-shapley", "potential differences reproduce the Shapley value",
      [&](double& worst) {
        for (int n = 2; n <= max_n; ++n) {
          for (const TuGame& u : random_suite(n, 10, seed + 800 + n)) {
            const TuGame rho = potential_map(u);
            const PayoffVector phi = shapley_value(u);
            const std::uint32_t full = u.grand().mask();
            for (int i = 0; i < n; ++i)
              track(worst,
                    std::abs(rho.worth(full) - rho.worth(full ^ (1u << i)) - phi[i]));
          }
        }
        return worst <= 1e-10;
      }));

  results.push_back(run_claim(
      "theorem-3-component-games", "decomposition sum, nullity, equivariance, linearity",
      [&](double& worst) {
        const int top = std::min(max_n, 6);
        bool ok = true;
        for (int n = 2; n <= top; ++n) {
          std::mt19937_64 eng(seed + 900 + n);
          const TuGame u = random_game(n, seed + 900 + n);
          const TuGame v = random_game(n, seed + 901 + n);
          std::vector<int> ks{1, 2, n};
          ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
          for (int k : ks) {
            if (k > n || k < 1) continue;
            // (a) the component games sum back to u
            std::vector<double> total(u.table_size(), 0.0);
            for (std::uint32_t s = 1; s < u.table_size(); ++s) {
              if (std::popcount(s) > k) continue;
              const TuGame part = component_game(u, Coalition(s), k);
              for (std::uint32_t t = 0; t < total.size(); ++t) total[t] += part.worth(t);
            }
            double sum_dev = 0.0;
            for (std::uint32_t t = 0; t < total.size(); ++t)
              sum_dev = std::max(sum_dev, std::abs(total[t] - u.worth(t)));
            track(worst, sum_dev);
            ok = ok && sum_dev < 1e-7;

            // (d) linearity in the game
            const double a = 2.0 * unit(eng) - 1.0;
            const double b = 2.0 * unit(eng) - 1.0;
            const Coalition s_lin = Coalition(1u + (k > 1 ? 2u : 0u));
            const TuGame lhs = component_game(linear_combination(a, u, b, v), s_lin, k);
            const TuGame part_u = component_game(u, s_lin, k);
            const TuGame part_v = component_game(v, s_lin, k);
            double lin_dev = 0.0;
            for (std::uint32_t t = 0; t < u.table_size(); ++t)
              lin_dev = std::max(lin_dev,
                                 std::abs(lhs.worth(t) - a * part_u.worth(t) - b * part_v.worth(t)));
            track(worst, lin_dev);
            ok = ok && lin_dev < 1e-8;
          }

          // (b) a null coalition yields the zero component game
          if (n >= 3) {
            const TuGame theta = unanimity_game(n, Coalition::of({1, 2}));
            const TuGame null_part = component_game(theta, Coalition::single(n), n);
            double null_dev = 0.0;
            for (std::uint32_t t = 0; t < theta.table_size(); ++t)
              null_dev = std::max(null_dev, std::abs(null_part.worth(t)));
            track(worst, null_dev);
            ok = ok && null_dev < 1e-9;
          }

          // (c) equivariance under player permutations
          std::vector<int> sigma(n);
          for (int i = 0; i < n; ++i) sigma[i] = i + 1;
          std::shuffle(sigma.begin(), sigma.end(), eng);
          const Coalition s_eq = Coalition(n >= 2 ? 3u : 1u);
          const int k_eq = std::min(n, 2);
          const TuGame pulled = TuGame(n, permutation_pullback(sigma, u.table()));
          const TuGame lhs = component_game(pulled, s_eq, k_eq);
          const TuGame rhs_part = component_game(u, permute_coalition(sigma, s_eq), k_eq);
          const VertexFunction rhs = permutation_pullback(sigma, rhs_part.table());
          double eq_dev = 0.0;
          for (std::uint32_t t = 0; t < u.table_size(); ++t)
            eq_dev = std::max(eq_dev, std::abs(lhs.worth(t) - rhs[t]));
          track(worst, eq_dev);
          ok = ok && eq_dev < 1e-7;
        }
        return ok;
      }));

  results.push_back(run_claim(
      "theorem-4-shoga-bridge", "full-graph Poisson solutions at N equal the scaled map",
      [&](double& worst) {
        bool ok = true;
        for (int n = 2; n <= max_n; ++n) {
          std::vector<TuGame> battery = random_suite(n, 5, seed + 1100 + n);
          if (n == 3) {
            battery.push_back(glove_game());
            battery.push_back(bankruptcy_game(200.0, std::vector<double>{100.0, 200.0, 300.0}));
          }
          if (n == 4) battery.push_back(airport_game(std::vector<double>{12.0, 28.0, 28.0, 30.0}));
          const LatticeGraph g = LatticeGraph::full(n);
          const PinnedDenseSolver dense(g);
          for (const TuGame& u : battery) {
            const TuGame cprime = shoga_scaled(u);
            std::vector<double> devs(u.table_size(), 0.0);
            parallel_for(u.table_size() - 1, [&](std::size_t idx) {
              const std::uint32_t s = static_cast<std::uint32_t>(idx) + 1;
              const LatticeGraph h = LatticeGraph::single_step(n, Coalition(s));
              const PoissonSolution sol = poisson_solve(g, h, u.table());
              double dev = std::abs(sol.x.back() - cprime.worth(s));
              double trace = 0.0;
              for (double x : sol.x) trace += x;
              dev = std::max(dev, std::abs(trace - u.worth(s)));
              const VertexFunction oracle = dense.solve(laplacian_apply(h, u.table()));
              for (std::uint32_t t = 0; t < oracle.size(); ++t)
                dev = std::max(dev, std::abs(sol.x[t] - oracle[t]));
              devs[idx] = dev;
            });
            for (double dev : devs) {
              track(worst, dev);
              ok = ok && dev < 1e-8;
            }
          }
        }
        return ok;
      }));

  results.push_back(run_claim(
      "theorem-5-shapley-bridge", "hypercube Poisson solutions at N equal the Shapley value",
      [&](double& worst) {
        bool ok = true;
        for (int n = 2; n <= max_n; ++n) {
          std::vector<TuGame> battery = random_suite(n, 5, seed + 1200 + n);
          if (n == 3) battery.push_back(glove_game());
          for (const TuGame& u : battery) {
            const PayoffVector phi = shapley_value(u);
            for (int i = 1; i <= n; ++i) {
              const double via_hodge = shapley_via_hodge(u, i);
              track(worst, std::abs(via_hodge - phi[i - 1]));
              ok = ok && std::abs(via_hodge - phi[i - 1]) < 1e-8;
            }
          }
        }
        return ok;
      }));

  results.push_back(run_claim(
      "hodge-decomposition", "gradient and divergence-free parts on full and hypercube graphs",
      [&](double& worst) {
        bool ok = true;
        const int top = std::min(max_n, 6);
        for (int n = 2; n <= top; ++n) {
          for (const LatticeGraph& g : {LatticeGraph::full(n), LatticeGraph::up_to(n, 1)}) {
            std::mt19937_64 eng(seed + 1300 + n);
            for (int trial = 0; trial < 10; ++trial) {
              std::vector<double> values(g.edge_count());
              for (double& x : values) x = 2.0 * unit(eng) - 1.0;
              const EdgeFlow f(g, std::move(values));
              const HodgeParts parts = hodge_decompose(g, f);
              double norm_sq = edge_inner(f, f);
              double max_abs = 1.0;
              for (double x : f.values()) max_abs = std::max(max_abs, std::abs(x));
              double resum = 0.0;
              for (std::size_t e = 0; e < f.size(); ++e)
                resum = std::max(resum, std::abs(parts.gradient.values()[e] +
                                                 parts.residual.values()[e] - f.values()[e]));
              const double cross = std::abs(edge_inner(parts.gradient, parts.residual));
              const VertexFunction div = adjoint_apply(parts.residual);
              double div_norm = std::sqrt(vertex_inner(div, div));
              // residual is f - gradient by construction; re-summing loses at
              // most the final rounding, so the bound is a few ulps, not a
              // solver tolerance
              ok = ok && resum <= 4.0 * 0x1.0p-52 * max_abs &&
                   cross < 1e-9 * std::max(1.0, norm_sq) && div_norm < 1e-9;
              track(worst, std::max({resum, div_norm}));
            }
          }
        }
        return ok;
      }));

  return results;
}

}  // namespace shoga
