#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "shoga/game.hpp"
#include "shoga/game_maps.hpp"
#include "shoga/hodge.hpp"
#include "shoga/values.hpp"
#include "test_util.hpp"

using namespace shoga;
using namespace shoga::testutil;

namespace {

std::vector<double> random_vertex_function(int n, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::vector<double> u(std::size_t{1} << n);
  for (double& x : u) x = 2.0 * unit(eng) - 1.0;
  return u;
}

EdgeFlow random_flow(const LatticeGraph& g, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::vector<double> values(g.edge_count());
  for (double& x : values) x = 2.0 * unit(eng) - 1.0;
  return EdgeFlow(g, std::move(values));
}

Eigen::MatrixXd dense_laplacian(const LatticeGraph& g) {
  const std::uint32_t size = g.vertex_count();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
  g.for_each_edge([&](Edge e) {
    m(e.tail, e.tail) += 1.0;
    m(e.head, e.head) += 1.0;
    m(e.tail, e.head) -= 1.0;
    m(e.head, e.tail) -= 1.0;
  });
  return m;
}

}  // namespace

TEST_CASE("edge counts and canonical order") {
  auto pow3 = [](int n) {
    std::uint64_t r = 1;
    for (int i = 0; i < n; ++i) r *= 3;
    return r;
  };
  for (int n = 1; n <= 6; ++n) {
    const LatticeGraph full = LatticeGraph::full(n);
    CHECK(full.edge_count() == pow3(n) - (std::uint64_t{1} << n));
    const LatticeGraph cube = LatticeGraph::up_to(n, 1);
    CHECK(cube.edge_count() == std::uint64_t(n) << (n - 1));
    const LatticeGraph step = LatticeGraph::single_step(n, Coalition::single(1));
    CHECK(step.edge_count() == (std::uint64_t{1} << (n - 1)));

    for (const LatticeGraph& g : {full, cube, step}) {
      const std::vector<Edge> edges = g.edges();
      CHECK(edges.size() == g.edge_count());
      for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const bool ordered = edges[i].tail < edges[i + 1].tail ||
                             (edges[i].tail == edges[i + 1].tail &&
                              edges[i].head < edges[i + 1].head);
        CHECK(ordered);
      }
      for (const Edge& e : edges) {
        CHECK(e.tail != e.head);
        CHECK((e.tail & ~e.head) == 0u);  // tail is a strict subset of head
      }
    }
  }
  SUBCASE("up-to-k interpolates between the hypercube and the full graph") {
    const LatticeGraph g = LatticeGraph::up_to(4, 4);
    CHECK(g.edge_count() == LatticeGraph::full(4).edge_count());
    CHECK(LatticeGraph::up_to(4, 2).edge_count() > LatticeGraph::up_to(4, 1).edge_count());
  }
}

TEST_CASE("degrees") {
  for (int n = 1; n <= 5; ++n) {
    const LatticeGraph full = LatticeGraph::full(n);
    CHECK(full.degree(0) == (std::int64_t{1} << n) - 1);
    // cross-check the closed form against explicit adjacency counts
    for (const LatticeGraph& g :
         {full, LatticeGraph::up_to(n, std::min(2, n)), LatticeGraph::single_step(n, Coalition::single(1))}) {
      std::vector<std::int64_t> counted(g.vertex_count(), 0);
      g.for_each_edge([&](Edge e) {
        ++counted[e.tail];
        ++counted[e.head];
      });
      for (std::uint32_t v = 0; v < g.vertex_count(); ++v) CHECK(counted[v] == g.degree(v));
    }
  }
}

TEST_CASE("differential") {
  SUBCASE("constants are in the kernel") {
    const LatticeGraph g = LatticeGraph::full(3);
    std::vector<double> ones(8, 1.0);
    const EdgeFlow flow = differential_apply(g, ones);
    for (double v : flow.values()) CHECK(v == 0.0);
  }
  SUBCASE("two-player unanimity on the full graph") {
    const LatticeGraph g = LatticeGraph::full(2);
    const TuGame u = unanimity_game(2, Coalition::full(2));
    const EdgeFlow f = differential_apply(g, u.table());
    const std::vector<Edge> edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const double expected = u.worth(edges[i].head) - u.worth(edges[i].tail);
      CHECK(f.values()[i] == expected);
    }
    CHECK(f.values()[2] == 1.0);  // d(empty -> N); (0, 3) is the third edge from tail 0
  }
  SUBCASE("single-step graphs difference matched pairs") {
    const LatticeGraph g = LatticeGraph::single_step(3, Coalition::of({1, 3}));
    const std::vector<double> u = random_vertex_function(3, 5);
    const EdgeFlow f = differential_apply(g, u);
    std::size_t index = 0;
    g.for_each_edge([&](Edge e) {
      CHECK(f.values()[index] == u[e.head] - u[e.tail]);
      CHECK((e.head ^ e.tail) == Coalition::of({1, 3}).mask());
      ++index;
    });
  }
}

TEST_CASE("adjoint") {
  SUBCASE("single-edge graph carries the sign convention") {
    const LatticeGraph g = LatticeGraph::single_step(1, Coalition::single(1));
    REQUIRE(g.edge_count() == 1);
    const EdgeFlow f(g, {1.0});
    const VertexFunction div = adjoint_apply(f);
    CHECK(div[0] == -1.0);
    CHECK(div[1] == 1.0);
  }
  SUBCASE("adjointness <u, d*f> = <du, f> for random pairs on every kind") {
    for (int n = 2; n <= 8; n += 2) {
      for (const LatticeGraph& g :
           {LatticeGraph::full(n), LatticeGraph::up_to(n, 2),
            LatticeGraph::single_step(n, Coalition::of({1, 2}))}) {
        for (int trial = 0; trial < 25; ++trial) {
          const std::vector<double> u = random_vertex_function(n, 100 * n + trial);
          const EdgeFlow f = random_flow(g, 200 * n + trial);
          const double lhs = vertex_inner(u, adjoint_apply(f));
          const double rhs = edge_inner(differential_apply(g, u), f);
          CHECK(std::abs(lhs - rhs) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("laplacian equals adjoint of differential") {
  for (int n = 2; n <= 7; ++n) {
    for (const LatticeGraph& g :
         {LatticeGraph::full(n), LatticeGraph::up_to(n, 1), LatticeGraph::up_to(n, std::min(3, n)),
          LatticeGraph::single_step(n, Coalition::of({2}))}) {
      const std::vector<double> u = random_vertex_function(n, 300 + n);
      const VertexFunction fast = laplacian_apply(g, u);
      const VertexFunction slow = adjoint_apply(differential_apply(g, u));
      for (std::uint32_t v = 0; v < g.vertex_count(); ++v)
        CHECK(std::abs(fast[v] - slow[v]) < 1e-10);
    }
  }
}

TEST_CASE("laplacian closed forms") {
  SUBCASE("single-step cases") {
    const LatticeGraph g = LatticeGraph::single_step(2, Coalition::single(1));
    const TuGame u = unanimity_game(2, Coalition::full(2));
    const VertexFunction lu = laplacian_apply(g, u.table());
    CHECK(lu[0] == 0.0);   // u(empty) - u({1})
    CHECK(lu[2] == -1.0);  // u({2}) - u({1,2})
    CHECK(lu[1] == 0.0);   // u({1}) - u(empty)
    CHECK(lu[3] == 1.0);   // u({1,2}) - u({2})
  }
  SUBCASE("full graph at the empty set sums all worths") {
    const TuGame glove = glove_game();
    const VertexFunction lu = laplacian_apply(LatticeGraph::full(3), glove.table());
    CHECK(lu[0] == -3.0);
  }
  SUBCASE("constants vanish under every kind") {
    std::vector<double> ones(16, 1.0);
    for (const LatticeGraph& g : {LatticeGraph::full(4), LatticeGraph::up_to(4, 2),
                                  LatticeGraph::single_step(4, Coalition::of({2, 3}))}) {
      for (double v : laplacian_apply(g, ones)) CHECK(v == 0.0);
    }
  }
  SUBCASE("symmetry and positive semidefiniteness") {
    for (const LatticeGraph& g : {LatticeGraph::full(5), LatticeGraph::up_to(5, 2),
                                  LatticeGraph::single_step(5, Coalition::of({1, 4}))}) {
      const std::vector<double> u = random_vertex_function(5, 41);
      const std::vector<double> v = random_vertex_function(5, 42);
      const VertexFunction lu = laplacian_apply(g, u);
      const VertexFunction lv = laplacian_apply(g, v);
      CHECK(std::abs(vertex_inner(u, lv) - vertex_inner(lu, v)) < 1e-10);
      CHECK(vertex_inner(u, lu) >= -1e-12);
    }
  }
  SUBCASE("single-step laplacians partition the full laplacian") {
    const int n = 5;
    const std::vector<double> u = random_vertex_function(n, 43);
    VertexFunction total(std::size_t{1} << n, 0.0);
    for (std::uint32_t s = 1; s < (1u << n); ++s) {
      const VertexFunction part =
          laplacian_apply(LatticeGraph::single_step(n, Coalition(s)), u);
      for (std::uint32_t t = 0; t < total.size(); ++t) total[t] += part[t];
    }
    const VertexFunction full = laplacian_apply(LatticeGraph::full(n), u);
    for (std::uint32_t t = 0; t < total.size(); ++t) CHECK(std::abs(total[t] - full[t]) < 1e-10);
  }
  SUBCASE("bounded-step laplacians partition the bounded laplacian") {
    const int n = 5, k = 2;
    const std::vector<double> u = random_vertex_function(n, 44);
    VertexFunction total(std::size_t{1} << n, 0.0);
    for (std::uint32_t s = 1; s < (1u << n); ++s) {
      if (std::popcount(s) > k) continue;
      const VertexFunction part =
          laplacian_apply(LatticeGraph::single_step(n, Coalition(s)), u);
      for (std::uint32_t t = 0; t < total.size(); ++t) total[t] += part[t];
    }
    const VertexFunction bounded = laplacian_apply(LatticeGraph::up_to(n, k), u);
    for (std::uint32_t t = 0; t < total.size(); ++t)
      CHECK(std::abs(total[t] - bounded[t]) < 1e-10);
  }
}

TEST_CASE("connected components") {
  for (int n = 1; n <= 5; ++n) {
    CHECK(connected_components(LatticeGraph::full(n)) == 1);
    CHECK(connected_components(LatticeGraph::up_to(n, 1)) == 1);
  }
  CHECK(connected_components(LatticeGraph::single_step(2, Coalition::single(1))) == 2);
  SUBCASE("single-step graphs match the closed form") {
    for (int n = 2; n <= 5; ++n) {
      for (std::uint32_t s = 1; s < (1u << n); ++s) {
        const int expected = (1 << n) - (1 << (n - std::popcount(s)));
        CHECK(connected_components(LatticeGraph::single_step(n, Coalition(s))) == expected);
      }
    }
  }
  SUBCASE("component count equals the laplacian kernel dimension (dense rank)") {
    for (int n = 2; n <= 4; ++n) {
      for (const LatticeGraph& g :
           {LatticeGraph::full(n), LatticeGraph::up_to(n, 1),
            LatticeGraph::single_step(n, Coalition::single(n))}) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(dense_laplacian(g));
        lu.setThreshold(1e-9);
        const int nullity = static_cast<int>(g.vertex_count()) - static_cast<int>(lu.rank());
        CHECK(nullity == connected_components(g));
      }
    }
  }
}

TEST_CASE("poisson solve") {
  SUBCASE("constant input gives the zero solution") {
    const LatticeGraph g = LatticeGraph::full(3);
    const LatticeGraph h = LatticeGraph::single_step(3, Coalition::single(2));
    std::vector<double> v(8, 4.2);
    const PoissonSolution sol = poisson_solve(g, h, v);
    for (double x : sol.x) CHECK(std::abs(x) < 1e-12);
    CHECK(sol.iterations == 0);
  }
  SUBCASE("hand-solved 2-player system") {
    const TuGame v = unanimity_game(2, Coalition::full(2));
    const LatticeGraph g = LatticeGraph::full(2);
    const LatticeGraph h = LatticeGraph::single_step(2, Coalition::single(1));
    for (SolveMethod method : {SolveMethod::kCg, SolveMethod::kDense}) {
      const PoissonSolution sol = poisson_solve(g, h, v.table(), 1e-12, method);
      CHECK(sol.x[0] == 0.0);
      CHECK(std::abs(sol.x[3] - 0.25) < 1e-10);   // x(N) = C'_v({1})
      CHECK(std::abs(sol.x[1] - 0.125) < 1e-10);
      CHECK(std::abs(sol.x[2] + 0.375) < 1e-10);
    }
  }
  SUBCASE("cg agrees with the dense oracle on random games") {
    const int n = 6;
    const LatticeGraph g = LatticeGraph::full(n);
    const PinnedDenseSolver dense(g);
    std::mt19937_64 pick(99);
    for (int trial = 0; trial < 50; ++trial) {
      const TuGame u = random_game(n, 5000 + trial);
      const std::uint32_t s = 1 + static_cast<std::uint32_t>(pick() % ((1u << n) - 1));
      const LatticeGraph h = LatticeGraph::single_step(n, Coalition(s));
      const PoissonSolution cg = poisson_solve(g, h, u.table());
      const VertexFunction oracle = dense.solve(laplacian_apply(h, u.table()));
      for (std::uint32_t t = 0; t < oracle.size(); ++t)
        CHECK(std::abs(cg.x[t] - oracle[t]) < 1e-8);
    }
  }
  SUBCASE("right-hand sides are orthogonal to the constants") {
    for (int n = 2; n <= 6; ++n) {
      const std::vector<double> v = random_vertex_function(n, 600 + n);
      for (const LatticeGraph& h :
           {LatticeGraph::single_step(n, Coalition::single(1)), LatticeGraph::up_to(n, 1),
            LatticeGraph::full(n)}) {
        const VertexFunction b = laplacian_apply(h, v);
        double total = 0.0;
        for (double x : b) total += x;
        CHECK(std::abs(total) < 1e-10);
      }
    }
  }
  SUBCASE("solution satisfies the equation to tolerance") {
    const int n = 5;
    const LatticeGraph g = LatticeGraph::up_to(n, 2);
    const LatticeGraph h = LatticeGraph::single_step(n, Coalition::of({1, 3}));
    const std::vector<double> v = random_vertex_function(n, 61);
    const PoissonSolution sol = poisson_solve(g, h, v);
    const VertexFunction lx = laplacian_apply(g, sol.x);
    const VertexFunction b = laplacian_apply(h, v);
    double residual = 0.0, bnorm = 0.0;
    for (std::uint32_t t = 0; t < lx.size(); ++t) {
      residual += (lx[t] - b[t]) * (lx[t] - b[t]);
      bnorm += b[t] * b[t];
    }
    CHECK(std::sqrt(residual) <= 1e-12 * std::max(1.0, std::sqrt(bnorm)) + 1e-15);
  }
  SUBCASE("disconnected base graphs are rejected") {
    const LatticeGraph g = LatticeGraph::single_step(3, Coalition::single(1));
    const std::vector<double> v(8, 0.0);
    CHECK_THROWS_AS(poisson_solve(g, g, v), std::invalid_argument);
  }
  SUBCASE("edge containment is enforced") {
    const LatticeGraph g = LatticeGraph::up_to(4, 1);
    const LatticeGraph h = LatticeGraph::single_step(4, Coalition::of({1, 2}));
    const std::vector<double> v(16, 0.0);
    CHECK_THROWS_AS(poisson_solve(g, h, v), std::invalid_argument);
  }
}

TEST_CASE("component games") {
  SUBCASE("null coalitions give the zero game") {
    const TuGame theta = unanimity_game(3, Coalition::of({1, 2}));
    for (int k : {1, 2, 3}) {
      const TuGame part = component_game(theta, Coalition::single(3), k);
      for (std::uint32_t t = 0; t < 8; ++t) CHECK(std::abs(part.worth(t)) < 1e-9);
    }
  }
  SUBCASE("two-player unanimity, k = n") {
    const TuGame u = unanimity_game(2, Coalition::full(2));
    const TuGame part = component_game(u, Coalition::single(1), 2);
    CHECK(std::abs(part.grand_worth() - 0.25) < 1e-10);
  }
  SUBCASE("components sum to the game on the glove example") {
    const TuGame glove = glove_game();
    for (int k : {1, 2, 3}) {
      std::vector<double> total(8, 0.0);
      for (std::uint32_t s = 1; s < 8; ++s) {
        if (std::popcount(s) > k) continue;
        const TuGame part = component_game(glove, Coalition(s), k);
        for (std::uint32_t t = 0; t < 8; ++t) total[t] += part.worth(t);
      }
      for (std::uint32_t t = 0; t < 8; ++t) CHECK(std::abs(total[t] - glove.worth(t)) < 1e-9);
    }
  }
  SUBCASE("|S| > k is rejected") {
    CHECK_THROWS_AS(component_game(glove_game(), Coalition::of({1, 2}), 1),
                    std::invalid_argument);
  }
}

TEST_CASE("bridge to the scaled map") {
  SUBCASE("glove") {
    CHECK(std::abs(shoga_via_hodge(glove_game(), Coalition::single(1)) - 0.125) < 1e-8);
  }
  SUBCASE("bankruptcy") {
    CHECK(std::abs(shoga_via_hodge(bankruptcy_example(), Coalition::of({2, 3})) - 37.5) < 1e-8);
  }
  SUBCASE("grand coalition") {
    for (int n = 2; n <= 5; ++n) {
      const TuGame u = random_game(n, 700 + n);
      CHECK(std::abs(shoga_via_hodge(u, u.grand()) -
                     std::ldexp(u.grand_worth(), -(n - 1))) < 1e-8);
    }
  }
  SUBCASE("every coalition, with the trace identity") {
    for (int n = 2; n <= 6; ++n) {
      const TuGame u = random_game(n, 800 + n);
      const TuGame cp = shoga_scaled(u);
      const LatticeGraph g = LatticeGraph::full(n);
      for (std::uint32_t s = 1; s < u.table_size(); ++s) {
        const LatticeGraph h = LatticeGraph::single_step(n, Coalition(s));
        const PoissonSolution sol = poisson_solve(g, h, u.table());
        CHECK(std::abs(sol.x.back() - cp.worth(s)) < 1e-8);
        double trace = 0.0;
        for (double x : sol.x) trace += x;
        CHECK(std::abs(trace - u.worth(s)) < 1e-8);
      }
    }
  }
}

TEST_CASE("bridge to the shapley value") {
  SUBCASE("glove players") {
    CHECK(std::abs(shapley_via_hodge(glove_game(), 1) - 2.0 / 3.0) < 1e-8);
    CHECK(std::abs(shapley_via_hodge(glove_game(), 2) - 1.0 / 6.0) < 1e-8);
  }
  SUBCASE("zero game") {
    for (int i = 1; i <= 3; ++i) CHECK(shapley_via_hodge(TuGame(3), i) == 0.0);
  }
  SUBCASE("random games, every player") {
    for (int n = 2; n <= 6; ++n) {
      const TuGame u = random_game(n, 900 + n);
      const PayoffVector phi = shapley_value(u);
      for (int i = 1; i <= n; ++i)
        CHECK(std::abs(shapley_via_hodge(u, i) - phi[i - 1]) < 1e-8);
    }
  }
}

TEST_CASE("hodge decomposition") {
  SUBCASE("pure gradients have no residual") {
    const LatticeGraph g = LatticeGraph::full(4);
    const std::vector<double> u = random_vertex_function(4, 71);
    const EdgeFlow f = differential_apply(g, u);
    const HodgeParts parts = hodge_decompose(g, f);
    for (double r : parts.residual.values()) CHECK(std::abs(r) < 1e-9);
  }
  SUBCASE("divergence-free flows have no gradient part") {
    const LatticeGraph g = LatticeGraph::full(4);
    const HodgeParts first = hodge_decompose(g, random_flow(g, 72));
    // the residual of any decomposition is divergence-free
    const HodgeParts parts = hodge_decompose(g, first.residual);
    for (double v : parts.gradient.values()) CHECK(std::abs(v) < 1e-9);
  }
  SUBCASE("parts are orthogonal and re-sum to the flow") {
    for (int n = 2; n <= 6; ++n) {
      for (const LatticeGraph& g : {LatticeGraph::full(n), LatticeGraph::up_to(n, 1)}) {
        const EdgeFlow f = random_flow(g, 73 + n);
        const HodgeParts parts = hodge_decompose(g, f);
        CHECK(std::abs(edge_inner(parts.gradient, parts.residual)) <
              1e-9 * std::max(1.0, edge_inner(f, f)));
        const VertexFunction div = adjoint_apply(parts.residual);
        CHECK(std::sqrt(vertex_inner(div, div)) < 1e-9);
        for (std::size_t e = 0; e < f.size(); ++e) {
          const double resum = parts.gradient.values()[e] + parts.residual.values()[e];
          CHECK(std::abs(resum - f.values()[e]) <= 4.0 * 0x1.0p-52);
        }
      }
    }
  }
  SUBCASE("flows on a different graph are rejected") {
    const EdgeFlow f = random_flow(LatticeGraph::full(3), 9);
    CHECK_THROWS_AS(hodge_decompose(LatticeGraph::up_to(3, 1), f, 1e-12),
                    std::invalid_argument);
  }
}

TEST_CASE("permutation pullback") {
  SUBCASE("identity") {
    const std::vector<int> sigma{1, 2, 3};
    const TuGame u = random_game(3, 15);
    CHECK(TuGame(3, permutation_pullback(sigma, u.table())) == u);
  }
  SUBCASE("swapping the two players of a singleton unanimity game") {
    const std::vector<int> swap{2, 1};
    const TuGame t1 = unanimity_game(2, Coalition::single(1));
    const TuGame pulled = TuGame(2, permutation_pullback(swap, t1.table()));
    CHECK(pulled == unanimity_game(2, Coalition::single(2)));
    CHECK(pulled.worth(Coalition::of({2})) == 1.0);
  }
  SUBCASE("glove is symmetric in players 2 and 3") {
    const std::vector<int> sigma{1, 3, 2};
    CHECK(TuGame(3, permutation_pullback(sigma, glove_game().table())) == glove_game());
  }
  SUBCASE("non-bijections are rejected") {
    const std::vector<int> bad{1, 1, 3};
    const std::vector<double> u(8, 0.0);
    CHECK_THROWS_AS(permutation_pullback(bad, u), std::invalid_argument);
  }
  SUBCASE("component games are equivariant") {
    const int n = 4;
    const TuGame u = random_game(n, 16);
    const std::vector<int> sigma{3, 1, 4, 2};
    const Coalition s = Coalition::of({1, 2});
    for (int k : {2, n}) {
      const TuGame lhs = component_game(TuGame(n, permutation_pullback(sigma, u.table())), s, k);
      const TuGame rhs_part = component_game(u, permute_coalition(sigma, s), k);
      const VertexFunction rhs = permutation_pullback(sigma, rhs_part.table());
      for (std::uint32_t t = 0; t < u.table_size(); ++t)
        CHECK(std::abs(lhs.worth(t) - rhs[t]) < 1e-7);
    }
  }
}

TEST_CASE("solver linearity in the game") {
  const int n = 4;
  const TuGame u = random_game(n, 17);
  const TuGame v = random_game(n, 18);
  const double a = 1.7, b = -0.4;
  const Coalition s = Coalition::of({2, 3});
  for (int k : {2, 4}) {
    const TuGame mix = component_game(linear_combination(a, u, b, v), s, k);
    const TuGame pu = component_game(u, s, k);
    const TuGame pv = component_game(v, s, k);
    for (std::uint32_t t = 0; t < mix.table_size(); ++t)
      CHECK(std::abs(mix.worth(t) - a * pu.worth(t) - b * pv.worth(t)) < 1e-8);
  }
}
