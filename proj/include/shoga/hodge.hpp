#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "shoga/game.hpp"

namespace shoga {

// Functions on the 2^n coalition vertices; a TuGame table is the sub-case
// pinned at the empty set.
using VertexFunction = std::vector<double>;

enum class GraphKind { kFull, kUpToK, kSingleStep };

struct Edge {
  std::uint32_t tail = 0;
  std::uint32_t head = 0;
  friend bool operator==(Edge, Edge) = default;
};

// Oriented graphs on the coalition lattice. Edges run from A to B whenever
// A ⊊ B, filtered by kind: all pairs (full), |B∖A| <= k, or B∖A = S.
// Edges are never stored; they are enumerated from the masks on demand.
class LatticeGraph {
public:
  static LatticeGraph full(int n);
  static LatticeGraph up_to(int n, int k);
  static LatticeGraph single_step(int n, Coalition step);

  int players() const { return n_; }
  GraphKind kind() const { return kind_; }
  int k() const { return k_; }
  Coalition step() const { return step_; }

  std::uint32_t vertex_count() const { return 1u << n_; }
  std::uint64_t edge_count() const;
  std::int64_t degree(std::uint32_t vertex) const;
  bool connected() const;
  bool contains_edges_of(const LatticeGraph& sub) const;
  std::string describe() const;

  friend bool operator==(const LatticeGraph&, const LatticeGraph&) = default;

  // Edges in canonical order: ascending tail mask, then ascending head mask.
  template <class F>
  void for_each_edge(F&& fn) const {
    const std::uint32_t full_mask = vertex_count() - 1;
    for (std::uint32_t tail = 0; tail <= full_mask; ++tail) {
      const std::uint32_t comp = full_mask ^ tail;
      if (kind_ == GraphKind::kSingleStep) {
        if ((step_.mask() & comp) == step_.mask()) fn(Edge{tail, tail | step_.mask()});
        continue;
      }
      for_each_submask(comp, [&](std::uint32_t d) {
        if (d == 0) return;
        if (kind_ == GraphKind::kUpToK && std::popcount(d) > k_) return;
        fn(Edge{tail, tail | d});
      });
    }
  }

  // Materialized canonical edge list; guarded against huge graphs.
  std::vector<Edge> edges() const;

private:
  LatticeGraph(int n, GraphKind kind, int k, Coalition step)
      : n_(n), kind_(kind), k_(k), step_(step) {}
  int n_;
  GraphKind kind_;
  int k_ = 0;         // UpToK bound
  Coalition step_;    // SingleStep difference set
};

// A real-valued function on the oriented edges of a specific graph, stored
// in the canonical edge order.
class EdgeFlow {
public:
  EdgeFlow(LatticeGraph graph, std::vector<double> values);

  const LatticeGraph& graph() const { return graph_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

private:
  LatticeGraph graph_;
  std::vector<double> values_;
};

double vertex_inner(std::span<const double> u, std::span<const double> v);
double edge_inner(const EdgeFlow& f, const EdgeFlow& g);

// d u(a,b) = u(b) - u(a), one entry per edge in canonical order.
EdgeFlow differential_apply(const LatticeGraph& g, std::span<const double> u);

// d* f(v) = inflow(v) - outflow(v); the adjoint of d under the l2 pairings.
VertexFunction adjoint_apply(const EdgeFlow& f);

// L = d* d, evaluated matrix-free. For a single-step graph this is
// L_S u(T) = u(T) - u(T ∪ S) on T disjoint from S, u(T) - u(T∖S) on T ⊇ S,
// and 0 elsewhere.
VertexFunction laplacian_apply(const LatticeGraph& g, std::span<const double> u);

// Union-find over the undirected edge support.
int connected_components(const LatticeGraph& g);

class SolverError : public std::runtime_error {
public:
  SolverError(const std::string& what, double best_residual, int iterations)
      : std::runtime_error(what), best_residual_(best_residual), iterations_(iterations) {}
  double best_residual() const { return best_residual_; }
  int iterations() const { return iterations_; }

private:
  double best_residual_;
  int iterations_;
};

enum class SolveMethod { kCg, kDense };

struct PoissonSolution {
  VertexFunction x;        // pinned: x(empty) = 0
  double residual_norm = 0.0;
  int iterations = 0;
  SolveMethod method = SolveMethod::kCg;
};

// Solves L_G x = L_H v with x(empty) = 0. The right-hand side is orthogonal
// to the constants, so the singular system is consistent; G must be connected
// and H's edges must lie inside G's. cg runs on the full vertex space with
// the iterate deflated against the constants; dense factors the system with
// the empty-set row and column deleted (n <= 10).
PoissonSolution poisson_solve(const LatticeGraph& g, const LatticeGraph& h,
                              std::span<const double> v, double tol = 1e-12,
                              SolveMethod method = SolveMethod::kCg);

// Dense pinned Laplacian solver; factors once, reusable across right-hand
// sides. Ground-truth oracle for the cg path.
class PinnedDenseSolver {
public:
  explicit PinnedDenseSolver(const LatticeGraph& g);
  ~PinnedDenseSolver();
  PinnedDenseSolver(PinnedDenseSolver&&) noexcept;
  PinnedDenseSolver& operator=(PinnedDenseSolver&&) noexcept;

  // Solves L x = rhs with x(empty) = 0; rhs must sum to ~0.
  VertexFunction solve(std::span<const double> rhs) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// u_S^k: the unique game with L^k x = L_S u. Requires 1 <= |S| <= k <= n.
// The empty step set is excluded: its Laplacian is zero, so its component
// would be identically zero and decomposition sums are unaffected.
TuGame component_game(const TuGame& u, Coalition s, int k, double tol = 1e-12,
                      SolveMethod method = SolveMethod::kCg);

// u_S(N) for the full-graph Poisson solve; equals shoga_scaled(u)(S).
double shoga_via_hodge(const TuGame& u, Coalition s, double tol = 1e-12,
                       SolveMethod method = SolveMethod::kCg);

// u^1_i(N) on the hypercube; equals the Shapley value of player i.
double shapley_via_hodge(const TuGame& u, int player, double tol = 1e-12,
                         SolveMethod method = SolveMethod::kCg);

struct HodgeParts {
  EdgeFlow gradient;         // d x, the Im d component
  EdgeFlow residual;         // f - gradient, in Ker d*
  VertexFunction potential;  // x with L x = d* f, pinned at the empty set
};

// Splits f into its gradient part and divergence-free remainder.
HodgeParts hodge_decompose(const LatticeGraph& g, const EdgeFlow& f, double tol = 1e-12);

// sigma[i-1] is the image of player i; must be a bijection of {1..n}.
Coalition permute_coalition(std::span<const int> sigma, Coalition s);

// (sigma* u)(S) = u(sigma(S)).
VertexFunction permutation_pullback(std::span<const int> sigma, std::span<const double> u);

}  // namespace shoga
