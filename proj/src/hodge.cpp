#include "shoga/hodge.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "shoga/subset_transforms.hpp"

namespace shoga {

namespace {

constexpr int kMaxCgPlayers = 14;
constexpr int kMaxDensePlayers = 10;
constexpr std::uint64_t kMaxMaterializedEdges = std::uint64_t{1} << 26;

std::uint64_t binomial(int m, int j) {
  if (j < 0 || j > m) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= j; ++i) r = r * (m - j + i) / i;
  return r;
}

std::uint64_t pow_u64(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void check_sized(const LatticeGraph& g, std::span<const double> u, const char* op) {
  if (u.size() != g.vertex_count())
    throw std::invalid_argument(std::string(op) + ": vertex function has the wrong size");
}

}  // namespace

LatticeGraph LatticeGraph::full(int n) {
  if (n < 1 || n > kMaxPlayers) throw std::invalid_argument("lattice graph: bad player count");
  return LatticeGraph(n, GraphKind::kFull, n, Coalition());
}

LatticeGraph LatticeGraph::up_to(int n, int k) {
  if (n < 1 || n > kMaxPlayers) throw std::invalid_argument("lattice graph: bad player count");
  if (k < 1 || k > n) throw std::invalid_argument("lattice graph: k must be in [1, n]");
  return LatticeGraph(n, GraphKind::kUpToK, k, Coalition());
}

LatticeGraph LatticeGraph::single_step(int n, Coalition step) {
  if (n < 1 || n > kMaxPlayers) throw std::invalid_argument("lattice graph: bad player count");
  if (step.empty()) throw std::invalid_argument("lattice graph: step set must be nonempty");
  if (!step.subset_of(Coalition::full(n)))
    throw std::invalid_argument("lattice graph: step set outside the player set");
  return LatticeGraph(n, GraphKind::kSingleStep, 0, step);
}

std::uint64_t LatticeGraph::edge_count() const {
  switch (kind_) {
    case GraphKind::kFull:
      return pow_u64(3, n_) - pow_u64(2, n_);
    case GraphKind::kUpToK: {
      std::uint64_t total = 0;
      for (int a = 0; a <= n_; ++a) {
        std::uint64_t per_tail = 0;
        for (int j = 1; j <= std::min(k_, n_ - a); ++j) per_tail += binomial(n_ - a, j);
        total += binomial(n_, a) * per_tail;
      }
      return total;
    }
    case GraphKind::kSingleStep:
      return std::uint64_t{1} << (n_ - step_.size());
  }
  return 0;
}

std::int64_t LatticeGraph::degree(std::uint32_t vertex) const {
  const int a = std::popcount(vertex);
  switch (kind_) {
    case GraphKind::kFull:
      return (std::int64_t{1} << a) + (std::int64_t{1} << (n_ - a)) - 2;
    case GraphKind::kUpToK: {
      std::int64_t d = 0;
      for (int j = 1; j <= std::min(k_, a); ++j) d += binomial(a, j);
      for (int j = 1; j <= std::min(k_, n_ - a); ++j) d += binomial(n_ - a, j);
      return d;
    }
    case GraphKind::kSingleStep: {
      const std::uint32_t inter = vertex & step_.mask();
      return (inter == 0 || inter == step_.mask()) ? 1 : 0;
    }
  }
  return 0;
}

bool LatticeGraph::connected() const {
  if (kind_ == GraphKind::kSingleStep) return n_ == 1;
  return true;
}

bool LatticeGraph::contains_edges_of(const LatticeGraph& sub) const {
  if (sub.n_ != n_) return false;
  switch (kind_) {
    case GraphKind::kFull:
      return true;
    case GraphKind::kUpToK:
      if (sub.kind_ == GraphKind::kFull) return k_ == n_;
      if (sub.kind_ == GraphKind::kUpToK) return sub.k_ <= k_;
      return sub.step_.size() <= k_;
    case GraphKind::kSingleStep:
      return sub.kind_ == GraphKind::kSingleStep && sub.step_ == step_;
  }
  return false;
}

std::string LatticeGraph::describe() const {
  switch (kind_) {
    case GraphKind::kFull:
      return "full(n=" + std::to_string(n_) + ")";
    case GraphKind::kUpToK:
      return "up-to-k(n=" + std::to_string(n_) + ",k=" + std::to_string(k_) + ")";
    case GraphKind::kSingleStep:
      return "single-step(n=" + std::to_string(n_) + ",S={" + step_.to_string() + "})";
  }
  return "?";
}

std::vector<Edge> LatticeGraph::edges() const {
  if (edge_count() > kMaxMaterializedEdges)
    throw std::invalid_argument("edge list too large to materialize: " + describe());
  std::vector<Edge> out;
  out.reserve(edge_count());
  for_each_edge([&](Edge e) { out.push_back(e); });
  return out;
}

EdgeFlow::EdgeFlow(LatticeGraph graph, std::vector<double> values)
    : graph_(graph), values_(std::move(values)) {
  if (values_.size() != graph_.edge_count())
    throw std::invalid_argument("edge flow has " + std::to_string(values_.size()) +
                                " entries, graph " + graph_.describe() + " has " +
                                std::to_string(graph_.edge_count()) + " edges");
}

double vertex_inner(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw std::invalid_argument("vertex_inner: size mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) total += u[i] * v[i];
  return total;
}

double edge_inner(const EdgeFlow& f, const EdgeFlow& g) {
  if (!(f.graph() == g.graph())) throw std::invalid_argument("edge_inner: different graphs");
  return vertex_inner(f.values(), g.values());
}

EdgeFlow differential_apply(const LatticeGraph& g, std::span<const double> u) {
  check_sized(g, u, "differential_apply");
  std::vector<double> values;
  values.reserve(g.edge_count());
  g.for_each_edge([&](Edge e) { values.push_back(u[e.head] - u[e.tail]); });
  return EdgeFlow(g, std::move(values));
}

VertexFunction adjoint_apply(const EdgeFlow& f) {
  VertexFunction out(f.graph().vertex_count(), 0.0);
  std::size_t index = 0;
  f.graph().for_each_edge([&](Edge e) {
    const double value = f.values()[index++];
    out[e.head] += value;
    out[e.tail] -= value;
  });
  return out;
}

namespace {

// Full graph: neighbour sums split into one subset-sum and one superset-sum
// pass, so a matvec costs O(n 2^n) instead of one term per edge.
void laplacian_full(int n, std::span<const double> u, std::span<double> out) {
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> sub(u.begin(), u.end());
  std::vector<double> sup(u.begin(), u.end());
  subset_sum_in_place(sub, n);
  superset_sum_in_place(sup, n);
  for (std::uint32_t s = 0; s < size; ++s) {
    const int a = std::popcount(s);
    const double diag = static_cast<double>((std::uint64_t{1} << a) + (std::uint64_t{1} << (n - a)));
    out[s] = diag * u[s] - sub[s] - sup[s];
  }
}

// Hypercube: every vertex has degree n and its neighbours differ in one bit.
void laplacian_hypercube(int n, std::span<const double> u, std::span<double> out) {
  const std::size_t size = std::size_t{1} << n;
  for (std::uint32_t s = 0; s < size; ++s) {
    double neigh = 0.0;
    for (int d = 0; d < n; ++d) neigh += u[s ^ (1u << d)];
    out[s] = n * u[s] - neigh;
  }
}

// Bounded-distance graph: rank the input by cardinality and run one zeta
// pass per level, accumulating only into vertices within distance k.
void laplacian_up_to_k(const LatticeGraph& g, std::span<const double> u, std::span<double> out) {
  const int n = g.players();
  const int k = g.k();
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> neigh(size, 0.0);
  std::vector<double> level(size);
  for (int j = 0; j < n; ++j) {
    // strict subsets of cardinality j, reaching up to cardinality j + k
    for (std::uint32_t s = 0; s < size; ++s)
      level[s] = std::popcount(s) == j ? u[s] : 0.0;
    subset_sum_in_place(level, n);
    for (std::uint32_t s = 0; s < size; ++s) {
      const int a = std::popcount(s);
      if (a > j && a <= j + k) neigh[s] += level[s];
    }
  }
  for (int j = 1; j <= n; ++j) {
    // strict supersets of cardinality j, reaching down to cardinality j - k
    for (std::uint32_t s = 0; s < size; ++s)
      level[s] = std::popcount(s) == j ? u[s] : 0.0;
    superset_sum_in_place(level, n);
    for (std::uint32_t s = 0; s < size; ++s) {
      const int a = std::popcount(s);
      if (a < j && a >= j - k) neigh[s] += level[s];
    }
  }
  for (std::uint32_t s = 0; s < size; ++s)
    out[s] = static_cast<double>(g.degree(s)) * u[s] - neigh[s];
}

void laplacian_single_step(const LatticeGraph& g, std::span<const double> u,
                           std::span<double> out) {
  const std::uint32_t step = g.step().mask();
  for (std::uint32_t t = 0; t < g.vertex_count(); ++t) {
    const std::uint32_t inter = t & step;
    if (inter == 0)
      out[t] = u[t] - u[t | step];
    else if (inter == step)
      out[t] = u[t] - u[t & ~step];
    else
      out[t] = 0.0;
  }
}

}  // namespace

VertexFunction laplacian_apply(const LatticeGraph& g, std::span<const double> u) {
  check_sized(g, u, "laplacian_apply");
  VertexFunction out(g.vertex_count());
  switch (g.kind()) {
    case GraphKind::kFull:
      laplacian_full(g.players(), u, out);
      break;
    case GraphKind::kUpToK:
      if (g.k() >= g.players())
        laplacian_full(g.players(), u, out);
      else if (g.k() == 1)
        laplacian_hypercube(g.players(), u, out);
      else
        laplacian_up_to_k(g, u, out);
      break;
    case GraphKind::kSingleStep:
      laplacian_single_step(g, u, out);
      break;
  }
  return out;
}

namespace {

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::uint32_t size) : parent(size) {
    std::iota(parent.begin(), parent.end(), 0u);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); }
};

}  // namespace

int connected_components(const LatticeGraph& g) {
  UnionFind uf(g.vertex_count());
  g.for_each_edge([&](Edge e) { uf.unite(e.tail, e.head); });
  int count = 0;
  for (std::uint32_t v = 0; v < g.vertex_count(); ++v)
    if (uf.find(v) == v) ++count;
  return count;
}

namespace {

double norm2(std::span<const double> v) { return std::sqrt(vertex_inner(v, v)); }

void subtract_mean(std::span<double> v) {
  double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  for (double& x : v) x -= mean;
}

struct CgOutcome {
  VertexFunction x;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Conjugate gradient on the singular consistent system L x = b. The kernel
// is the constants, so the right-hand side and every iterate are kept
// mean-free; the caller pins the result afterwards.
CgOutcome conjugate_gradient(const LatticeGraph& g, std::span<const double> b_in, double tol) {
  const std::size_t size = g.vertex_count();
  std::vector<double> b(b_in.begin(), b_in.end());
  subtract_mean(b);

  CgOutcome outcome;
  outcome.x.assign(size, 0.0);
  const double b_norm = norm2(b);
  const double target = tol * std::max(1.0, b_norm);
  std::vector<double> r = b;
  outcome.residual_norm = b_norm;
  if (b_norm <= target) {
    outcome.converged = true;
    return outcome;
  }

  std::vector<double> p = r;
  double rs = vertex_inner(r, r);
  const int max_iterations = 10 * static_cast<int>(size);
  for (int it = 1; it <= max_iterations; ++it) {
    VertexFunction q = laplacian_apply(g, p);
    subtract_mean(q);
    const double pq = vertex_inner(p, q);
    if (!(pq > 0.0)) break;  // breakdown: p fell into the kernel numerically
    const double alpha = rs / pq;
    for (std::size_t i = 0; i < size; ++i) outcome.x[i] += alpha * p[i];
    for (std::size_t i = 0; i < size; ++i) r[i] -= alpha * q[i];
    subtract_mean(r);
    const double rs_next = vertex_inner(r, r);
    outcome.iterations = it;
    outcome.residual_norm = std::sqrt(rs_next);
    if (outcome.residual_norm <= target) {
      outcome.converged = true;
      return outcome;
    }
    const double beta = rs_next / rs;
    rs = rs_next;
    for (std::size_t i = 0; i < size; ++i) p[i] = r[i] + beta * p[i];
  }
  return outcome;
}

void pin_at_empty(VertexFunction& x) {
  const double shift = x[0];
  for (double& v : x) v -= shift;
  x[0] = 0.0;
}

}  // namespace

struct PinnedDenseSolver::Impl {
  Eigen::LLT<Eigen::MatrixXd> llt;
  std::uint32_t size = 0;
};

PinnedDenseSolver::PinnedDenseSolver(const LatticeGraph& g) : impl_(std::make_unique<Impl>()) {
  if (g.players() > kMaxDensePlayers)
    throw std::invalid_argument("dense solver limited to n <= " +
                                std::to_string(kMaxDensePlayers));
  if (!g.connected())
    throw std::invalid_argument("dense solver requires a connected graph, got " + g.describe());
  impl_->size = g.vertex_count();
  const std::uint32_t dim = impl_->size - 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  // Assemble L from the undirected edge support, dropping the empty-set row
  // and column; on a connected graph the pinned matrix is positive definite.
  g.for_each_edge([&](Edge e) {
    if (e.tail > 0) m(e.tail - 1, e.tail - 1) += 1.0;
    if (e.head > 0) m(e.head - 1, e.head - 1) += 1.0;
    if (e.tail > 0 && e.head > 0) {
      m(e.tail - 1, e.head - 1) -= 1.0;
      m(e.head - 1, e.tail - 1) -= 1.0;
    }
  });
  impl_->llt.compute(m);
  if (impl_->llt.info() != Eigen::Success)
    throw std::runtime_error("dense solver: Cholesky factorization failed for " + g.describe());
}

PinnedDenseSolver::~PinnedDenseSolver() = default;
PinnedDenseSolver::PinnedDenseSolver(PinnedDenseSolver&&) noexcept = default;
PinnedDenseSolver& PinnedDenseSolver::operator=(PinnedDenseSolver&&) noexcept = default;

VertexFunction PinnedDenseSolver::solve(std::span<const double> rhs) const {
  if (rhs.size() != impl_->size) throw std::invalid_argument("dense solve: rhs has the wrong size");
  const std::uint32_t dim = impl_->size - 1;
  Eigen::VectorXd b(dim);
  for (std::uint32_t i = 0; i < dim; ++i) b(i) = rhs[i + 1];
  const Eigen::VectorXd sol = impl_->llt.solve(b);
  VertexFunction x(impl_->size, 0.0);
  for (std::uint32_t i = 0; i < dim; ++i) x[i + 1] = sol(i);
  return x;
}

PoissonSolution poisson_solve(const LatticeGraph& g, const LatticeGraph& h,
                              std::span<const double> v, double tol, SolveMethod method) {
  if (h.players() != g.players())
    throw std::invalid_argument("poisson_solve: graphs over different player sets");
  if (!g.connected())
    throw std::invalid_argument("poisson_solve: " + g.describe() +
                                " is disconnected; the pinned solution is not unique");
  if (!g.contains_edges_of(h))
    throw std::invalid_argument("poisson_solve: edges of " + h.describe() +
                                " are not contained in " + g.describe());
  check_sized(g, v, "poisson_solve");
  if (method == SolveMethod::kCg && g.players() > kMaxCgPlayers)
    throw std::invalid_argument("poisson_solve: cg limited to n <= " +
                                std::to_string(kMaxCgPlayers));

  const VertexFunction b = laplacian_apply(h, v);
  PoissonSolution sol;
  sol.method = method;
  if (method == SolveMethod::kDense) {
    sol.x = PinnedDenseSolver(g).solve(b);
    VertexFunction lx = laplacian_apply(g, sol.x);
    for (std::size_t i = 0; i < lx.size(); ++i) lx[i] -= b[i];
    sol.residual_norm = norm2(lx);
    return sol;
  }

  CgOutcome outcome = conjugate_gradient(g, b, tol);
  if (!outcome.converged)
    throw SolverError("poisson_solve: cg did not converge on " + g.describe() +
                          " (best residual " + std::to_string(outcome.residual_norm) + ")",
                      outcome.residual_norm, outcome.iterations);
  sol.x = std::move(outcome.x);
  pin_at_empty(sol.x);
  sol.residual_norm = outcome.residual_norm;
  sol.iterations = outcome.iterations;
  return sol;
}

TuGame component_game(const TuGame& u, Coalition s, int k, double tol, SolveMethod method) {
  if (s.empty()) throw std::invalid_argument("component_game: S must be nonempty");
  if (s.size() > k)
    throw std::invalid_argument("component_game: |S| = " + std::to_string(s.size()) +
                                " exceeds k = " + std::to_string(k));
  const LatticeGraph g = LatticeGraph::up_to(u.players(), k);
  const LatticeGraph h = LatticeGraph::single_step(u.players(), s);
  PoissonSolution sol = poisson_solve(g, h, u.table(), tol, method);
  return TuGame(u.players(), std::move(sol.x));
}

double shoga_via_hodge(const TuGame& u, Coalition s, double tol, SolveMethod method) {
  if (s.empty()) throw std::invalid_argument("shoga_via_hodge: S must be nonempty");
  const LatticeGraph g = LatticeGraph::full(u.players());
  const LatticeGraph h = LatticeGraph::single_step(u.players(), s);
  PoissonSolution sol = poisson_solve(g, h, u.table(), tol, method);
  // the solution traces back to the worth of S; a violation means the solver
  // returned something that is not a solution at all
  double trace = 0.0;
  for (double x : sol.x) trace += x;
  const double trace_dev = std::abs(trace - u.worth(s));
  if (trace_dev > 1e-8 * std::max(1.0, std::abs(u.worth(s))))
    throw SolverError("shoga_via_hodge: solution violates the trace identity (deviation " +
                          std::to_string(trace_dev) + ")",
                      sol.residual_norm, sol.iterations);
  return sol.x.back();
}

double shapley_via_hodge(const TuGame& u, int player, double tol, SolveMethod method) {
  if (player < 1 || player > u.players())
    throw std::invalid_argument("shapley_via_hodge: player out of range");
  const TuGame ui = component_game(u, Coalition::single(player), 1, tol, method);
  return ui.grand_worth();
}

HodgeParts hodge_decompose(const LatticeGraph& g, const EdgeFlow& f, double tol) {
  if (!(f.graph() == g)) throw std::invalid_argument("hodge_decompose: flow lives on another graph");
  if (!g.connected()) throw std::invalid_argument("hodge_decompose: graph must be connected");
  const VertexFunction div = adjoint_apply(f);
  CgOutcome outcome = conjugate_gradient(g, div, tol);
  if (!outcome.converged)
    throw SolverError("hodge_decompose: cg did not converge (best residual " +
                          std::to_string(outcome.residual_norm) + ")",
                      outcome.residual_norm, outcome.iterations);
  pin_at_empty(outcome.x);
  EdgeFlow gradient = differential_apply(g, outcome.x);
  std::vector<double> rest(f.values().begin(), f.values().end());
  for (std::size_t i = 0; i < rest.size(); ++i) rest[i] -= gradient.values()[i];
  return HodgeParts{std::move(gradient), EdgeFlow(g, std::move(rest)), std::move(outcome.x)};
}

namespace {

void check_permutation(std::span<const int> sigma) {
  std::uint32_t seen = 0;
  const int n = static_cast<int>(sigma.size());
  for (int image : sigma) {
    if (image < 1 || image > n || (seen & (1u << (image - 1))))
      throw std::invalid_argument("permutation is not a bijection of {1..n}");
    seen |= 1u << (image - 1);
  }
}

}  // namespace

Coalition permute_coalition(std::span<const int> sigma, Coalition s) {
  check_permutation(sigma);
  std::uint32_t image = 0;
  for (std::uint32_t m = s.mask(); m != 0; m &= m - 1)
    image |= 1u << (sigma[std::countr_zero(m)] - 1);
  return Coalition(image);
}

VertexFunction permutation_pullback(std::span<const int> sigma, std::span<const double> u) {
  check_permutation(sigma);
  const int n = static_cast<int>(sigma.size());
  if (u.size() != (std::size_t{1} << n))
    throw std::invalid_argument("permutation_pullback: table size does not match permutation");
  VertexFunction out(u.size());
  for (std::uint32_t s = 0; s < u.size(); ++s) {
    std::uint32_t image = 0;
    for (std::uint32_t m = s; m != 0; m &= m - 1) image |= 1u << (sigma[std::countr_zero(m)] - 1);
    out[s] = u[image];
  }
  return out;
}

}  // namespace shoga
