#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "shoga/coalition.hpp"

namespace shoga {

// Absolute tolerance for identities that hold in exact arithmetic.
inline constexpr double kExactTol = 1e-12;
// Absolute tolerance for solver-derived quantities.
inline constexpr double kSolverTol = 1e-9;

// A TU-game on {1..n}: the characteristic function as a dense length-2^n
// table indexed by coalition mask, with worth(empty) = 0.
class TuGame {
public:
  explicit TuGame(int n);
  TuGame(int n, std::vector<double> worth);

  int players() const { return n_; }
  std::uint32_t table_size() const { return 1u << n_; }
  Coalition grand() const { return Coalition::full(n_); }

  double worth(Coalition s) const { return worth_[s.mask()]; }
  double worth(std::uint32_t mask) const { return worth_[mask]; }
  double grand_worth() const { return worth_.back(); }
  std::span<const double> table() const { return worth_; }

  friend bool operator==(const TuGame& a, const TuGame& b) {
    return a.n_ == b.n_ && a.worth_ == b.worth_;
  }

private:
  int n_;
  std::vector<double> worth_;
};

TuGame linear_combination(double a, const TuGame& u, double b, const TuGame& v);

// A partition of {1..n} into pairwise-disjoint nonempty blocks, stored in
// ascending order of each block's smallest member.
class Partition {
public:
  static Partition of(int n, std::vector<Coalition> blocks);

  int players() const { return n_; }
  const std::vector<Coalition>& blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }

private:
  Partition(int n, std::vector<Coalition> blocks) : n_(n), blocks_(std::move(blocks)) {}
  int n_;
  std::vector<Coalition> blocks_;
};

// theta_S: worth 1 exactly on supersets of S. S must be nonempty.
TuGame unanimity_game(int n, Coalition s);

// Coordinates of u in the unanimity basis {theta_S}; entry per mask, with
// the empty coalition pinned at 0. These are the Harsanyi dividends.
std::vector<double> unanimity_coordinates(const TuGame& u);

bool is_superadditive(const TuGame& u, double tol = kExactTol);

// Exhaustive set-partition check; rejects n > 12.
bool is_cohesive(const TuGame& u, double tol = kExactTol);

bool is_constant_sum(const TuGame& u, double tol = kExactTol);

// S is null when u(S ∪ T) = u(T) for every T ⊆ N∖S, T = empty included
// (which forces u(S) = 0).
bool is_null_coalition(const TuGame& u, Coalition s, double tol = kExactTol);

bool is_bilateral_coalition(const TuGame& u, Coalition s, double tol = kExactTol);

// Restriction of u to S, with the players of S relabeled 1..|S| in
// increasing original index. S must be nonempty.
TuGame subgame(const TuGame& u, Coalition s);

// The game induced on the blocks of the partition, treated as players in
// block order.
TuGame quotient_game(const TuGame& u, const Partition& p);

// Built-in example games.
TuGame glove_game();
TuGame bankruptcy_game(double estate, std::span<const double> claims);
TuGame airport_game(std::span<const double> costs);
TuGame majority_game(int n, int quota);
// Worths drawn uniform on [-1, 1], worth(empty) = 0. Deterministic per seed.
TuGame random_game(int n, std::uint64_t seed);

}  // namespace shoga
