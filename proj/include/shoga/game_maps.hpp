#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shoga/game.hpp"

namespace shoga {

// The Shapley-Hodge associated game: C_u(S) = (u(N) - u(N∖S) + u(S)) / 2.
TuGame shoga_game(const TuGame& u);

// C'_u = C_u / 2^(n-1); the coalition-efficient rescaling.
TuGame shoga_scaled(const TuGame& u);

// u*(S) = u(N) - u(N∖S).
TuGame dual(const TuGame& u);
TuGame anti_dual(const TuGame& u);

// u_z(S) = u(S) - sum of u({i}) over i in S.
TuGame zero_normalization(const TuGame& u);

// Harsanyi dividends: kappa_u(S) = sum over T ⊆ S of (-1)^(|S|-|T|) u(T).
TuGame mobius(const TuGame& u);

// omega_u(S) = sum over T ⊆ S of u(T); inverse of mobius.
TuGame synergy(const TuGame& u);

// eta^t_u(S) = u(S) + t * sum over j outside S of (u(S+j) - u(S) - u({j})).
TuGame hamiache(const TuGame& u, double t);

// Scalar potential P(N, u) = sum over nonempty S of (s-1)!(n-s)!/n! * u(S).
double potential(const TuGame& u);

// rho_u(S) = P(S, u restricted to S); rho_u(N) - rho_u(N∖{i}) is the Shapley
// value of player i.
TuGame potential_map(const TuGame& u);

// True iff u(A) = u(N∖A) for every A, i.e. u lies in the kernel of C.
bool kernel_membership(const TuGame& u, double tol = kExactTol);

struct GameMap {
  std::string name;
  std::function<TuGame(const TuGame&)> apply;
};

// Resolves "shoga", "shoga-scaled", "dual", "anti-dual", "zero-norm",
// "mobius", "synergy", "hamiache:<t>", "potential".
GameMap make_game_map(const std::string& name);
std::vector<std::string> game_map_names();

enum class Axiom { kAvEff, kEff, kNll, kBlt, kCs, kLin };

const char* axiom_name(Axiom a);
std::optional<Axiom> parse_axiom(const std::string& name);

struct AxiomWitness {
  TuGame game;
  std::optional<TuGame> second;  // LIN partner game
  double a = 0.0, b = 0.0;       // LIN scalars
  Coalition coalition;
  double residual = 0.0;
};

struct AxiomReport {
  Axiom axiom;
  bool pass = true;
  double max_residual = 0.0;
  std::optional<AxiomWitness> witness;
};

// Falsification over a finite suite; all games must share one player count.
// LIN draws 32 (a, b, u, v) combinations from the suite with a fixed seed.
AxiomReport check_axiom(const GameMap& map, Axiom axiom, std::span<const TuGame> suite,
                        double tol = kSolverTol, std::uint64_t lin_seed = 2024);

struct BasisCheckReport {
  int n = 0;
  std::size_t cases_checked = 0;
  std::size_t failures = 0;
  bool pass() const { return failures == 0; }
};

// Confirms the three uniqueness-proof cases on every unanimity game:
// shoga_game(theta_S)(T) is 0 when T∩S is empty, 1 when S ⊆ T, 1/2 otherwise.
// Comparisons are exact.
BasisCheckReport verify_uniqueness_on_basis(int n);

}  // namespace shoga
