#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shoga/game.hpp"
#include "shoga/game_maps.hpp"

namespace shoga {

using PayoffVector = std::vector<double>;

// Per-player weight tables p(i, S) over S ⊆ N∖{i}, each summing to 1.
class ProbabilisticWeights {
public:
  // tables[i][mask] is the weight of predecessor set `mask` for player i+1;
  // entries at masks containing the player are ignored and must be zero.
  ProbabilisticWeights(int n, std::vector<std::vector<double>> tables);

  static ProbabilisticWeights shapley(int n);
  static ProbabilisticWeights banzhaf(int n);
  static ProbabilisticWeights dictator(int n);

  int players() const { return n_; }
  double weight(int player, std::uint32_t coalition_mask) const {
    return tables_[player - 1][coalition_mask];
  }

private:
  int n_;
  std::vector<std::vector<double>> tables_;
};

// phi_i(u) = sum over S ⊆ N∖{i} of s!(n-s-1)!/n! * (u(S+i) - u(S)).
PayoffVector shapley_value(const TuGame& u);
PayoffVector banzhaf_value(const TuGame& u);

PayoffVector probabilistic_value(const ProbabilisticWeights& w, const TuGame& u);

// The complementary form: sum over S ⊆ N∖{i} of p(i, N∖(S+i)) * (u(N∖S) - u(S)).
// Coincides with probabilistic_value whenever p(i, S) = p(i, N∖(S+i)), which
// both the Shapley and the Banzhaf weights satisfy.
PayoffVector complementary_form_value(const ProbabilisticWeights& w, const TuGame& u);

// Per-coalition weight rows q(S, T) over T ⊆ N∖S, each nonempty S summing to 1.
class GeneralizedWeights {
public:
  using Row = std::vector<std::pair<std::uint32_t, double>>;

  // rows[mask] lists (T, weight) pairs for coalition `mask`; rows[0] is unused.
  GeneralizedWeights(int n, std::vector<Row> rows);

  // q(S, empty) = q(S, N∖S) = 1/2 (merging to 1 at S = N).
  static GeneralizedWeights shoga_weights(int n);

  int players() const { return n_; }
  const Row& row(std::uint32_t coalition_mask) const { return rows_[coalition_mask]; }

private:
  int n_;
  std::vector<Row> rows_;
};

// psi_S(u) = sum over T ⊆ N∖S of q(S, T) * (u(T ∪ S) - u(T)); table over all
// masks with the empty coalition pinned at 0.
std::vector<double> generalized_value(const GeneralizedWeights& q, const TuGame& u);

struct ConsistencyWitness {
  TuGame game;
  int player = 0;
  double residual = 0.0;
};

struct ConsistencyReport {
  std::string value_name;
  std::string map_name;
  bool pass = true;
  double max_residual = 0.0;
  std::optional<ConsistencyWitness> witness;
};

// Verifies psi(map(u)) = psi(u) per player over the suite. value_name is
// "shapley" or "banzhaf".
ConsistencyReport associated_consistency_check(const std::string& value_name, const GameMap& map,
                                               std::span<const TuGame> suite, double tol = 1e-10);

// Shapley values of the two-player quotient game on {S, N∖S}; the components
// equal shoga(u) at S and N∖S and sum to u(N). S must be a proper nonempty
// coalition.
std::pair<double, double> shoga_via_quotient(const TuGame& u, Coalition s);

}  // namespace shoga
