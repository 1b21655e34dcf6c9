#include "shoga/game.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "shoga/subset_transforms.hpp"

namespace shoga {

namespace {

void check_player_count(int n) {
  if (n < 1 || n > kMaxPlayers)
    throw std::invalid_argument("player count must be in [1, " +
                                std::to_string(kMaxPlayers) + "], got " + std::to_string(n));
}

}  // namespace

TuGame::TuGame(int n) : n_(n) {
  check_player_count(n);
  worth_.assign(std::size_t{1} << n, 0.0);
}

TuGame::TuGame(int n, std::vector<double> worth) : n_(n), worth_(std::move(worth)) {
  check_player_count(n);
  if (worth_.size() != (std::size_t{1} << n))
    throw std::invalid_argument("worth table has " + std::to_string(worth_.size()) +
                                " entries, expected 2^" + std::to_string(n));
  if (worth_[0] != 0.0)
    throw std::invalid_argument("worth(empty) must be 0, got " + std::to_string(worth_[0]));
}

TuGame linear_combination(double a, const TuGame& u, double b, const TuGame& v) {
  if (u.players() != v.players())
    throw std::invalid_argument("linear_combination: mismatched player counts");
  std::vector<double> w(u.table_size());
  for (std::uint32_t s = 0; s < w.size(); ++s) w[s] = a * u.worth(s) + b * v.worth(s);
  w[0] = 0.0;
  return TuGame(u.players(), std::move(w));
}

Partition Partition::of(int n, std::vector<Coalition> blocks) {
  check_player_count(n);
  std::uint32_t seen = 0;
  for (Coalition b : blocks) {
    if (b.empty()) throw std::invalid_argument("partition block is empty");
    if (!b.subset_of(Coalition::full(n)))
      throw std::invalid_argument("partition block outside the player set");
    if (seen & b.mask()) throw std::invalid_argument("partition blocks overlap");
    seen |= b.mask();
  }
  if (seen != Coalition::full(n).mask())
    throw std::invalid_argument("partition does not cover all players");
  std::sort(blocks.begin(), blocks.end(), [](Coalition a, Coalition b) {
    return (a.mask() & -a.mask()) < (b.mask() & -b.mask());
  });
  return Partition(n, std::move(blocks));
}

TuGame unanimity_game(int n, Coalition s) {
  if (s.empty()) throw std::invalid_argument("unanimity_game: S must be nonempty");
  if (!s.subset_of(Coalition::full(n)))
    throw std::invalid_argument("unanimity_game: S outside the player set");
  std::vector<double> w(std::size_t{1} << n, 0.0);
  for (std::uint32_t t = 0; t < w.size(); ++t)
    if ((t & s.mask()) == s.mask()) w[t] = 1.0;
  return TuGame(n, std::move(w));
}

std::vector<double> unanimity_coordinates(const TuGame& u) {
  std::vector<double> coord(u.table().begin(), u.table().end());
  subset_sum_inv_in_place(coord, u.players());
  return coord;
}

bool is_superadditive(const TuGame& u, double tol) {
  const std::uint32_t full = u.grand().mask();
  for (std::uint32_t s = 1; s <= full; ++s) {
    const std::uint32_t comp = full ^ s;
    bool ok = true;
    for_each_submask(comp, [&](std::uint32_t t) {
      if (t == 0) return;
      if (u.worth(s | t) < u.worth(s) + u.worth(t) - tol) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

namespace {

// Recursively assigns players to blocks (restricted-growth enumeration);
// returns false as soon as one partition violates u(N) >= sum of block worths.
bool cohesive_scan(const TuGame& u, std::vector<std::uint32_t>& blocks, int player, double tol) {
  if (player > u.players()) {
    double total = 0.0;
    for (std::uint32_t b : blocks) total += u.worth(b);
    return u.grand_worth() >= total - tol;
  }
  const std::uint32_t bit = 1u << (player - 1);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    blocks[i] |= bit;
    if (!cohesive_scan(u, blocks, player + 1, tol)) return false;
    blocks[i] &= ~bit;
  }
  blocks.push_back(bit);
  bool ok = cohesive_scan(u, blocks, player + 1, tol);
  blocks.pop_back();
  return ok;
}

}  // namespace

bool is_cohesive(const TuGame& u, double tol) {
  if (u.players() > 12)
    throw std::invalid_argument("is_cohesive: exhaustive partition scan limited to n <= 12");
  std::vector<std::uint32_t> blocks;
  return cohesive_scan(u, blocks, 1, tol);
}

bool is_constant_sum(const TuGame& u, double tol) {
  const std::uint32_t full = u.grand().mask();
  for (std::uint32_t s = 0; s <= full; ++s)
    if (std::abs(u.worth(s) + u.worth(full ^ s) - u.grand_worth()) > tol) return false;
  return true;
}

bool is_null_coalition(const TuGame& u, Coalition s, double tol) {
  const std::uint32_t comp = s.complement_in(u.players()).mask();
  bool ok = true;
  for_each_submask(comp, [&](std::uint32_t t) {
    if (std::abs(u.worth(t | s.mask()) - u.worth(t)) > tol) ok = false;
  });
  return ok;
}

bool is_bilateral_coalition(const TuGame& u, Coalition s, double tol) {
  return std::abs(u.worth(s) - u.worth(s.complement_in(u.players()))) <= tol;
}

TuGame subgame(const TuGame& u, Coalition s) {
  if (s.empty()) throw std::invalid_argument("subgame: S must be nonempty");
  if (!s.subset_of(u.grand())) throw std::invalid_argument("subgame: S outside the player set");
  const std::vector<int> members = s.members();
  const int m = static_cast<int>(members.size());
  std::vector<double> w(std::size_t{1} << m, 0.0);
  for (std::uint32_t t = 0; t < w.size(); ++t) {
    std::uint32_t embedded = 0;
    for (int j = 0; j < m; ++j)
      if (t & (1u << j)) embedded |= 1u << (members[j] - 1);
    w[t] = u.worth(embedded);
  }
  return TuGame(m, std::move(w));
}

TuGame quotient_game(const TuGame& u, const Partition& p) {
  if (p.players() != u.players())
    throw std::invalid_argument("quotient_game: partition is over a different player set");
  const int k = static_cast<int>(p.size());
  std::vector<double> w(std::size_t{1} << k, 0.0);
  for (std::uint32_t m = 0; m < w.size(); ++m) {
    std::uint32_t merged = 0;
    for (int j = 0; j < k; ++j)
      if (m & (1u << j)) merged |= p.blocks()[j].mask();
    w[m] = u.worth(merged);
  }
  return TuGame(k, std::move(w));
}

TuGame glove_game() {
  std::vector<double> w(8, 0.0);
  w[Coalition::of({1, 2}).mask()] = 1.0;
  w[Coalition::of({1, 3}).mask()] = 1.0;
  w[Coalition::of({1, 2, 3}).mask()] = 1.0;
  return TuGame(3, std::move(w));
}

TuGame bankruptcy_game(double estate, std::span<const double> claims) {
  const int n = static_cast<int>(claims.size());
  check_player_count(n);
  if (estate < 0.0) throw std::invalid_argument("bankruptcy_game: estate must be nonnegative");
  for (double c : claims)
    if (c <= 0.0) throw std::invalid_argument("bankruptcy_game: claims must be positive");
  std::vector<double> w(std::size_t{1} << n, 0.0);
  for (std::uint32_t s = 1; s < w.size(); ++s) {
    double outside = 0.0;
    for (int i = 0; i < n; ++i)
      if (!(s & (1u << i))) outside += claims[i];
    w[s] = std::max(0.0, estate - outside);
  }
  return TuGame(n, std::move(w));
}

TuGame airport_game(std::span<const double> costs) {
  const int n = static_cast<int>(costs.size());
  check_player_count(n);
  for (double c : costs)
    if (c <= 0.0) throw std::invalid_argument("airport_game: costs must be positive");
  std::vector<double> w(std::size_t{1} << n, 0.0);
  for (std::uint32_t s = 1; s < w.size(); ++s) {
    double longest = 0.0;
    for (int i = 0; i < n; ++i)
      if (s & (1u << i)) longest = std::max(longest, costs[i]);
    w[s] = -longest;
  }
  return TuGame(n, std::move(w));
}

TuGame majority_game(int n, int quota) {
  check_player_count(n);
  if (quota < 1 || quota > n)
    throw std::invalid_argument("majority_game: quota must be in [1, n]");
  std::vector<double> w(std::size_t{1} << n, 0.0);
  for (std::uint32_t s = 1; s < w.size(); ++s)
    if (std::popcount(s) >= quota) w[s] = 1.0;
  return TuGame(n, std::move(w));
}

TuGame random_game(int n, std::uint64_t seed) {
  check_player_count(n);
  std::mt19937_64 eng(seed);
  std::vector<double> w(std::size_t{1} << n, 0.0);
  for (std::uint32_t s = 1; s < w.size(); ++s) {
    // Map the top 53 bits to [0,1); implementation-independent unlike
    // std::uniform_real_distribution.
    const double unit = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    w[s] = 2.0 * unit - 1.0;
  }
  return TuGame(n, std::move(w));
}

}  // namespace shoga
