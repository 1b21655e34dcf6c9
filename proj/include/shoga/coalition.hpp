#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shoga {

inline constexpr int kMaxPlayers = 20;

// A coalition over the player set {1..n}. Player i occupies bit i-1, so the
// mask doubles as the index into length-2^n worth tables.
class Coalition {
public:
  constexpr Coalition() = default;
  constexpr explicit Coalition(std::uint32_t mask) : mask_(mask) {}

  static constexpr Coalition full(int n) {
    return Coalition(n <= 0 ? 0u : ((1u << n) - 1u));
  }
  static constexpr Coalition single(int player) {
    return Coalition(1u << (player - 1));
  }
  static Coalition of(std::initializer_list<int> players) {
    std::uint32_t m = 0;
    for (int p : players) m |= 1u << (p - 1);
    return Coalition(m);
  }

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr bool contains(int player) const { return (mask_ >> (player - 1)) & 1u; }
  constexpr bool subset_of(Coalition rhs) const { return (mask_ & ~rhs.mask_) == 0; }
  constexpr bool intersects(Coalition rhs) const { return (mask_ & rhs.mask_) != 0; }
  constexpr Coalition complement_in(int n) const {
    return Coalition(full(n).mask_ ^ mask_);
  }
  constexpr Coalition minus(Coalition rhs) const { return Coalition(mask_ & ~rhs.mask_); }

  friend constexpr Coalition operator|(Coalition a, Coalition b) {
    return Coalition(a.mask_ | b.mask_);
  }
  friend constexpr Coalition operator&(Coalition a, Coalition b) {
    return Coalition(a.mask_ & b.mask_);
  }
  friend constexpr bool operator==(Coalition a, Coalition b) = default;

  // Members in ascending player order.
  std::vector<int> members() const {
    std::vector<int> out;
    for (std::uint32_t m = mask_; m != 0; m &= m - 1)
      out.push_back(std::countr_zero(m) + 1);
    return out;
  }

  // "1,3" notation; the empty coalition renders as "".
  std::string to_string() const {
    std::string out;
    for (int p : members()) {
      if (!out.empty()) out += ',';
      out += std::to_string(p);
    }
    return out;
  }

  // Strict parse of the "1,3" notation: 1-based indices, strictly ascending,
  // all within {1..n}. "" parses to the empty coalition.
  static Coalition parse(std::string_view text, int n) {
    if (text.empty()) return Coalition();
    std::uint32_t m = 0;
    int prev = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t comma = text.find(',', pos);
      std::string_view tok = text.substr(pos, comma == std::string_view::npos
                                                  ? std::string_view::npos
                                                  : comma - pos);
      int player = 0;
      if (tok.empty()) throw std::invalid_argument("empty player index in coalition key");
      for (char c : tok) {
        if (c < '0' || c > '9')
          throw std::invalid_argument("bad character in coalition key: '" + std::string(text) + "'");
        player = player * 10 + (c - '0');
        if (player > kMaxPlayers)
          throw std::invalid_argument("player index out of range in coalition key: '" + std::string(text) + "'");
      }
      if (player < 1 || player > n)
        throw std::invalid_argument("player index " + std::to_string(player) +
                                    " outside {1.." + std::to_string(n) + "}");
      if (player <= prev)
        throw std::invalid_argument("coalition key not strictly ascending: '" + std::string(text) + "'");
      prev = player;
      m |= 1u << (player - 1);
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    return Coalition(m);
  }

private:
  std::uint32_t mask_ = 0;
};

// Enumerates every submask of `mask` in increasing numeric order, 0 and
// `mask` included.
template <class F>
void for_each_submask(std::uint32_t mask, F&& fn) {
  std::uint32_t s = 0;
  while (true) {
    fn(s);
    if (s == mask) break;
    s = (s - mask) & mask;
  }
}

}  // namespace shoga
