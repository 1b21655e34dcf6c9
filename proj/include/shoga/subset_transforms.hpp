#pragma once

#include <cstdint>
#include <span>

namespace shoga {

// Fast zeta transform: f[S] <- sum over T ⊆ S of f[T]. O(n 2^n).
inline void subset_sum_in_place(std::span<double> f, int n) {
  for (int d = 0; d < n; ++d)
    for (std::uint32_t s = 0; s < f.size(); ++s)
      if (s & (1u << d)) f[s] += f[s ^ (1u << d)];
}

// Inverse zeta (Moebius) transform.
inline void subset_sum_inv_in_place(std::span<double> f, int n) {
  for (int d = 0; d < n; ++d)
    for (std::uint32_t s = 0; s < f.size(); ++s)
      if (s & (1u << d)) f[s] -= f[s ^ (1u << d)];
}

// Superset variant: f[S] <- sum over T ⊇ S of f[T].
inline void superset_sum_in_place(std::span<double> f, int n) {
  for (int d = 0; d < n; ++d)
    for (std::uint32_t s = 0; s < f.size(); ++s)
      if (!(s & (1u << d))) f[s] += f[s | (1u << d)];
}

}  // namespace shoga
