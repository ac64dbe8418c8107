#pragma once

#include <cstddef>

#include "vschro/kernels.hpp"

namespace vschro::kernels::detail {

// Pairwise sum of term(first) .. term(first + n - 1).
template <class T, class Term>
T pairwise(std::size_t first, std::size_t n, const Term& term) {
  if (n <= 16) {
    T s{};
    for (std::size_t i = 0; i < n; ++i) s += term(first + i);
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise<T>(first, half, term) + pairwise<T>(first + half, n - half, term);
}

inline std::size_t chunk_count(std::size_t n) {
  return (n + kReductionChunk - 1) / kReductionChunk;
}

template <class T, class Term>
T chunk_partial(std::size_t chunk, std::size_t n, const Term& term) {
  const std::size_t first = chunk * kReductionChunk;
  const std::size_t len = (first + kReductionChunk <= n) ? kReductionChunk : n - first;
  return pairwise<T>(first, len, term);
}

}  // namespace vschro::kernels::detail
