#pragma once

#include <cstddef>
#include <span>

namespace wigstat {

// Pairwise summation with a split point that depends only on the length, so
// the result is reproducible bit-for-bit for a given input vector.
template <typename T>
T pairwise_sum(std::span<const T> values) {
  constexpr std::size_t kLeaf = 32;
  if (values.size() <= kLeaf) {
    T acc{};
    for (const T& v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace wigstat
