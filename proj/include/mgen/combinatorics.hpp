#pragma once

#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

namespace mgen {

/// Visits every k-subset of {0, ..., n-1} as an increasing index list, in
/// lexicographic order. The visitor returns false to stop early; the return
/// value is false iff the enumeration was stopped.
template <typename Visitor>
bool for_each_combination(std::size_t n, std::size_t k, Visitor&& visit) {
  if (k > n) return true;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    if (!visit(std::span<const std::size_t>(idx))) return false;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Visits every non-decreasing k-tuple over {0, ..., n-1} (multisets).
template <typename Visitor>
bool for_each_multicombination(std::size_t n, std::size_t k, Visitor&& visit) {
  if (n == 0) return k == 0 ? visit(std::span<const std::size_t>()) : true;
  std::vector<std::size_t> idx(k, 0);
  while (true) {
    if (!visit(std::span<const std::size_t>(idx))) return false;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - 1) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[i - 1];
  }
}

}  // namespace mgen
