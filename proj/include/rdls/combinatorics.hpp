#pragma once

#include <cstdint>
#include <vector>

#include "rdls/errors.hpp"

namespace rdls {

// Exact binomial coefficient; throws on uint64 overflow instead of wrapping.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        const std::uint64_t factor = n - k + i;
        std::uint64_t prod;
        if (__builtin_mul_overflow(result, factor, &prod))
            throw InvalidInputError("binomial: coefficient overflows 64 bits");
        result = prod / i;  // exact: i! divides any product of i consecutive integers
    }
    return result;
}

// Visits all k-subsets of {0..n-1} in lexicographic order. The visitor takes
// const std::vector<int>& and returns bool; returning false stops early.
// Returns true iff the enumeration ran to completion.
template <class Fn>
bool for_each_combination(int n, int k, Fn&& fn) {
    if (k < 0 || n < 0 || k > n) throw InvalidInputError("for_each_combination: bad n/k");
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    if (k == 0) return fn(idx);
    while (true) {
        if (!fn(const_cast<const std::vector<int>&>(idx))) return false;
        // advance: rightmost index that can still move right
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) return true;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

}  // namespace rdls
