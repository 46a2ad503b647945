// Copyright 2026 The spinknit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Combinatorial number system over fixed-weight bitmasks.
//
// A k-subset {c_1 < c_2 < ... < c_k} of {0, ..., n-1} is ranked as
//
//     rank = C(c_1, 1) + C(c_2, 2) + ... + C(c_k, k)
//
// which orders subsets colexicographically. For bitmasks this coincides with
// increasing integer value, so a sector can be walked in rank order with the
// next-permutation bit trick, and the rank of a subset does not depend on n.

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>

namespace spinknit {

using Mask = std::uint64_t;

inline constexpr int kMaxSites = 63;

namespace detail {

struct BinomialTable {
    std::array<std::array<std::uint64_t, kMaxSites + 2>, kMaxSites + 2> values{};

    constexpr BinomialTable() {
        for (int n = 0; n <= kMaxSites + 1; ++n) {
            values[n][0] = 1;
            for (int k = 1; k <= n; ++k) {
                values[n][k] = values[n - 1][k - 1] + (k <= n - 1 ? values[n - 1][k] : 0);
            }
        }
    }
};

inline constexpr BinomialTable kBinomials{};

}  // namespace detail

/// C(n, k); zero outside 0 <= k <= n. Exact for n <= 64 where it fits 64 bits.
constexpr std::uint64_t binomial(int n, int k) {
    if (n < 0 || k < 0 || k > n || n > kMaxSites + 1) return 0;
    return detail::kBinomials.values[n][k];
}

constexpr std::size_t rank_subset(Mask mask) {
    std::size_t rank = 0;
    int i = 1;
    while (mask != 0) {
        const int c = std::countr_zero(mask);
        rank += binomial(c, i);
        mask &= mask - 1;
        ++i;
    }
    return rank;
}

/// Inverse of rank_subset for a k-subset; the caller guarantees rank < C(n, k).
constexpr Mask unrank_subset(int k, std::size_t rank) {
    Mask mask = 0;
    for (int i = k; i >= 1; --i) {
        // largest c with C(c, i) <= rank
        int c = i - 1;
        while (binomial(c + 1, i) <= rank) ++c;
        rank -= binomial(c, i);
        mask |= Mask{1} << c;
    }
    return mask;
}

/// Next mask of the same popcount in increasing order (Gosper's hack).
constexpr Mask next_subset(Mask mask) {
    if (mask == 0) return 0;
    const Mask lowest = mask & (~mask + 1);
    const Mask ripple = mask + lowest;
    return ripple | (((mask ^ ripple) >> 2) / lowest);
}

constexpr int popcount(Mask mask) { return std::popcount(mask); }

}  // namespace spinknit
