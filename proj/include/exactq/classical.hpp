// Copyright 2026 The exactq Authors
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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "exactq/oracle.hpp"

namespace exactq {

/// f(x) = values[|x|], where |x| is the number of ones in x.
struct SymmetricFunction {
    std::size_t n = 0;
    std::vector<std::uint8_t> values;

    SymmetricFunction(std::size_t n, std::vector<std::uint8_t> values) : n(n), values(std::move(values)) {
        if (this->values.size() != n + 1) {
            throw std::invalid_argument("symmetric function of arity " + std::to_string(n) + " needs " +
                                        std::to_string(n + 1) + " values");
        }
    }

    int at_weight(std::size_t ones) const { return values.at(ones); }
    int operator()(const Bits& x) const {
        if (x.size() != n) {
            throw std::invalid_argument("input length does not match arity");
        }
        return at_weight(count_ones(x));
    }
    bool is_constant() const {
        for (auto v : values) {
            if (v != values[0]) {
                return false;
            }
        }
        return true;
    }

    /// 1 iff exactly k inputs are 1.
    static SymmetricFunction exact(std::size_t k, std::size_t n) {
        std::vector<std::uint8_t> v(n + 1, 0);
        if (k <= n) {
            v[k] = 1;
        }
        return {n, std::move(v)};
    }
    /// 1 iff at least k inputs are 1.
    static SymmetricFunction threshold(std::size_t k, std::size_t n) {
        std::vector<std::uint8_t> v(n + 1, 0);
        for (std::size_t w = k; w <= n; ++w) {
            v[w] = 1;
        }
        return {n, std::move(v)};
    }
    /// MAJ_{2k+1} = Th_{k+1}^{2k+1}.
    static SymmetricFunction majority(std::size_t k) { return threshold(k + 1, 2 * k + 1); }
    /// 1 iff exactly k or exactly n-k inputs are 1.
    static SymmetricFunction exact_pair(std::size_t k, std::size_t n) {
        std::vector<std::uint8_t> v(n + 1, 0);
        if (k <= n) {
            v[k] = 1;
            v[n - k] = 1;
        }
        return {n, std::move(v)};
    }
    static SymmetricFunction or_fn(std::size_t n) { return threshold(1, n); }
};

/// Deterministic decision-tree complexity of a symmetric function.
///
/// After a zeros and b ones have been seen the remaining weight lies in
/// [b, n - a], and which unqueried bit is read next does not matter. So
/// D = dp(0, 0) with dp(a, b) = 0 if values are constant on [b, n - a] and
/// 1 + max(dp(a + 1, b), dp(a, b + 1)) otherwise.
inline std::size_t deterministic_complexity(const SymmetricFunction& f) {
    const std::size_t n = f.n;
    // memo[a][b], valid for a + b <= n
    std::vector<std::vector<std::optional<std::size_t>>> memo(n + 1, std::vector<std::optional<std::size_t>>(n + 1));
    auto constant_on = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t w = lo + 1; w <= hi; ++w) {
            if (f.values[w] != f.values[lo]) {
                return false;
            }
        }
        return true;
    };
    auto dp = [&](auto&& self, std::size_t a, std::size_t b) -> std::size_t {
        if (memo[a][b]) {
            return *memo[a][b];
        }
        std::size_t r = 0;
        if (!constant_on(b, n - a)) {
            r = 1 + std::max(self(self, a + 1, b), self(self, a, b + 1));
        }
        memo[a][b] = r;
        return r;
    };
    return dp(dp, 0, 0);
}

/// Checks EXACT_k^n(1^k, y) == NOT OR(y) for every y in {0,1}^{n-k}.
/// Requires k <= n/2.
inline bool exact_lower_bound_witness(std::size_t k, std::size_t n) {
    if (2 * k > n) {
        throw std::invalid_argument("EXACT witness needs k <= n/2");
    }
    if (n - k >= 63) {
        throw std::invalid_argument("EXACT witness enumeration too large");
    }
    const auto f = SymmetricFunction::exact(k, n);
    const std::size_t free_bits = n - k;
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << free_bits); ++y) {
        Bits x(k, 1);
        bool any = false;
        for (std::size_t b = 0; b < free_bits; ++b) {
            const auto bit = static_cast<std::uint8_t>((y >> b) & 1);
            any = any || bit;
            x.push_back(bit);
        }
        if (f(x) != (any ? 0 : 1)) {
            return false;
        }
    }
    return true;
}

/// Checks Th_k^n(1^{k-1}, y) == OR(y) for every y in {0,1}^{n-k+1}.
/// Requires 1 <= k <= n/2.
inline bool threshold_lower_bound_witness(std::size_t k, std::size_t n) {
    if (k < 1 || 2 * k > n) {
        throw std::invalid_argument("THRESHOLD witness needs 1 <= k <= n/2");
    }
    if (n - k + 1 >= 63) {
        throw std::invalid_argument("THRESHOLD witness enumeration too large");
    }
    const auto f = SymmetricFunction::threshold(k, n);
    const std::size_t free_bits = n - k + 1;
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << free_bits); ++y) {
        Bits x(k - 1, 1);
        bool any = false;
        for (std::size_t b = 0; b < free_bits; ++b) {
            const auto bit = static_cast<std::uint8_t>((y >> b) & 1);
            any = any || bit;
            x.push_back(bit);
        }
        if (f(x) != (any ? 1 : 0)) {
            return false;
        }
    }
    return true;
}

}  // namespace exactq
