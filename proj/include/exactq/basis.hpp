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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace exactq {

enum class BasisKind { Blank, Single, Pair };

/// Label of one basis state of a recursion level with `s` active inputs.
///
/// Blank is the workspace state |0>, Single(i) is the state from which input i
/// is queried, and Pair(i, j) with i < j records "inputs i and j differ".
/// Indices are 1-based and local to the level.
struct BasisIndex {
    BasisKind kind = BasisKind::Blank;
    std::size_t i = 0;
    std::size_t j = 0;

    static constexpr BasisIndex blank() { return {}; }
    static constexpr BasisIndex single(std::size_t i) { return {BasisKind::Single, i, 0}; }
    static constexpr BasisIndex pair(std::size_t i, std::size_t j) { return {BasisKind::Pair, i, j}; }

    constexpr bool operator==(const BasisIndex&) const = default;

    bool valid_for(std::size_t level_size) const {
        switch (kind) {
            case BasisKind::Blank:
                return true;
            case BasisKind::Single:
                return i >= 1 && i <= level_size;
            case BasisKind::Pair:
                return i >= 1 && i < j && j <= level_size;
        }
        return false;
    }

    std::string str() const {
        switch (kind) {
            case BasisKind::Blank:
                return "|0>";
            case BasisKind::Single:
                return "|" + std::to_string(i) + ">";
            case BasisKind::Pair:
                return "|" + std::to_string(i) + "," + std::to_string(j) + ">";
        }
        return "?";
    }
};

/// Number of basis states for a level of size s: 1 + s + s(s-1)/2.
constexpr std::size_t basis_size(std::size_t level_size) {
    return 1 + level_size + (level_size == 0 ? 0 : level_size * (level_size - 1) / 2);
}

/// Position of `b` in the canonical order: Blank, Singles ascending, Pairs
/// lexicographic.
inline std::size_t canonical_index(const BasisIndex& b, std::size_t level_size) {
    if (!b.valid_for(level_size)) {
        throw std::out_of_range("basis index " + b.str() + " invalid for level size " + std::to_string(level_size));
    }
    switch (b.kind) {
        case BasisKind::Blank:
            return 0;
        case BasisKind::Single:
            return b.i;
        case BasisKind::Pair: {
            std::size_t before = (b.i - 1) * level_size - (b.i - 1) * b.i / 2;
            return 1 + level_size + before + (b.j - b.i - 1);
        }
    }
    return 0;
}

/// Inverse of canonical_index.
inline BasisIndex basis_at(std::size_t position, std::size_t level_size) {
    if (position >= basis_size(level_size)) {
        throw std::out_of_range("basis position " + std::to_string(position) + " out of range");
    }
    if (position == 0) {
        return BasisIndex::blank();
    }
    if (position <= level_size) {
        return BasisIndex::single(position);
    }
    std::size_t rest = position - 1 - level_size;
    std::size_t i = 1;
    while (rest >= level_size - i) {
        rest -= level_size - i;
        ++i;
    }
    return BasisIndex::pair(i, i + 1 + rest);
}

}  // namespace exactq
