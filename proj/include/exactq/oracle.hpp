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
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "exactq/state.hpp"

namespace exactq {

using Bits = std::vector<std::uint8_t>;

/// Parses a string of '0'/'1' characters; the leftmost character is x_1.
inline Bits parse_bits(std::string_view text) {
    Bits bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("bit string may only contain '0' and '1', got '" + std::string(text) + "'");
        }
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return bits;
}

inline std::string format_bits(const Bits& bits) {
    std::string s;
    for (auto b : bits) {
        s.push_back(b ? '1' : '0');
    }
    return s;
}

inline std::size_t count_ones(const Bits& bits) { return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1)); }

/// The real input followed by constant padding, the positions still in play
/// at the current recursion level, and the number of queries made so far.
/// Global positions are 1-based into real ++ pad.
class PaddedInput {
   public:
    PaddedInput() = default;

    explicit PaddedInput(Bits real, Bits pad = {}) : real_(std::move(real)), pad_(std::move(pad)) {
        active_.resize(real_.size() + pad_.size());
        for (std::size_t g = 0; g < active_.size(); ++g) {
            active_[g] = g + 1;
        }
    }

    PaddedInput(Bits real, Bits pad, std::vector<std::size_t> active)
        : real_(std::move(real)), pad_(std::move(pad)), active_(std::move(active)) {
        std::vector<char> seen(total_size() + 1, 0);
        for (auto g : active_) {
            if (g < 1 || g > total_size()) {
                throw std::out_of_range("active position " + std::to_string(g) + " out of range");
            }
            if (seen[g]) {
                throw std::invalid_argument("active position " + std::to_string(g) + " listed twice");
            }
            seen[g] = 1;
        }
    }

    const Bits& real_bits() const { return real_; }
    const Bits& pad_bits() const { return pad_; }
    const std::vector<std::size_t>& active() const { return active_; }
    std::size_t level_size() const { return active_.size(); }
    std::size_t total_size() const { return real_.size() + pad_.size(); }
    std::size_t queries_used() const { return queries_; }

    int global_bit(std::size_t global) const {
        if (global < 1 || global > total_size()) {
            throw std::out_of_range("global position " + std::to_string(global) + " out of range");
        }
        return global <= real_.size() ? real_[global - 1] : pad_[global - 1 - real_.size()];
    }

    /// Bit at a 1-based local index of the current level.
    int local_bit(std::size_t local) const {
        if (local < 1 || local > active_.size()) {
            throw std::out_of_range("local index " + std::to_string(local) + " out of range for level size " +
                                    std::to_string(active_.size()));
        }
        return global_bit(active_[local - 1]);
    }

    /// Bits of the active positions, in level order.
    Bits active_bits() const {
        Bits out;
        out.reserve(active_.size());
        for (auto g : active_) {
            out.push_back(static_cast<std::uint8_t>(global_bit(g)));
        }
        return out;
    }

    std::size_t active_ones() const { return count_ones(active_bits()); }

    /// Records one application of the query transformation.
    void charge_query() { ++queries_; }

   private:
    friend PaddedInput remove_indices(const PaddedInput&, std::vector<std::size_t>);

    Bits real_;
    Bits pad_;
    std::vector<std::size_t> active_;
    std::size_t queries_ = 0;
};

/// (-1)^x for the bit at a local index.
inline int signed_bit(const PaddedInput& inp, std::size_t local) { return inp.local_bit(local) ? -1 : 1; }

/// Phase query: flips the sign of Single(i) when input i is 1, leaves Blank
/// and Pair states alone, and charges one query.
inline StateVector apply_query(PaddedInput& inp, const StateVector& psi) {
    if (psi.level_size() != inp.level_size()) {
        throw std::invalid_argument("query on a state of level size " + std::to_string(psi.level_size()) +
                                    " with " + std::to_string(inp.level_size()) + " active inputs");
    }
    StateVector out = psi;
    auto amps = out.amplitudes();
    for (std::size_t i = 1; i <= inp.level_size(); ++i) {
        amps[i] *= signed_bit(inp, i);
    }
    inp.charge_query();
    return out;
}

/// Copy of `inp` with the given local indices (one or two) taken out of play.
inline PaddedInput remove_indices(const PaddedInput& inp, std::vector<std::size_t> locals) {
    if (locals.empty() || locals.size() > 2) {
        throw std::invalid_argument("remove_indices takes one or two local indices");
    }
    if (locals.size() == 2 && locals[0] == locals[1]) {
        throw std::invalid_argument("duplicate local index " + std::to_string(locals[0]));
    }
    for (auto l : locals) {
        if (l < 1 || l > inp.level_size()) {
            throw std::out_of_range("local index " + std::to_string(l) + " out of range for level size " +
                                    std::to_string(inp.level_size()));
        }
    }
    PaddedInput out = inp;
    out.active_.clear();
    for (std::size_t l = 1; l <= inp.level_size(); ++l) {
        if (std::find(locals.begin(), locals.end(), l) == locals.end()) {
            out.active_.push_back(inp.active_[l - 1]);
        }
    }
    return out;
}

/// A padded balanced instance: EXACT_m^{2m} or MAJ_{2m+1} on `input`.
struct PaddedInstance {
    PaddedInput input;
    std::size_t m = 0;
};

/// Reduces EXACT_k^n(x) to EXACT_m^{2m} with m = max{k, n-k}: ones are
/// appended when 2k < n, zeros when 2k > n.
inline PaddedInstance pad_for_exact(const Bits& x, std::size_t k) {
    const std::size_t n = x.size();
    if (k > n) {
        throw std::invalid_argument("EXACT needs 0 <= k <= n");
    }
    if (2 * k == n) {
        return {PaddedInput(x), k};
    }
    if (2 * k < n) {
        return {PaddedInput(x, Bits(n - 2 * k, 1)), n - k};
    }
    return {PaddedInput(x, Bits(2 * k - n, 0)), k};
}

/// Reduces Th_k^n(x), 1 <= k <= n, to MAJ_{2m+1} with query budget
/// m + 1 = max{k, n-k+1}.
inline PaddedInstance pad_for_threshold(const Bits& x, std::size_t k) {
    const std::size_t n = x.size();
    if (k < 1 || k > n) {
        throw std::invalid_argument("threshold padding needs 1 <= k <= n");
    }
    if (2 * k <= n) {
        return {PaddedInput(x, Bits(n - 2 * k + 1, 1)), n - k};
    }
    return {PaddedInput(x, Bits(2 * k - n - 1, 0)), k - 1};
}

}  // namespace exactq
