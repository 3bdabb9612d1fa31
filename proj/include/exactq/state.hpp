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

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "exactq/basis.hpp"

namespace exactq {

inline constexpr double kUnitTolerance = 1e-12;

inline double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        acc += a[k] * b[k];
    }
    return acc;
}

/// Real amplitudes over the canonical basis of one recursion level.
class StateVector {
   public:
    explicit StateVector(std::size_t level_size)
        : level_size_(level_size), amplitudes_(basis_size(level_size), 0.0) {}

    StateVector(std::size_t level_size, std::vector<double> amplitudes)
        : level_size_(level_size), amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() != basis_size(level_size_)) {
            throw std::invalid_argument("amplitude vector has " + std::to_string(amplitudes_.size()) +
                                        " entries, level size " + std::to_string(level_size_) + " needs " +
                                        std::to_string(basis_size(level_size_)));
        }
    }

    /// The state concentrated on a single basis element.
    static StateVector basis_state(std::size_t level_size, const BasisIndex& b) {
        StateVector v(level_size);
        v[b] = 1.0;
        return v;
    }

    std::size_t level_size() const { return level_size_; }
    std::size_t dim() const { return amplitudes_.size(); }

    double& operator[](const BasisIndex& b) { return amplitudes_[canonical_index(b, level_size_)]; }
    double operator[](const BasisIndex& b) const { return amplitudes_[canonical_index(b, level_size_)]; }
    double& at(std::size_t position) { return amplitudes_.at(position); }
    double at(std::size_t position) const { return amplitudes_.at(position); }

    std::span<const double> amplitudes() const { return amplitudes_; }
    std::span<double> amplitudes() { return amplitudes_; }

    double norm() const { return std::sqrt(dot(amplitudes_, amplitudes_)); }

    bool operator==(const StateVector&) const = default;

   private:
    std::size_t level_size_;
    std::vector<double> amplitudes_;
};

inline double inner_product(const StateVector& a, const StateVector& b) {
    if (a.level_size() != b.level_size()) {
        throw std::invalid_argument("inner product of states with different level sizes");
    }
    return dot(a.amplitudes(), b.amplitudes());
}

/// A linear map given only on the span of `sources`: column k is the image of
/// sources[k]. Used for transformations that are specified on a subspace.
class PartialIsometry {
   public:
    PartialIsometry(std::size_t level_size, std::vector<BasisIndex> sources, std::vector<std::vector<double>> columns)
        : level_size_(level_size), sources_(std::move(sources)), columns_(std::move(columns)) {
        if (sources_.size() != columns_.size()) {
            throw std::invalid_argument("partial isometry needs one column per source state");
        }
        for (const auto& b : sources_) {
            source_positions_.push_back(canonical_index(b, level_size_));
        }
        for (const auto& c : columns_) {
            if (c.size() != basis_size(level_size_)) {
                throw std::invalid_argument("partial isometry column has wrong dimension");
            }
        }
    }

    std::size_t level_size() const { return level_size_; }
    const std::vector<BasisIndex>& sources() const { return sources_; }
    const std::vector<std::vector<double>>& columns() const { return columns_; }
    std::span<const double> column(std::size_t k) const { return columns_.at(k); }
    std::span<double> mutable_column(std::size_t k) { return columns_.at(k); }
    std::size_t source_position(std::size_t k) const { return source_positions_[k]; }

   private:
    std::size_t level_size_;
    std::vector<BasisIndex> sources_;
    std::vector<std::size_t> source_positions_;
    std::vector<std::vector<double>> columns_;
};

/// Norm of the part of `psi` that lies outside the span of v's source states.
inline double support_residual(const PartialIsometry& v, const StateVector& psi) {
    std::vector<char> inside(psi.dim(), 0);
    for (std::size_t k = 0; k < v.sources().size(); ++k) {
        inside[v.source_position(k)] = 1;
    }
    double outside = 0;
    auto amps = psi.amplitudes();
    for (std::size_t p = 0; p < amps.size(); ++p) {
        if (!inside[p]) {
            outside += amps[p] * amps[p];
        }
    }
    return std::sqrt(outside);
}

/// Returns sum_b psi[b] * column(b). Throws std::domain_error if psi has
/// weight outside the domain the map is defined on.
inline StateVector apply_isometry(const PartialIsometry& v, const StateVector& psi) {
    if (psi.level_size() != v.level_size()) {
        throw std::invalid_argument("level size mismatch: state " + std::to_string(psi.level_size()) + ", map " +
                                    std::to_string(v.level_size()));
    }
    double residual = support_residual(v, psi);
    if (!(residual < kUnitTolerance)) {
        throw std::domain_error("state has weight " + std::to_string(residual) +
                                " outside the domain of the partial isometry");
    }
    StateVector out(v.level_size());
    auto dst = out.amplitudes();
    auto src = psi.amplitudes();
    for (std::size_t k = 0; k < v.sources().size(); ++k) {
        double a = src[v.source_position(k)];
        if (a == 0.0) {
            continue;
        }
        auto col = v.column(k);
        for (std::size_t p = 0; p < dst.size(); ++p) {
            dst[p] += a * col[p];
        }
    }
    return out;
}

}  // namespace exactq
