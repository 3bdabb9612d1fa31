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

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"

#include "exactq/algorithms.hpp"
#include "exactq/basis.hpp"
#include "exactq/state.hpp"

using namespace exactq;

TEST(basis, canonical_positions) {
    EXPECT_EQ(canonical_index(BasisIndex::blank(), 4), 0u);
    EXPECT_EQ(canonical_index(BasisIndex::single(3), 4), 3u);
    EXPECT_EQ(canonical_index(BasisIndex::pair(1, 2), 4), 5u);
    EXPECT_EQ(canonical_index(BasisIndex::pair(3, 4), 4), basis_size(4) - 1);
    EXPECT_EQ(basis_size(0), 1u);
    EXPECT_EQ(basis_size(4), 11u);
}

TEST(basis, rejects_invalid_indices) {
    EXPECT_THROW(canonical_index(BasisIndex::pair(2, 2), 4), std::out_of_range);
    EXPECT_THROW(canonical_index(BasisIndex::pair(3, 2), 4), std::out_of_range);
    EXPECT_THROW(canonical_index(BasisIndex::pair(1, 5), 4), std::out_of_range);
    EXPECT_THROW(canonical_index(BasisIndex::single(0), 4), std::out_of_range);
    EXPECT_THROW(canonical_index(BasisIndex::single(5), 4), std::out_of_range);
    EXPECT_THROW(basis_at(11, 4), std::out_of_range);
}

TEST(basis, round_trip_and_order) {
    for (std::size_t s = 0; s <= 24; ++s) {
        // Enumerate in the intended order and check positions are consecutive.
        std::vector<BasisIndex> order{BasisIndex::blank()};
        for (std::size_t i = 1; i <= s; ++i) {
            order.push_back(BasisIndex::single(i));
        }
        for (std::size_t i = 1; i <= s; ++i) {
            for (std::size_t j = i + 1; j <= s; ++j) {
                order.push_back(BasisIndex::pair(i, j));
            }
        }
        ASSERT_EQ(order.size(), basis_size(s));
        for (std::size_t p = 0; p < order.size(); ++p) {
            ASSERT_EQ(canonical_index(order[p], s), p) << "s=" << s << " " << order[p].str();
            ASSERT_EQ(basis_at(p, s), order[p]) << "s=" << s << " p=" << p;
        }
    }
}

TEST(state, wrong_amplitude_count) {
    EXPECT_THROW(StateVector(2, std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST(isometry, u1_on_blank) {
    auto u1 = build_u1(2);
    auto out = apply_isometry(u1, StateVector::basis_state(2, BasisIndex::blank()));
    const double h = 1 / std::sqrt(2.0);
    std::vector<double> want{0, h, h, 0};
    for (std::size_t p = 0; p < want.size(); ++p) {
        EXPECT_NEAR(out.at(p), want[p], 1e-15);
    }
}

TEST(isometry, source_state_maps_to_its_column) {
    auto u2 = build_u2_maj(2);
    for (std::size_t k = 0; k < u2.sources().size(); ++k) {
        auto out = apply_isometry(u2, StateVector::basis_state(5, u2.sources()[k]));
        auto col = u2.column(k);
        for (std::size_t p = 0; p < out.dim(); ++p) {
            EXPECT_EQ(out.at(p), col[p]);
        }
    }
}

TEST(isometry, u2_exact_m1_on_difference_state) {
    // (|1> - |2>)/sqrt2 is the post-query state for x = 01. The resulting
    // state is sum x_i/(2m) |0> + (x_1 - x_2)/(2m) |1,2> = 0 |0> + 1 |1,2>.
    StateVector psi(2);
    psi[BasisIndex::single(1)] = 1 / std::sqrt(2.0);
    psi[BasisIndex::single(2)] = -1 / std::sqrt(2.0);
    auto out = apply_isometry(build_u2_exact(1), psi);
    EXPECT_NEAR(out[BasisIndex::blank()], 0.0, 1e-15);
    EXPECT_NEAR(out[BasisIndex::single(1)], 0.0, 1e-15);
    EXPECT_NEAR(out[BasisIndex::single(2)], 0.0, 1e-15);
    EXPECT_NEAR(out[BasisIndex::pair(1, 2)], 1.0, 1e-15);
}

TEST(isometry, support_violation_is_rejected) {
    StateVector psi(3);
    psi[BasisIndex::single(1)] = 1;
    EXPECT_THROW(apply_isometry(build_u1(3), psi), std::domain_error);
    StateVector blank = StateVector::basis_state(3, BasisIndex::blank());
    EXPECT_THROW(apply_isometry(build_u2_maj(1), blank), std::domain_error);
    EXPECT_THROW(apply_isometry(build_u1(4), blank), std::invalid_argument);
}

namespace {

StateVector random_in_support(const PartialIsometry& v, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    StateVector psi(v.level_size());
    for (const auto& b : v.sources()) {
        psi[b] = g(rng);
    }
    return psi;
}

}  // namespace

TEST(isometry, preserves_norms_and_inner_products) {
    std::mt19937_64 rng(20261016);
    std::vector<PartialIsometry> maps;
    for (std::size_t m = 1; m <= 8; ++m) {
        maps.push_back(build_u2_exact(m));
        maps.push_back(build_u2_maj(m));
        maps.push_back(build_u1(2 * m + 1));
    }
    for (const auto& v : maps) {
        for (int trial = 0; trial < 20; ++trial) {
            auto psi = random_in_support(v, rng);
            auto phi = random_in_support(v, rng);
            auto vpsi = apply_isometry(v, psi);
            auto vphi = apply_isometry(v, phi);
            EXPECT_LT(std::abs(vpsi.norm() - psi.norm()), 1e-11);
            EXPECT_LT(std::abs(inner_product(vpsi, vphi) - inner_product(psi, phi)), 1e-11);
        }
    }
}
