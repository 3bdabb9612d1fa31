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
#include <stdexcept>

#include "gtest/gtest.h"

#include "exactq/serialize.hpp"
#include "exactq/verify.hpp"

using namespace exactq;

TEST(verify, exact_2_4_full) {
    auto r = verify_instance(Problem::Exact, 2, 4, Mode::Full);
    EXPECT_TRUE(r.pass) << r.counterexample;
    EXPECT_EQ(r.max_queries_observed, 2u);
    EXPECT_EQ(r.budget, 2u);
    EXPECT_EQ(r.inputs_checked, 16u);
}

TEST(verify, maj5_full) {
    auto r = verify_instance(Problem::Threshold, 3, 5, Mode::Full);
    EXPECT_TRUE(r.pass) << r.counterexample;
    EXPECT_EQ(r.budget, 3u);
    EXPECT_EQ(r.max_queries_observed, 3u);
}

TEST(verify, exact_7_14_symmetric_class_count) {
    auto r = verify_instance(Problem::Exact, 7, 14, Mode::Symmetric);
    EXPECT_TRUE(r.pass) << r.counterexample;
    const std::size_t m = 7;
    EXPECT_LE(r.classes_visited, (m + 1) * (m + 2) / 2 + m + 1);
    EXPECT_EQ(r.max_queries_observed, 7u);
}

TEST(verify, constant_thresholds) {
    for (std::size_t k : {0u, 6u}) {
        for (auto mode : {Mode::Full, Mode::Symmetric}) {
            auto r = verify_instance(Problem::Threshold, k, 5, mode);
            EXPECT_TRUE(r.pass);
            EXPECT_EQ(r.budget, 0u);
            EXPECT_EQ(r.max_queries_observed, 0u);
        }
    }
}

TEST(verify, caps_and_ranges) {
    EXPECT_THROW(verify_instance(Problem::Exact, 5, 11, Mode::Full), std::invalid_argument);
    EXPECT_THROW(verify_instance(Problem::Exact, 5, 21, Mode::Symmetric), std::invalid_argument);
    EXPECT_THROW(verify_instance(Problem::Exact, 5, 4, Mode::Full), std::invalid_argument);
    EXPECT_THROW(verify_instance(Problem::Threshold, 7, 5, Mode::Full), std::invalid_argument);
    VerifyConfig cfg;
    cfg.full_cap = 11;
    EXPECT_TRUE(verify_instance(Problem::Exact, 5, 11, Mode::Full, cfg).pass);
}

TEST(verify, largest_index_discard_also_passes) {
    VerifyConfig cfg;
    cfg.discard = MajDiscard::Largest;
    for (std::size_t n = 1; n <= 8; ++n) {
        for (std::size_t k = 1; k <= n; ++k) {
            auto r = verify_instance(Problem::Threshold, k, n, Mode::Full, cfg);
            ASSERT_TRUE(r.pass) << to_line(r);
        }
    }
}

TEST(verify, full_and_symmetric_agree) {
    for (auto p : {Problem::Exact, Problem::Threshold}) {
        for (std::size_t n = 1; n <= 8; ++n) {
            for (std::size_t k = 0; k <= n; ++k) {
                auto a = verify_instance(p, k, n, Mode::Full);
                auto b = verify_instance(p, k, n, Mode::Symmetric);
                ASSERT_EQ(a.pass, b.pass);
                ASSERT_TRUE(a.pass) << to_line(a);
                ASSERT_EQ(a.max_queries_observed, b.max_queries_observed) << to_line(a) << "\n" << to_line(b);
                ASSERT_EQ(a.budget, b.budget);
            }
        }
    }
}

TEST(check_isometry, constructed_maps) {
    for (std::size_t m = 1; m <= 12; ++m) {
        EXPECT_LT(check_isometry(build_u2_exact(m)), 1e-12);
        EXPECT_LT(check_isometry(build_u2_maj(m)), 1e-12);
    }
    for (std::size_t s = 1; s <= 24; ++s) EXPECT_LT(check_isometry(build_u1(s)), 1e-12);
}

TEST(check_isometry, corrupted_column) {
    auto u = build_u2_exact(3);
    u.mutable_column(2)[0] = 0.0;
    EXPECT_GT(check_isometry(u), 1e-3);
}

TEST(check_closed_form, examples) {
    EXPECT_LT(check_closed_form(Family::Exact, 3, 3), 1e-12);
    EXPECT_LT(check_closed_form(Family::Exact, 2, 0), 1e-12);
    EXPECT_LT(check_closed_form(Family::Maj, 1, 1), 1e-12);
    EXPECT_THROW(check_closed_form(Family::Maj, 0, 0), std::invalid_argument);
    EXPECT_THROW(check_closed_form(Family::Exact, 2, 5), std::invalid_argument);

    // m = 1, t = 1 (x = 100): |1> and the two pairs through 1 carry 1/sqrt3.
    auto st = closed_form_state({Family::Maj, 1}, Bits{1, 0, 0});
    const double r3 = 1 / std::sqrt(3.0);
    EXPECT_NEAR(st[BasisIndex::single(1)], r3, 1e-15);
    EXPECT_NEAR(st[BasisIndex::single(2)], 0.0, 1e-15);
    EXPECT_NEAR(st[BasisIndex::pair(1, 2)], -r3, 1e-15);
    EXPECT_NEAR(st[BasisIndex::pair(1, 3)], -r3, 1e-15);
    EXPECT_NEAR(st[BasisIndex::pair(2, 3)], 0.0, 1e-15);

    auto blank = closed_form_state({Family::Exact, 2}, Bits{0, 0, 0, 0});
    EXPECT_EQ(blank[BasisIndex::blank()], 1.0);
}

TEST(report, json_fields) {
    auto r = verify_instance(Problem::Exact, 2, 4, Mode::Full);
    auto j = to_json(r);
    EXPECT_EQ(j["family"], "EXACT");
    EXPECT_EQ(j["k"], 2);
    EXPECT_EQ(j["n"], 4);
    EXPECT_EQ(j["inputsChecked"], 16);
    EXPECT_EQ(j["maxQueriesObserved"], 2);
    EXPECT_EQ(j["budget"], 2);
    EXPECT_EQ(j["status"], "pass");
    EXPECT_TRUE(j["counterexample"].is_null());
    EXPECT_TRUE(j.contains("leavesChecked"));
    EXPECT_TRUE(j.contains("worstNormResidual"));
    EXPECT_TRUE(j.contains("worstProbabilitySumError"));
    EXPECT_NE(to_line(r).find("PASS"), std::string::npos);
}
