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

#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"

#include "exactq_cli.hpp"

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args) {
    args.insert(args.begin(), "exactq");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = exactq::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST(cli_run, exact_example) {
    auto r = run({"run", "--fn", "exact", "--k", "2", "--input", "0110", "--seed", "7", "--json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["answer"], 1);
    EXPECT_EQ(j["queries"], 2);
    EXPECT_EQ(j["function"], "exact");
    EXPECT_EQ(j["n"], 4);
    EXPECT_EQ(j["seed"], 7);
    ASSERT_EQ(j["levels"].size(), 2u);
    EXPECT_EQ(j["levels"][0]["size"], 4);
    EXPECT_EQ(j["levels"][0]["p_exact"], "1/4");
}

TEST(cli_run, json_is_byte_stable) {
    std::vector<std::string> args{"run", "--fn", "threshold", "--k", "4", "--input", "1011001110", "--seed", "99",
                                  "--json"};
    auto a = run(args);
    auto b = run(args);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    auto j = nlohmann::json::parse(a.out);
    EXPECT_EQ(j["answer"], 1);
    EXPECT_LE(j["queries"].get<int>(), 7);
    // Field order is part of the format.
    EXPECT_EQ(a.out.rfind("{\"function\":", 0), 0u);
}

TEST(cli_run, text_output) {
    auto r = run({"run", "--fn", "exact", "--k", "2", "--input", "0110", "--seed", "7"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("answer=1 queries=2"), std::string::npos);
}

TEST(cli_run, usage_errors) {
    auto bad = run({"run", "--fn", "exact", "--k", "2", "--input", "012"});
    EXPECT_EQ(bad.code, 2);
    EXPECT_FALSE(bad.err.empty());
    EXPECT_TRUE(bad.out.empty());
    EXPECT_EQ(run({"run", "--fn", "exact", "--k", "5", "--input", "0110"}).code, 2);
    EXPECT_EQ(run({"run", "--fn", "threshold", "--k", "6", "--input", "0110"}).code, 2);
    EXPECT_EQ(run({"run", "--fn", "exact", "--k", "0", "--input", ""}).code, 2);
    EXPECT_EQ(run({"run", "--fn", "xor", "--k", "0", "--input", "01"}).code, 2);
    EXPECT_EQ(run({"run", "--k", "0", "--input", "01"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
}

TEST(cli_run, degenerate_threshold) {
    auto r = run({"run", "--fn", "threshold", "--k", "0", "--input", "0000", "--json"});
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["answer"], 1);
    EXPECT_EQ(j["queries"], 0);
    EXPECT_TRUE(j["levels"].empty());
}

TEST(cli_verify, sweeps) {
    auto r = run({"verify", "--fn", "exact", "--all-k", "--max-n", "6", "--mode", "full"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);

    auto t = run({"verify", "--fn", "threshold", "--k", "3", "--n", "5", "--json"});
    ASSERT_EQ(t.code, 0);
    auto j = nlohmann::json::parse(t.out);
    ASSERT_EQ(j.size(), 1u);
    EXPECT_EQ(j[0]["status"], "pass");
    EXPECT_EQ(j[0]["budget"], 3);

    auto s = run({"verify", "--fn", "exact", "--k", "8", "--n", "16", "--mode", "symmetric", "--json"});
    ASSERT_EQ(s.code, 0);
    auto js = nlohmann::json::parse(s.out);
    EXPECT_EQ(js[0]["budget"], 8);
    EXPECT_EQ(js[0]["status"], "pass");
}

TEST(cli_verify, usage_errors) {
    EXPECT_EQ(run({"verify", "--fn", "exact", "--k", "8", "--n", "16"}).code, 2);
    EXPECT_EQ(run({"verify", "--fn", "exact", "--k", "8", "--n", "21", "--mode", "symmetric"}).code, 2);
    EXPECT_EQ(run({"verify", "--fn", "exact", "--n", "4"}).code, 2);
    EXPECT_EQ(run({"verify", "--fn", "exact", "--k", "2"}).code, 2);
    EXPECT_EQ(run({"verify", "--fn", "exact", "--k", "2", "--all-k", "--n", "4"}).code, 2);
    EXPECT_EQ(run({"verify", "--fn", "exact", "--k", "5", "--n", "4"}).code, 2);
}

TEST(cli_table, rows) {
    auto r = run({"table", "--max-n", "6", "--json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = nlohmann::json::parse(r.out);
    auto find = [&](const std::string& fn, int k, int n) {
        for (const auto& row : rows)
            if (row["function"] == fn && row["k"] == k && row["n"] == n) return row;
        return nlohmann::json();
    };
    auto e24 = find("EXACT", 2, 4);
    EXPECT_EQ(e24["quantum"], 2);
    EXPECT_EQ(e24["D"], 4);
    auto t35 = find("THRESHOLD", 3, 5);
    EXPECT_EQ(t35["quantum"], 3);
    EXPECT_EQ(t35["D"], 5);
    auto e06 = find("EXACT", 0, 6);
    EXPECT_EQ(e06["quantum"], 6);
    EXPECT_EQ(e06["D"], 6);
    EXPECT_EQ(run({"table", "--max-n", "21"}).code, 2);
}

TEST(cli_check_unitary, residuals) {
    auto e = run({"check-unitary", "--alg", "exact", "--m", "6", "--json"});
    ASSERT_EQ(e.code, 0);
    EXPECT_LT(nlohmann::json::parse(e.out)["residual"].get<double>(), 1e-12);
    auto m = run({"check-unitary", "--alg", "maj", "--m", "6"});
    EXPECT_EQ(m.code, 0);
    EXPECT_NE(m.out.find("PASS"), std::string::npos);
    EXPECT_EQ(run({"check-unitary", "--alg", "maj", "--m", "0"}).code, 2);
}
