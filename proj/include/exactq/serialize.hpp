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

#include <cstdio>
#include <string>

#include "json.hpp"

#include "exactq/algorithms.hpp"
#include "exactq/verify.hpp"

namespace exactq {

using ordered_json = nlohmann::ordered_json;

/// Rounds to 12 significant digits so printed probabilities are stable.
inline double round12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::stod(buf);
}

inline ordered_json to_json(const VerificationReport& r) {
    ordered_json j;
    j["family"] = problem_name(r.problem);
    j["k"] = r.k;
    j["n"] = r.n;
    j["mode"] = mode_name(r.mode);
    j["inputsChecked"] = r.inputs_checked;
    j["leavesChecked"] = r.leaves_checked;
    j["maxQueriesObserved"] = r.max_queries_observed;
    j["budget"] = r.budget;
    j["worstNormResidual"] = r.worst_norm_residual;
    j["worstProbabilitySumError"] = r.worst_probability_sum_error;
    j["classesVisited"] = r.classes_visited;
    j["status"] = r.pass ? "pass" : "fail";
    j["counterexample"] = r.pass ? ordered_json(nullptr) : ordered_json(r.counterexample);
    return j;
}

inline ordered_json to_json(const RunTrace& t) {
    ordered_json levels = ordered_json::array();
    for (const auto& l : t.levels) {
        ordered_json lj;
        lj["size"] = l.size;
        lj["outcome"] = l.outcome.str();
        lj["probability"] = round12(l.probability);
        lj["p_exact"] = l.exact_probability.str();
        lj["removed"] = l.removed;
        levels.push_back(std::move(lj));
    }
    ordered_json j;
    j["levels"] = std::move(levels);
    j["answer"] = t.answer;
    j["queries"] = t.queries;
    return j;
}

}  // namespace exactq
