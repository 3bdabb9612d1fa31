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
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "exactq/classical.hpp"
#include "exactq/serialize.hpp"
#include "exactq/verify.hpp"

namespace exactq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::size_t worker_count(std::size_t jobs) {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("EXACTQ_THREADS")) {
        try {
            n = std::max<std::size_t>(1, std::stoul(env));
        } catch (const std::exception&) {
            throw UsageError("EXACTQ_THREADS must be a positive integer");
        }
    }
    return std::min(n, std::max<std::size_t>(1, jobs));
}

/// Runs fn(i) for i in [0, count) across workers. Results are written by
/// index so the caller sees them in job order.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const std::size_t workers = worker_count(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < count; i = next++) {
                    fn(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

inline Problem parse_problem(const std::string& fn) { return fn == "exact" ? Problem::Exact : Problem::Threshold; }

inline int cmd_run(const std::string& fn, std::size_t k, const std::string& input, std::uint64_t seed, bool json,
                   std::ostream& out) {
    Bits x;
    try {
        x = parse_bits(input);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (x.empty()) {
        throw UsageError("--input must be a nonempty bit string");
    }
    const Problem problem = parse_problem(fn);
    const std::size_t n = x.size();
    if (problem == Problem::Exact && k > n) {
        throw UsageError("--k must satisfy 0 <= k <= n for exact");
    }
    if (problem == Problem::Threshold && k > n + 1) {
        throw UsageError("--k must satisfy 0 <= k <= n + 1 for threshold");
    }
    const Solution sol = problem == Problem::Exact ? solve_exact(x, k, seed) : solve_threshold(x, k, seed);
    if (json) {
        ordered_json j;
        j["function"] = fn;
        j["k"] = k;
        j["n"] = n;
        j["input"] = input;
        j["seed"] = seed;
        ordered_json t = to_json(sol.trace);
        j["levels"] = t["levels"];
        j["answer"] = t["answer"];
        j["queries"] = t["queries"];
        out << j.dump() << "\n";
        return kExitOk;
    }
    out << "function=" << fn << " k=" << k << " n=" << n << " input=" << input << " seed=" << seed << "\n";
    if (sol.spec) {
        out << "instance=" << family_name(sol.spec->family) << " m=" << sol.spec->m
            << " padded=" << format_bits(sol.input.real_bits()) << format_bits(sol.input.pad_bits())
            << " budget=" << sol.budget << "\n";
    }
    for (std::size_t i = 0; i < sol.trace.levels.size(); ++i) {
        const auto& l = sol.trace.levels[i];
        out << "level " << i + 1 << ": size=" << l.size << " outcome=" << l.outcome.str()
            << " probability=" << std::setprecision(12) << l.probability << " (" << l.exact_probability.str()
            << ") removed=";
        for (std::size_t r = 0; r < l.removed.size(); ++r) {
            out << (r ? "," : "") << l.removed[r];
        }
        out << "\n";
    }
    out << "answer=" << sol.answer << " queries=" << sol.trace.queries << "\n";
    return kExitOk;
}

struct VerifyArgs {
    std::string fn = "exact";
    std::optional<std::size_t> k;
    bool all_k = false;
    std::optional<std::size_t> n;
    std::optional<std::size_t> max_n;
    std::string mode = "full";
    bool json = false;
    VerifyConfig config;
};

inline int cmd_verify(const VerifyArgs& a, std::ostream& out) {
    const Problem problem = parse_problem(a.fn);
    const Mode mode = a.mode == "full" ? Mode::Full : Mode::Symmetric;
    if (a.k.has_value() == a.all_k) {
        throw UsageError("give exactly one of --k and --all-k");
    }
    if (a.n.has_value() == a.max_n.has_value()) {
        throw UsageError("give exactly one of --n and --max-n");
    }
    const std::size_t top = a.n ? *a.n : *a.max_n;
    const std::size_t cap = mode == Mode::Full ? a.config.full_cap : a.config.symmetric_cap;
    if (top > cap) {
        throw UsageError(std::string(mode_name(mode)) + " mode is capped at n <= " + std::to_string(cap) +
                         (mode == Mode::Full ? "; use --mode symmetric" : ""));
    }
    std::vector<std::pair<std::size_t, std::size_t>> jobs;  // (n, k)
    const std::size_t lo_n = a.n ? *a.n : 1;
    for (std::size_t n = lo_n; n <= top; ++n) {
        if (a.all_k) {
            for (std::size_t k = 0; k <= n; ++k) {
                jobs.emplace_back(n, k);
            }
        } else {
            const std::size_t kmax = problem == Problem::Exact ? n : n + 1;
            if (*a.k > kmax) {
                if (a.n) {
                    throw UsageError("--k out of range for n = " + std::to_string(n));
                }
                continue;
            }
            jobs.emplace_back(n, *a.k);
        }
    }
    std::vector<VerificationReport> reports(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        reports[i] = verify_instance(problem, jobs[i].second, jobs[i].first, mode, a.config);
    });
    bool all_pass = true;
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) {
        all_pass = all_pass && r.pass;
        if (a.json) {
            arr.push_back(to_json(r));
        } else {
            out << to_line(r) << "\n";
        }
    }
    if (a.json) {
        out << arr.dump() << "\n";
    }
    return all_pass ? kExitOk : kExitFail;
}

struct TableRow {
    Problem problem;
    std::size_t k;
    std::size_t n;
    std::size_t quantum;  // verified worst-case queries
    std::size_t formula;
    std::size_t deterministic;
    bool verified;
};

/// Quantum column is the worst-case query count observed by symmetric
/// verification; the closed-form budget is carried alongside for comparison.
inline std::vector<TableRow> build_table(std::size_t max_n, const VerifyConfig& cfg) {
    std::vector<std::tuple<Problem, std::size_t, std::size_t>> jobs;
    for (std::size_t n = 1; n <= max_n; ++n) {
        for (std::size_t k = 0; k <= n; ++k) {
            jobs.emplace_back(Problem::Exact, k, n);
        }
        for (std::size_t k = 1; k <= n; ++k) {
            jobs.emplace_back(Problem::Threshold, k, n);
        }
    }
    std::vector<TableRow> rows(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        const auto [p, k, n] = jobs[i];
        const auto rep = verify_instance(p, k, n, Mode::Symmetric, cfg);
        const std::size_t formula = p == Problem::Exact ? std::max(k, n - k) : std::max(k, n - k + 1);
        rows[i] = {p, k, n, rep.max_queries_observed, formula,
                   deterministic_complexity(target_function(p, k, n)), rep.pass};
    });
    return rows;
}

inline int cmd_table(std::size_t max_n, bool json, const VerifyConfig& cfg, std::ostream& out) {
    if (max_n > cfg.symmetric_cap) {
        throw UsageError("--max-n is capped at " + std::to_string(cfg.symmetric_cap));
    }
    const auto rows = build_table(max_n, cfg);
    bool ok = true;
    ordered_json arr = ordered_json::array();
    if (!json) {
        out << std::left << std::setw(10) << "function" << std::right << std::setw(4) << "k" << std::setw(4) << "n"
            << std::setw(9) << "quantum" << std::setw(9) << "formula" << std::setw(4) << "D" << "\n";
    }
    for (const auto& r : rows) {
        const bool row_ok = r.verified && r.quantum == r.formula;
        ok = ok && row_ok;
        if (json) {
            ordered_json j;
            j["function"] = problem_name(r.problem);
            j["k"] = r.k;
            j["n"] = r.n;
            j["quantum"] = r.quantum;
            j["formula"] = r.formula;
            j["D"] = r.deterministic;
            j["verified"] = row_ok;
            arr.push_back(std::move(j));
        } else {
            out << std::left << std::setw(10) << problem_name(r.problem) << std::right << std::setw(4) << r.k
                << std::setw(4) << r.n << std::setw(9) << r.quantum << std::setw(9) << r.formula << std::setw(4)
                << r.deterministic << (row_ok ? "" : "  MISMATCH") << "\n";
        }
    }
    if (json) {
        out << arr.dump() << "\n";
    }
    return ok ? kExitOk : kExitFail;
}

inline int cmd_check_unitary(const std::string& alg, std::size_t m, bool json, std::ostream& out) {
    if (m == 0) {
        throw UsageError("--m must be at least 1; the base level has no second transformation");
    }
    const AlgorithmSpec spec{alg == "exact" ? Family::Exact : Family::Maj, m};
    const auto kernel = LevelKernel::make(spec);
    const double u1 = check_isometry(kernel.u1);
    const double u2 = check_isometry(kernel.u2);
    const double worst = std::max(u1, u2);
    const bool ok = worst < 1e-10;
    if (json) {
        ordered_json j;
        j["alg"] = alg;
        j["m"] = m;
        j["levelSize"] = spec.level_size();
        j["u1Residual"] = u1;
        j["u2Residual"] = u2;
        j["residual"] = worst;
        j["status"] = ok ? "pass" : "fail";
        out << j.dump() << "\n";
    } else {
        out << "alg=" << alg << " m=" << m << " level_size=" << spec.level_size() << std::scientific
            << std::setprecision(3) << " u1_residual=" << u1 << " u2_residual=" << u2 << " residual=" << worst
            << " " << (ok ? "PASS" : "FAIL") << "\n";
    }
    return ok ? kExitOk : kExitFail;
}

/// Entry point shared by the executable and the tests.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulate and verify exact quantum query algorithms for EXACT and THRESHOLD"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Sample one run of the algorithm on an input");
    std::string run_fn;
    std::size_t run_k = 0;
    std::string run_input;
    std::uint64_t run_seed = 0;
    bool run_json = false;
    run->add_option("--fn", run_fn, "exact or threshold")->required()->check(CLI::IsMember({"exact", "threshold"}));
    run->add_option("--k", run_k, "Target count")->required();
    run->add_option("--input", run_input, "Input bits, x_1 leftmost")->required();
    run->add_option("--seed", run_seed, "Seed for measurement sampling");
    run->add_flag("--json", run_json, "Emit JSON");

    auto* verify = app.add_subcommand("verify", "Certify exactness and query budgets");
    VerifyArgs va;
    std::size_t vk = 0;
    std::size_t vn = 0;
    std::size_t vmax = 0;
    verify->add_option("--fn", va.fn, "exact or threshold")->required()->check(CLI::IsMember({"exact", "threshold"}));
    auto* k_opt = verify->add_option("--k", vk, "Target count");
    auto* allk_opt = verify->add_flag("--all-k", va.all_k, "Every k in 0..n");
    auto* n_opt = verify->add_option("--n", vn, "Input length");
    auto* maxn_opt = verify->add_option("--max-n", vmax, "Every n in 1..max-n");
    k_opt->excludes(allk_opt);
    n_opt->excludes(maxn_opt);
    verify->add_option("--mode", va.mode, "full or symmetric")->check(CLI::IsMember({"full", "symmetric"}));
    verify->add_option("--full-cap", va.config.full_cap, "Largest n allowed in full mode");
    verify->add_option("--symmetric-cap", va.config.symmetric_cap, "Largest n allowed in symmetric mode");
    verify->add_flag("--json", va.json, "Emit a JSON array");

    auto* table = app.add_subcommand("table", "Quantum budget against deterministic complexity");
    std::size_t table_max = 0;
    bool table_json = false;
    VerifyConfig table_cfg;
    table->add_option("--max-n", table_max, "Largest n")->required();
    table->add_flag("--json", table_json, "Emit a JSON array");

    auto* unitary = app.add_subcommand("check-unitary", "Check the isometry conditions of one level");
    std::string alg;
    std::size_t um = 0;
    bool u_json = false;
    unitary->add_option("--alg", alg, "exact or maj")->required()->check(CLI::IsMember({"exact", "maj"}));
    unitary->add_option("--m", um, "Level parameter")->required();
    unitary->add_flag("--json", u_json, "Emit JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*run) {
            return cmd_run(run_fn, run_k, run_input, run_seed, run_json, out);
        }
        if (*verify) {
            if (*k_opt) {
                va.k = vk;
            }
            if (*n_opt) {
                va.n = vn;
            }
            if (*maxn_opt) {
                va.max_n = vmax;
            }
            return cmd_verify(va, out);
        }
        if (*table) {
            return cmd_table(table_max, table_json, table_cfg, out);
        }
        return cmd_check_unitary(alg, um, u_json, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitFail;
    }
}

}  // namespace exactq::cli
