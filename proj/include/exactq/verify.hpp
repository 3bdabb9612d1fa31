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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "exactq/algorithms.hpp"
#include "exactq/classical.hpp"
#include "exactq/oracle.hpp"

namespace exactq {

/// The user-facing problems; EXACT runs on the EXACT recursion, THRESHOLD on
/// the MAJ recursion.
enum class Problem { Exact, Threshold };
enum class Mode { Full, Symmetric };

inline const char* problem_name(Problem p) { return p == Problem::Exact ? "EXACT" : "THRESHOLD"; }
inline const char* mode_name(Mode m) { return m == Mode::Full ? "full" : "symmetric"; }

inline SymmetricFunction target_function(Problem p, std::size_t k, std::size_t n) {
    return p == Problem::Exact ? SymmetricFunction::exact(k, n) : SymmetricFunction::threshold(k, n);
}

struct VerifyConfig {
    std::size_t full_cap = 10;
    std::size_t symmetric_cap = 20;
    MajDiscard discard = MajDiscard::Smallest;
};

struct VerificationReport {
    Problem problem = Problem::Exact;
    std::size_t k = 0;
    std::size_t n = 0;
    Mode mode = Mode::Full;
    std::uint64_t inputs_checked = 0;
    std::uint64_t leaves_checked = 0;
    std::size_t max_queries_observed = 0;
    std::size_t budget = 0;
    double worst_norm_residual = 0;
    double worst_probability_sum_error = 0;
    std::size_t classes_visited = 0;
    bool pass = true;
    std::string counterexample;  // empty on pass

    void fail(std::string witness) {
        if (pass) {
            pass = false;
            counterexample = std::move(witness);
        }
    }
};

/// Max over |<c_i, c_i> - 1| and |<c_i, c_j>| for i != j.
inline double check_isometry(const PartialIsometry& v) {
    double worst = 0;
    const auto& cols = v.columns();
    for (std::size_t a = 0; a < cols.size(); ++a) {
        worst = std::max(worst, std::abs(dot(cols[a], cols[a]) - 1.0));
        for (std::size_t b = a + 1; b < cols.size(); ++b) {
            worst = std::max(worst, std::abs(dot(cols[a], cols[b])));
        }
    }
    return worst;
}

/// Ones first: 1^t 0^(s-t).
inline Bits class_representative(std::size_t ones, std::size_t size) {
    Bits x(size, 0);
    std::fill(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(ones), 1);
    return x;
}

/// Expected post-U2 amplitudes of one level, written directly from the
/// closed-form resulting state.
inline StateVector closed_form_state(AlgorithmSpec spec, const Bits& bits) {
    const std::size_t s = spec.level_size();
    if (bits.size() != s || spec.m == 0) {
        throw std::invalid_argument("closed_form_state: bad level");
    }
    auto sgn = [&](std::size_t i) { return bits[i - 1] ? -1.0 : 1.0; };
    const double two_m = static_cast<double>(2 * spec.m);
    StateVector out(s);
    if (spec.family == Family::Exact) {
        double total = 0;
        for (std::size_t i = 1; i <= s; ++i) {
            total += sgn(i);
        }
        out[BasisIndex::blank()] = total / two_m;
        for (std::size_t i = 1; i <= s; ++i) {
            for (std::size_t j = i + 1; j <= s; ++j) {
                out[BasisIndex::pair(i, j)] = (sgn(i) - sgn(j)) / two_m;
            }
        }
        return out;
    }
    const double norm = two_m * std::sqrt(two_m + 1.0);
    for (std::size_t i = 1; i <= s; ++i) {
        double others = 0;
        for (std::size_t j = 1; j <= s; ++j) {
            if (j != i) {
                others += sgn(j);
            }
        }
        out[BasisIndex::single(i)] = others / norm;
        for (std::size_t j = i + 1; j <= s; ++j) {
            out[BasisIndex::pair(i, j)] = (sgn(i) - sgn(j)) * std::sqrt(two_m - 1.0) / norm;
        }
    }
    return out;
}

/// Simulates one level on the class representative with t ones and returns
/// the largest amplitude deviation from the closed form.
inline double check_closed_form(Family family, std::size_t m, std::size_t ones) {
    AlgorithmSpec spec{family, m};
    if (m == 0 || ones > spec.level_size()) {
        throw std::invalid_argument("check_closed_form needs m >= 1 and t <= level size");
    }
    const Bits bits = class_representative(ones, spec.level_size());
    PaddedInput inp(bits);
    const StateVector got = simulate_level(LevelKernel::make(spec), inp);
    const StateVector want = closed_form_state(spec, bits);
    double worst = 0;
    for (std::size_t p = 0; p < got.dim(); ++p) {
        worst = std::max(worst, std::abs(got.at(p) - want.at(p)));
    }
    return worst;
}

namespace detail {

struct Reduction {
    std::optional<AlgorithmSpec> spec;  // empty: constant answer, no queries
    std::size_t pad_ones = 0;
    std::size_t budget = 0;
};

inline Reduction reduction_for(Problem p, std::size_t k, std::size_t n) {
    const Bits zeros(n, 0);
    if (p == Problem::Exact) {
        if (k > n) {
            throw std::invalid_argument("EXACT needs 0 <= k <= n");
        }
        auto inst = pad_for_exact(zeros, k);
        return {AlgorithmSpec{Family::Exact, inst.m}, count_ones(inst.input.pad_bits()), inst.m};
    }
    if (k == 0 || k > n) {
        return {std::nullopt, 0, 0};
    }
    auto inst = pad_for_threshold(zeros, k);
    return {AlgorithmSpec{Family::Maj, inst.m}, count_ones(inst.input.pad_bits()), inst.m + 1};
}

inline int majority_of(const Bits& bits) { return 2 * count_ones(bits) > bits.size() ? 1 : 0; }

/// Memoized verification over level classes (ones, size). Relies on the
/// level being equivariant under relabeling of active indices; EXACT classes
/// are further folded under complement (t -> s - t).
class ClassVerifier {
   public:
    struct Result {
        std::uint8_t answers = 0;
        std::size_t depth = 0;
        std::uint64_t terminal_edges = 0;
    };

    ClassVerifier(MajDiscard discard, VerificationReport& report) : discard_(discard), report_(report) {}

    Result visit(AlgorithmSpec spec, std::size_t ones) {
        const std::size_t s = spec.level_size();
        std::size_t key_ones = ones;
        if (spec.family == Family::Exact) {
            key_ones = std::min(ones, s - ones);
        }
        const auto key = std::make_tuple(spec.family, s, key_ones);
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }
        Result r = compute(spec, key_ones);
        memo_.emplace(key, r);
        return r;
    }

    std::size_t classes_visited() const { return memo_.size(); }

   private:
    std::string where(AlgorithmSpec spec, std::size_t ones) const {
        return std::string(family_name(spec.family)) + " level m=" + std::to_string(spec.m) + " class " +
               format_bits(class_representative(ones, spec.level_size()));
    }

    Result compute(AlgorithmSpec spec, std::size_t ones) {
        const std::size_t s = spec.level_size();
        const Bits bits = class_representative(ones, s);
        Result r;
        if (spec.m == 0) {
            if (spec.family == Family::Exact) {
                r.answers = 2;
                r.depth = 0;
            } else {
                PaddedInput inp(bits);
                r.answers = static_cast<std::uint8_t>(1u << read_last_bit(inp));
                r.depth = 1;
            }
            r.terminal_edges = 1;
            return r;
        }
        PaddedInput inp(bits);
        const StateVector psi = simulate_level(kernels_.get(spec), inp);
        report_.worst_norm_residual = std::max(report_.worst_norm_residual, std::abs(psi.norm() - 1.0));
        const auto outcomes = classify_outcomes(spec, psi, discard_);

        double psum = 0;
        for (const auto& br : outcomes) {
            psum += br.probability;
        }
        const double psum_err = std::abs(psum - 1.0);
        report_.worst_probability_sum_error = std::max(report_.worst_probability_sum_error, psum_err);
        if (!(psum_err <= kProbabilitySumTolerance)) {
            report_.fail(where(spec, ones) + ": branch probabilities sum to " + std::to_string(psum));
        }
        for (std::size_t p = 0; p < psi.dim(); ++p) {
            const BasisIndex b = basis_at(p, s);
            const double want = exact_branch_probability(spec, bits, b).value();
            if (std::abs(psi.at(p) * psi.at(p) - want) > 1e-12) {
                report_.fail(where(spec, ones) + ": probability of " + b.str() + " deviates from the exact rational");
            }
        }

        const int level_value = spec.family == Family::Exact ? (2 * ones == s ? 1 : 0) : majority_of(bits);
        std::vector<std::size_t> children;
        for (const auto& br : outcomes) {
            if (br.action.kind == Action::Kind::Output) {
                if (br.action.output != level_value) {
                    report_.fail(where(spec, ones) + ": outcome " + br.outcome.str() + " outputs a wrong value");
                }
                r.answers |= static_cast<std::uint8_t>(1u << br.action.output);
                r.depth = std::max<std::size_t>(r.depth, 1);
                r.terminal_edges += 1;
                continue;
            }
            const BasisIndex b = br.outcome;
            if (b.kind == BasisKind::Pair) {
                if (bits[b.i - 1] == bits[b.j - 1]) {
                    report_.fail(where(spec, ones) + ": pair outcome " + b.str() + " on equal bits");
                }
                children.push_back(ones - 1);
                continue;
            }
            // MAJ Single(i): every choice of the second discarded index must
            // preserve the majority, so all reachable child classes are checked.
            const int xi = bits[b.i - 1];
            std::int64_t rest_margin = 0;
            for (std::size_t j = 1; j <= s; ++j) {
                if (j != b.i) {
                    rest_margin += bits[j - 1] ? 1 : -1;
                }
            }
            const bool minority = xi != level_value;
            if (!(std::abs(rest_margin) >= 2 || minority)) {
                report_.fail(where(spec, ones) + ": single outcome " + b.str() + " with margin " +
                             std::to_string(rest_margin));
            }
            const std::size_t other_ones = ones - static_cast<std::size_t>(xi);
            const std::size_t other_zeros = (s - 1) - other_ones;
            if (other_ones > 0) {
                children.push_back(ones - static_cast<std::size_t>(xi) - 1);
            }
            if (other_zeros > 0) {
                children.push_back(ones - static_cast<std::size_t>(xi));
            }
            for (std::size_t j = 1; j <= s; ++j) {
                if (j == b.i) {
                    continue;
                }
                Bits rest;
                for (std::size_t l = 1; l <= s; ++l) {
                    if (l != b.i && l != j) {
                        rest.push_back(bits[l - 1]);
                    }
                }
                if (majority_of(rest) != level_value) {
                    report_.fail(where(spec, ones) + ": discarding " + std::to_string(b.i) + "," +
                                 std::to_string(j) + " changes the majority");
                    break;
                }
            }
        }
        std::sort(children.begin(), children.end());
        children.erase(std::unique(children.begin(), children.end()), children.end());
        for (std::size_t c : children) {
            const Result child = visit(spec.child(), c);
            r.answers |= child.answers;
            r.depth = std::max(r.depth, 1 + child.depth);
            r.terminal_edges += child.terminal_edges;
        }
        return r;
    }

    MajDiscard discard_;
    VerificationReport& report_;
    KernelCache kernels_;
    std::map<std::tuple<Family, std::size_t, std::size_t>, Result> memo_;
};

inline void verify_full(VerificationReport& rep, const VerifyConfig& cfg) {
    const auto f = target_function(rep.problem, rep.k, rep.n);
    const Reduction red = reduction_for(rep.problem, rep.k, rep.n);
    rep.budget = red.budget;
    TreeSummarizer summarizer(cfg.discard);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rep.n); ++mask) {
        Bits x(rep.n);
        for (std::size_t b = 0; b < rep.n; ++b) {
            x[b] = static_cast<std::uint8_t>((mask >> b) & 1);
        }
        const int want = f(x);
        ++rep.inputs_checked;
        if (!red.spec) {
            const Solution sol = solve_threshold(x, rep.k);
            rep.leaves_checked += 1;
            if (sol.answer != want || sol.trace.queries != 0) {
                rep.fail("input " + format_bits(x) + ": constant threshold answered " + std::to_string(sol.answer));
            }
            continue;
        }
        const PaddedInput padded = rep.problem == Problem::Exact ? pad_for_exact(x, rep.k).input
                                                                 : pad_for_threshold(x, rep.k).input;
        const SubtreeSummary sum = summarizer.summarize(*red.spec, padded);
        rep.leaves_checked += sum.leaves;
        rep.max_queries_observed = std::max(rep.max_queries_observed, sum.max_queries);
        rep.worst_norm_residual = std::max(rep.worst_norm_residual, sum.worst_norm_residual);
        rep.worst_probability_sum_error =
            std::max({rep.worst_probability_sum_error, sum.worst_level_probability_error,
                      std::abs(sum.probability - 1.0)});
        if (sum.answers != (1u << want)) {
            rep.fail("input " + format_bits(x) + ": some leaf outputs " + std::to_string(1 - want));
        } else if (sum.max_queries > rep.budget) {
            rep.fail("input " + format_bits(x) + ": a path uses " + std::to_string(sum.max_queries) +
                     " queries, budget " + std::to_string(rep.budget));
        } else if (!(sum.worst_level_probability_error <= kProbabilitySumTolerance) ||
                   !(std::abs(sum.probability - 1.0) <= kProbabilitySumTolerance)) {
            rep.fail("input " + format_bits(x) + ": branch probabilities do not sum to 1");
        }
    }
    rep.classes_visited = summarizer.memo_size();
}

inline void verify_symmetric(VerificationReport& rep, const VerifyConfig& cfg) {
    const auto f = target_function(rep.problem, rep.k, rep.n);
    const Reduction red = reduction_for(rep.problem, rep.k, rep.n);
    rep.budget = red.budget;
    ClassVerifier verifier(cfg.discard, rep);
    for (std::size_t t = 0; t <= rep.n; ++t) {
        const int want = f.at_weight(t);
        ++rep.inputs_checked;
        const std::string witness = "class with " + std::to_string(t) + " ones";
        if (!red.spec) {
            rep.leaves_checked += 1;
            const int got = rep.k == 0 ? 1 : 0;
            if (got != want) {
                rep.fail(witness + ": constant threshold is wrong");
            }
            continue;
        }
        const auto r = verifier.visit(*red.spec, t + red.pad_ones);
        rep.leaves_checked += r.terminal_edges;
        rep.max_queries_observed = std::max(rep.max_queries_observed, r.depth);
        if (r.answers != (1u << want)) {
            rep.fail(witness + ": some leaf outputs " + std::to_string(1 - want));
        } else if (r.depth > rep.budget) {
            rep.fail(witness + ": a path uses " + std::to_string(r.depth) + " queries, budget " +
                     std::to_string(rep.budget));
        }
    }
    rep.classes_visited = verifier.classes_visited();
}

}  // namespace detail

/// Certifies that the reduction for (problem, k, n) is exact within its query
/// budget. Full mode runs every one of the 2^n inputs through the branching
/// recursion; symmetric mode verifies each level class once.
///
/// Throws std::invalid_argument when n exceeds the cap for the mode.
inline VerificationReport verify_instance(Problem problem, std::size_t k, std::size_t n, Mode mode,
                                          const VerifyConfig& cfg = {}) {
    const std::size_t cap = mode == Mode::Full ? cfg.full_cap : cfg.symmetric_cap;
    if (n > cap) {
        throw std::invalid_argument(std::string(mode_name(mode)) + " verification is capped at n <= " +
                                    std::to_string(cap) + ", got n = " + std::to_string(n));
    }
    if (problem == Problem::Exact && k > n) {
        throw std::invalid_argument("EXACT needs 0 <= k <= n");
    }
    if (problem == Problem::Threshold && k > n + 1) {
        throw std::invalid_argument("THRESHOLD needs 0 <= k <= n + 1");
    }
    VerificationReport rep;
    rep.problem = problem;
    rep.k = k;
    rep.n = n;
    rep.mode = mode;
    if (mode == Mode::Full) {
        detail::verify_full(rep, cfg);
    } else {
        detail::verify_symmetric(rep, cfg);
    }
    if (!(rep.worst_norm_residual <= kProbabilitySumTolerance)) {
        rep.fail("norm drift " + std::to_string(rep.worst_norm_residual));
    }
    return rep;
}

/// One human-readable line.
inline std::string to_line(const VerificationReport& r) {
    std::ostringstream os;
    os << problem_name(r.problem) << " k=" << r.k << " n=" << r.n << " mode=" << mode_name(r.mode)
       << " inputs=" << r.inputs_checked << " leaves=" << r.leaves_checked
       << " max_queries=" << r.max_queries_observed << " budget=" << r.budget << " classes=" << r.classes_visited;
    os.precision(3);
    os << std::scientific << " norm_residual=" << r.worst_norm_residual
       << " prob_sum_error=" << r.worst_probability_sum_error << " " << (r.pass ? "PASS" : "FAIL");
    if (!r.pass) {
        os << " (" << r.counterexample << ")";
    }
    return os.str();
}

}  // namespace exactq
