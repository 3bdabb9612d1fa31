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
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "exactq/oracle.hpp"
#include "exactq/state.hpp"

namespace exactq {

enum class Family { Exact, Maj };

inline const char* family_name(Family f) { return f == Family::Exact ? "EXACT" : "MAJ"; }

/// One level of a recursive algorithm: EXACT_m^{2m} or MAJ_{2m+1}.
struct AlgorithmSpec {
    Family family = Family::Exact;
    std::size_t m = 0;

    std::size_t level_size() const { return family == Family::Exact ? 2 * m : 2 * m + 1; }
    AlgorithmSpec child() const {
        if (m == 0) {
            throw std::logic_error("base level has no child");
        }
        return {family, m - 1};
    }
    bool operator==(const AlgorithmSpec&) const = default;
};

/// Which extra index a MAJ Single(i) outcome discards along with i. The
/// outcome is sound for any choice; Smallest is the default.
enum class MajDiscard { Smallest, Largest };

// Squared amplitudes at or below this are treated as float dust.
inline constexpr double kBranchThreshold = 1e-18;
inline constexpr double kProbabilitySumTolerance = 1e-10;

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(std::int64_t num, std::int64_t den) {
        if (den == 0) {
            throw std::domain_error("zero denominator");
        }
        if (den < 0) {
            num = -num;
            den = -den;
        }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g == 0) {
            return {0, 1};
        }
        return {num / g, den / g};
    }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
    bool operator==(const Rational&) const = default;
};

// ---------------------------------------------------------------------------
// Isometries
// ---------------------------------------------------------------------------

/// |0> -> sum_i |i> / sqrt(s).
inline PartialIsometry build_u1(std::size_t level_size) {
    if (level_size == 0) {
        throw std::invalid_argument("U1 needs a nonempty level");
    }
    std::vector<double> col(basis_size(level_size), 0.0);
    const double a = 1.0 / std::sqrt(static_cast<double>(level_size));
    for (std::size_t i = 1; i <= level_size; ++i) {
        col[canonical_index(BasisIndex::single(i), level_size)] = a;
    }
    return PartialIsometry(level_size, {BasisIndex::blank()}, {std::move(col)});
}

namespace detail {

// Column for |i>: pair_coef on |i,j> (j > i), -pair_coef on |j,i> (j < i).
inline std::vector<double> antisymmetric_pair_column(std::size_t s, std::size_t i, double pair_coef) {
    std::vector<double> col(basis_size(s), 0.0);
    for (std::size_t j = 1; j <= s; ++j) {
        if (j > i) {
            col[canonical_index(BasisIndex::pair(i, j), s)] = pair_coef;
        } else if (j < i) {
            col[canonical_index(BasisIndex::pair(j, i), s)] = -pair_coef;
        }
    }
    return col;
}

inline std::vector<BasisIndex> singles(std::size_t s) {
    std::vector<BasisIndex> out;
    for (std::size_t i = 1; i <= s; ++i) {
        out.push_back(BasisIndex::single(i));
    }
    return out;
}

}  // namespace detail

/// EXACT_m^{2m} second transformation on span{|i>}:
/// |i> -> (sum_{j>i} |i,j> - sum_{j<i} |j,i> + |0>) / sqrt(2m).
inline PartialIsometry build_u2_exact(std::size_t m) {
    if (m == 0) {
        throw std::invalid_argument("EXACT U2 needs m >= 1");
    }
    const std::size_t s = 2 * m;
    const double a = 1.0 / std::sqrt(static_cast<double>(s));
    std::vector<std::vector<double>> cols;
    for (std::size_t i = 1; i <= s; ++i) {
        auto col = detail::antisymmetric_pair_column(s, i, a);
        col[0] = a;
        cols.push_back(std::move(col));
    }
    return PartialIsometry(s, detail::singles(s), std::move(cols));
}

/// MAJ_{2m+1} second transformation on span{|i>}:
/// |i> -> sqrt(2m-1)/(2m) (sum_{j>i} |i,j> - sum_{j<i} |j,i>) + 1/(2m) sum_{j!=i} |j>.
inline PartialIsometry build_u2_maj(std::size_t m) {
    if (m == 0) {
        throw std::invalid_argument("MAJ U2 needs m >= 1");
    }
    const std::size_t s = 2 * m + 1;
    const double two_m = static_cast<double>(2 * m);
    const double pair_coef = std::sqrt(two_m - 1.0) / two_m;
    const double single_coef = 1.0 / two_m;
    std::vector<std::vector<double>> cols;
    for (std::size_t i = 1; i <= s; ++i) {
        auto col = detail::antisymmetric_pair_column(s, i, pair_coef);
        for (std::size_t j = 1; j <= s; ++j) {
            if (j != i) {
                col[canonical_index(BasisIndex::single(j), s)] = single_coef;
            }
        }
        cols.push_back(std::move(col));
    }
    return PartialIsometry(s, detail::singles(s), std::move(cols));
}

/// The two input-independent transformations of one level, built once.
struct LevelKernel {
    AlgorithmSpec spec;
    PartialIsometry u1;
    PartialIsometry u2;

    static LevelKernel make(AlgorithmSpec spec) {
        if (spec.m == 0) {
            throw std::invalid_argument("base levels have no unitary step");
        }
        return {spec, build_u1(spec.level_size()),
                spec.family == Family::Exact ? build_u2_exact(spec.m) : build_u2_maj(spec.m)};
    }
};

/// Lazily built kernels keyed by level.
class KernelCache {
   public:
    const LevelKernel& get(AlgorithmSpec spec) {
        auto key = std::make_pair(spec.family, spec.m);
        auto it = kernels_.find(key);
        if (it == kernels_.end()) {
            it = kernels_.emplace(key, LevelKernel::make(spec)).first;
        }
        return it->second;
    }

   private:
    std::map<std::pair<Family, std::size_t>, LevelKernel> kernels_;
};

// ---------------------------------------------------------------------------
// One level
// ---------------------------------------------------------------------------

/// U2 Q U1 |0> on the active inputs of `inp`. Charges one query.
inline StateVector simulate_level(const LevelKernel& kernel, PaddedInput& inp) {
    if (inp.level_size() != kernel.spec.level_size()) {
        throw std::invalid_argument(std::string(family_name(kernel.spec.family)) + " level m=" +
                                    std::to_string(kernel.spec.m) + " needs " +
                                    std::to_string(kernel.spec.level_size()) + " active inputs, got " +
                                    std::to_string(inp.level_size()));
    }
    const std::size_t s = kernel.spec.level_size();
    auto psi = apply_isometry(kernel.u1, StateVector::basis_state(s, BasisIndex::blank()));
    psi = apply_query(inp, psi);
    return apply_isometry(kernel.u2, psi);
}

struct Action {
    enum class Kind { Output, Recurse };
    Kind kind = Kind::Output;
    int output = 0;
    std::vector<std::size_t> removed;  // local indices, ascending

    static Action output_bit(int bit) { return {Kind::Output, bit, {}}; }
    static Action recurse(std::vector<std::size_t> removed) {
        std::sort(removed.begin(), removed.end());
        return {Kind::Recurse, 0, std::move(removed)};
    }
};

struct BranchOutcome {
    BasisIndex outcome;
    double probability = 0;
    Action action;
    std::optional<AlgorithmSpec> child;
};

/// Maps every basis state carrying weight in `psi` to the action the
/// algorithm takes on measuring it. Throws std::logic_error if weight lands
/// on a state that has no defined action.
inline std::vector<BranchOutcome> classify_outcomes(AlgorithmSpec spec, const StateVector& psi,
                                                    MajDiscard discard = MajDiscard::Smallest) {
    const std::size_t s = spec.level_size();
    std::vector<BranchOutcome> out;
    for (std::size_t p = 0; p < psi.dim(); ++p) {
        const double amp = psi.at(p);
        const double prob = amp * amp;
        if (!(prob > kBranchThreshold)) {
            continue;
        }
        const BasisIndex b = basis_at(p, s);
        BranchOutcome br{b, prob, {}, std::nullopt};
        if (spec.family == Family::Exact) {
            if (b.kind == BasisKind::Blank) {
                br.action = Action::output_bit(0);
            } else if (b.kind == BasisKind::Pair) {
                br.action = Action::recurse({b.i, b.j});
                br.child = spec.child();
            } else {
                throw std::logic_error("EXACT level left weight " + std::to_string(prob) + " on " + b.str());
            }
        } else {
            if (b.kind == BasisKind::Single) {
                std::size_t other;
                if (discard == MajDiscard::Smallest) {
                    other = b.i == 1 ? 2 : 1;
                } else {
                    other = b.i == s ? s - 1 : s;
                }
                br.action = Action::recurse({b.i, other});
                br.child = spec.child();
            } else if (b.kind == BasisKind::Pair) {
                br.action = Action::recurse({b.i, b.j});
                br.child = spec.child();
            } else {
                throw std::logic_error("MAJ level left weight " + std::to_string(prob) + " on " + b.str());
            }
        }
        out.push_back(std::move(br));
    }
    return out;
}

inline std::vector<BranchOutcome> level_outcomes(const LevelKernel& kernel, PaddedInput& inp,
                                                 MajDiscard discard = MajDiscard::Smallest) {
    return classify_outcomes(kernel.spec, simulate_level(kernel, inp), discard);
}

inline std::vector<BranchOutcome> level_outcomes(AlgorithmSpec spec, PaddedInput& inp,
                                                 MajDiscard discard = MajDiscard::Smallest) {
    return level_outcomes(LevelKernel::make(spec), inp, discard);
}

/// Closed-form probability of measuring `outcome` at a level whose active
/// bits are `bits`.
inline Rational exact_branch_probability(AlgorithmSpec spec, const Bits& bits, const BasisIndex& outcome) {
    const auto m = static_cast<std::int64_t>(spec.m);
    if (bits.size() != spec.level_size() || !outcome.valid_for(bits.size()) || m == 0) {
        throw std::invalid_argument("exact_branch_probability: bad level");
    }
    auto sgn = [&](std::size_t i) -> std::int64_t { return bits[i - 1] ? -1 : 1; };
    std::int64_t total = 0;
    for (std::size_t i = 1; i <= bits.size(); ++i) {
        total += sgn(i);
    }
    if (spec.family == Family::Exact) {
        const std::int64_t den = 4 * m * m;
        switch (outcome.kind) {
            case BasisKind::Blank:
                return Rational::make(total * total, den);
            case BasisKind::Single:
                return {0, 1};
            case BasisKind::Pair: {
                std::int64_t d = sgn(outcome.i) - sgn(outcome.j);
                return Rational::make(d * d, den);
            }
        }
    }
    const std::int64_t den = 4 * m * m * (2 * m + 1);
    switch (outcome.kind) {
        case BasisKind::Blank:
            return {0, 1};
        case BasisKind::Single: {
            std::int64_t rest = total - sgn(outcome.i);
            return Rational::make(rest * rest, den);
        }
        case BasisKind::Pair: {
            std::int64_t d = sgn(outcome.i) - sgn(outcome.j);
            return Rational::make(d * d * (2 * m - 1), den);
        }
    }
    return {0, 1};
}

/// The MAJ base level: one query reads the single remaining bit.
inline int read_last_bit(PaddedInput& inp) {
    if (inp.level_size() != 1) {
        throw std::invalid_argument("MAJ base level needs exactly one active input");
    }
    auto psi = apply_query(inp, StateVector::basis_state(1, BasisIndex::single(1)));
    return psi[BasisIndex::single(1)] < 0 ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Full branching
// ---------------------------------------------------------------------------

struct BranchLeaf {
    int answer = 0;
    double probability = 0;
    std::size_t queries = 0;
    std::vector<BasisIndex> path;
};

/// All reachable leaves of the measure-then-recurse algorithm on one input.
struct BranchTree {
    std::vector<BranchLeaf> leaves;
    double worst_level_probability_error = 0;
    double worst_norm_residual = 0;

    double total_probability() const {
        double p = 0;
        for (const auto& l : leaves) {
            p += l.probability;
        }
        return p;
    }
    std::size_t max_queries() const {
        std::size_t q = 0;
        for (const auto& l : leaves) {
            q = std::max(q, l.queries);
        }
        return q;
    }
};

struct RunOptions {
    MajDiscard discard = MajDiscard::Smallest;
    std::size_t max_leaves = std::size_t{1} << 20;
};

namespace detail {

inline void expand(KernelCache& cache, AlgorithmSpec spec, PaddedInput inp, double prob,
                   std::vector<BasisIndex>& path, const RunOptions& opts, BranchTree& tree) {
    if (spec.m == 0) {
        BranchLeaf leaf;
        leaf.answer = spec.family == Family::Exact ? 1 : read_last_bit(inp);
        leaf.probability = prob;
        leaf.queries = inp.queries_used();
        leaf.path = path;
        if (tree.leaves.size() >= opts.max_leaves) {
            throw std::length_error("branch tree exceeds " + std::to_string(opts.max_leaves) + " leaves");
        }
        tree.leaves.push_back(std::move(leaf));
        return;
    }
    const LevelKernel& kernel = cache.get(spec);
    StateVector psi = simulate_level(kernel, inp);
    tree.worst_norm_residual = std::max(tree.worst_norm_residual, std::abs(psi.norm() - 1.0));
    auto outcomes = classify_outcomes(spec, psi, opts.discard);
    double sum = 0;
    for (const auto& br : outcomes) {
        sum += br.probability;
    }
    tree.worst_level_probability_error = std::max(tree.worst_level_probability_error, std::abs(sum - 1.0));
    for (const auto& br : outcomes) {
        path.push_back(br.outcome);
        if (br.action.kind == Action::Kind::Output) {
            if (tree.leaves.size() >= opts.max_leaves) {
                throw std::length_error("branch tree exceeds " + std::to_string(opts.max_leaves) + " leaves");
            }
            tree.leaves.push_back({br.action.output, prob * br.probability, inp.queries_used(), path});
        } else {
            expand(cache, *br.child, remove_indices(inp, br.action.removed), prob * br.probability, path, opts,
                   tree);
        }
        path.pop_back();
    }
}

}  // namespace detail

/// Expands every measurement branch. Throws std::length_error past
/// opts.max_leaves; use TreeSummarizer for large instances.
inline BranchTree run_full(AlgorithmSpec spec, const PaddedInput& inp, const RunOptions& opts = {}) {
    if (inp.level_size() != spec.level_size()) {
        throw std::invalid_argument("input has " + std::to_string(inp.level_size()) + " active bits, level needs " +
                                    std::to_string(spec.level_size()));
    }
    KernelCache cache;
    BranchTree tree;
    std::vector<BasisIndex> path;
    detail::expand(cache, spec, inp, 1.0, path, opts, tree);
    return tree;
}

/// Aggregate of a branch tree below one node, with queries counted from that
/// node.
struct SubtreeSummary {
    std::uint8_t answers = 0;  // bit 0: some leaf outputs 0, bit 1: some leaf outputs 1
    std::size_t max_queries = 0;
    std::size_t min_queries = std::numeric_limits<std::size_t>::max();
    std::uint64_t leaves = 0;
    double probability = 0;  // total leaf probability, should be 1
    double worst_level_probability_error = 0;
    double worst_norm_residual = 0;
};

/// Computes the same information as run_full without materializing paths.
/// A level's behavior depends only on the ordered bits still in play, so
/// subtrees are memoized on (family, active bit string).
class TreeSummarizer {
   public:
    explicit TreeSummarizer(MajDiscard discard = MajDiscard::Smallest) : discard_(discard) {}

    SubtreeSummary summarize(AlgorithmSpec spec, const PaddedInput& inp) {
        if (inp.level_size() != spec.level_size()) {
            throw std::invalid_argument("input does not match level size");
        }
        return summarize_bits(spec, inp.active_bits());
    }

    std::size_t memo_size() const { return memo_.size(); }

   private:
    static constexpr std::size_t kMaxLevel = 56;

    static std::uint64_t key(AlgorithmSpec spec, const Bits& bits) {
        std::uint64_t k = 0;
        for (std::size_t i = 0; i < bits.size(); ++i) {
            k |= static_cast<std::uint64_t>(bits[i]) << i;
        }
        k |= static_cast<std::uint64_t>(bits.size()) << 57;
        if (spec.family == Family::Maj) {
            k |= std::uint64_t{1} << 63;
        }
        return k;
    }

    static std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
        return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
    }

    SubtreeSummary summarize_bits(AlgorithmSpec spec, const Bits& bits) {
        if (bits.size() > kMaxLevel) {
            throw std::length_error("TreeSummarizer supports at most 56 active inputs");
        }
        const std::uint64_t k = key(spec, bits);
        if (auto it = memo_.find(k); it != memo_.end()) {
            return it->second;
        }
        SubtreeSummary sum;
        PaddedInput inp(bits);
        if (spec.m == 0) {
            int answer = spec.family == Family::Exact ? 1 : read_last_bit(inp);
            sum.answers = static_cast<std::uint8_t>(1u << answer);
            sum.max_queries = sum.min_queries = inp.queries_used();
            sum.leaves = 1;
            sum.probability = 1.0;
            memo_.emplace(k, sum);
            return sum;
        }
        StateVector psi = simulate_level(kernels_.get(spec), inp);
        sum.worst_norm_residual = std::abs(psi.norm() - 1.0);
        auto outcomes = classify_outcomes(spec, psi, discard_);
        double psum = 0;
        for (const auto& br : outcomes) {
            psum += br.probability;
            if (br.action.kind == Action::Kind::Output) {
                sum.answers |= static_cast<std::uint8_t>(1u << br.action.output);
                sum.max_queries = std::max<std::size_t>(sum.max_queries, 1);
                sum.min_queries = std::min<std::size_t>(sum.min_queries, 1);
                sum.leaves = sat_add(sum.leaves, 1);
                sum.probability += br.probability;
                continue;
            }
            Bits child_bits;
            for (std::size_t l = 1; l <= bits.size(); ++l) {
                if (std::find(br.action.removed.begin(), br.action.removed.end(), l) == br.action.removed.end()) {
                    child_bits.push_back(bits[l - 1]);
                }
            }
            const SubtreeSummary c = summarize_bits(*br.child, child_bits);
            sum.answers |= c.answers;
            sum.max_queries = std::max(sum.max_queries, 1 + c.max_queries);
            sum.min_queries = std::min(sum.min_queries, 1 + c.min_queries);
            sum.leaves = sat_add(sum.leaves, c.leaves);
            sum.probability += br.probability * c.probability;
            sum.worst_level_probability_error =
                std::max(sum.worst_level_probability_error, c.worst_level_probability_error);
            sum.worst_norm_residual = std::max(sum.worst_norm_residual, c.worst_norm_residual);
        }
        sum.worst_level_probability_error = std::max(sum.worst_level_probability_error, std::abs(psum - 1.0));
        memo_.emplace(k, sum);
        return sum;
    }

    MajDiscard discard_;
    KernelCache kernels_;
    std::unordered_map<std::uint64_t, SubtreeSummary> memo_;
};

// ---------------------------------------------------------------------------
// Sampled execution
// ---------------------------------------------------------------------------

struct TraceLevel {
    std::size_t size = 0;
    BasisIndex outcome;
    double probability = 0;
    Rational exact_probability;
    std::vector<std::size_t> removed;  // global positions
};

struct RunTrace {
    std::vector<TraceLevel> levels;
    int answer = 0;
    std::size_t queries = 0;
};

/// Follows one measurement branch per level, sampled with a generator seeded
/// by `seed`. Same seed and input give the same trace.
inline RunTrace run_sampled(AlgorithmSpec spec, PaddedInput inp, std::uint64_t seed,
                            MajDiscard discard = MajDiscard::Smallest) {
    if (inp.level_size() != spec.level_size()) {
        throw std::invalid_argument("input does not match level size");
    }
    std::mt19937_64 rng(seed);
    KernelCache cache;
    RunTrace trace;
    while (spec.m > 0) {
        const Bits bits = inp.active_bits();
        auto outcomes = level_outcomes(cache.get(spec), inp, discard);
        // Uniform in [0, 1) from the top 53 bits, independent of the
        // standard library's distribution implementation.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        double acc = 0;
        std::size_t pick = outcomes.size() - 1;
        for (std::size_t b = 0; b < outcomes.size(); ++b) {
            acc += outcomes[b].probability;
            if (u < acc) {
                pick = b;
                break;
            }
        }
        const BranchOutcome& br = outcomes[pick];
        TraceLevel lvl{spec.level_size(), br.outcome, br.probability,
                       exact_branch_probability(spec, bits, br.outcome), {}};
        for (auto l : br.action.removed) {
            lvl.removed.push_back(inp.active()[l - 1]);
        }
        trace.levels.push_back(std::move(lvl));
        if (br.action.kind == Action::Kind::Output) {
            trace.answer = br.action.output;
            trace.queries = inp.queries_used();
            return trace;
        }
        inp = remove_indices(inp, br.action.removed);
        spec = *br.child;
    }
    trace.answer = spec.family == Family::Exact ? 1 : read_last_bit(inp);
    trace.queries = inp.queries_used();
    return trace;
}

// ---------------------------------------------------------------------------
// Dispatch for arbitrary (n, k)
// ---------------------------------------------------------------------------

struct Solution {
    int answer = 0;
    std::size_t budget = 0;  // worst-case queries of the reduction used
    std::optional<AlgorithmSpec> spec;  // empty for constant thresholds
    PaddedInput input;
    RunTrace trace;
};

/// EXACT_k^n via padding to EXACT_m^{2m}, m = max{k, n-k}.
inline Solution solve_exact(const Bits& x, std::size_t k, std::uint64_t seed = 0) {
    auto inst = pad_for_exact(x, k);
    AlgorithmSpec spec{Family::Exact, inst.m};
    Solution sol;
    sol.trace = run_sampled(spec, inst.input, seed);
    sol.answer = sol.trace.answer;
    sol.budget = inst.m;
    sol.spec = spec;
    sol.input = std::move(inst.input);
    return sol;
}

/// Th_k^n via padding to MAJ_{2m+1}, budget m+1 = max{k, n-k+1}. k = 0 and
/// k > n are constant and cost nothing.
inline Solution solve_threshold(const Bits& x, std::size_t k, std::uint64_t seed = 0) {
    Solution sol;
    if (k == 0 || k > x.size()) {
        sol.answer = k == 0 ? 1 : 0;
        sol.trace.answer = sol.answer;
        sol.input = PaddedInput(x);
        return sol;
    }
    auto inst = pad_for_threshold(x, k);
    AlgorithmSpec spec{Family::Maj, inst.m};
    sol.trace = run_sampled(spec, inst.input, seed);
    sol.answer = sol.trace.answer;
    sol.budget = inst.m + 1;
    sol.spec = spec;
    sol.input = std::move(inst.input);
    return sol;
}

}  // namespace exactq
