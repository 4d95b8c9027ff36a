// Copyright (c) 2026 the patprof authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "patprof/bias.hpp"
#include "patprof/rng.hpp"
#include "patprof/shape_tree.hpp"
#include "patprof/trie.hpp"

namespace patprof {

/// Full record of one run of the query process: the conclusive queries
/// (post-modification label sets), the partition after each query, and the
/// induced refinement tree.
struct RefinementHistory {
    std::int64_t n = 0;
    std::vector<std::vector<std::uint32_t>> queries;
    std::vector<std::vector<std::vector<std::uint32_t>>> partitions;  // partitions[0] = trivial
    ShapeTree refinement_tree;
};

struct ProcessOptions {
    std::int64_t max_redraws_per_block = 1000000;
    bool record_partitions = true;
};

/// Simulates the query process with per-element re-randomization of
/// inconclusive query parts.  `decide(label)` supplies one inclusion decision
/// and is consulted once per label of each non-singleton block per attempt;
/// singleton blocks are frozen and consume no decisions.
template <typename DecisionFn>
RefinementHistory simulate_process(std::int64_t n, DecisionFn&& decide,
                                   const ProcessOptions& opts = {}) {
    if (n < 2) throw std::invalid_argument("simulate_process: n must be >= 2");

    RefinementHistory hist;
    hist.n = n;
    ShapeTree& tree = hist.refinement_tree;
    tree.nodes.reserve(static_cast<std::size_t>(2 * n));

    struct Block {
        std::vector<std::uint32_t> labels;
        std::int32_t node;
    };

    std::int32_t root = tree.add_internal();
    tree.root = root;
    std::vector<Block> active;
    {
        std::vector<std::uint32_t> all(static_cast<std::size_t>(n));
        for (std::uint32_t i = 0; i < n; ++i) all[i] = i + 1;  // labels are 1-based
        active.push_back(Block{std::move(all), root});
    }
    // plane-ordered singleton leaves carried along for the partition record
    std::vector<std::vector<std::uint32_t>> frozen;

    auto snapshot = [&](const std::vector<Block>& blocks) {
        std::vector<std::vector<std::uint32_t>> part;
        part.reserve(blocks.size() + frozen.size());
        for (const auto& b : blocks) part.push_back(b.labels);
        for (const auto& s : frozen) part.push_back(s);
        return part;
    };
    if (opts.record_partitions) hist.partitions.push_back(snapshot(active));

    std::vector<bool> included;
    while (!active.empty()) {
        std::vector<Block> next;
        std::vector<std::uint32_t> query;
        for (auto& blk : active) {
            const std::size_t m = blk.labels.size();
            included.assign(m, false);
            std::size_t ones = 0;
            // first decision is unconditional; redraw this block until split
            for (std::int64_t attempt = 0;; ++attempt) {
                if (attempt >= opts.max_redraws_per_block)
                    throw resource_limit_error("simulate_process: block redraw guard exceeded");
                ones = 0;
                for (std::size_t i = 0; i < m; ++i) {
                    included[i] = decide(blk.labels[i]);
                    ones += included[i] ? 1u : 0u;
                }
                if (ones != 0 && ones != m) break;
            }
            std::vector<std::uint32_t> in, out;
            in.reserve(ones);
            out.reserve(m - ones);
            for (std::size_t i = 0; i < m; ++i)
                (included[i] ? in : out).push_back(blk.labels[i]);
            query.insert(query.end(), in.begin(), in.end());

            auto emit = [&](std::vector<std::uint32_t>&& labels, bool as_right) {
                std::int32_t child;
                if (labels.size() == 1) {
                    child = tree.add_leaf(labels[0]);
                    frozen.push_back(std::move(labels));
                } else {
                    child = tree.add_internal();
                    next.push_back(Block{std::move(labels), child});
                }
                auto& parent = tree.nodes[static_cast<std::size_t>(blk.node)];
                (as_right ? parent.right : parent.left) = child;
            };
            emit(std::move(out), false);
            emit(std::move(in), true);
        }
        std::sort(query.begin(), query.end());
        hist.queries.push_back(std::move(query));
        if (opts.record_partitions) hist.partitions.push_back(snapshot(next));
        active = std::move(next);
    }
    return hist;
}

template <typename Rng>
RefinementHistory simulate_process(std::int64_t n, const BiasModel& model, Rng& rng,
                                   const ProcessOptions& opts = {}) {
    return simulate_process(
        n, [&](std::uint32_t) { return u01_from_bits(rng()) < model.p; }, opts);
}

/// Runs the process with label j's decisions read off stream S_j (one fresh
/// bit per decision) and builds the PATRICIA trie over the same streams.
/// The two trees are isomorphic with probability 1.
inline std::pair<ShapeTree, RefinementHistory> couple_with_patricia(
    std::span<const BitStream> streams, const ProcessOptions& opts = {},
    std::uint32_t max_bit_depth = 0) {
    if (streams.size() < 2)
        throw std::invalid_argument("couple_with_patricia: need n >= 2 streams");
    if (max_bit_depth == 0) max_bit_depth = default_max_bit_depth(streams.size());

    std::vector<std::uint32_t> cursor(streams.size(), 0);
    auto decide = [&](std::uint32_t label) {
        std::uint32_t idx = label - 1;  // labels are 1-based, streams 0-based
        if (cursor[idx] >= max_bit_depth)
            throw resource_limit_error("couple_with_patricia: stream bit budget exceeded");
        return streams[idx].bit(cursor[idx]++);
    };
    RefinementHistory hist = simulate_process(static_cast<std::int64_t>(streams.size()), decide, opts);
    ShapeTree patricia = build_patricia(streams, max_bit_depth);
    // stream items are 0-based; shift trie leaves to the 1-based label space
    for (auto& node : patricia.nodes)
        if (node.left < 0) node.item += 1;
    return {std::move(patricia), std::move(hist)};
}

/// Debug/pedagogy trace, one line per query: `q=<index> included=<labels>`.
inline std::string render_trace(const RefinementHistory& hist) {
    if (hist.n > 64) throw std::invalid_argument("render_trace: intended for n <= 64");
    std::ostringstream os;
    for (std::size_t i = 0; i < hist.queries.size(); ++i) {
        os << "q=" << (i + 1) << " included=";
        const auto& q = hist.queries[i];
        for (std::size_t j = 0; j < q.size(); ++j) {
            if (j) os << ',';
            os << q[j];
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace patprof
