// Copyright (c) 2026 the patprof authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "patprof/bias.hpp"
#include "patprof/rng.hpp"
#include "patprof/shape_tree.hpp"

namespace patprof {

inline std::uint32_t default_max_bit_depth(std::size_t n) {
    // separation depth is O(log n) whp; 64 per doubling is a generous guard
    std::uint32_t lg = 1;
    while ((std::size_t{1} << lg) < n) ++lg;
    return 64 * lg;
}

/// PATRICIA trie over the given streams: scan bit positions left to right,
/// keep only positions that split the current group (path compression), bit 1
/// goes right.  Streams are extended lazily until every item is separated.
inline ShapeTree build_patricia(std::span<const BitStream> streams, std::uint32_t max_bit_depth = 0) {
    if (streams.empty()) throw std::invalid_argument("build_patricia: need at least one stream");
    if (max_bit_depth == 0) max_bit_depth = default_max_bit_depth(streams.size());

    ShapeTree tree;
    tree.nodes.reserve(2 * streams.size());
    std::vector<std::uint32_t> order(streams.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<std::uint32_t> scratch(order.size());

    struct Frame {
        std::uint32_t lo, hi;      // range in `order`
        std::uint32_t bit;         // next bit position to inspect
        std::int32_t parent;       // node to receive the result
        bool as_right;
    };
    std::vector<Frame> stack{{0, static_cast<std::uint32_t>(order.size()), 0, -1, false}};

    auto attach = [&tree](std::int32_t parent, bool as_right, std::int32_t child) {
        if (parent < 0)
            tree.root = child;
        else if (as_right)
            tree.nodes[static_cast<std::size_t>(parent)].right = child;
        else
            tree.nodes[static_cast<std::size_t>(parent)].left = child;
    };

    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (f.hi - f.lo == 1) {
            attach(f.parent, f.as_right, tree.add_leaf(streams[order[f.lo]].item()));
            continue;
        }
        // advance past non-branching bit positions
        std::uint32_t bit = f.bit;
        std::uint32_t n_ones = 0;
        for (;; ++bit) {
            if (bit >= max_bit_depth)
                throw resource_limit_error("build_patricia: streams not separated within max bit depth");
            n_ones = 0;
            for (std::uint32_t i = f.lo; i < f.hi; ++i)
                n_ones += streams[order[i]].bit(bit) ? 1u : 0u;
            if (n_ones != 0 && n_ones != f.hi - f.lo) break;
        }
        // stable partition: zeros first, ones after
        std::uint32_t z = f.lo, o = f.hi - n_ones;
        for (std::uint32_t i = f.lo; i < f.hi; ++i) {
            std::uint32_t idx = order[i];
            if (streams[idx].bit(bit))
                scratch[o++] = idx;
            else
                scratch[z++] = idx;
        }
        std::copy(scratch.begin() + f.lo, scratch.begin() + f.hi, order.begin() + f.lo);

        std::int32_t node = tree.add_internal();
        attach(f.parent, f.as_right, node);
        std::uint32_t mid = f.hi - n_ones;
        stack.push_back(Frame{f.lo, mid, bit + 1, node, false});
        stack.push_back(Frame{mid, f.hi, bit + 1, node, true});
    }
    return tree;
}

/// Same tree distribution without materializing strings: recursive
/// conditioned-binomial splitting, included side (size j) to the right.
template <typename Rng>
ShapeTree generate_shape(std::int64_t n, const BiasModel& model, Rng& rng) {
    if (n < 1) throw std::invalid_argument("generate_shape: n must be >= 1");
    ShapeTree tree;
    tree.nodes.reserve(static_cast<std::size_t>(2 * n));

    struct Frame {
        std::int64_t size;
        std::int32_t parent;
        bool as_right;
    };
    std::vector<Frame> stack{{n, -1, false}};
    auto attach = [&tree](std::int32_t parent, bool as_right, std::int32_t child) {
        if (parent < 0)
            tree.root = child;
        else if (as_right)
            tree.nodes[static_cast<std::size_t>(parent)].right = child;
        else
            tree.nodes[static_cast<std::size_t>(parent)].left = child;
    };
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (f.size == 1) {
            attach(f.parent, f.as_right, tree.add_leaf(0));
            continue;
        }
        int j = conditioned_binomial(static_cast<int>(f.size), model, rng);
        std::int32_t node = tree.add_internal();
        attach(f.parent, f.as_right, node);
        stack.push_back(Frame{f.size - j, node, false});
        stack.push_back(Frame{j, node, true});
    }
    return tree;
}

/// Depth of a uniformly random leaf, sampled by walking one tagged item
/// through the splitting process; no tree is built.
template <typename Rng>
int sample_depth(std::int64_t n, const BiasModel& model, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_depth: n must be >= 1");
    int depth = 0;
    std::int64_t m = n;
    while (m > 1) {
        int j = conditioned_binomial(static_cast<int>(m), model, rng);
        // tagged item lands in the included side with probability j/m
        std::uniform_int_distribution<std::int64_t> pick(0, m - 1);
        m = pick(rng) < j ? j : m - j;
        ++depth;
    }
    return depth;
}

}  // namespace patprof
