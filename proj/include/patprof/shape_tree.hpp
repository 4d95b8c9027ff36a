// Copyright (c) 2026 the patprof authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace patprof {

/// Rooted plane binary tree with path compression: every internal node has
/// exactly two children, every leaf carries an item id.  Shared shape of the
/// partition refinement tree and the PATRICIA trie.
struct ShapeTree {
    struct Node {
        std::int32_t left = -1;   // excluded / bit 0
        std::int32_t right = -1;  // included / bit 1
        std::int64_t item = -1;   // leaf payload, -1 on internal nodes
    };

    std::vector<Node> nodes;
    std::int32_t root = -1;
    std::int64_t leaf_count = 0;

    bool is_leaf(std::int32_t id) const { return nodes[static_cast<std::size_t>(id)].left < 0; }

    std::int32_t add_leaf(std::int64_t item) {
        nodes.push_back(Node{-1, -1, item});
        ++leaf_count;
        return static_cast<std::int32_t>(nodes.size() - 1);
    }

    std::int32_t add_internal() {
        nodes.push_back(Node{});
        return static_cast<std::int32_t>(nodes.size() - 1);
    }
};

/// Per-tree measurements.  fillup is min leaf depth - 1 (so a single leaf at
/// the root gives height 0, fillup -1).
struct TreeStats {
    std::vector<std::int64_t> external_profile;  // leaves per level
    std::vector<std::int64_t> internal_profile;  // internal nodes per level
    int height = 0;
    int fillup = -1;
    std::int64_t n = 0;
};

inline TreeStats tree_stats(const ShapeTree& tree) {
    TreeStats st;
    st.n = tree.leaf_count;
    int min_leaf_depth = -1;
    std::vector<std::pair<std::int32_t, int>> stack{{tree.root, 0}};
    while (!stack.empty()) {
        auto [id, depth] = stack.back();
        stack.pop_back();
        auto grow = [depth](std::vector<std::int64_t>& prof) {
            if (static_cast<int>(prof.size()) <= depth) prof.resize(static_cast<std::size_t>(depth) + 1, 0);
            ++prof[static_cast<std::size_t>(depth)];
        };
        const auto& node = tree.nodes[static_cast<std::size_t>(id)];
        if (node.left < 0) {
            grow(st.external_profile);
            if (depth > st.height) st.height = depth;
            if (min_leaf_depth < 0 || depth < min_leaf_depth) min_leaf_depth = depth;
        } else {
            grow(st.internal_profile);
            stack.emplace_back(node.left, depth + 1);
            stack.emplace_back(node.right, depth + 1);
        }
    }
    st.fillup = min_leaf_depth - 1;
    return st;
}

/// Leaf depths in plane order (left subtree first).
inline std::vector<int> leaf_depths(const ShapeTree& tree) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(tree.leaf_count));
    std::vector<std::pair<std::int32_t, int>> stack{{tree.root, 0}};
    while (!stack.empty()) {
        auto [id, depth] = stack.back();
        stack.pop_back();
        const auto& node = tree.nodes[static_cast<std::size_t>(id)];
        if (node.left < 0) {
            out.push_back(depth);
        } else {
            stack.emplace_back(node.right, depth + 1);
            stack.emplace_back(node.left, depth + 1);
        }
    }
    return out;
}

/// Equality as rooted plane-oriented trees with matching leaf items.
inline bool is_isomorphic(const ShapeTree& a, const ShapeTree& b) {
    if (a.leaf_count != b.leaf_count) return false;
    std::vector<std::pair<std::int32_t, std::int32_t>> stack{{a.root, b.root}};
    while (!stack.empty()) {
        auto [ia, ib] = stack.back();
        stack.pop_back();
        const auto& na = a.nodes[static_cast<std::size_t>(ia)];
        const auto& nb = b.nodes[static_cast<std::size_t>(ib)];
        bool leaf_a = na.left < 0, leaf_b = nb.left < 0;
        if (leaf_a != leaf_b) return false;
        if (leaf_a) {
            if (na.item != nb.item) return false;
        } else {
            stack.emplace_back(na.left, nb.left);
            stack.emplace_back(na.right, nb.right);
        }
    }
    return true;
}

}  // namespace patprof
