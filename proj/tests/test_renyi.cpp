// Copyright (c) 2026 the patprof authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <deque>
#include <map>
#include <set>

#include "patprof/renyi.hpp"

using namespace patprof;

namespace {

std::map<std::uint32_t, int> label_depths(const ShapeTree& t) {
    std::map<std::uint32_t, int> out;
    std::vector<std::pair<std::int32_t, int>> stack{{t.root, 0}};
    while (!stack.empty()) {
        auto [id, d] = stack.back();
        stack.pop_back();
        const auto& nd = t.nodes[static_cast<std::size_t>(id)];
        if (nd.left < 0)
            out[static_cast<std::uint32_t>(nd.item)] = d;
        else {
            stack.emplace_back(nd.left, d + 1);
            stack.emplace_back(nd.right, d + 1);
        }
    }
    return out;
}

std::vector<std::int64_t> nodes_per_level(const ShapeTree& t) {
    std::vector<std::int64_t> counts;
    std::vector<std::pair<std::int32_t, int>> stack{{t.root, 0}};
    while (!stack.empty()) {
        auto [id, d] = stack.back();
        stack.pop_back();
        if (static_cast<int>(counts.size()) <= d) counts.resize(static_cast<std::size_t>(d) + 1, 0);
        ++counts[static_cast<std::size_t>(d)];
        const auto& nd = t.nodes[static_cast<std::size_t>(id)];
        if (nd.left >= 0) {
            stack.emplace_back(nd.left, d + 1);
            stack.emplace_back(nd.right, d + 1);
        }
    }
    return counts;
}

void check_history(const RefinementHistory& h) {
    // query count equals refinement tree height
    auto st = tree_stats(h.refinement_tree);
    REQUIRE(static_cast<int>(h.queries.size()) == st.height);
    REQUIRE(h.partitions.size() == h.queries.size() + 1);

    // each partition is a partition of [n]; successor refines predecessor
    std::map<std::uint32_t, std::size_t> owner;
    for (std::size_t j = 0; j < h.partitions.size(); ++j) {
        std::set<std::uint32_t> seen;
        std::map<std::uint32_t, std::size_t> next_owner;
        for (std::size_t b = 0; b < h.partitions[j].size(); ++b) {
            for (auto lbl : h.partitions[j][b]) {
                REQUIRE(seen.insert(lbl).second);
                next_owner[lbl] = b;
            }
        }
        REQUIRE(seen.size() == static_cast<std::size_t>(h.n));
        if (j > 0) {
            // two labels in one block now were in one block before
            for (const auto& blk : h.partitions[j])
                for (std::size_t i = 1; i < blk.size(); ++i)
                    REQUIRE(owner[blk[i]] == owner[blk[0]]);
            // every non-singleton block of P_{j-1} was split by query j
            std::map<std::size_t, int> successor_blocks;
            for (const auto& blk : h.partitions[j]) ++successor_blocks[owner[blk[0]]];
            for (std::size_t b = 0; b < h.partitions[j - 1].size(); ++b) {
                int expect = h.partitions[j - 1][b].size() >= 2 ? 2 : 1;
                REQUIRE(successor_blocks[b] == expect);
            }
        }
        owner = std::move(next_owner);
    }
    // final partition is all singletons
    for (const auto& blk : h.partitions.back()) REQUIRE(blk.size() == 1);

    // blocks of P_j = tree nodes at level j + leaves frozen above level j
    auto levels = nodes_per_level(h.refinement_tree);
    auto leaf_lv = tree_stats(h.refinement_tree).external_profile;
    for (std::size_t j = 0; j < h.partitions.size(); ++j) {
        std::int64_t frozen_above = 0;
        for (std::size_t i = 0; i < j && i < leaf_lv.size(); ++i) frozen_above += leaf_lv[i];
        std::int64_t at_level = j < levels.size() ? levels[j] : 0;
        REQUIRE(static_cast<std::int64_t>(h.partitions[j].size()) == at_level + frozen_above);
    }
}

}  // namespace

TEST_CASE("simulate_process: n=2 takes exactly one query") {
    BiasModel m(0.7);
    for (int rep = 0; rep < 100; ++rep) {
        auto rng = trial_rng(11, static_cast<std::uint64_t>(rep));
        auto h = simulate_process(2, m, rng);
        REQUIRE(h.queries.size() == 1);
        REQUIRE(tree_stats(h.refinement_tree).height == 1);
        check_history(h);
    }
}

TEST_CASE("simulate_process: n=3 takes exactly two queries") {
    BiasModel m(0.6);
    for (int rep = 0; rep < 100; ++rep) {
        auto rng = trial_rng(13, static_cast<std::uint64_t>(rep));
        auto h = simulate_process(3, m, rng);
        REQUIRE(h.queries.size() == 2);
        check_history(h);
    }
}

TEST_CASE("simulate_process: replay of the five-element example") {
    // scripted decisions: query 1 over {1..5} includes {1,5}; query 2 over
    // {2,3,4} then {1,5} includes {3} and {1}; query 3 over {2,4} includes {4}
    std::deque<bool> script{1, 0, 0, 0, 1, /*q2*/ 0, 1, 0, 1, 0, /*q3*/ 0, 1};
    auto decide = [&](std::uint32_t) {
        bool b = script.front();
        script.pop_front();
        return b;
    };
    auto h = simulate_process(5, decide);
    REQUIRE(script.empty());
    REQUIRE(h.queries.size() == 3);
    REQUIRE(h.queries[0] == std::vector<std::uint32_t>{1, 5});
    REQUIRE(h.queries[1] == std::vector<std::uint32_t>{1, 3});
    REQUIRE(h.queries[2] == std::vector<std::uint32_t>{4});

    auto depths = label_depths(h.refinement_tree);
    REQUIRE(depths[3] == 2);
    REQUIRE(depths[2] == 3);
    REQUIRE(depths[4] == 3);
    REQUIRE(depths[1] == 2);
    REQUIRE(depths[5] == 2);
    check_history(h);

    REQUIRE(render_trace(h) == "q=1 included=1,5\nq=2 included=1,3\nq=3 included=4\n");
}

TEST_CASE("simulate_process: histories satisfy the refinement invariants", "[property]") {
    for (double p : {0.5, 0.7, 0.9}) {
        BiasModel m(p);
        for (int rep = 0; rep < 30; ++rep) {
            auto rng = trial_rng(17, static_cast<std::uint64_t>(rep) + static_cast<std::uint64_t>(p * 100));
            std::int64_t n = 2 + static_cast<std::int64_t>(rng() % 40);
            auto h = simulate_process(n, m, rng);
            check_history(h);
        }
    }
}

TEST_CASE("simulate_process: constant decisions trip the redraw guard") {
    ProcessOptions opts;
    opts.max_redraws_per_block = 1000;
    REQUIRE_THROWS_AS(simulate_process(2, [](std::uint32_t) { return true; }, opts),
                      resource_limit_error);
}

TEST_CASE("is_isomorphic: plane orientation and leaf ids matter") {
    ShapeTree leaf1;
    leaf1.root = leaf1.add_leaf(3);
    ShapeTree leaf2;
    leaf2.root = leaf2.add_leaf(3);
    REQUIRE(is_isomorphic(leaf1, leaf2));
    ShapeTree leaf3;
    leaf3.root = leaf3.add_leaf(4);
    REQUIRE_FALSE(is_isomorphic(leaf1, leaf3));

    ShapeTree a;
    a.root = a.add_internal();
    a.nodes[a.root].left = a.add_leaf(1);
    a.nodes[a.root].right = a.add_leaf(2);
    ShapeTree b;
    b.root = b.add_internal();
    b.nodes[b.root].left = b.add_leaf(2);
    b.nodes[b.root].right = b.add_leaf(1);
    REQUIRE_FALSE(is_isomorphic(a, b));
    REQUIRE(is_isomorphic(a, a));
}

TEST_CASE("couple_with_patricia: trees are isomorphic") {
    SECTION("two streams") {
        BiasModel m(0.7);
        auto streams = make_streams(3, 2, m);
        auto [pat, hist] = couple_with_patricia(streams);
        REQUIRE(tree_stats(pat).height == 1);
        REQUIRE(is_isomorphic(pat, hist.refinement_tree));
    }
    SECTION("five streams, fixed seed") {
        BiasModel m(0.7);
        auto streams = make_streams(1234, 5, m);
        auto [pat, hist] = couple_with_patricia(streams);
        REQUIRE(is_isomorphic(pat, hist.refinement_tree));
        check_history(hist);
    }
    SECTION("random batch across n and p") {
        int trial = 0;
        for (double p : {0.5, 0.6, 0.9}) {
            BiasModel m(p);
            for (int rep = 0; rep < 700; ++rep, ++trial) {
                auto rng = trial_rng(555, static_cast<std::uint64_t>(trial));
                std::uint32_t n = 2 + static_cast<std::uint32_t>(rng() % 49);
                auto streams = make_streams(rng(), n, m);
                auto [pat, hist] = couple_with_patricia(streams);
                REQUIRE(is_isomorphic(pat, hist.refinement_tree));
            }
        }
    }
}
