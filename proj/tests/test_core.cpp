#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hoppetree/core.hpp"

using namespace hoppetree;

namespace {

HoppeTree make_tree(std::vector<std::int32_t> parents_from_node2) {
  const std::int64_t n = static_cast<std::int64_t>(parents_from_node2.size()) + 1;
  std::vector<std::int32_t> parent(static_cast<std::size_t>(n + 1), 0);
  for (std::size_t i = 0; i < parents_from_node2.size(); ++i) {
    parent[i + 2] = parents_from_node2[i];
  }
  return HoppeTree::from_parents(n, std::move(parent));
}

}  // namespace

TEST_CASE("single-node tree") {
  TreeParams p{1.0, 1, 42, false};
  Xoshiro256pp rng(42);
  const HoppeTree t = grow_tree(p, rng);
  CHECK(t.size() == 1);
  const TreeStats st = tree_stats(t);
  CHECK(st.depth_last == 0);
  CHECK(st.height == 0);
  CHECK(st.ipl == 0);
  CHECK(st.leaves == 1);
  CHECK(!st.subtree2.has_value());
}

TEST_CASE("two-node tree has a deterministic edge") {
  for (const std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    TreeParams p{5.0, 2, seed, false};
    Xoshiro256pp rng = Xoshiro256pp::for_stream(seed, 0);
    const HoppeTree t = grow_tree(p, rng);
    CHECK(t.parent_of(2) == 1);
    const TreeStats st = tree_stats(t);
    CHECK(st.depth_last == 1);
    CHECK(st.subtree2.value() == 1);
  }
}

TEST_CASE("third node picks the root with probability theta/(theta+1)") {
  const double theta = 2.0;
  const std::int64_t r = 100000;
  std::int64_t root_hits = 0;
  for (std::int64_t rep = 0; rep < r; ++rep) {
    Xoshiro256pp rng = Xoshiro256pp::for_stream(7, static_cast<std::uint64_t>(rep));
    const HoppeTree t = grow_tree(TreeParams{theta, 3, 7, false}, rng);
    root_hits += (t.parent_of(3) == 1);
  }
  const double freq = static_cast<double>(root_hits) / static_cast<double>(r);
  const double expect = theta / (theta + 1.0);
  const double se = std::sqrt(expect * (1.0 - expect) / static_cast<double>(r));
  CHECK(std::abs(freq - expect) <= 4.0 * se);
}

TEST_CASE("per-step parent frequencies match the weights") {
  const double theta = 0.5;
  const std::int64_t r = 200000;
  // Inserting node 4 into a 3-node tree: root weight theta, nodes 2,3 weight 1.
  std::int64_t hits[4] = {0, 0, 0, 0};
  for (std::int64_t rep = 0; rep < r; ++rep) {
    Xoshiro256pp rng = Xoshiro256pp::for_stream(11, static_cast<std::uint64_t>(rep));
    const HoppeTree t = grow_tree(TreeParams{theta, 4, 11, false}, rng);
    hits[t.parent_of(4)] += 1;
  }
  const double total = theta + 2.0;
  for (int c = 1; c <= 3; ++c) {
    const double expect = (c == 1 ? theta : 1.0) / total;
    const double freq = static_cast<double>(hits[c]) / static_cast<double>(r);
    const double se = std::sqrt(expect * (1.0 - expect) / static_cast<double>(r));
    CHECK(std::abs(freq - expect) <= 4.0 * se);
  }
}

TEST_CASE("tree_stats on a chain") {
  const TreeStats st = tree_stats(make_tree({1, 2}));
  CHECK(st.depth_last == 2);
  CHECK(st.height == 2);
  CHECK(st.ipl == 3);
  CHECK(st.leaves == 1);
  CHECK(st.subtree2.value() == 2);
}

TEST_CASE("tree_stats on a star") {
  const TreeStats st = tree_stats(make_tree({1, 1, 1}));
  CHECK(st.depth_last == 1);
  CHECK(st.height == 1);
  CHECK(st.ipl == 3);
  CHECK(st.leaves == 3);
  CHECK(st.subtree2.value() == 1);
}

TEST_CASE("tree_stats on a mixed tree") {
  const TreeStats st = tree_stats(make_tree({1, 2, 1}));
  CHECK(st.depth_last == 1);
  CHECK(st.height == 2);
  CHECK(st.ipl == 4);
  CHECK(st.leaves == 2);
  CHECK(st.subtree2.value() == 2);
}

TEST_CASE("is_ancestor basics") {
  const HoppeTree chain = make_tree({1, 2});
  CHECK(is_ancestor(chain, 1, 3));
  CHECK(is_ancestor(chain, 2, 3));
  const HoppeTree star = make_tree({1, 1});
  CHECK(is_ancestor(star, 1, 3));
  CHECK(!is_ancestor(star, 2, 3));
  CHECK_THROWS_AS(is_ancestor(chain, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(is_ancestor(chain, 3, 2), std::invalid_argument);
  CHECK_THROWS_AS(is_ancestor(chain, 1, 4), std::invalid_argument);
}

TEST_CASE("root is an ancestor of every node in random trees") {
  for (std::uint64_t rep = 0; rep < 50; ++rep) {
    Xoshiro256pp rng = Xoshiro256pp::for_stream(13, rep);
    const HoppeTree t = grow_tree(TreeParams{1.0, 20, 13, false}, rng);
    CHECK(is_ancestor(t, 1, 20));
  }
}

TEST_CASE("empirical ancestor probabilities match 1/(theta+i-1)") {
  const double theta = 2.0;
  const std::int64_t n = 30;
  const std::int64_t r = 100000;
  for (const std::int64_t i : {2LL, 5LL, 10LL}) {
    std::int64_t hits = 0;
    for (std::int64_t rep = 0; rep < r; ++rep) {
      Xoshiro256pp rng = Xoshiro256pp::for_stream(17, static_cast<std::uint64_t>(rep));
      hits += is_ancestor(grow_tree(TreeParams{theta, n, 17, false}, rng), i, n);
    }
    const double expect = 1.0 / (theta + static_cast<double>(i) - 1.0);
    const double freq = static_cast<double>(hits) / static_cast<double>(r);
    const double se = std::sqrt(expect * (1.0 - expect) / static_cast<double>(r));
    CHECK(std::abs(freq - expect) <= 4.0 * se);
  }
}

TEST_CASE("streaming stats agree with the materialized tree") {
  GrowWorkspace ws;
  for (const double theta : {0.5, 1.0, 3.0}) {
    for (const std::int64_t n : {1LL, 2LL, 3LL, 17LL, 200LL}) {
      const TreeParams p{theta, n, 23, false};
      Xoshiro256pp rng_a = Xoshiro256pp::for_stream(23, 5);
      Xoshiro256pp rng_b = Xoshiro256pp::for_stream(23, 5);
      const TreeStats a = simulate_tree_stats(p, rng_a, ws);
      const TreeStats b = tree_stats(grow_tree(p, rng_b));
      CHECK(a.depth_last == b.depth_last);
      CHECK(a.height == b.height);
      CHECK(a.ipl == b.ipl);
      CHECK(a.leaves == b.leaves);
      CHECK(a.subtree2 == b.subtree2);
    }
  }
}

TEST_CASE("stats are mutually consistent on random trees") {
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    Xoshiro256pp rng = Xoshiro256pp::for_stream(29, rep);
    const std::int64_t n = 2 + static_cast<std::int64_t>(rng.next_below(60));
    const HoppeTree t = grow_tree(TreeParams{0.7, n, 29, false}, rng);
    const TreeStats st = tree_stats(t);

    // Recompute depths independently by walking each root path.
    std::int64_t height = 0;
    std::int64_t ipl = 0;
    for (std::int64_t i = 2; i <= n; ++i) {
      std::int64_t d = 0;
      for (std::int64_t cur = i; cur != 1; cur = t.parent_of(cur)) ++d;
      height = std::max(height, d);
      ipl += d;
    }
    CHECK(st.height == height);
    CHECK(st.ipl == ipl);
    CHECK(st.depth_last <= st.height);
    CHECK(st.height <= n - 1);
    CHECK(st.ipl >= st.height);
    CHECK(st.leaves >= 1);
    CHECK(st.leaves <= n - 1);
    CHECK(st.subtree2.value() >= 1);
    CHECK(st.subtree2.value() <= n - 1);
  }
}

TEST_CASE("theta zero extremal tree") {
  CHECK_THROWS_AS(validate(TreeParams{0.0, 5, 1, false}), std::invalid_argument);
  CHECK_THROWS_AS(validate(TreeParams{1.0, 5, 1, true}), std::invalid_argument);
  CHECK_THROWS_AS(validate(TreeParams{0.0, 1, 1, true}), std::invalid_argument);

  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    Xoshiro256pp rng = Xoshiro256pp::for_stream(31, rep);
    const HoppeTree t = grow_tree(TreeParams{0.0, 12, 31, true}, rng);
    CHECK(t.parent_of(2) == 1);
    for (std::int64_t i = 3; i <= 12; ++i) {
      CHECK(t.parent_of(i) != 1);  // root never chosen after its first child
    }
  }
}

TEST_CASE("parameter validation") {
  Xoshiro256pp rng(1);
  CHECK_THROWS_AS(grow_tree(TreeParams{-1.0, 3, 1, false}, rng), std::invalid_argument);
  CHECK_THROWS_AS(grow_tree(TreeParams{1.0, 0, 1, false}, rng), std::invalid_argument);
  CHECK_THROWS_AS(HoppeTree::from_parents(3, {0, 0, 1, 3}), std::invalid_argument);
}
