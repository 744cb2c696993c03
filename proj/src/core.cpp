#include "hoppetree/core.hpp"

#include <algorithm>
#include <stdexcept>

namespace hoppetree {

void validate(const TreeParams& params) {
  if (params.n < 1) {
    throw std::invalid_argument("TreeParams: n must be >= 1");
  }
  if (params.theta_zero_extremal) {
    if (params.theta != 0.0) {
      throw std::invalid_argument("TreeParams: extremal flag requires theta == 0");
    }
    if (params.n < 2) {
      throw std::invalid_argument("TreeParams: extremal tree starts with root and one child");
    }
  } else if (!(params.theta > 0.0)) {
    throw std::invalid_argument("TreeParams: theta must be > 0");
  }
}

HoppeTree HoppeTree::from_parents(std::int64_t n, std::vector<std::int32_t> parent) {
  if (n < 1) {
    throw std::invalid_argument("HoppeTree: n must be >= 1");
  }
  if (static_cast<std::int64_t>(parent.size()) < n + 1) {
    parent.resize(static_cast<std::size_t>(n + 1), 0);
  }
  for (std::int64_t i = 2; i <= n; ++i) {
    const std::int32_t p = parent[static_cast<std::size_t>(i)];
    if (p < 1 || p >= i) {
      throw std::invalid_argument("HoppeTree: parent labels must satisfy parent[i] < i");
    }
  }
  return HoppeTree(n, std::move(parent));
}

HoppeTree grow_tree(const TreeParams& params, Xoshiro256pp& rng) {
  validate(params);
  const std::int64_t n = params.n;
  std::vector<std::int32_t> parent(static_cast<std::size_t>(n + 1), 0);
  if (n >= 2) parent[2] = 1;  // only possible parent, no draw
  for (std::int64_t k = 2; k < n; ++k) {
    parent[static_cast<std::size_t>(k + 1)] =
        static_cast<std::int32_t>(pick_parent(params.theta, k, rng));
  }
  return HoppeTree::from_parents(n, std::move(parent));
}

TreeStats tree_stats(const HoppeTree& tree) {
  const std::int64_t n = tree.size();
  TreeStats st;
  if (n == 1) return st;

  std::vector<std::int32_t> depth(static_cast<std::size_t>(n + 1), 0);
  std::vector<std::uint8_t> has_child(static_cast<std::size_t>(n + 1), 0);
  std::vector<std::uint8_t> in_sub2(static_cast<std::size_t>(n + 1), 0);
  in_sub2[2] = 1;

  std::int64_t ipl = 0;
  std::int32_t height = 0;
  for (std::int64_t i = 2; i <= n; ++i) {
    const std::int32_t p = tree.parent_of(i);
    const std::int32_t d = depth[static_cast<std::size_t>(p)] + 1;
    depth[static_cast<std::size_t>(i)] = d;
    ipl += d;
    height = std::max(height, d);
    has_child[static_cast<std::size_t>(p)] = 1;
    if (i > 2) in_sub2[static_cast<std::size_t>(i)] = (p == 2) | in_sub2[static_cast<std::size_t>(p)];
  }

  st.depth_last = depth[static_cast<std::size_t>(n)];
  st.height = height;
  st.ipl = ipl;
  st.leaves = std::count(has_child.begin() + 1, has_child.begin() + n + 1, 0);
  st.subtree2 = std::count(in_sub2.begin() + 1, in_sub2.begin() + n + 1, 1);
  return st;
}

bool is_ancestor(const HoppeTree& tree, std::int64_t i, std::int64_t j) {
  if (i < 1 || i >= j || j > tree.size()) {
    throw std::invalid_argument("is_ancestor: requires 1 <= i < j <= n");
  }
  std::int64_t cur = j;
  while (cur > i) cur = tree.parent_of(cur);
  return cur == i;
}

TreeStats simulate_tree_stats(const TreeParams& params, Xoshiro256pp& rng,
                              GrowWorkspace& ws) {
  validate(params);
  const std::int64_t n = params.n;
  TreeStats st;
  if (n == 1) return st;

  const std::size_t size = static_cast<std::size_t>(n + 1);
  ws.depth.assign(size, 0);
  ws.has_child.assign(size, 0);
  ws.in_subtree2.assign(size, 0);
  ws.depth[2] = 1;
  ws.has_child[1] = 1;
  ws.in_subtree2[2] = 1;

  std::int64_t ipl = 1;
  std::int32_t height = 1;
  for (std::int64_t k = 2; k < n; ++k) {
    const std::int64_t c = pick_parent(params.theta, k, rng);
    const std::int32_t d = ws.depth[static_cast<std::size_t>(c)] + 1;
    ws.depth[static_cast<std::size_t>(k + 1)] = d;
    ipl += d;
    height = std::max(height, d);
    ws.has_child[static_cast<std::size_t>(c)] = 1;
    ws.in_subtree2[static_cast<std::size_t>(k + 1)] =
        (c == 2) | ws.in_subtree2[static_cast<std::size_t>(c)];
  }

  st.depth_last = ws.depth[static_cast<std::size_t>(n)];
  st.height = height;
  st.ipl = ipl;
  st.leaves = std::count(ws.has_child.begin() + 1, ws.has_child.begin() + n + 1, 0);
  st.subtree2 = std::count(ws.in_subtree2.begin() + 1, ws.in_subtree2.begin() + n + 1, 1);
  return st;
}

}  // namespace hoppetree
