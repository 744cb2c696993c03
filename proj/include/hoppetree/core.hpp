#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hoppetree/rng.hpp"

namespace hoppetree {

// Parameters of one tree realization. theta > 0 is the root's attachment
// weight; the extremal flag admits theta == 0 (root plus one mandatory child,
// all further weight on non-root nodes), used for height-dominance checks.
struct TreeParams {
  double theta = 1.0;
  std::int64_t n = 1;
  std::uint64_t seed = 0;
  bool theta_zero_extremal = false;
};

void validate(const TreeParams& params);

// A grown tree, encoded as the parent sequence: node 1 is the root and
// parent_of(i) < i for 2 <= i <= n (insertion-order labels).
class HoppeTree {
 public:
  // `parent` is 1-indexed with entries for 2..n; parent[0] and parent[1]
  // are ignored. Validates parent_of(i) < i.
  static HoppeTree from_parents(std::int64_t n, std::vector<std::int32_t> parent);

  std::int64_t size() const { return n_; }
  std::int32_t parent_of(std::int64_t i) const { return parent_[static_cast<std::size_t>(i)]; }

 private:
  HoppeTree(std::int64_t n, std::vector<std::int32_t> parent)
      : n_(n), parent_(std::move(parent)) {}

  std::int64_t n_;
  std::vector<std::int32_t> parent_;
};

struct TreeStats {
  std::int64_t depth_last = 0;
  std::int64_t height = 0;
  std::int64_t ipl = 0;
  std::int64_t leaves = 1;
  std::optional<std::int64_t> subtree2;  // absent for n = 1
};

// Parent of node k+1 inserted into a k-node tree (k >= 2): the root with
// probability theta/(theta+k-1), any fixed non-root node with probability
// 1/(theta+k-1). One uniform draw, no tie-breaking.
inline std::int64_t pick_parent(double theta, std::int64_t k, Xoshiro256pp& rng) {
  const double u = rng.next_double() * (theta + static_cast<double>(k - 1));
  if (u < theta) return 1;
  const std::int64_t idx = static_cast<std::int64_t>(u - theta) + 2;
  return idx <= k ? idx : k;  // guard against top-edge rounding
}

HoppeTree grow_tree(const TreeParams& params, Xoshiro256pp& rng);

TreeStats tree_stats(const HoppeTree& tree);

// True iff node i lies on the root-path of node j. Requires 1 <= i < j <= n.
bool is_ancestor(const HoppeTree& tree, std::int64_t i, std::int64_t j);

// Reusable buffers for the streaming grower below.
struct GrowWorkspace {
  std::vector<std::int32_t> depth;
  std::vector<std::uint8_t> has_child;
  std::vector<std::uint8_t> in_subtree2;
};

// Grows a tree and extracts statistics in one pass without materializing the
// parent sequence. Consumes exactly the same draws as grow_tree.
TreeStats simulate_tree_stats(const TreeParams& params, Xoshiro256pp& rng,
                              GrowWorkspace& ws);

}  // namespace hoppetree
