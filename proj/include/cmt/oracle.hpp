#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cmt/bytes.hpp"
#include "cmt/hashing.hpp"
#include "cmt/tree.hpp"

namespace cmt::oracle {

/// Immutable reference tree built directly from the structural rules.
struct RefNode {
  Key key;
  Priority priority;
  Digest mh;
  std::unique_ptr<RefNode> left;
  std::unique_ptr<RefNode> right;
};

struct ReferenceTree {
  std::unique_ptr<RefNode> root;
  Digest root_digest;
  std::size_t size = 0;
};

/// Root is the key of highest rank, left/right subtrees are built recursively
/// from the keys below/above it, hashes are filled bottom-up. Shares only the
/// hash scheme with Tree; no rotation code is involved. Quadratic worst case.
///
/// Duplicate keys are collapsed.
ReferenceTree build_reference(std::vector<Key> keys, const HashScheme& scheme);

struct CompareResult {
  bool ok = true;
  std::string difference;
};

/// Deep equality of keys, priorities, hashes and shape.
CompareResult compare(const ReferenceTree& reference, const Tree& tree);

}  // namespace cmt::oracle
