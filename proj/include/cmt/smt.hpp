#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cmt/bytes.hpp"
#include "cmt/hashing.hpp"
#include "cmt/tree.hpp"

namespace cmt {

/// Sparse Merkle Tree used as the comparison baseline. Leaves sit at the
/// shortest bit prefix that separates their key from every other key (left on
/// 0, right on 1); an internal node with a single leaf below it collapses into
/// that leaf, so the shape depends only on the key set.
///
/// leaf hash     = H(0x00 ‖ key)
/// internal hash = H(0x01 ‖ left ‖ right), empty child = zero digest
class SparseMerkleTree {
 public:
  static constexpr std::size_t kMaxDepth = 64;

  explicit SparseMerkleTree(HashScheme scheme);

  /// Throws DuplicateKey, or InvalidInput if two keys share a prefix longer
  /// than the depth cap.
  MutationReport insert(const Key& key);

  /// Throws KeyNotFound.
  MutationReport remove(const Key& key);

  Digest root() const;
  bool contains(const Key& key) const { return depth_of(key).has_value(); }

  /// Leaf depth (number of internal nodes above it), i.e. the sibling count
  /// of a membership path.
  std::optional<std::size_t> depth_of(const Key& key) const;

  std::size_t size() const { return count_; }
  const HashScheme& scheme() const { return scheme_; }

 private:
  struct SmtNode {
    bool leaf = false;
    Key key;
    Digest hash;
    NodeId left = kNil;
    NodeId right = kNil;
  };

  NodeId allocate(SmtNode node);
  void release(NodeId id);
  Digest hash_of(NodeId id) const;
  void rehash(NodeId id, OpCounters& c);
  void relink(NodeId parent, std::size_t parent_depth, const Key& key, NodeId child);

  HashScheme scheme_;
  std::vector<SmtNode> nodes_;
  std::vector<NodeId> free_;
  NodeId root_ = kNil;
  std::size_t count_ = 0;
  std::size_t max_bits_;
};

}  // namespace cmt
