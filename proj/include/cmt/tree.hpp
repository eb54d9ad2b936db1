#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmt/bytes.hpp"
#include "cmt/hashing.hpp"

namespace cmt {

using Payload = std::vector<std::uint8_t>;
using NodeId = std::uint32_t;
inline constexpr NodeId kNil = UINT32_MAX;

struct Node {
  Key key;
  Priority priority;
  Digest mh;
  NodeId left = kNil;
  NodeId right = kNil;
  /// Carried alongside the key but not covered by `mh`.
  std::optional<Payload> payload;
};

/// Work counters for one mutation. The same definitions are used by the SMT
/// baseline so the two structures can be compared directly.
struct OpCounters {
  std::size_t hash_calls = 0;   ///< node-hash evaluations
  std::size_t rotations = 0;
  std::size_t node_reads = 0;   ///< nodes visited while searching
  std::size_t node_writes = 0;  ///< node records whose links or hash changed (per change)
  std::size_t depth = 0;        ///< depth of the inserted/removed node (edges from root)
};

struct MutationReport {
  Digest root;
  OpCounters counters;
};

struct LookupResult {
  bool found = false;
  std::optional<Payload> payload;
  std::size_t depth = 0;  ///< edges from root; meaningful only when found
};

struct InvariantReport {
  bool ok = true;
  std::string violation;  ///< first violation found, empty when ok
};

/// Heap ordering used by the tree: higher priority sits closer to the root,
/// ties broken by the larger key.
bool outranks(const Priority& pa, const Key& ka, const Priority& pb, const Key& kb);

/// Cartesian Merkle Tree: a treap whose priorities are derived from keys by
/// the hash scheme, with every node carrying H(key ‖ sorted child hashes).
///
/// The shape is a pure function of the key set. Nodes live in an index-based
/// pool with a free list; no parent links are kept, mutation paths are
/// tracked on an explicit stack.
///
/// Single writer, multiple readers. No internal locking.
class Tree {
 public:
  explicit Tree(HashScheme scheme);

  /// Throws DuplicateKey (tree unchanged) or InvalidInput on width mismatch.
  MutationReport insert(const Key& key, std::optional<Payload> payload = std::nullopt);

  /// Throws KeyNotFound (tree unchanged) or InvalidInput on width mismatch.
  MutationReport remove(const Key& key);

  LookupResult lookup(const Key& key) const;
  bool contains(const Key& key) const { return lookup(key).found; }

  /// Zero digest for the empty tree, otherwise the root's mh.
  Digest root_digest() const;

  /// Full walk checking BST order, heap order, mh consistency and count.
  InvariantReport check_invariants() const;

  std::size_t size() const { return count_; }
  bool empty() const { return root_ == kNil; }
  const HashScheme& scheme() const { return scheme_; }
  std::size_t width() const { return scheme_.width(); }

  /// Read-only structural access for proofs, the oracle comparison and dumps.
  NodeId root_id() const { return root_; }
  const Node& node(NodeId id) const { return nodes_[id]; }
  Digest child_mh(NodeId id) const;

  /// Maximum depth in edges over all nodes; 0 for a single node or empty tree.
  std::size_t height() const;

  /// Keys in ascending order.
  std::vector<Key> keys() const;

  /// Rebuilds a tree from an explicit node list (preorder, child indices into
  /// the list). Every stored hash and priority is recomputed and compared;
  /// any inconsistency throws FormatError.
  static Tree from_nodes(HashScheme scheme, const std::vector<Node>& preorder, NodeId root);

 private:
  friend struct TreeTestAccess;

  NodeId allocate(Node node);
  void release(NodeId id);

  /// Pointer-only rotations. Return the promoted node.
  NodeId rotate_right(NodeId id, OpCounters& c);
  NodeId rotate_left(NodeId id, OpCounters& c);

  /// Rotation at the node holding `pivot_key` with both touched hashes and
  /// all ancestors recomputed immediately. Leaves heap order possibly broken;
  /// only reachable through TreeTestAccess.
  NodeId rotate_at(const Key& pivot_key, bool right, OpCounters& c);

  void rehash(NodeId id, OpCounters& c);
  void relink(NodeId parent, NodeId old_child, NodeId new_child);
  bool outranks(NodeId a, NodeId b) const;

  HashScheme scheme_;
  std::vector<Node> nodes_;
  std::vector<NodeId> free_;
  NodeId root_ = kNil;
  std::size_t count_ = 0;
};

}  // namespace cmt
