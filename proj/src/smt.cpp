#include "cmt/smt.hpp"

#include <algorithm>

namespace cmt {

namespace {
constexpr std::uint8_t kLeafTag = 0x00;
constexpr std::uint8_t kInternalTag = 0x01;
}  // namespace

SparseMerkleTree::SparseMerkleTree(HashScheme scheme)
    : scheme_(std::move(scheme)), max_bits_(std::min(kMaxDepth, 8 * scheme_.width())) {}

NodeId SparseMerkleTree::allocate(SmtNode node) {
  if (!free_.empty()) {
    NodeId id = free_.back();
    free_.pop_back();
    nodes_[id] = std::move(node);
    return id;
  }
  nodes_.push_back(std::move(node));
  return static_cast<NodeId>(nodes_.size() - 1);
}

void SparseMerkleTree::release(NodeId id) {
  nodes_[id] = SmtNode{};
  free_.push_back(id);
}

Digest SparseMerkleTree::hash_of(NodeId id) const {
  return id == kNil ? scheme_.zero_digest() : nodes_[id].hash;
}

void SparseMerkleTree::rehash(NodeId id, OpCounters& c) {
  SmtNode& n = nodes_[id];
  std::vector<std::uint8_t> buf;
  if (n.leaf) {
    buf.push_back(kLeafTag);
    buf.insert(buf.end(), n.key.bytes().begin(), n.key.bytes().end());
  } else {
    buf.push_back(kInternalTag);
    Digest l = hash_of(n.left);
    Digest r = hash_of(n.right);
    buf.insert(buf.end(), l.bytes().begin(), l.bytes().end());
    buf.insert(buf.end(), r.bytes().begin(), r.bytes().end());
  }
  n.hash = scheme_.hash_bytes(buf);
  ++c.hash_calls;
  ++c.node_writes;
}

// Points the slot that `key` follows out of `parent` (at `parent_depth`) at `child`.
void SparseMerkleTree::relink(NodeId parent, std::size_t parent_depth, const Key& key,
                              NodeId child) {
  if (parent == kNil) {
    root_ = child;
  } else if (key.bit(parent_depth)) {
    nodes_[parent].right = child;
  } else {
    nodes_[parent].left = child;
  }
}

MutationReport SparseMerkleTree::insert(const Key& key) {
  scheme_.require_width(key);
  OpCounters c;

  std::vector<NodeId> path;
  NodeId cur = root_;
  while (cur != kNil && !nodes_[cur].leaf) {
    ++c.node_reads;
    path.push_back(cur);
    cur = key.bit(path.size() - 1) ? nodes_[cur].right : nodes_[cur].left;
  }
  const std::size_t depth = path.size();
  const NodeId parent = path.empty() ? kNil : path.back();
  const std::size_t parent_depth = depth == 0 ? 0 : depth - 1;

  NodeId leaf = allocate({true, key, {}, kNil, kNil});
  rehash(leaf, c);

  if (cur == kNil) {
    relink(parent, parent_depth, key, leaf);
    ++c.node_writes;
    c.depth = depth;
  } else {
    ++c.node_reads;
    const Key existing = nodes_[cur].key;
    if (existing == key) {
      release(leaf);
      throw DuplicateKey("key already present: " + key.to_hex());
    }
    std::size_t split = depth;
    while (split < max_bits_ && key.bit(split) == existing.bit(split)) ++split;
    if (split >= max_bits_) {
      release(leaf);
      throw InvalidInput("keys share a prefix longer than the SMT depth cap");
    }
    // Fork at `split`, then wrap in single-child internals back up to `depth`.
    NodeId sub = allocate({false, {}, {}, kNil, kNil});
    if (key.bit(split)) {
      nodes_[sub].right = leaf;
      nodes_[sub].left = cur;
    } else {
      nodes_[sub].left = leaf;
      nodes_[sub].right = cur;
    }
    rehash(sub, c);
    for (std::size_t level = split; level-- > depth;) {
      NodeId wrap = allocate({false, {}, {}, kNil, kNil});
      (key.bit(level) ? nodes_[wrap].right : nodes_[wrap].left) = sub;
      rehash(wrap, c);
      sub = wrap;
    }
    relink(parent, parent_depth, key, sub);
    ++c.node_writes;
    c.depth = split + 1;
  }
  ++count_;

  for (auto it = path.rbegin(); it != path.rend(); ++it) rehash(*it, c);
  return {root(), c};
}

MutationReport SparseMerkleTree::remove(const Key& key) {
  scheme_.require_width(key);
  OpCounters c;

  std::vector<NodeId> path;
  NodeId cur = root_;
  while (cur != kNil && !nodes_[cur].leaf) {
    ++c.node_reads;
    path.push_back(cur);
    cur = key.bit(path.size() - 1) ? nodes_[cur].right : nodes_[cur].left;
  }
  if (cur == kNil || nodes_[cur].key != key) throw KeyNotFound("key not found: " + key.to_hex());
  ++c.node_reads;
  c.depth = path.size();

  release(cur);
  --count_;
  if (path.empty()) {
    root_ = kNil;
    ++c.node_writes;
    return {root(), c};
  }

  relink(path.back(), path.size() - 1, key, kNil);
  ++c.node_writes;

  // An internal node left with one leaf child and one empty slot is replaced
  // by that leaf, repeatedly, while the leaf's new sibling is also empty.
  while (!path.empty()) {
    NodeId p = path.back();
    NodeId l = nodes_[p].left;
    NodeId r = nodes_[p].right;
    NodeId only = l == kNil ? r : (r == kNil ? l : kNil);
    if (only == kNil || !nodes_[only].leaf) break;
    path.pop_back();
    release(p);
    relink(path.empty() ? kNil : path.back(), path.size() - 1, key, only);
    ++c.node_writes;
  }

  for (auto it = path.rbegin(); it != path.rend(); ++it) rehash(*it, c);
  return {root(), c};
}

Digest SparseMerkleTree::root() const { return hash_of(root_); }

std::optional<std::size_t> SparseMerkleTree::depth_of(const Key& key) const {
  if (key.width() != scheme_.width()) return std::nullopt;
  std::size_t depth = 0;
  NodeId cur = root_;
  while (cur != kNil && !nodes_[cur].leaf) {
    cur = key.bit(depth) ? nodes_[cur].right : nodes_[cur].left;
    ++depth;
  }
  if (cur == kNil || nodes_[cur].key != key) return std::nullopt;
  return depth;
}

}  // namespace cmt
