#include "cmt/tree.hpp"

#include <tuple>
#include <utility>

namespace cmt {

bool outranks(const Priority& pa, const Key& ka, const Priority& pb, const Key& kb) {
  if (auto c = pa <=> pb; c != 0) return c > 0;
  return ka > kb;
}

Tree::Tree(HashScheme scheme) : scheme_(std::move(scheme)) {}

NodeId Tree::allocate(Node node) {
  if (!free_.empty()) {
    NodeId id = free_.back();
    free_.pop_back();
    nodes_[id] = std::move(node);
    return id;
  }
  if (nodes_.size() >= kNil) throw Error("node pool exhausted");
  nodes_.push_back(std::move(node));
  return static_cast<NodeId>(nodes_.size() - 1);
}

void Tree::release(NodeId id) {
  nodes_[id] = Node{};
  free_.push_back(id);
}

Digest Tree::child_mh(NodeId id) const {
  return id == kNil ? scheme_.zero_digest() : nodes_[id].mh;
}

bool Tree::outranks(NodeId a, NodeId b) const {
  return cmt::outranks(nodes_[a].priority, nodes_[a].key, nodes_[b].priority, nodes_[b].key);
}

void Tree::rehash(NodeId id, OpCounters& c) {
  Node& n = nodes_[id];
  n.mh = scheme_.calculate_mh(n.key, child_mh(n.left), child_mh(n.right));
  ++c.hash_calls;
  ++c.node_writes;
}

void Tree::relink(NodeId parent, NodeId old_child, NodeId new_child) {
  if (parent == kNil) {
    root_ = new_child;
  } else if (nodes_[parent].left == old_child) {
    nodes_[parent].left = new_child;
  } else {
    nodes_[parent].right = new_child;
  }
}

// Promotes the left child of `id`. Hashes are left stale; callers rehash the
// demoted node before the promoted one.
NodeId Tree::rotate_right(NodeId id, OpCounters& c) {
  NodeId pivot = nodes_[id].left;
  if (pivot == kNil) throw std::logic_error("rotate_right without a left child");
  nodes_[id].left = nodes_[pivot].right;
  nodes_[pivot].right = id;
  ++c.rotations;
  c.node_writes += 2;
  return pivot;
}

NodeId Tree::rotate_left(NodeId id, OpCounters& c) {
  NodeId pivot = nodes_[id].right;
  if (pivot == kNil) throw std::logic_error("rotate_left without a right child");
  nodes_[id].right = nodes_[pivot].left;
  nodes_[pivot].left = id;
  ++c.rotations;
  c.node_writes += 2;
  return pivot;
}

NodeId Tree::rotate_at(const Key& pivot_key, bool right, OpCounters& c) {
  std::vector<NodeId> path;
  NodeId id = root_;
  while (id != kNil && nodes_[id].key != pivot_key) {
    path.push_back(id);
    id = pivot_key < nodes_[id].key ? nodes_[id].left : nodes_[id].right;
  }
  if (id == kNil) throw KeyNotFound("key not found: " + pivot_key.to_hex());
  NodeId promoted = right ? rotate_right(id, c) : rotate_left(id, c);
  relink(path.empty() ? kNil : path.back(), id, promoted);
  rehash(id, c);
  rehash(promoted, c);
  for (auto it = path.rbegin(); it != path.rend(); ++it) rehash(*it, c);
  return promoted;
}

MutationReport Tree::insert(const Key& key, std::optional<Payload> payload) {
  scheme_.require_width(key);
  OpCounters c;

  std::vector<NodeId> path;
  for (NodeId cur = root_; cur != kNil;) {
    ++c.node_reads;
    const Node& n = nodes_[cur];
    if (key == n.key) throw DuplicateKey("key already present: " + key.to_hex());
    path.push_back(cur);
    cur = key < n.key ? n.left : n.right;
  }
  c.depth = path.size();

  NodeId id = allocate(Node{key, scheme_.priority_of(key), scheme_.zero_digest(), kNil, kNil,
                            std::move(payload)});
  ++count_;
  if (path.empty()) {
    root_ = id;
  } else if (key < nodes_[path.back()].key) {
    nodes_[path.back()].left = id;
  } else {
    nodes_[path.back()].right = id;
  }
  ++c.node_writes;

  // Bubble up while the parent ranks lower. Each demoted parent ends up below
  // `id` and below every parent demoted after it, so demotion order is a
  // valid bottom-up rehash order.
  std::vector<NodeId> demoted;
  while (!path.empty() && outranks(id, path.back())) {
    NodeId parent = path.back();
    path.pop_back();
    NodeId promoted = nodes_[parent].left == id ? rotate_right(parent, c) : rotate_left(parent, c);
    relink(path.empty() ? kNil : path.back(), parent, promoted);
    ++c.node_writes;
    demoted.push_back(parent);
  }

  for (NodeId d : demoted) rehash(d, c);
  rehash(id, c);
  for (auto it = path.rbegin(); it != path.rend(); ++it) rehash(*it, c);

  return {root_digest(), c};
}

MutationReport Tree::remove(const Key& key) {
  scheme_.require_width(key);
  OpCounters c;

  std::vector<NodeId> path;
  NodeId id = root_;
  while (id != kNil) {
    ++c.node_reads;
    const Node& n = nodes_[id];
    if (key == n.key) break;
    path.push_back(id);
    id = key < n.key ? n.left : n.right;
  }
  if (id == kNil) throw KeyNotFound("key not found: " + key.to_hex());
  c.depth = path.size();

  // Sink the node as if its priority were -inf: promote the higher-ranked
  // child until at most one child remains, then splice it out.
  while (nodes_[id].left != kNil && nodes_[id].right != kNil) {
    NodeId promoted = outranks(nodes_[id].left, nodes_[id].right) ? rotate_right(id, c)
                                                                  : rotate_left(id, c);
    relink(path.empty() ? kNil : path.back(), id, promoted);
    ++c.node_writes;
    path.push_back(promoted);
  }
  NodeId child = nodes_[id].left != kNil ? nodes_[id].left : nodes_[id].right;
  relink(path.empty() ? kNil : path.back(), id, child);
  ++c.node_writes;
  release(id);
  --count_;

  for (auto it = path.rbegin(); it != path.rend(); ++it) rehash(*it, c);

  return {root_digest(), c};
}

LookupResult Tree::lookup(const Key& key) const {
  LookupResult out;
  if (key.width() != width()) return out;
  std::size_t depth = 0;
  for (NodeId cur = root_; cur != kNil; ++depth) {
    const Node& n = nodes_[cur];
    if (key == n.key) {
      out.found = true;
      out.payload = n.payload;
      out.depth = depth;
      return out;
    }
    cur = key < n.key ? n.left : n.right;
  }
  return out;
}

Digest Tree::root_digest() const { return child_mh(root_); }

InvariantReport Tree::check_invariants() const {
  auto fail = [](std::string what) { return InvariantReport{false, std::move(what)}; };

  if ((root_ == kNil) != (count_ == 0)) return fail("root presence disagrees with count");

  struct Frame {
    NodeId id;
    const Key* lo;
    const Key* hi;
  };
  std::vector<Frame> stack;
  if (root_ != kNil) stack.push_back({root_, nullptr, nullptr});
  std::vector<NodeId> order;
  std::size_t seen = 0;
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.id >= nodes_.size()) return fail("dangling child index " + std::to_string(f.id));
    if (++seen > count_) return fail("more reachable nodes than count (cycle or stale count)");
    const Node& n = nodes_[f.id];
    const std::string name = "node " + n.key.to_hex();

    if ((f.lo && !(*f.lo < n.key)) || (f.hi && !(n.key < *f.hi))) {
      return fail(name + ": BST order violated");
    }
    if (n.priority != scheme_.priority_of(n.key)) {
      return fail(name + ": priority does not match the key's derived priority");
    }
    for (NodeId child : {n.left, n.right}) {
      if (child != kNil && child < nodes_.size() && outranks(child, f.id)) {
        return fail(name + ": heap order violated by child " + nodes_[child].key.to_hex());
      }
    }
    order.push_back(f.id);
    if (n.left != kNil) stack.push_back({n.left, f.lo, &n.key});
    if (n.right != kNil) stack.push_back({n.right, &n.key, f.hi});
  }
  if (seen != count_) {
    return fail("count " + std::to_string(count_) + " but " + std::to_string(seen) +
                " reachable nodes");
  }
  // Reverse preorder visits children before parents, so a corrupted hash is
  // reported at its own node rather than at the first ancestor that covers it.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Node& n = nodes_[*it];
    if (n.mh != scheme_.calculate_mh(n.key, child_mh(n.left), child_mh(n.right))) {
      return fail("node " + n.key.to_hex() + ": mh mismatch");
    }
  }
  return {};
}

std::size_t Tree::height() const {
  std::size_t best = 0;
  std::vector<std::pair<NodeId, std::size_t>> stack;
  if (root_ != kNil) stack.emplace_back(root_, 0);
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (nodes_[id].left != kNil) stack.emplace_back(nodes_[id].left, d + 1);
    if (nodes_[id].right != kNil) stack.emplace_back(nodes_[id].right, d + 1);
  }
  return best;
}

std::vector<Key> Tree::keys() const {
  std::vector<Key> out;
  out.reserve(count_);
  std::vector<NodeId> stack;
  NodeId cur = root_;
  while (cur != kNil || !stack.empty()) {
    while (cur != kNil) {
      stack.push_back(cur);
      cur = nodes_[cur].left;
    }
    cur = stack.back();
    stack.pop_back();
    out.push_back(nodes_[cur].key);
    cur = nodes_[cur].right;
  }
  return out;
}

Tree Tree::from_nodes(HashScheme scheme, const std::vector<Node>& preorder, NodeId root) {
  Tree t(std::move(scheme));
  const std::size_t n = preorder.size();
  if (n >= kNil) throw FormatError("too many nodes");
  if ((n == 0) != (root == kNil)) throw FormatError("root index inconsistent with node count");
  if (root != kNil && root >= n) throw FormatError("root index out of range");

  std::vector<int> parents(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const Node& nd = preorder[i];
    if (nd.key.width() != t.width() || nd.priority.width() != t.width() ||
        nd.mh.width() != t.width()) {
      throw FormatError("node " + std::to_string(i) + " has the wrong width");
    }
    for (NodeId child : {nd.left, nd.right}) {
      if (child == kNil) continue;
      if (child >= n) throw FormatError("node " + std::to_string(i) + " child index out of range");
      if (child == root || ++parents[child] > 1) {
        throw FormatError("node " + std::to_string(child) + " has more than one parent");
      }
    }
  }

  t.nodes_ = preorder;
  t.root_ = root;
  t.count_ = n;
  if (auto report = t.check_invariants(); !report.ok) throw FormatError(report.violation);
  return t;
}

}  // namespace cmt
