#include "cmt/oracle.hpp"

#include <algorithm>

namespace cmt::oracle {

namespace {

struct Ranked {
  Key key;
  Priority priority;
};

bool ranks_above(const Ranked& a, const Ranked& b) {
  if (a.priority != b.priority) return a.priority > b.priority;
  return a.key > b.key;
}

// Builds the subtree for sorted[lo, hi).
std::unique_ptr<RefNode> build(const std::vector<Ranked>& sorted, std::size_t lo, std::size_t hi,
                               const HashScheme& scheme) {
  if (lo >= hi) return nullptr;
  std::size_t top = lo;
  for (std::size_t i = lo + 1; i < hi; ++i) {
    if (ranks_above(sorted[i], sorted[top])) top = i;
  }
  auto node = std::make_unique<RefNode>();
  node->key = sorted[top].key;
  node->priority = sorted[top].priority;
  node->left = build(sorted, lo, top, scheme);
  node->right = build(sorted, top + 1, hi, scheme);
  const Digest zero = scheme.zero_digest();
  node->mh = scheme.calculate_mh(node->key, node->left ? node->left->mh : zero,
                                 node->right ? node->right->mh : zero);
  return node;
}

std::string describe(const Key& k) { return k.to_hex(); }

CompareResult walk(const RefNode* ref, const Tree& tree, NodeId id, const std::string& where) {
  if (ref == nullptr && id == kNil) return {};
  if (ref == nullptr) {
    return {false, where + ": tree has extra key " + describe(tree.node(id).key)};
  }
  if (id == kNil) return {false, where + ": tree is missing key " + describe(ref->key)};
  const Node& n = tree.node(id);
  if (n.key != ref->key) {
    return {false, where + ": key " + describe(n.key) + " where reference has " +
                       describe(ref->key)};
  }
  if (n.priority != ref->priority) {
    return {false, where + ": priority differs at key " + describe(n.key)};
  }
  if (auto r = walk(ref->left.get(), tree, n.left, where + "L"); !r.ok) return r;
  if (auto r = walk(ref->right.get(), tree, n.right, where + "R"); !r.ok) return r;
  if (n.mh != ref->mh) return {false, where + ": mh differs at key " + describe(n.key)};
  return {};
}

}  // namespace

ReferenceTree build_reference(std::vector<Key> keys, const HashScheme& scheme) {
  for (const auto& k : keys) scheme.require_width(k);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  std::vector<Ranked> ranked;
  ranked.reserve(keys.size());
  for (const auto& k : keys) ranked.push_back({k, scheme.priority_of(k)});

  ReferenceTree out;
  out.size = ranked.size();
  out.root = build(ranked, 0, ranked.size(), scheme);
  out.root_digest = out.root ? out.root->mh : scheme.zero_digest();
  return out;
}

CompareResult compare(const ReferenceTree& reference, const Tree& tree) {
  if (auto r = walk(reference.root.get(), tree, tree.root_id(), "root"); !r.ok) return r;
  if (reference.size != tree.size()) {
    return {false, "size " + std::to_string(tree.size()) + " vs reference " +
                       std::to_string(reference.size)};
  }
  return {};
}

}  // namespace cmt::oracle
