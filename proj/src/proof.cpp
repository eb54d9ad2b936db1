#include "cmt/proof.hpp"

#include <json.hpp>

namespace cmt {

Proof generate_proof(const Tree& tree, const Key& key) {
  tree.scheme().require_width(key);
  if (tree.empty()) throw EmptyTree("cannot prove against an empty tree");

  Proof proof;
  proof.non_existence_key = Key::zero(tree.width());
  NodeId cur = tree.root_id();
  for (;;) {
    const Node& n = tree.node(cur);
    if (key == n.key) {
      proof.existence = true;
      break;
    }
    NodeId next = key < n.key ? n.left : n.right;
    if (next == kNil) {
      proof.existence = false;
      proof.non_existence_key = n.key;
      break;
    }
    NodeId sibling = next == n.left ? n.right : n.left;
    proof.prefix.push_back({n.key, tree.child_mh(sibling)});
    cur = next;
  }
  const Node& target = tree.node(cur);
  proof.suffix = {tree.child_mh(target.left), tree.child_mh(target.right)};
  return proof;
}

namespace {

bool widths_match(const HashScheme& scheme, const Proof& proof, const Key& key) {
  const std::size_t w = scheme.width();
  if (key.width() != w || proof.suffix.first.width() != w || proof.suffix.second.width() != w ||
      proof.non_existence_key.width() != w) {
    return false;
  }
  for (const auto& e : proof.prefix) {
    if (e.key.width() != w || e.sibling_mh.width() != w) return false;
  }
  return true;
}

}  // namespace

std::vector<Digest> accumulate(const HashScheme& scheme, const Proof& proof, const Key& key) {
  if (!widths_match(scheme, proof, key)) return {};
  std::vector<Digest> chain;
  chain.reserve(proof.prefix.size() + 1);
  const Key& start = proof.existence ? key : proof.non_existence_key;
  chain.push_back(scheme.calculate_mh(start, proof.suffix.first, proof.suffix.second));
  for (auto it = proof.prefix.rbegin(); it != proof.prefix.rend(); ++it) {
    chain.push_back(scheme.calculate_mh(it->key, chain.back(), it->sibling_mh));
  }
  return chain;
}

bool verify_proof(const HashScheme& scheme, const Proof& proof, const Key& key, const Digest& root) {
  if (root.width() != scheme.width()) return false;
  if (!proof.existence) {
    const Key& anchor = proof.non_existence_key;
    if (key.width() != anchor.width() || key == anchor) return false;
    for (const auto& e : proof.prefix) {
      if (key == e.key) return false;
      if ((key < e.key) != (anchor < e.key)) return false;
    }
    const Digest& slot = key < anchor ? proof.suffix.first : proof.suffix.second;
    if (!slot.is_zero()) return false;
  }
  auto chain = accumulate(scheme, proof, key);
  return !chain.empty() && chain.back() == root;
}

std::size_t proof_size(const Proof& proof) { return 2 * proof.prefix.size() + 2; }

std::string proof_to_json(const Proof& proof) {
  nlohmann::ordered_json doc;
  auto prefix = nlohmann::json::array();
  for (const auto& e : proof.prefix) {
    prefix.push_back(e.key.to_hex());
    prefix.push_back(e.sibling_mh.to_hex());
  }
  doc["prefix"] = std::move(prefix);
  doc["suffix"] = {proof.suffix.first.to_hex(), proof.suffix.second.to_hex()};
  doc["existence"] = proof.existence;
  doc["nonExistenceKey"] = proof.non_existence_key.to_hex();
  return doc.dump(2) + "\n";
}

Proof proof_from_json(std::string_view text, std::size_t width) {
  try {
    auto doc = nlohmann::json::parse(text);
    const auto& prefix = doc.at("prefix");
    const auto& suffix = doc.at("suffix");
    if (!prefix.is_array() || prefix.size() % 2 != 0) {
      throw FormatError("prefix must be an array of even length");
    }
    if (!suffix.is_array() || suffix.size() != 2) {
      throw FormatError("suffix must be an array of two digests");
    }
    Proof proof;
    for (std::size_t i = 0; i < prefix.size(); i += 2) {
      proof.prefix.push_back({Key::from_hex(prefix[i].get<std::string>(), width),
                              Digest::from_hex(prefix[i + 1].get<std::string>(), width)});
    }
    proof.suffix = {Digest::from_hex(suffix[0].get<std::string>(), width),
                    Digest::from_hex(suffix[1].get<std::string>(), width)};
    proof.existence = doc.at("existence").get<bool>();
    proof.non_existence_key = Key::from_hex(doc.at("nonExistenceKey").get<std::string>(), width);
    return proof;
  } catch (const FormatError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw FormatError(std::string("proof: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("proof: ") + e.what());
  }
}

std::vector<char> verify_batch_serial(const HashScheme& scheme, std::span<const Proof> proofs,
                                      std::span<const Key> keys, const Digest& root) {
  if (proofs.size() != keys.size()) throw InvalidInput("proof and key counts differ");
  std::vector<char> out(proofs.size());
  for (std::size_t i = 0; i < proofs.size(); ++i) {
    out[i] = verify_proof(scheme, proofs[i], keys[i], root) ? 1 : 0;
  }
  return out;
}

std::vector<char> verify_batch(const HashScheme& scheme, std::span<const Proof> proofs,
                               std::span<const Key> keys, const Digest& root) {
  if (proofs.size() != keys.size()) throw InvalidInput("proof and key counts differ");
  std::vector<char> out(proofs.size());
  const auto n = static_cast<std::ptrdiff_t>(proofs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = verify_proof(scheme, proofs[i], keys[i], root) ? 1 : 0;
  }
  return out;
}

std::vector<Proof> generate_batch_serial(const Tree& tree, std::span<const Key> keys) {
  std::vector<Proof> out;
  out.reserve(keys.size());
  for (const auto& k : keys) out.push_back(generate_proof(tree, k));
  return out;
}

std::vector<Proof> generate_batch(const Tree& tree, std::span<const Key> keys) {
  if (tree.empty()) throw EmptyTree("cannot prove against an empty tree");
  for (const auto& k : keys) tree.scheme().require_width(k);
  std::vector<Proof> out(keys.size());
  const auto n = static_cast<std::ptrdiff_t>(keys.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = generate_proof(tree, keys[i]);
  return out;
}

}  // namespace cmt
