#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cmt/bytes.hpp"
#include "cmt/hashing.hpp"
#include "cmt/tree.hpp"

namespace cmt {

struct PrefixEntry {
  Key key;             ///< ancestor key
  Digest sibling_mh;   ///< mh of the ancestor's child that is NOT on the path
  friend bool operator==(const PrefixEntry&, const PrefixEntry&) = default;
};

/// Membership / non-membership proof.
///
/// `prefix` runs root-first; its length equals the depth of the target node.
/// `suffix` holds the target node's (left, right) child hashes. For exclusion
/// proofs the target is the last node on the failed search path for the
/// queried key and `non_existence_key` is that node's key.
struct Proof {
  std::vector<PrefixEntry> prefix;
  std::pair<Digest, Digest> suffix;
  bool existence = false;
  Key non_existence_key;
  friend bool operator==(const Proof&, const Proof&) = default;
};

/// Throws EmptyTree when the tree has no nodes and InvalidInput on width
/// mismatch.
Proof generate_proof(const Tree& tree, const Key& key);

/// Accumulator chain recomputed from a proof: the target node's hash first,
/// then one value per prefix entry folding towards the root. The last element
/// is the implied root. Empty if the proof's widths do not match the scheme.
std::vector<Digest> accumulate(const HashScheme& scheme, const Proof& proof, const Key& key);

/// Stateless verification. Total: every failure returns false.
///
/// Exclusion proofs additionally require that the queried key differs from
/// `non_existence_key`, falls on the same side as `non_existence_key` of every
/// ancestor on the path, and points at an empty child slot of the target.
bool verify_proof(const HashScheme& scheme, const Proof& proof, const Key& key, const Digest& root);

/// Number of keys and digests carried: 2 * |prefix| + 2.
std::size_t proof_size(const Proof& proof);

/// JSON wire form: {"prefix": [hex, ...], "suffix": [hex, hex], "existence": bool,
/// "nonExistenceKey": hex}. Prefix is flattened as key, sibling, key, sibling...
/// Hex is lowercase, 2*W chars, no prefix.
std::string proof_to_json(const Proof& proof);

/// Throws FormatError on malformed documents.
Proof proof_from_json(std::string_view text, std::size_t width);

/// Verifies many (proof, key) pairs against one root. The parallel version
/// splits the batch over OpenMP threads; the serial one is the reference.
std::vector<char> verify_batch(const HashScheme& scheme, std::span<const Proof> proofs,
                               std::span<const Key> keys, const Digest& root);
std::vector<char> verify_batch_serial(const HashScheme& scheme, std::span<const Proof> proofs,
                                      std::span<const Key> keys, const Digest& root);

/// Proofs for every key in `keys` (present or absent), generated in parallel.
std::vector<Proof> generate_batch(const Tree& tree, std::span<const Key> keys);
std::vector<Proof> generate_batch_serial(const Tree& tree, std::span<const Key> keys);

}  // namespace cmt
