#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cmt/bytes.hpp"

namespace cmt {

/// Backend behind a HashScheme. Implementations must be immutable and
/// thread-safe once constructed.
class HashBackend {
 public:
  virtual ~HashBackend() = default;

  virtual std::size_t width() const = 0;
  virtual std::string name() const = 0;

  /// Node hash over key ‖ lo ‖ hi. Callers pass lo <= hi; the backend does not sort.
  virtual Digest hash3(const Key& key, const Digest& lo, const Digest& hi) const = 0;
  virtual Priority priority_of(const Key& key) const = 0;

  /// Base hash over an arbitrary byte string, truncated to width(). Never zero.
  virtual Digest hash_bytes(std::span<const std::uint8_t> data) const = 0;
};

/// Value handle over a shared immutable backend. Copies are cheap and may be
/// used from any thread.
class HashScheme {
 public:
  explicit HashScheme(std::shared_ptr<const HashBackend> backend);

  std::size_t width() const { return width_; }
  std::string name() const { return backend_->name(); }

  Digest hash3(const Key& key, const Digest& lo, const Digest& hi) const;

  /// Merkle hash of a node: H(key ‖ min(a, b) ‖ max(a, b)). Symmetric in the
  /// two child digests; a missing child is the zero digest.
  Digest calculate_mh(const Key& key, const Digest& child_a, const Digest& child_b) const;

  Priority priority_of(const Key& key) const;
  Digest hash_bytes(std::span<const std::uint8_t> data) const;

  Digest zero_digest() const { return Digest::zero(width_); }

  void require_width(const Key& key) const;
  void require_width(const Digest& digest) const;

 private:
  std::shared_ptr<const HashBackend> backend_;
  std::size_t width_;
};

/// Production scheme: SHA-256, output truncated to `width` bytes (1..32).
/// Priority is the full-width hash of the key bytes.
HashScheme make_sha256_scheme(std::size_t width = kDefaultWidth);

struct TableEntry {
  Key key;
  Digest child_a;
  Digest child_b;
  Digest result;
};

struct PriorityEntry {
  Key key;
  Priority priority;
};

/// Lookup-table scheme for reproducing hand-worked examples with small
/// numbers. Child pairs are normalised to sorted order on both insertion and
/// lookup. Anything not in the tables hashes to a tagged SHA-256 fallback,
/// which is never zero and never equal to a small-integer table value.
///
/// Throws InvalidInput on conflicting duplicate rows, width mismatches, or a
/// row whose result is the zero digest.
HashScheme make_table_scheme(std::size_t width, const std::vector<TableEntry>& entries,
                             const std::vector<PriorityEntry>& priorities);

/// Raw SHA-256 of `data` (32 bytes). Exposed for tests and the SMT baseline.
std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);

}  // namespace cmt
