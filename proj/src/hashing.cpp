#include "cmt/hashing.hpp"

#include <openssl/evp.h>

#include <map>
#include <tuple>
#include <utility>

namespace cmt {

namespace {

const EVP_MD* sha256_md() {
  static const EVP_MD* md = [] {
    const EVP_MD* fetched = EVP_MD_fetch(nullptr, "SHA256", nullptr);
    return fetched != nullptr ? fetched : EVP_sha256();
  }();
  return md;
}

// Truncates a SHA-256 output to `width` bytes, rehashing with a counter
// suffix until the result is non-zero so the empty-subtree sentinel can
// never be produced.
Digest truncated_nonzero(std::vector<std::uint8_t> input, std::size_t width) {
  std::uint8_t counter = 0;
  for (;;) {
    auto full = sha256(input);
    Digest out = Digest::from_bytes(std::span<const std::uint8_t>(full.data(), width));
    if (!out.is_zero()) return out;
    input.push_back(++counter);
  }
}

void append(std::vector<std::uint8_t>& buf, std::span<const std::uint8_t> bytes) {
  buf.insert(buf.end(), bytes.begin(), bytes.end());
}

class Sha256Backend final : public HashBackend {
 public:
  explicit Sha256Backend(std::size_t width) : width_(width) {
    if (width == 0 || width > 32) {
      throw InvalidInput("sha256 scheme supports widths 1..32, got " + std::to_string(width));
    }
  }

  std::size_t width() const override { return width_; }
  std::string name() const override { return "sha256"; }

  Digest hash3(const Key& key, const Digest& lo, const Digest& hi) const override {
    std::vector<std::uint8_t> buf;
    buf.reserve(3 * width_);
    append(buf, key.bytes());
    append(buf, lo.bytes());
    append(buf, hi.bytes());
    return truncated_nonzero(std::move(buf), width_);
  }

  Priority priority_of(const Key& key) const override {
    auto full = sha256(key.bytes());
    return Priority::from_bytes(std::span<const std::uint8_t>(full.data(), width_));
  }

  Digest hash_bytes(std::span<const std::uint8_t> data) const override {
    return truncated_nonzero({data.begin(), data.end()}, width_);
  }

 private:
  std::size_t width_;
};

class TableBackend final : public HashBackend {
 public:
  TableBackend(std::size_t width, const std::vector<TableEntry>& entries,
               const std::vector<PriorityEntry>& priorities)
      : width_(width) {
    if (width == 0 || width > 32) {
      throw InvalidInput("table scheme supports widths 1..32, got " + std::to_string(width));
    }
    for (const auto& e : entries) {
      if (e.key.width() != width || e.child_a.width() != width || e.child_b.width() != width ||
          e.result.width() != width) {
        throw InvalidInput("table entry width mismatch");
      }
      if (e.result.is_zero()) throw InvalidInput("table entry maps to the zero digest");
      auto triple = sorted(e.key, e.child_a, e.child_b);
      auto [it, inserted] = hashes_.emplace(triple, e.result);
      if (!inserted && it->second != e.result) {
        throw InvalidInput("conflicting table rows for key " + e.key.to_hex());
      }
    }
    for (const auto& p : priorities) {
      if (p.key.width() != width || p.priority.width() != width) {
        throw InvalidInput("priority entry width mismatch");
      }
      auto [it, inserted] = priorities_.emplace(p.key, p.priority);
      if (!inserted && it->second != p.priority) {
        throw InvalidInput("conflicting priority rows for key " + p.key.to_hex());
      }
    }
  }

  std::size_t width() const override { return width_; }
  std::string name() const override { return "table"; }

  Digest hash3(const Key& key, const Digest& lo, const Digest& hi) const override {
    if (auto it = hashes_.find(sorted(key, lo, hi)); it != hashes_.end()) return it->second;
    std::vector<std::uint8_t> buf(kHashTag.begin(), kHashTag.end());
    append(buf, key.bytes());
    append(buf, lo.bytes());
    append(buf, hi.bytes());
    return truncated_nonzero(std::move(buf), width_);
  }

  Priority priority_of(const Key& key) const override {
    if (auto it = priorities_.find(key); it != priorities_.end()) return it->second;
    std::vector<std::uint8_t> buf(kPriorityTag.begin(), kPriorityTag.end());
    append(buf, key.bytes());
    auto full = sha256(buf);
    return Priority::from_bytes(std::span<const std::uint8_t>(full.data(), width_));
  }

  Digest hash_bytes(std::span<const std::uint8_t> data) const override {
    std::vector<std::uint8_t> buf(kBytesTag.begin(), kBytesTag.end());
    append(buf, data);
    return truncated_nonzero(std::move(buf), width_);
  }

 private:
  using Triple = std::tuple<Key, Digest, Digest>;

  static Triple sorted(const Key& k, const Digest& a, const Digest& b) {
    return a < b ? Triple{k, a, b} : Triple{k, b, a};
  }

  static constexpr std::string_view kHashTag = "cmt.table.hash3";
  static constexpr std::string_view kPriorityTag = "cmt.table.priority";
  static constexpr std::string_view kBytesTag = "cmt.table.bytes";

  std::size_t width_;
  std::map<Triple, Digest> hashes_;
  std::map<Key, Priority> priorities_;
};

}  // namespace

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data) {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, sha256_md(), nullptr) != 1 ||
      len != out.size()) {
    throw Error("EVP_Digest(SHA256) failed");
  }
  return out;
}

HashScheme::HashScheme(std::shared_ptr<const HashBackend> backend)
    : backend_(std::move(backend)), width_(backend_ ? backend_->width() : 0) {
  if (!backend_) throw InvalidInput("null hash backend");
}

void HashScheme::require_width(const Key& key) const {
  if (key.width() != width_) {
    throw InvalidInput("key width " + std::to_string(key.width()) + " does not match scheme width " +
                       std::to_string(width_));
  }
}

void HashScheme::require_width(const Digest& digest) const {
  if (digest.width() != width_) {
    throw InvalidInput("digest width " + std::to_string(digest.width()) +
                       " does not match scheme width " + std::to_string(width_));
  }
}

Digest HashScheme::hash3(const Key& key, const Digest& lo, const Digest& hi) const {
  require_width(key);
  require_width(lo);
  require_width(hi);
  return backend_->hash3(key, lo, hi);
}

Digest HashScheme::calculate_mh(const Key& key, const Digest& child_a, const Digest& child_b) const {
  return child_a < child_b ? hash3(key, child_a, child_b) : hash3(key, child_b, child_a);
}

Priority HashScheme::priority_of(const Key& key) const {
  require_width(key);
  return backend_->priority_of(key);
}

Digest HashScheme::hash_bytes(std::span<const std::uint8_t> data) const {
  return backend_->hash_bytes(data);
}

HashScheme make_sha256_scheme(std::size_t width) {
  return HashScheme(std::make_shared<Sha256Backend>(width));
}

HashScheme make_table_scheme(std::size_t width, const std::vector<TableEntry>& entries,
                             const std::vector<PriorityEntry>& priorities) {
  return HashScheme(std::make_shared<TableBackend>(width, entries, priorities));
}

}  // namespace cmt
