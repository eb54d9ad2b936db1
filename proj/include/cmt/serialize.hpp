#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cmt/hashing.hpp"
#include "cmt/tree.hpp"

namespace cmt {

// Tree dump layout, all integers little-endian:
//
//   "CMT1"
//   u8   scheme name length, then the name bytes
//   u32  width W
//   u64  node count
//   per node, preorder (root is index 0):
//     key[W] priority[W] mh[W]
//     u32 left index, u32 right index   (0xffffffff = none)
//     u8  has_payload, then u32 length + bytes when set
//
// Loading recomputes every priority and hash and rejects any mismatch.

std::vector<std::uint8_t> serialize(const Tree& tree);

/// Throws FormatError on a bad magic, scheme/width mismatch, truncation,
/// trailing bytes, or a structurally invalid tree.
Tree deserialize(std::span<const std::uint8_t> data, const HashScheme& scheme);

}  // namespace cmt
