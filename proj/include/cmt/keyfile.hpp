#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "cmt/bytes.hpp"

namespace cmt {

/// One hex key per line; '#' starts a comment; blank lines are skipped.
/// Throws FormatError (with the line number) on bad hex or width, and
/// DuplicateKey on a repeated key.
std::vector<Key> parse_key_file(std::string_view text, std::size_t width);

}  // namespace cmt
