#include "cmt/keyfile.hpp"

#include <set>
#include <string>

namespace cmt {

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<Key> parse_key_file(std::string_view text, std::size_t width) {
  std::vector<Key> keys;
  std::set<Key> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    Key key;
    try {
      key = Key::from_hex(line, width);
    } catch (const InvalidInput& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!seen.insert(key).second) {
      throw DuplicateKey("line " + std::to_string(line_no) + ": duplicate key " + key.to_hex());
    }
    keys.push_back(key);
  }
  return keys;
}

}  // namespace cmt
