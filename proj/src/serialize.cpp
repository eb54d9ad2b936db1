#include "cmt/serialize.hpp"

#include <string_view>

namespace cmt {

namespace {

constexpr std::string_view kMagic = "CMT1";

class Writer {
 public:
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  std::span<const std::uint8_t> bytes(std::size_t n) {
    if (data_.size() - pos_ < n) throw FormatError("tree dump truncated");
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint8_t u8() { return bytes(1)[0]; }
  std::uint32_t u32() {
    auto b = bytes(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  std::uint64_t u64() {
    auto b = bytes(8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize(const Tree& tree) {
  // Preorder numbering.
  std::vector<NodeId> order;
  order.reserve(tree.size());
  std::vector<NodeId> stack;
  if (!tree.empty()) stack.push_back(tree.root_id());
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    order.push_back(id);
    if (tree.node(id).right != kNil) stack.push_back(tree.node(id).right);
    if (tree.node(id).left != kNil) stack.push_back(tree.node(id).left);
  }
  std::vector<std::uint32_t> index_of;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] >= index_of.size()) index_of.resize(order[i] + 1, kNil);
    index_of[order[i]] = static_cast<std::uint32_t>(i);
  }
  auto remap = [&](NodeId id) { return id == kNil ? kNil : index_of[id]; };

  Writer w;
  w.bytes({reinterpret_cast<const std::uint8_t*>(kMagic.data()), kMagic.size()});
  const std::string name = tree.scheme().name();
  w.u8(static_cast<std::uint8_t>(name.size()));
  w.bytes({reinterpret_cast<const std::uint8_t*>(name.data()), name.size()});
  w.u32(static_cast<std::uint32_t>(tree.width()));
  w.u64(order.size());
  for (NodeId id : order) {
    const Node& n = tree.node(id);
    w.bytes(n.key.bytes());
    w.bytes(n.priority.bytes());
    w.bytes(n.mh.bytes());
    w.u32(remap(n.left));
    w.u32(remap(n.right));
    w.u8(n.payload ? 1 : 0);
    if (n.payload) {
      w.u32(static_cast<std::uint32_t>(n.payload->size()));
      w.bytes(*n.payload);
    }
  }
  return w.take();
}

Tree deserialize(std::span<const std::uint8_t> data, const HashScheme& scheme) {
  Reader r(data);
  auto magic = r.bytes(kMagic.size());
  if (std::string_view(reinterpret_cast<const char*>(magic.data()), magic.size()) != kMagic) {
    throw FormatError("not a tree dump (bad magic)");
  }
  auto name_bytes = r.bytes(r.u8());
  std::string name(name_bytes.begin(), name_bytes.end());
  if (name != scheme.name()) {
    throw FormatError("dump uses hash scheme '" + name + "', expected '" + scheme.name() + "'");
  }
  const std::uint32_t width = r.u32();
  if (width != scheme.width()) {
    throw FormatError("dump width " + std::to_string(width) + " does not match scheme width " +
                      std::to_string(scheme.width()));
  }
  const std::uint64_t count = r.u64();
  // Each node occupies at least 3W + 9 bytes; reject counts the input cannot hold.
  if (count > r.remaining() / (3 * width + 9)) throw FormatError("node count exceeds dump size");

  std::vector<Node> nodes(count);
  for (auto& n : nodes) {
    n.key = Key::from_bytes(r.bytes(width));
    n.priority = Priority::from_bytes(r.bytes(width));
    n.mh = Digest::from_bytes(r.bytes(width));
    n.left = r.u32();
    n.right = r.u32();
    switch (r.u8()) {
      case 0:
        break;
      case 1: {
        auto payload = r.bytes(r.u32());
        n.payload = Payload(payload.begin(), payload.end());
        break;
      }
      default:
        throw FormatError("bad payload flag");
    }
  }
  if (r.remaining() != 0) throw FormatError("trailing bytes after tree dump");
  return Tree::from_nodes(scheme, nodes, count == 0 ? kNil : 0);
}

}  // namespace cmt
