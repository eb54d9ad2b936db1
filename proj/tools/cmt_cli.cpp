// Command-line front end for the Cartesian Merkle Tree library.
//
// Exit codes: 0 success (verify: proof valid), 1 verify: proof invalid,
// 2 malformed input or usage, 3 duplicate key, 4 key not found.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "cmt/bench.hpp"
#include "cmt/hashing.hpp"
#include "cmt/keyfile.hpp"
#include "cmt/proof.hpp"
#include "cmt/serialize.hpp"
#include "cmt/tree.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidProof = 1;
constexpr int kExitMalformed = 2;
constexpr int kExitDuplicate = 3;
constexpr int kExitNotFound = 4;

constexpr std::size_t kCliWidth = 32;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cmt::FormatError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw cmt::FormatError("cannot write " + path);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw cmt::FormatError("write failed for " + path);
}

cmt::Tree load_tree(const std::string& path, const cmt::HashScheme& scheme) {
  std::string raw = read_file(path);
  return cmt::deserialize(
      {reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()}, scheme);
}

void save_tree(const std::string& path, const cmt::Tree& tree) {
  auto bytes = cmt::serialize(tree);
  write_file(path, {reinterpret_cast<const char*>(bytes.data()), bytes.size()});
}

cmt::Key parse_key(const std::string& hex) {
  try {
    return cmt::Key::from_hex(hex, kCliWidth);
  } catch (const cmt::InvalidInput& e) {
    throw cmt::FormatError(std::string("--key: ") + e.what());
  }
}

std::vector<std::size_t> parse_sizes(const std::string& list) {
  std::vector<std::size_t> sizes;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      throw cmt::FormatError("--sizes: not a number: '" + item + "'");
    }
    if (used != item.size() || v == 0) throw cmt::FormatError("--sizes: bad size '" + item + "'");
    sizes.push_back(static_cast<std::size_t>(v));
  }
  if (sizes.empty()) throw cmt::FormatError("--sizes: empty list");
  return sizes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cartesian Merkle Tree: build trees, mutate them, emit and verify proofs"};
  app.require_subcommand(1);

  std::string tree_path, key_hex, proof_path, root_hex, out_path, keyfile;
  std::string sizes = "100,1000,5000,10000";
  std::uint64_t seed = 1;
  bool proof_sizes = false;

  auto* build = app.add_subcommand("build", "Build a tree from a key file");
  build->add_option("keyfile", keyfile, "One hex key per line, '#' comments")->required();
  build->add_option("--tree", tree_path, "Output tree file")->required();

  auto* insert = app.add_subcommand("insert", "Insert a key into a tree file in place");
  insert->add_option("--tree", tree_path)->required();
  insert->add_option("--key", key_hex)->required();

  auto* remove = app.add_subcommand("remove", "Remove a key from a tree file in place");
  remove->add_option("--tree", tree_path)->required();
  remove->add_option("--key", key_hex)->required();

  auto* root = app.add_subcommand("root", "Print the root digest");
  root->add_option("--tree", tree_path)->required();

  auto* prove = app.add_subcommand("prove", "Write a membership or exclusion proof as JSON");
  prove->add_option("--tree", tree_path)->required();
  prove->add_option("--key", key_hex)->required();
  prove->add_option("--proof", proof_path, "Output file (stdout if omitted)");

  auto* verify = app.add_subcommand("verify", "Verify a proof; exit 0 if valid, 1 if not");
  verify->add_option("--proof", proof_path)->required();
  verify->add_option("--key", key_hex)->required();
  verify->add_option("--root", root_hex)->required();

  auto* bench = app.add_subcommand("bench", "Run the counter benchmark and write CSV");
  bench->add_option("--sizes", sizes, "Comma-separated tree sizes");
  bench->add_option("--seed", seed);
  bench->add_option("--out", out_path, "Output CSV (stdout if omitted)");
  bench->add_flag("--proof-sizes", proof_sizes, "Also report proof entry counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitMalformed;
  }

  const cmt::HashScheme scheme = cmt::make_sha256_scheme(kCliWidth);
  try {
    if (*build) {
      cmt::Tree tree(scheme);
      for (const auto& k : cmt::parse_key_file(read_file(keyfile), kCliWidth)) tree.insert(k);
      save_tree(tree_path, tree);
    } else if (*insert) {
      cmt::Tree tree = load_tree(tree_path, scheme);
      tree.insert(parse_key(key_hex));
      save_tree(tree_path, tree);
    } else if (*remove) {
      cmt::Tree tree = load_tree(tree_path, scheme);
      tree.remove(parse_key(key_hex));
      save_tree(tree_path, tree);
    } else if (*root) {
      std::cout << load_tree(tree_path, scheme).root_digest().to_hex() << "\n";
    } else if (*prove) {
      cmt::Tree tree = load_tree(tree_path, scheme);
      std::string json = cmt::proof_to_json(cmt::generate_proof(tree, parse_key(key_hex)));
      if (proof_path.empty()) {
        std::cout << json;
      } else {
        write_file(proof_path, json);
      }
    } else if (*verify) {
      cmt::Proof proof = cmt::proof_from_json(read_file(proof_path), kCliWidth);
      cmt::Key key = parse_key(key_hex);
      cmt::Digest expected;
      try {
        expected = cmt::Digest::from_hex(root_hex, kCliWidth);
      } catch (const cmt::InvalidInput& e) {
        throw cmt::FormatError(std::string("--root: ") + e.what());
      }
      if (!cmt::verify_proof(scheme, proof, key, expected)) {
        std::cerr << "proof does not verify\n";
        return kExitInvalidProof;
      }
    } else if (*bench) {
      cmt::bench::BenchOptions opts;
      opts.sizes = parse_sizes(sizes);
      opts.seed = seed;
      opts.proof_sizes = proof_sizes;
      std::string csv = cmt::bench::emit_csv(cmt::bench::run_benchmark(opts));
      if (out_path.empty()) {
        std::cout << csv;
      } else {
        write_file(out_path, csv);
      }
    }
  } catch (const cmt::DuplicateKey& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDuplicate;
  } catch (const cmt::KeyNotFound& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotFound;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  }
  return kExitOk;
}
