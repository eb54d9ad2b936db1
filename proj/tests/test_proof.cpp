#include <doctest.h>

#include <random>

#include "cmt/proof.hpp"
#include "test_support.hpp"

using namespace cmt;
using namespace cmt::testing;

namespace {

Tree figure4() {
  Tree t(figure_scheme());
  for (auto v : {13, 10, 15, 5, 20, 18}) t.insert(K(v));
  return t;
}

// Every proof obtained by flipping one bit in one byte of one component.
std::vector<std::pair<Proof, Key>> single_byte_mutations(const Proof& p, const Key& key) {
  std::vector<std::pair<Proof, Key>> out;
  auto flip_all = [&](auto&& get) {
    Proof probe = p;
    for (std::size_t i = 0; i < get(probe).width(); ++i) {
      Proof q = p;
      get(q).mutable_bytes()[i] ^= 0x01;
      out.emplace_back(std::move(q), key);
    }
  };
  for (std::size_t j = 0; j < p.prefix.size(); ++j) {
    flip_all([j](Proof& q) -> Key& { return q.prefix[j].key; });
    flip_all([j](Proof& q) -> Digest& { return q.prefix[j].sibling_mh; });
  }
  flip_all([](Proof& q) -> Digest& { return q.suffix.first; });
  flip_all([](Proof& q) -> Digest& { return q.suffix.second; });
  if (!p.existence) flip_all([](Proof& q) -> Key& { return q.non_existence_key; });
  for (std::size_t i = 0; i < key.width(); ++i) {
    Key k = key;
    k.mutable_bytes()[i] ^= 0x01;
    out.emplace_back(p, k);
  }
  Proof flipped = p;
  flipped.existence = !p.existence;
  out.emplace_back(flipped, key);
  return out;
}

}  // namespace

TEST_CASE("inclusion proof for key 18 in the worked example") {
  Tree t = figure4();
  REQUIRE(t.root_digest() == D(333));
  Proof p = generate_proof(t, K(18));
  CHECK(p.existence);
  REQUIRE(p.prefix.size() == 3);
  CHECK(p.prefix[0] == PrefixEntry{K(13), D(180)});
  CHECK(p.prefix[1] == PrefixEntry{K(15), D(0)});
  CHECK(p.prefix[2] == PrefixEntry{K(20), D(0)});
  CHECK(p.suffix == std::pair{D(0), D(0)});
  CHECK(proof_size(p) == 8);

  auto chain = accumulate(t.scheme(), p, K(18));
  CHECK(chain == std::vector<Digest>{D(100), D(130), D(160), D(333)});
  CHECK(verify_proof(t.scheme(), p, K(18), D(333)));
  CHECK_FALSE(verify_proof(t.scheme(), p, K(18), D(334)));
}

TEST_CASE("exclusion proof for absent key 25 in the worked example") {
  Tree t = figure4();
  Proof p = generate_proof(t, K(25));
  CHECK_FALSE(p.existence);
  CHECK(p.non_existence_key == K(20));
  REQUIRE(p.prefix.size() == 2);
  CHECK(p.prefix[0] == PrefixEntry{K(13), D(180)});
  CHECK(p.prefix[1] == PrefixEntry{K(15), D(0)});
  CHECK(p.suffix == std::pair{D(100), D(0)});

  auto chain = accumulate(t.scheme(), p, K(25));
  CHECK(chain == std::vector<Digest>{D(130), D(160), D(333)});
  CHECK(verify_proof(t.scheme(), p, K(25), D(333)));
}

TEST_CASE("root proof and empty tree") {
  auto scheme = make_sha256_scheme();
  Tree t(scheme);
  CHECK_THROWS_AS(generate_proof(t, K(1)), EmptyTree);
  t.insert(K(1));
  Proof p = generate_proof(t, K(1));
  CHECK(p.prefix.empty());
  CHECK(p.suffix == std::pair{D(0), D(0)});
  CHECK(proof_size(p) == 2);
  CHECK(verify_proof(scheme, p, K(1), t.root_digest()));

  Proof absent = generate_proof(t, K(2));
  CHECK_FALSE(absent.existence);
  CHECK(absent.non_existence_key == K(1));
  CHECK(verify_proof(scheme, absent, K(2), t.root_digest()));
  CHECK(verify_proof(scheme, generate_proof(t, K(0)), K(0), t.root_digest()));
}

TEST_CASE("membership and exclusion round trips on random trees") {
  auto scheme = make_sha256_scheme();
  std::mt19937_64 rng(31);
  for (std::size_t n : {1u, 5u, 64u, 1000u}) {
    auto all = random_key_set(rng, 2 * n);
    std::vector<Key> present(all.begin(), all.begin() + n);
    std::vector<Key> absent(all.begin() + n, all.end());
    Tree t = build(scheme, present);
    const Digest root = t.root_digest();
    for (const auto& k : present) {
      Proof p = generate_proof(t, k);
      REQUIRE(p.existence);
      REQUIRE(p.prefix.size() == t.lookup(k).depth);
      REQUIRE(verify_proof(scheme, p, k, root));
    }
    for (const auto& k : absent) {
      Proof p = generate_proof(t, k);
      REQUIRE_FALSE(p.existence);
      REQUIRE(t.contains(p.non_existence_key));
      REQUIRE(verify_proof(scheme, p, k, root));
    }
  }
}

// A mutated query key can name a different absent key whose search ends at the
// same anchor; that exclusion proof is then genuinely valid. The expected
// outcome is therefore "accepted iff the mutated proof is the honest proof for
// the mutated key", which for membership proofs and for every proof-component
// mutation means rejected.
TEST_CASE("tamper rejection: every single-byte mutation fails") {
  auto scheme = make_sha256_scheme();
  std::mt19937_64 rng(32);
  auto all = random_key_set(rng, 40);
  std::vector<Key> present(all.begin(), all.begin() + 20);
  Tree t = build(scheme, present);
  const Digest root = t.root_digest();
  for (std::size_t i = 0; i < all.size(); i += 3) {
    Proof p = generate_proof(t, all[i]);
    REQUIRE(verify_proof(scheme, p, all[i], root));
    for (const auto& [q, k] : single_byte_mutations(p, all[i])) {
      const bool honest = k != all[i] && !p.existence && generate_proof(t, k) == q;
      REQUIRE(verify_proof(scheme, q, k, root) == honest);
      if (k == all[i] || p.existence) REQUIRE_FALSE(honest);
    }
    for (std::size_t b = 0; b < root.width(); ++b) {
      Digest r = root;
      r.mutable_bytes()[b] ^= 0x80;
      REQUIRE_FALSE(verify_proof(scheme, p, all[i], r));
    }
  }
}

TEST_CASE("membership proof cannot be replayed for another key") {
  auto scheme = make_sha256_scheme();
  std::mt19937_64 rng(33);
  auto keys = random_key_set(rng, 50);
  Tree t = build(scheme, keys);
  Proof p = generate_proof(t, keys[0]);
  for (std::size_t i = 1; i < keys.size(); ++i) {
    REQUIRE_FALSE(verify_proof(scheme, p, keys[i], t.root_digest()));
  }
}

TEST_CASE("exclusion checks reject a neighbour's proof used as a bogus exclusion") {
  Tree t = figure4();
  // Membership proof of 20 turned into an exclusion claim for 18, which is present
  // in 20's left subtree: the claimed empty slot is the non-empty one.
  Proof p = generate_proof(t, K(20));
  p.existence = false;
  p.non_existence_key = K(20);
  CHECK_FALSE(verify_proof(t.scheme(), p, K(18), D(333)));
  // Same proof claiming 25 is absent is accurate: 20's right slot is empty.
  CHECK(verify_proof(t.scheme(), p, K(25), D(333)));
  // key equal to the anchor is never an exclusion.
  CHECK_FALSE(verify_proof(t.scheme(), p, K(20), D(333)));
  // An anchor whose path disagrees with the queried key's path is rejected.
  Proof q = generate_proof(t, K(4));  // anchored at 5, left of 13
  CHECK(verify_proof(t.scheme(), q, K(4), D(333)));
  CHECK_FALSE(verify_proof(t.scheme(), q, K(14), D(333)));
}

TEST_CASE("width-mismatched proofs fail instead of throwing") {
  Tree t = figure4();
  Proof p = generate_proof(t, K(18));
  CHECK_FALSE(verify_proof(t.scheme(), p, Key::zero(16), D(333)));
  CHECK_FALSE(verify_proof(t.scheme(), p, K(18), Digest::zero(16)));
  p.suffix.first = Digest::zero(8);
  CHECK_FALSE(verify_proof(t.scheme(), p, K(18), D(333)));
  CHECK(accumulate(t.scheme(), p, K(18)).empty());
}

TEST_CASE("proof JSON wire format") {
  Tree t = figure4();
  Proof p = generate_proof(t, K(25));
  std::string json = proof_to_json(p);
  CHECK(json.find("\"nonExistenceKey\"") != std::string::npos);
  CHECK(json.find(D(180).to_hex()) != std::string::npos);
  CHECK(proof_from_json(json, 32) == p);

  const std::string z = std::string(64, '0');
  auto doc = [&](std::string prefix, std::string suffix) {
    return "{\"prefix\":" + prefix + ",\"suffix\":" + suffix +
           ",\"existence\":true,\"nonExistenceKey\":\"" + z + "\"}";
  };
  CHECK_NOTHROW(proof_from_json(doc("[]", "[\"" + z + "\",\"" + z + "\"]"), 32));
  CHECK_THROWS_AS(proof_from_json("not json", 32), FormatError);
  CHECK_THROWS_AS(proof_from_json(doc("[\"" + z + "\"]", "[\"" + z + "\",\"" + z + "\"]"), 32),
                  FormatError);
  CHECK_THROWS_AS(proof_from_json(doc("[]", "[\"" + z + "\"]"), 32), FormatError);
  CHECK_THROWS_AS(proof_from_json(doc("[]", "[\"zz\",\"" + z + "\"]"), 32), FormatError);
  CHECK_THROWS_AS(proof_from_json("{\"prefix\":[]}", 32), FormatError);
  CHECK_THROWS_AS(proof_from_json(doc("[]", "[1,2]"), 32), FormatError);
}

TEST_CASE("parallel batch paths agree with the serial reference") {
  auto scheme = make_sha256_scheme();
  std::mt19937_64 rng(34);
  auto all = random_key_set(rng, 3000);
  std::vector<Key> present(all.begin(), all.begin() + 2000);
  Tree t = build(scheme, present);
  auto serial = generate_batch_serial(t, all);
  auto parallel = generate_batch(t, all);
  REQUIRE(serial == parallel);

  std::vector<Key> queried = all;
  std::swap(queried[0], queried[1]);  // two deliberate mismatches
  auto ok_serial = verify_batch_serial(scheme, serial, queried, t.root_digest());
  auto ok_parallel = verify_batch(scheme, serial, queried, t.root_digest());
  CHECK(ok_serial == ok_parallel);
  CHECK_FALSE(ok_serial[0]);
  CHECK_FALSE(ok_serial[1]);
  for (std::size_t i = 2; i < ok_serial.size(); ++i) REQUIRE(ok_serial[i]);
  CHECK_THROWS_AS(verify_batch(scheme, serial, std::span(queried).first(3), t.root_digest()),
                  InvalidInput);
}
