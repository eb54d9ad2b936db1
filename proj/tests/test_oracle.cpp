#include <doctest.h>

#include <random>
#include <set>

#include "cmt/oracle.hpp"
#include "test_support.hpp"

using namespace cmt;
using namespace cmt::testing;

namespace {

std::string ref_shape(const oracle::RefNode* n) {
  if (!n) return "-";
  if (!n->left && !n->right) return label(n->key);
  return label(n->key) + "(" + ref_shape(n->left.get()) + "," + ref_shape(n->right.get()) + ")";
}

}  // namespace

TEST_CASE("reference build reproduces the first figure's shape") {
  auto ref = oracle::build_reference({K(5), K(10), K(15), K(18), K(20)}, figure_scheme());
  CHECK(ref_shape(ref.root.get()) == "15(10(5,-),20(18,-))");
  CHECK(ref.size == 5);
}

TEST_CASE("reference build of the empty set") {
  auto scheme = make_sha256_scheme();
  auto ref = oracle::build_reference({}, scheme);
  CHECK(ref.root == nullptr);
  CHECK(ref.root_digest.is_zero());
  CHECK(oracle::compare(ref, Tree(scheme)).ok);
}

TEST_CASE("reference matches the production golden digest") {
  // Pinned with an independent hashlib computation of the same five keys.
  auto ref = oracle::build_reference({K(5), K(10), K(15), K(18), K(20)}, make_sha256_scheme());
  CHECK(ref.root_digest.to_hex() ==
        "5683d18b637595117fb79f7446a3f4b6848892a9012f60bfbf880e32fa59138a");
}

TEST_CASE("compare") {
  auto scheme = make_sha256_scheme();
  std::mt19937_64 rng(41);
  auto keys = random_key_set(rng, 500);
  Tree t = build(scheme, keys);
  CHECK(oracle::compare(oracle::build_reference(keys, scheme), t).ok);

  SUBCASE("extra key is named") {
    Key extra = random_key_set(rng, 1)[0];
    t.insert(extra);
    auto r = oracle::compare(oracle::build_reference(keys, scheme), t);
    CHECK_FALSE(r.ok);
    CHECK(r.difference.find(extra.to_hex()) != std::string::npos);
  }

  SUBCASE("figures before and after removing 15 differ at 15") {
    auto fig = figure_scheme();
    auto before = oracle::build_reference({K(5), K(10), K(13), K(15), K(18), K(20)}, fig);
    Tree after = build(fig, {K(5), K(10), K(13), K(18), K(20)});
    auto r = oracle::compare(before, after);
    CHECK_FALSE(r.ok);
    CHECK(r.difference.find(K(15).to_hex()) != std::string::npos);
  }
}

TEST_CASE("oracle equivalence over random sets with interleaved removals") {
  auto scheme = make_sha256_scheme();
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + rng() % 500;
    auto keys = random_key_set(rng, n);
    Tree t = build(scheme, keys);
    auto r = oracle::compare(oracle::build_reference(keys, scheme), t);
    REQUIRE_MESSAGE(r.ok, r.difference);

    std::set<Key> live(keys.begin(), keys.end());
    for (const auto& k : keys) {
      if (rng() % 3 == 0) {
        t.remove(k);
        live.erase(k);
      }
    }
    r = oracle::compare(oracle::build_reference({live.begin(), live.end()}, scheme), t);
    REQUIRE_MESSAGE(r.ok, r.difference);
  }
}
