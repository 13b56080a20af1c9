#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "helpers.hpp"
#include "mlsig/mlsig.hpp"

using namespace mlsig;
using testing_support::chain_for;

TEST(RandomizeLs, DeterministicAndStillAnLS) {
  auto chain = chain_for("M11");
  auto base = chain_ls(chain);
  EXPECT_EQ(randomize_ls(base, chain, 7), randomize_ls(base, chain, 7));
  EXPECT_NE(randomize_ls(base, chain, 7), randomize_ls(base, chain, 8));
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto r = randomize_ls(base, chain, seed);
    ASSERT_TRUE(verify_structural(r, chain).passed) << "seed " << seed;
  }
  EXPECT_TRUE(verify_exhaustive(randomize_ls(base, chain, 3), chain).passed);
}

TEST(RandomizeLs, KeepsBasePointImages) {
  auto chain = chain_for("M12");
  auto base = chain_ls(chain);
  auto r = randomize_ls(base, chain, 11);
  for (std::size_t b = 0; b < base.block_count(); ++b) {
    Point w = base.annotations()[b].base_point;
    std::multiset<Point> before, after;
    for (const auto& e : base.block(b)) before.insert(e(w));
    for (const auto& e : r.block(b)) after.insert(e(w));
    EXPECT_EQ(before, after);
  }
  EXPECT_THROW(randomize_ls(mls_solvable(chain_for("S4")), chain_for("S4"), 1), DomainError);
}

TEST(Keygen, SeedsAndTrivialGroup) {
  auto chain = chain_for("M11");
  EXPECT_EQ(keygen(chain, 5, "M11"), keygen(chain, 5, "M11"));
  EXPECT_EQ(key_to_string(keygen(chain, 5, "M11")), key_to_string(keygen(chain, 5, "M11")));
  EXPECT_FALSE(keygen(chain, 5, "M11") == keygen(chain, 6, "M11"));
  auto trivial = keygen(chain_of(3, {}), 1);
  EXPECT_EQ(trivial.message_space(), 1);
  EXPECT_EQ(trivial.encrypt(0), 0);
  EXPECT_THROW(trivial.encrypt(1), DomainError);
}

TEST(Pgm, EqualKeysGiveTheIdentityMapping) {
  auto chain = chain_for("M11");
  auto k = keygen(chain, 9);
  PgmKey same(k.group(), k.seed(), k.alpha(), k.alpha());
  for (int m : {0, 1, 17, 4000, 7919}) EXPECT_EQ(same.encrypt(m), m);
}

TEST(Pgm, RoundTripM12) {
  auto chain = chain_for("M12");
  auto k = keygen(chain, 2024, "M12");
  EXPECT_EQ(k.message_space(), 95040);
  for (int m = 0; m < 95040; m += 211) EXPECT_EQ(decrypt(k, encrypt(k, m)), m);
  EXPECT_EQ(decrypt(k, encrypt(k, 95039)), 95039);
  EXPECT_THROW(encrypt(k, 95040), DomainError);
  EXPECT_THROW(encrypt(k, -1), DomainError);
}

TEST(Pgm, S4IsABijection) {
  auto k = keygen(chain_for("S4"), 77);
  std::set<BigInt> images;
  for (int m = 0; m < 24; ++m) {
    BigInt c = encrypt(k, m);
    EXPECT_TRUE(c >= 0 && c < 24);
    EXPECT_EQ(decrypt(k, c), m);
    images.insert(c);
  }
  EXPECT_EQ(images.size(), 24u);
}

TEST(KeyFile, RoundTrip) {
  auto k = keygen(chain_for("M11"), 31, "M11");
  auto text = key_to_string(k);
  std::istringstream in(text);
  auto back = read_key(in);
  EXPECT_EQ(back, k);
  EXPECT_EQ(key_to_string(back), text);
  EXPECT_EQ(back.encrypt(1000), k.encrypt(1000));
}

TEST(KeyFile, Errors) {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_key(in, "k.json");
  };
  EXPECT_THROW(parse("[]"), ParseError);
  EXPECT_THROW(parse("{\"format\": \"x\"}"), ParseError);
  auto text = key_to_string(keygen(chain_for("S4"), 1, "S4"));
  auto bad = text;
  bad.replace(bad.find("\"version\": 1"), 12, "\"version\": 2");
  EXPECT_THROW(parse(bad), ParseError);
  bad = text;
  bad.replace(bad.find("\"seed\": 1"), 9, "\"seed\": -1");
  EXPECT_THROW(parse(bad), ParseError);
  try {
    parse(text.substr(0, text.size() / 2));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("k.json"), std::string::npos);
  }
  EXPECT_THROW(read_key_file("/nonexistent/key.json"), ParseError);
}
