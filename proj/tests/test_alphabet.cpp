#include "test_util.hpp"

using chainlab::Alphabet;
using chainlab::IndexError;
using chainlab::ValidationError;
using chainlab::VocabularyError;

TEST_CASE("alphabet indexes symbols in order") {
  const Alphabet a = testutil::letters({"the", "cat", "sat"});
  REQUIRE(a.size() == 3);
  REQUIRE_FALSE(a.empty());
  REQUIRE(a.symbol(0) == "the");
  REQUIRE(a.symbol(2) == "sat");
  REQUIRE(a.index("cat") == 1);
  REQUIRE(a.contains("sat"));
  REQUIRE_FALSE(a.contains("dog"));
  REQUIRE(a.find("the") == std::size_t{0});
  REQUIRE(a.find("dog") == std::nullopt);
}

TEST_CASE("alphabet rejects duplicates and unknown lookups") {
  REQUIRE_THROWS_AS(testutil::letters({"a", "b", "a"}), ValidationError);

  const Alphabet a = testutil::letters({"a", "b"});
  REQUIRE_THROWS_AS(a.index("z"), VocabularyError);
  REQUIRE_THROWS_AS(a.symbol(2), IndexError);
}

TEST_CASE("empty alphabet is allowed") {
  const Alphabet a;
  REQUIRE(a.empty());
  REQUIRE(a.size() == 0);
  REQUIRE(a.find("anything") == std::nullopt);
}

TEST_CASE("alphabet equality is order-sensitive") {
  REQUIRE(testutil::letters({"a", "b"}) == testutil::letters({"a", "b"}));
  REQUIRE_FALSE(testutil::letters({"a", "b"}) == testutil::letters({"b", "a"}));
}
