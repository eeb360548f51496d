#include "doctest.h"

#include <random>

#include "cvn/word.hpp"
#include "oracles.hpp"

using cvn::CyclicWord;
using cvn::Letter;
using cvn::Word;
using cvn::cyclic_reduce;
using cvn::parse_word;
using cvn::reduce;
using cvn::to_string;

namespace {

CyclicWord cw(char const* text) { return cyclic_reduce(parse_word(text)); }

}  // namespace

TEST_CASE("letters order as a < a- < b < b-") {
  Letter const a(0, false);
  Letter const A(0, true);
  Letter const b(1, false);
  CHECK(a < A);
  CHECK(A < b);
  CHECK(a.inverse() == A);
  CHECK(A.inverse() == a);
  CHECK(A.code() == 1u);
  CHECK(b.sign() == 1);
  CHECK(A.sign() == -1);
}

TEST_CASE("parse accepts the documented spellings") {
  CHECK(parse_word("a b-") == parse_word("a B"));
  CHECK(parse_word("a b⁻¹") == parse_word("a b-"));
  CHECK(parse_word("a^3") == parse_word("a a a"));
  CHECK(parse_word("b^-2") == parse_word("b- b-"));
  CHECK(parse_word("1").empty());
  CHECK(parse_word("").empty());
  CHECK(parse_word("ab") == parse_word("a b"));
  CHECK_THROWS_AS(parse_word("a ?"), cvn::ParseError);
}

TEST_CASE("printing round trips through the parser") {
  std::mt19937 rng(7);
  for (int i = 0; i < 500; ++i) {
    Word const w = oracle::random_word(rng, 4, 12);
    CHECK(parse_word(to_string(w)) == w);
  }
  CHECK(to_string(Word{}) == "1");
  CHECK(to_string(parse_word("a b-")) == "a b-");
}

TEST_CASE("reduce on small examples") {
  CHECK(reduce(parse_word("a a- b")) == parse_word("b"));
  CHECK(reduce(parse_word("a b b- a-")).empty());
  CHECK(reduce(parse_word("a b a- b-")) == parse_word("a b a- b-"));
  CHECK(parse_word("a b b- a").is_reduced() == false);
  CHECK(parse_word("a b a").is_reduced());
}

TEST_CASE("cyclic reduce on small examples") {
  CHECK(cw("b a b-") == cw("a"));
  CHECK(to_string(cw("b a b-")) == "a");
  CHECK(to_string(cw("b a")) == "a b");
  CHECK(cw("a a-").empty());
  CHECK(to_string(cw("b- a b a- b")) == "b");
}

TEST_CASE("reduce agrees with naive pair deletion on random words") {
  std::mt19937 rng(20240611);
  for (int i = 0; i < 100000; ++i) {
    oracle::Signed const s = oracle::random_signed(rng, 3, 14);
    Word const w = oracle::from_signed(s);
    Word const r = reduce(w);
    REQUIRE(oracle::to_signed(r) == oracle::naive_reduce(s));
    REQUIRE(r.is_reduced());
  }
}

TEST_CASE("cyclic reduce agrees with brute-force rotations on random words") {
  std::mt19937 rng(11);
  for (int i = 0; i < 100000; ++i) {
    oracle::Signed const s = oracle::random_signed(rng, 3, 14);
    CyclicWord const c = cyclic_reduce(oracle::from_signed(s));
    REQUIRE(oracle::to_signed(c.as_word()) == oracle::naive_cyclic(s));
  }
}

TEST_CASE("cyclic reduction is a conjugacy invariant") {
  std::mt19937 rng(3);
  for (int i = 0; i < 5000; ++i) {
    Word const w = oracle::random_word(rng, 3, 10);
    Word const u = oracle::random_word(rng, 3, 6);
    CHECK(cyclic_reduce(u * w * u.inverse()) == cyclic_reduce(w));
    CHECK(cyclic_reduce(cyclic_reduce(w).as_word()) == cyclic_reduce(w));
    if (!w.empty()) {
      // Rotating the written word never changes the class.
      Word rotated(std::vector<Letter>(w.letters().begin() + 1, w.letters().end()));
      rotated = rotated * Word({w[0]});
      CHECK(cyclic_reduce(rotated) == cyclic_reduce(w));
    }
  }
}

TEST_CASE("inverse and power") {
  std::mt19937 rng(5);
  for (int i = 0; i < 2000; ++i) {
    Word const w = oracle::random_word(rng, 3, 10);
    CHECK(reduce(w * w.inverse()).empty());
    CHECK(reduce(w.power(3)) == reduce(w * w * w));
    CHECK(reduce(w.power(-2)) == reduce(w.inverse() * w.inverse()));
  }
  CHECK(Word{}.max_index() == -1);
  CHECK(parse_word("a c").max_index() == 2);
}

TEST_CASE("max power reads runs across the seam") {
  CHECK(cvn::max_power(cw("a b a"), 0) == 2);
  CHECK(cvn::max_power(cw("a a a"), 0) == 3);
  CHECK(cvn::max_power(cw("a a a"), 1) == 0);
  CHECK(cvn::max_power(cw("a a- "), 0) == 0);
  CHECK(cvn::max_power(cw("a b- b- a b"), 1) == 2);
  CHECK(cvn::max_power(cw("b a b- a-"), 1) == 1);
}

TEST_CASE("max power agrees with a naive run scan") {
  std::mt19937 rng(99);
  for (int i = 0; i < 20000; ++i) {
    oracle::Signed const s = oracle::naive_cyclic(oracle::random_signed(rng, 2, 16));
    CyclicWord const c = cyclic_reduce(oracle::from_signed(s));
    for (int index = 0; index < 2; ++index) {
      REQUIRE(cvn::max_power(c, index) == oracle::naive_cyclic_run(s, index));
    }
  }
}

TEST_CASE("count generator ignores orientation") {
  Word const w = parse_word("a b a- a c");
  CHECK(cvn::count_generator(w.letters(), 0) == 3);
  CHECK(cvn::count_generator(w.letters(), 1) == 1);
  CHECK(cvn::count_generator(w.letters(), 3) == 0);
}

TEST_CASE("rewriting over a, b a^k") {
  // (b a^2)^3 is b'^3 for k = 2.
  CHECK(to_string(cvn::to_basis_a_bak(cw("b a a b a a b a a"), 2)) == "b b b");
  CHECK(to_string(cvn::to_basis_a_bak(cw("a"), 4)) == "a");
  CHECK_THROWS_AS(cvn::to_basis_a_bak(cw("c"), 1), std::invalid_argument);
  CHECK_THROWS_AS(cvn::to_basis_a_bak(cw("a"), 0), std::invalid_argument);

  std::mt19937 rng(1);
  for (int i = 0; i < 5000; ++i) {
    CyclicWord const c = cyclic_reduce(oracle::random_word(rng, 2, 14));
    for (int k = 1; k <= 4; ++k) {
      REQUIRE(cvn::from_basis_a_bak(cvn::to_basis_a_bak(c, k), k) == c);
    }
  }
}

TEST_CASE("generator names") {
  CHECK(cvn::generator_name(0) == "a");
  CHECK(cvn::generator_name(25) == "z");
  CHECK(to_string(Letter(1, true)) == "b-");
}
