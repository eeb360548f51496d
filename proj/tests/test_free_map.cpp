#include "doctest.h"

#include <random>

#include "cvn/free_map.hpp"
#include "oracles.hpp"

using cvn::FreeMap;
using cvn::Word;
using cvn::cyclic_reduce;
using cvn::parse_word;
using cvn::to_string;

namespace {

FreeMap fib() {
  return FreeMap(2, {parse_word("a b"), parse_word("a")}, std::vector<Word>{parse_word("b"), parse_word("b- a")});
}

FreeMap neg() {
  return FreeMap(2, {parse_word("a"), parse_word("b a")}, std::vector<Word>{parse_word("a"), parse_word("b a-")});
}

// Letter-by-letter substitution then naive reduction.
oracle::Signed naive_apply(FreeMap const& phi, oracle::Signed const& s) {
  oracle::Signed out;
  for (int x : s) {
    oracle::Signed img = oracle::to_signed(phi.image(std::abs(x) - 1));
    if (x < 0) {
      std::reverse(img.begin(), img.end());
      for (int& y : img) y = -y;
    }
    out.insert(out.end(), img.begin(), img.end());
  }
  return oracle::naive_reduce(out);
}

// Products of random Nielsen moves, so the result is an automorphism with a
// known inverse.
FreeMap random_automorphism(std::mt19937& rng, int rank, int moves) {
  FreeMap phi = FreeMap::identity(rank);
  std::uniform_int_distribution<int> gen(0, rank - 1);
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < moves; ++i) {
    int const t = gen(rng);
    int f = gen(rng);
    if (f == t) f = (t + 1) % rank;
    std::vector<Word> img, inv;
    for (int j = 0; j < rank; ++j) {
      img.push_back(Word::generator(j));
      inv.push_back(Word::generator(j));
    }
    Word factor = Word::generator(f);
    if (coin(rng)) factor = factor.inverse();
    if (coin(rng)) {
      img[static_cast<std::size_t>(t)] = Word::generator(t) * factor;
      inv[static_cast<std::size_t>(t)] = Word::generator(t) * factor.inverse();
    } else {
      img[static_cast<std::size_t>(t)] = factor * Word::generator(t);
      inv[static_cast<std::size_t>(t)] = factor.inverse() * Word::generator(t);
    }
    phi = compose(FreeMap(rank, img, inv), phi);
  }
  return phi;
}

}  // namespace

TEST_CASE("apply matches substitution followed by naive reduction") {
  std::mt19937 rng(42);
  FreeMap const maps[] = {fib(), neg(), random_automorphism(rng, 3, 6)};
  for (FreeMap const& phi : maps) {
    for (int i = 0; i < 2000; ++i) {
      oracle::Signed const s = oracle::random_signed(rng, phi.rank(), 12);
      REQUIRE(oracle::to_signed(phi.apply(oracle::from_signed(s))) == naive_apply(phi, s));
    }
  }
}

TEST_CASE("images are stored reduced and validated") {
  FreeMap const phi(2, {parse_word("a b b-"), parse_word("b")});
  CHECK(phi.image(0) == parse_word("a"));
  CHECK_THROWS_AS(FreeMap(2, {parse_word("c"), parse_word("a")}), std::invalid_argument);
  CHECK_THROWS_AS(FreeMap(2, {parse_word("a")}), std::invalid_argument);
  CHECK_THROWS_AS(FreeMap(0, {}), std::invalid_argument);
  CHECK_THROWS_AS(phi.apply(parse_word("c")), std::invalid_argument);
}

TEST_CASE("certification checks both composites") {
  CHECK(fib().is_certified());
  CHECK(neg().is_certified());
  FreeMap const wrong(2, {parse_word("a b"), parse_word("a")}, std::vector<Word>{parse_word("b"), parse_word("a")});
  CHECK_FALSE(wrong.is_certified());
  FreeMap const bare(2, {parse_word("a b"), parse_word("a")});
  CHECK_FALSE(bare.is_certified());
  CHECK_THROWS_AS(bare.inverse(), std::logic_error);
}

TEST_CASE("composition is associative and inverses compose") {
  std::mt19937 rng(8);
  for (int i = 0; i < 50; ++i) {
    FreeMap const p = random_automorphism(rng, 3, 4);
    FreeMap const q = random_automorphism(rng, 3, 4);
    FreeMap const r = random_automorphism(rng, 3, 4);
    CHECK(compose(compose(p, q), r).images() == compose(p, compose(q, r)).images());
    FreeMap const pq = compose(p, q);
    REQUIRE(pq.is_certified());
    CHECK(compose(pq, pq.inverse()).images() == FreeMap::identity(3).images());
  }
  CHECK_THROWS_AS(compose(fib(), FreeMap::identity(3)), std::invalid_argument);
}

TEST_CASE("powers of the Fibonacci map") {
  // phi^n(a) has Fibonacci length.
  int prev = 1, cur = 2;
  for (int n = 1; n <= 10; ++n) {
    CHECK(static_cast<int>(power(fib(), n).image(0).size()) == cur);
    int const next = cur + prev;
    prev = cur;
    cur = next;
  }
  CHECK(to_string(power(fib(), 2).image(0)) == "a b a");
  CHECK(power(fib(), 0).images() == FreeMap::identity(2).images());
  CHECK(to_string(power(fib(), -1).image(0)) == "b");
  CHECK(to_string(power(fib(), -1).image(1)) == "b- a");
}

TEST_CASE("orbit of b under the polynomially growing map") {
  auto const r = cvn::orbit(neg(), parse_word("b"), -3, 4);
  REQUIRE(r.entries.size() == 8);
  CHECK(r.entries.front().n == -3);
  CHECK(r.entries.back().n == 4);
  for (auto const& e : r.entries) {
    CHECK(e.word == cyclic_reduce(parse_word("b") * parse_word("a").power(e.n)));
  }
  CHECK(r.truncation_notes.empty());
  CHECK(r.reached_lo == -3);
  CHECK(r.reached_hi == 4);
}

TEST_CASE("orbit agrees with naive iteration") {
  std::mt19937 rng(4);
  FreeMap const phi = random_automorphism(rng, 3, 5);
  for (int i = 0; i < 20; ++i) {
    oracle::Signed s = oracle::random_signed(rng, 3, 6);
    auto const r = cvn::orbit(phi, oracle::from_signed(s), 0, 5);
    for (auto const& e : r.entries) {
      REQUIRE(e.word == cyclic_reduce(oracle::from_signed(s)));
      s = naive_apply(phi, s);
    }
  }
}

TEST_CASE("orbit truncates at the letter cap and refuses uncertified backward runs") {
  auto const r = cvn::orbit(fib(), parse_word("a"), 0, 40, 200);
  CHECK_FALSE(r.truncation_notes.empty());
  CHECK(r.reached_hi < 40);
  for (auto const& e : r.entries) CHECK(e.word.size() <= 200);
  FreeMap const bare(2, {parse_word("a b"), parse_word("a")});
  CHECK_THROWS_AS(cvn::orbit(bare, parse_word("a"), -1, 1), std::invalid_argument);
  CHECK_NOTHROW(cvn::orbit(bare, parse_word("a"), 0, 3));
}

TEST_CASE("extend to basis on a word with a once-occurring generator") {
  auto const cert = cvn::extend_to_basis(parse_word("a a a b"), 2);
  REQUIRE(cert.has_value());
  CHECK(check_certificate(*cert));
  CHECK(cert->automorphism.apply(Word::generator(cert->generator)) == parse_word("a a a b"));
  CHECK_FALSE(cvn::extend_to_basis(parse_word("a a b b"), 2).has_value());
}

TEST_CASE("extend to basis certifies random words with a lone generator") {
  std::mt19937 rng(17);
  int certified = 0;
  for (int i = 0; i < 2000; ++i) {
    Word const w = cvn::reduce(oracle::random_word(rng, 3, 10, true));
    auto const cert = cvn::extend_to_basis(w, 3);
    bool lone = false;
    for (int g = 0; g < 3; ++g) lone = lone || cvn::count_generator(w.letters(), g) == 1;
    REQUIRE(cert.has_value() == lone);
    if (cert) {
      REQUIRE(check_certificate(*cert));
      ++certified;
    }
  }
  CHECK(certified > 100);
}

TEST_CASE("basis inverse recovers inverse automorphisms") {
  std::mt19937 rng(23);
  for (int i = 0; i < 200; ++i) {
    FreeMap const phi = random_automorphism(rng, 3, 8);
    auto const inv = cvn::basis_inverse(phi.images(), 3);
    REQUIRE(inv.has_value());
    FreeMap const psi(3, phi.images(), *inv);
    REQUIRE(psi.is_certified());
  }
}

TEST_CASE("basis inverse rejects non-bases") {
  CHECK_FALSE(cvn::basis_inverse({parse_word("a a"), parse_word("b")}, 2).has_value());
  CHECK_FALSE(cvn::basis_inverse({parse_word("a b a- b-"), parse_word("a")}, 2).has_value());
  CHECK_FALSE(cvn::basis_inverse({parse_word("a"), parse_word("a")}, 2).has_value());
  auto const ok = cvn::basis_inverse({parse_word("a b"), parse_word("a")}, 2);
  REQUIRE(ok.has_value());
  CHECK(to_string((*ok)[0]) == "b");
  CHECK(to_string((*ok)[1]) == "b- a");
}
