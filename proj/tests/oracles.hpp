// Slow reference implementations used to cross-check the library. They share
// no code with it beyond the plain data types.

#ifndef CVN_TESTS_ORACLES_HPP_
#define CVN_TESTS_ORACLES_HPP_

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "cvn/graph.hpp"
#include "cvn/word.hpp"

namespace oracle {

// Letters as signed ints: +(i+1) for a_i, -(i+1) for its inverse.
using Signed = std::vector<int>;

inline Signed to_signed(cvn::Word const& w) {
  Signed out;
  for (auto l : w.letters()) out.push_back(l.is_inverse() ? -(l.index() + 1) : l.index() + 1);
  return out;
}

inline cvn::Word from_signed(Signed const& s) {
  std::vector<cvn::Letter> out;
  for (int x : s) out.emplace_back(std::abs(x) - 1, x < 0);
  return cvn::Word(out);
}

// Repeatedly deletes the leftmost cancelling pair until none is left.
inline Signed naive_reduce(Signed s) {
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      if (s[i] == -s[i + 1]) {
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(i), s.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        changed = true;
        break;
      }
    }
  }
  return s;
}

// Letter order used by the library: a < a^-1 < b < b^-1 ...
inline int code_of(int x) { return 2 * (std::abs(x) - 1) + (x < 0 ? 1 : 0); }

// Reduce, strip matching ends one pair at a time, then take the smallest of
// all rotations by brute force.
inline Signed naive_cyclic(Signed s) {
  s = naive_reduce(s);
  while (s.size() >= 2 && s.front() == -s.back()) {
    s.erase(s.begin());
    s.pop_back();
  }
  if (s.empty()) return s;
  Signed best = s;
  auto key = [](Signed const& v) {
    std::vector<int> k;
    for (int x : v) k.push_back(code_of(x));
    return k;
  };
  for (std::size_t r = 1; r < s.size(); ++r) {
    Signed rot(s.begin() + static_cast<std::ptrdiff_t>(r), s.end());
    rot.insert(rot.end(), s.begin(), s.begin() + static_cast<std::ptrdiff_t>(r));
    if (key(rot) < key(best)) best = rot;
  }
  return best;
}

// Largest run of a_index^{+-1} in the cyclic word, reading around the seam.
// A word made only of that letter reports its length.
inline int naive_cyclic_run(Signed const& s, int index) {
  if (s.empty()) return 0;
  int const pos = index + 1;
  if (std::all_of(s.begin(), s.end(), [&](int x) { return x == s[0] && std::abs(x) == pos; })) {
    return static_cast<int>(s.size());
  }
  int best = 0;
  std::size_t const n = s.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(s[i]) != pos) continue;
    int run = 0;
    while (run < static_cast<int>(n) && s[(i + static_cast<std::size_t>(run)) % n] == s[i]) ++run;
    best = std::max(best, run);
  }
  return best;
}

inline Signed random_signed(std::mt19937& rng, int rank, int max_len, bool reduced = false) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> gen(1, rank);
  std::bernoulli_distribution neg(0.5);
  Signed s;
  int const n = len(rng);
  while (static_cast<int>(s.size()) < n) {
    int x = gen(rng) * (neg(rng) ? -1 : 1);
    if (reduced && !s.empty() && s.back() == -x) continue;
    s.push_back(x);
  }
  return s;
}

inline cvn::Word random_word(std::mt19937& rng, int rank, int max_len, bool reduced = false) {
  return from_signed(random_signed(rng, rank, max_len, reduced));
}

// Edge paths: cancel e followed by its inverse, repeatedly.
inline std::vector<cvn::EdgeId> naive_reduce_edges(std::vector<cvn::EdgeId> p) {
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      if (p[i + 1] == (p[i] ^ 1)) {
        p.erase(p.begin() + static_cast<std::ptrdiff_t>(i), p.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        changed = true;
        break;
      }
    }
  }
  return p;
}

inline std::vector<cvn::EdgeId> naive_cyclic_edges(std::vector<cvn::EdgeId> p) {
  p = naive_reduce_edges(p);
  while (p.size() >= 2 && p.front() == (p.back() ^ 1)) {
    p.erase(p.begin());
    p.pop_back();
  }
  return p;
}

// Multiset of edges crossed, orientation ignored.
inline std::vector<long> naive_crossings(std::vector<cvn::EdgeId> const& p, int positive_edges) {
  std::vector<long> out(static_cast<std::size_t>(positive_edges), 0);
  for (auto e : p) ++out[static_cast<std::size_t>(e / 2)];
  return out;
}

}  // namespace oracle

#endif  // CVN_TESTS_ORACLES_HPP_
