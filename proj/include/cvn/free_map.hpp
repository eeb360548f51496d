// Endomorphisms of F_N given by generator images, automorphism certificates,
// orbit streams and transvection-based primitivity certificates.

#ifndef CVN_FREE_MAP_HPP_
#define CVN_FREE_MAP_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cvn/word.hpp"

namespace cvn {

class FreeMap {
 public:
  FreeMap() = default;
  // Images are stored reduced. Throws std::invalid_argument if an image uses a
  // generator outside the rank or the inverse has the wrong arity.
  FreeMap(int rank, std::vector<Word> images,
          std::optional<std::vector<Word>> inverse_images = std::nullopt);

  static FreeMap identity(int rank);

  int rank() const { return rank_; }
  Word const& image(int index) const { return images_.at(static_cast<std::size_t>(index)); }
  std::vector<Word> const& images() const { return images_; }
  bool has_inverse() const { return inverse_images_.has_value(); }
  std::optional<std::vector<Word>> const& inverse_images() const { return inverse_images_; }

  // Reduced image of w; throws std::invalid_argument on rank mismatch.
  Word apply(Word const& w) const;
  // Appends the reduced image of letters onto a reduced stack.
  void apply_onto(std::span<const Letter> letters, std::vector<Letter>& stack) const;

  // True when inverse images are present and both composites fix every
  // generator after reduction.
  bool is_certified() const;
  // The inverse automorphism; throws std::logic_error without an inverse.
  FreeMap inverse() const;

 private:
  int rank_ = 0;
  std::vector<Word> images_;
  std::optional<std::vector<Word>> inverse_images_;
};

// (outer o inner)(w) = outer(inner(w)). Inverses compose when both exist.
FreeMap compose(FreeMap const& outer, FreeMap const& inner);
FreeMap power(FreeMap const& phi, int exponent);

struct OrbitEntry {
  int n = 0;
  CyclicWord word;
};

struct OrbitResult {
  std::vector<OrbitEntry> entries;  // ascending in n
  std::vector<std::string> truncation_notes;
  int reached_lo = 0;
  int reached_hi = 0;
};

// Single-direction stream of [[Phi^n(g)]] for n = 0, step, 2*step, ...
// Each step applies the map to the previous cyclically reduced word.
class OrbitStream {
 public:
  OrbitStream(FreeMap const& phi, Word const& g, bool forward, std::size_t letter_cap);
  // Next entry, or nullopt once the direction is exhausted or truncated.
  std::optional<OrbitEntry> next(int limit_steps);
  bool truncated() const { return truncated_; }
  std::string const& truncation_note() const { return note_; }

 private:
  FreeMap map_;
  CyclicWord current_;
  int step_ = 0;
  int sign_ = 1;
  bool started_ = false;
  bool truncated_ = false;
  std::size_t letter_cap_;
  std::string note_;
};

inline constexpr std::size_t kDefaultLetterCap = 10'000'000;

// [[Phi^n(g)]] for n_lo <= n <= n_hi. Requires a certified automorphism when
// n_lo < 0.
OrbitResult orbit(FreeMap const& phi, Word const& g, int n_lo, int n_hi,
                  std::size_t letter_cap = kDefaultLetterCap);

struct Transvection {
  int target = 0;     // generator being multiplied
  Letter factor;      // the multiplying letter
  bool left = false;  // target -> factor * target when true, else target * factor
};

// psi(a_generator) = word, with psi a certified automorphism.
struct BasisCertificate {
  FreeMap automorphism;
  int generator = 0;
  Word word;
  std::vector<Transvection> transvections;
  bool inverted_first = false;
};

// Primitivity certificate for a word with a generator occurring exactly once.
// Returns nullopt when no generator occurs exactly once (the sufficient
// condition fails; nothing is claimed about primitivity).
std::optional<BasisCertificate> extend_to_basis(Word const& w, int rank);

// True when psi is certified and maps a_generator to the reduced word.
bool check_certificate(BasisCertificate const& cert);

// Given N words in F_N, returns their inverse images (words v_j with
// v_j(words) = a_j) when they form a free basis, computed by Stallings
// folding with subgroup labels. nullopt when the words are not a basis.
std::optional<std::vector<Word>> basis_inverse(std::vector<Word> const& words, int rank);

}  // namespace cvn

#endif  // CVN_FREE_MAP_HPP_
