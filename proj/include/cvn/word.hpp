// Words and cyclic words over a free basis {a_0, ..., a_{N-1}}.

#ifndef CVN_WORD_HPP_
#define CVN_WORD_HPP_

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cvn {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A signed generator a_i^{+1} or a_i^{-1}. Encoded as 2*i + (inverse ? 1 : 0),
// so the total order on letters is a < a^-1 < b < b^-1 < ...
class Letter {
 public:
  constexpr Letter() = default;
  constexpr Letter(int index, bool inverse)
      : code_(static_cast<std::uint32_t>(2 * index + (inverse ? 1 : 0))) {}

  static constexpr Letter from_code(std::uint32_t code) {
    Letter l;
    l.code_ = code;
    return l;
  }

  constexpr int index() const { return static_cast<int>(code_ >> 1); }
  constexpr bool is_inverse() const { return (code_ & 1u) != 0; }
  constexpr int sign() const { return is_inverse() ? -1 : 1; }
  constexpr Letter inverse() const { return from_code(code_ ^ 1u); }
  constexpr std::uint32_t code() const { return code_; }

  constexpr auto operator<=>(Letter const&) const = default;

 private:
  std::uint32_t code_ = 0;
};

struct LetterInverse {
  constexpr Letter operator()(Letter l) const { return l.inverse(); }
};

// An element of F_N written as a sequence of letters. Construction does not
// reduce; use reduce() for [w].
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  Word(std::initializer_list<Letter> letters) : letters_(letters) {}

  static Word generator(int index) { return Word({Letter(index, false)}); }

  std::span<const Letter> letters() const { return letters_; }
  std::vector<Letter>& mutable_letters() { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  bool is_reduced() const;
  Word inverse() const;
  Word operator*(Word const& rhs) const;
  Word power(int k) const;
  // Largest generator index used, or -1 for the empty word.
  int max_index() const;

  bool operator==(Word const&) const = default;
  auto operator<=>(Word const&) const = default;

 private:
  std::vector<Letter> letters_;
};

// A conjugacy class, stored as the least rotation of its cyclically reduced
// representative. Only constructible through cyclic_reduce().
class CyclicWord {
 public:
  CyclicWord() = default;

  std::span<const Letter> letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Word as_word() const { return Word(letters_); }

  bool operator==(CyclicWord const&) const = default;
  auto operator<=>(CyclicWord const&) const = default;

 private:
  friend CyclicWord cyclic_reduce(Word const&);
  friend CyclicWord cyclic_reduce_letters(std::vector<Letter>);
  std::vector<Letter> letters_;
};

Word reduce(Word const& w);
CyclicWord cyclic_reduce(Word const& w);
CyclicWord cyclic_reduce_letters(std::vector<Letter> letters);

// Largest |k| such that a_index^k occurs as a cyclic subword. Runs are merged
// across the rotation seam; a pure power reports its full exponent.
int max_power(CyclicWord const& w, int index);

// Occurrences of a_index^{+-1} in the letter sequence.
std::size_t count_generator(std::span<const Letter> letters, int index);

// Rewrites a rank-2 cyclic word over the basis {a, b' = b a^k}: substitutes
// b -> b' a^{-k} and cyclically reduces. Generator 1 of the result is b'.
CyclicWord to_basis_a_bak(CyclicWord const& w, int k);
// Inverse substitution b' -> b a^k followed by cyclic reduction.
CyclicWord from_basis_a_bak(CyclicWord const& w, int k);

// Text forms. Generators are a..z; inverses print as "a-". Parsing accepts
// "a-", "a⁻¹", "A" and "a^k" (k may be negative); "1" or "" is the identity.
std::string generator_name(int index);
std::string to_string(Word const& w);
std::string to_string(CyclicWord const& w);
std::string to_string(Letter l);
Word parse_word(std::string_view text);

}  // namespace cvn

#endif  // CVN_WORD_HPP_
