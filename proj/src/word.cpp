#include "cvn/word.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "cvn/detail/sequence.hpp"

namespace cvn {

bool Word::is_reduced() const {
  return detail::is_reduced(std::span<const Letter>(letters_), LetterInverse{});
}

Word Word::inverse() const {
  return Word(detail::inverted(std::span<const Letter>(letters_), LetterInverse{}));
}

Word Word::operator*(Word const& rhs) const {
  std::vector<Letter> out = letters_;
  out.insert(out.end(), rhs.letters_.begin(), rhs.letters_.end());
  return Word(std::move(out));
}

Word Word::power(int k) const {
  Word base = k < 0 ? inverse() : *this;
  std::vector<Letter> out;
  out.reserve(base.size() * static_cast<std::size_t>(std::abs(k)));
  for (int i = 0; i < std::abs(k); ++i) {
    out.insert(out.end(), base.letters_.begin(), base.letters_.end());
  }
  return Word(std::move(out));
}

int Word::max_index() const {
  int m = -1;
  for (Letter l : letters_) {
    m = std::max(m, l.index());
  }
  return m;
}

Word reduce(Word const& w) {
  return Word(detail::reduced(w.letters(), LetterInverse{}));
}

CyclicWord cyclic_reduce_letters(std::vector<Letter> letters) {
  if (!detail::is_reduced(std::span<const Letter>(letters), LetterInverse{})) {
    letters = detail::reduced(std::span<const Letter>(letters), LetterInverse{});
  }
  detail::strip_conjugation(letters, LetterInverse{});
  detail::rotate_to_least(letters);
  CyclicWord out;
  out.letters_ = std::move(letters);
  return out;
}

CyclicWord cyclic_reduce(Word const& w) {
  return cyclic_reduce_letters(std::vector<Letter>(w.letters().begin(), w.letters().end()));
}

int max_power(CyclicWord const& w, int index) {
  auto const letters = w.letters();
  std::size_t const n = letters.size();
  if (n == 0) {
    return 0;
  }
  if (std::all_of(letters.begin(), letters.end(), [&](Letter l) { return l == letters[0]; })) {
    return letters[0].index() == index ? static_cast<int>(n) : 0;
  }
  // Start the scan at a run boundary so seam runs are counted whole.
  std::size_t start = 0;
  while (letters[start] == letters[(start + n - 1) % n]) {
    ++start;
  }
  int best = 0;
  int run = 0;
  for (std::size_t step = 0; step < n; ++step) {
    Letter const cur = letters[(start + step) % n];
    Letter const prev = letters[(start + step + n - 1) % n];
    if (cur.index() != index) {
      run = 0;
      continue;
    }
    run = (step > 0 && cur == prev) ? run + 1 : 1;
    best = std::max(best, run);
  }
  return best;
}

std::size_t count_generator(std::span<const Letter> letters, int index) {
  return static_cast<std::size_t>(
      std::count_if(letters.begin(), letters.end(), [&](Letter l) { return l.index() == index; }));
}

namespace {

void require_rank_two(CyclicWord const& w) {
  for (Letter l : w.letters()) {
    if (l.index() > 1) {
      throw std::invalid_argument("basis change {a, b a^k} requires a rank-2 word, found " +
                                  to_string(l));
    }
  }
}

}  // namespace

CyclicWord to_basis_a_bak(CyclicWord const& w, int k) {
  require_rank_two(w);
  if (k < 1) {
    throw std::invalid_argument("to_basis_a_bak: k must be >= 1");
  }
  Letter const a(0, false);
  Letter const bp(1, false);
  std::vector<Letter> out;
  out.reserve(w.size() * static_cast<std::size_t>(k + 1));
  for (Letter l : w.letters()) {
    if (l.index() == 0) {
      detail::push_reduced(out, l, LetterInverse{});
    } else if (!l.is_inverse()) {
      detail::push_reduced(out, bp, LetterInverse{});
      for (int i = 0; i < k; ++i) detail::push_reduced(out, a.inverse(), LetterInverse{});
    } else {
      for (int i = 0; i < k; ++i) detail::push_reduced(out, a, LetterInverse{});
      detail::push_reduced(out, bp.inverse(), LetterInverse{});
    }
  }
  return cyclic_reduce_letters(std::move(out));
}

CyclicWord from_basis_a_bak(CyclicWord const& w, int k) {
  require_rank_two(w);
  Letter const a(0, false);
  Letter const b(1, false);
  std::vector<Letter> out;
  for (Letter l : w.letters()) {
    if (l.index() == 0) {
      detail::push_reduced(out, l, LetterInverse{});
    } else if (!l.is_inverse()) {
      detail::push_reduced(out, b, LetterInverse{});
      for (int i = 0; i < k; ++i) detail::push_reduced(out, a, LetterInverse{});
    } else {
      for (int i = 0; i < k; ++i) detail::push_reduced(out, a.inverse(), LetterInverse{});
      detail::push_reduced(out, b.inverse(), LetterInverse{});
    }
  }
  return cyclic_reduce_letters(std::move(out));
}

std::string generator_name(int index) {
  if (index < 0 || index >= 26) {
    throw std::out_of_range("generator index out of range: " + std::to_string(index));
  }
  return std::string(1, static_cast<char>('a' + index));
}

std::string to_string(Letter l) {
  return generator_name(l.index()) + (l.is_inverse() ? "-" : "");
}

namespace {

std::string join_letters(std::span<const Letter> letters) {
  if (letters.empty()) {
    return "1";
  }
  std::string out;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i > 0) out += ' ';
    out += to_string(letters[i]);
  }
  return out;
}

}  // namespace

std::string to_string(Word const& w) { return join_letters(w.letters()); }
std::string to_string(CyclicWord const& w) { return join_letters(w.letters()); }

Word parse_word(std::string_view text) {
  std::vector<Letter> out;
  std::size_t i = 0;
  auto fail = [&](std::string const& why) {
    throw ParseError("bad word \"" + std::string(text) + "\": " + why);
  };
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c) || c == '*' || c == '.') {
      ++i;
      continue;
    }
    if (c == '1' && out.empty()) {
      ++i;
      continue;
    }
    if (!std::isalpha(c)) {
      fail("unexpected character at offset " + std::to_string(i));
    }
    bool inv = std::isupper(c) != 0;
    int index = std::tolower(c) - 'a';
    ++i;
    if (i < text.size() && text[i] == '-') {
      inv = !inv;
      ++i;
    } else if (text.substr(i).starts_with("⁻¹")) {
      inv = !inv;
      i += std::string_view("⁻¹").size();
    } else if (text.substr(i).starts_with("̄")) {
      // combining macron, as in "ā"
      inv = !inv;
      i += std::string_view("̄").size();
    }
    int exponent = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      std::size_t j = i;
      if (j < text.size() && text[j] == '-') ++j;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j == i || (j == i + 1 && text[i] == '-')) fail("missing exponent");
      exponent = std::atoi(std::string(text.substr(i, j - i)).c_str());
      i = j;
    }
    Letter l(index, inv);
    if (exponent < 0) {
      l = l.inverse();
      exponent = -exponent;
    }
    for (int e = 0; e < exponent; ++e) out.push_back(l);
  }
  return Word(std::move(out));
}

}  // namespace cvn
