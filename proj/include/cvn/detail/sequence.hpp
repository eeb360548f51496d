// Sequence kernels shared by words over a free basis and edge paths in a
// graph. Both are sequences of symbols carrying an involution (inverse), so
// free reduction, cyclic reduction and canonical rotation are written once.

#ifndef CVN_DETAIL_SEQUENCE_HPP_
#define CVN_DETAIL_SEQUENCE_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace cvn::detail {

// Push one symbol onto a reduced stack, cancelling against the top.
template <class T, class Inv>
inline void push_reduced(std::vector<T>& stack, T x, Inv inv) {
  if (!stack.empty() && stack.back() == inv(x)) {
    stack.pop_back();
  } else {
    stack.push_back(x);
  }
}

template <class T, class Inv>
std::vector<T> reduced(std::span<const T> seq, Inv inv) {
  std::vector<T> out;
  out.reserve(seq.size());
  for (T x : seq) {
    push_reduced(out, x, inv);
  }
  return out;
}

template <class T, class Inv>
bool is_reduced(std::span<const T> seq, Inv inv) {
  for (std::size_t i = 1; i < seq.size(); ++i) {
    if (seq[i] == inv(seq[i - 1])) {
      return false;
    }
  }
  return true;
}

// Strips matching ends of an already reduced sequence. Returns the number of
// symbols removed from each end.
template <class T, class Inv>
std::size_t strip_conjugation(std::vector<T>& seq, Inv inv) {
  std::size_t i = 0;
  std::size_t j = seq.size();
  while (j - i >= 2 && seq[j - 1] == inv(seq[i])) {
    ++i;
    --j;
  }
  if (i > 0) {
    seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(j), seq.end());
    seq.erase(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(i));
  }
  return i;
}

// Booth's algorithm: start index of the lexicographically least rotation.
template <class T>
std::size_t least_rotation(std::span<const T> s) {
  std::size_t const n = s.size();
  if (n < 2) {
    return 0;
  }
  std::vector<long> f(2 * n, -1);
  long k = 0;
  auto at = [&](long idx) { return s[static_cast<std::size_t>(idx) % n]; };
  for (long j = 1; j < static_cast<long>(2 * n); ++j) {
    T const sj = at(j);
    long i = f[static_cast<std::size_t>(j - k - 1)];
    while (i != -1 && !(sj == at(k + i + 1))) {
      if (sj < at(k + i + 1)) {
        k = j - i - 1;
      }
      i = f[static_cast<std::size_t>(i)];
    }
    if (!(sj == at(k + i + 1))) {
      if (sj < at(k)) {
        k = j;
      }
      f[static_cast<std::size_t>(j - k)] = -1;
    } else {
      f[static_cast<std::size_t>(j - k)] = i + 1;
    }
  }
  return static_cast<std::size_t>(k) % n;
}

template <class T>
void rotate_to_least(std::vector<T>& seq) {
  std::size_t const k = least_rotation(std::span<const T>(seq));
  if (k != 0) {
    std::vector<T> rotated;
    rotated.reserve(seq.size());
    rotated.insert(rotated.end(), seq.begin() + static_cast<std::ptrdiff_t>(k), seq.end());
    rotated.insert(rotated.end(), seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(k));
    seq.swap(rotated);
  }
}

template <class T, class Inv>
std::vector<T> inverted(std::span<const T> seq, Inv inv) {
  std::vector<T> out;
  out.reserve(seq.size());
  for (std::size_t i = seq.size(); i-- > 0;) {
    out.push_back(inv(seq[i]));
  }
  return out;
}

}  // namespace cvn::detail

#endif  // CVN_DETAIL_SEQUENCE_HPP_
