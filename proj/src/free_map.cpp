#include "cvn/free_map.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "cvn/detail/sequence.hpp"

namespace cvn {

namespace {

void check_images(int rank, std::vector<Word> const& images, char const* what) {
  if (static_cast<int>(images.size()) != rank) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(rank) +
                                " images, got " + std::to_string(images.size()));
  }
  for (Word const& w : images) {
    if (w.max_index() >= rank) {
      throw std::invalid_argument(std::string(what) + ": image " + to_string(w) +
                                  " uses a generator outside rank " + std::to_string(rank));
    }
  }
}

}  // namespace

FreeMap::FreeMap(int rank, std::vector<Word> images, std::optional<std::vector<Word>> inverse_images)
    : rank_(rank) {
  if (rank < 1) {
    throw std::invalid_argument("FreeMap: rank must be positive");
  }
  check_images(rank, images, "images");
  for (Word& w : images) w = reduce(w);
  images_ = std::move(images);
  if (inverse_images) {
    check_images(rank, *inverse_images, "inverse images");
    for (Word& w : *inverse_images) w = reduce(w);
    inverse_images_ = std::move(inverse_images);
  }
}

FreeMap FreeMap::identity(int rank) {
  std::vector<Word> images;
  for (int i = 0; i < rank; ++i) images.push_back(Word::generator(i));
  return FreeMap(rank, images, images);
}

void FreeMap::apply_onto(std::span<const Letter> letters, std::vector<Letter>& stack) const {
  for (Letter l : letters) {
    if (l.index() >= rank_) {
      throw std::invalid_argument("apply: letter " + to_string(l) + " outside rank " +
                                  std::to_string(rank_));
    }
    auto const image = images_[static_cast<std::size_t>(l.index())].letters();
    if (!l.is_inverse()) {
      for (Letter x : image) detail::push_reduced(stack, x, LetterInverse{});
    } else {
      for (std::size_t i = image.size(); i-- > 0;) {
        detail::push_reduced(stack, image[i].inverse(), LetterInverse{});
      }
    }
  }
}

Word FreeMap::apply(Word const& w) const {
  std::vector<Letter> stack;
  stack.reserve(w.size() * 2);
  apply_onto(w.letters(), stack);
  return Word(std::move(stack));
}

bool FreeMap::is_certified() const {
  if (!inverse_images_) {
    return false;
  }
  FreeMap const inv(rank_, *inverse_images_);
  for (int i = 0; i < rank_; ++i) {
    Word const gen = Word::generator(i);
    if (apply(inv.image(i)) != gen || inv.apply(image(i)) != gen) {
      return false;
    }
  }
  return true;
}

FreeMap FreeMap::inverse() const {
  if (!inverse_images_) {
    throw std::logic_error("FreeMap::inverse: no inverse images supplied");
  }
  return FreeMap(rank_, *inverse_images_, images_);
}

FreeMap compose(FreeMap const& outer, FreeMap const& inner) {
  if (outer.rank() != inner.rank()) {
    throw std::invalid_argument("compose: rank mismatch");
  }
  std::vector<Word> images;
  for (int i = 0; i < inner.rank(); ++i) images.push_back(outer.apply(inner.image(i)));
  std::optional<std::vector<Word>> inverse;
  if (outer.has_inverse() && inner.has_inverse()) {
    FreeMap const oi = outer.inverse();
    FreeMap const ii = inner.inverse();
    std::vector<Word> inv;
    for (int i = 0; i < inner.rank(); ++i) inv.push_back(ii.apply(oi.image(i)));
    inverse = std::move(inv);
  }
  return FreeMap(inner.rank(), std::move(images), std::move(inverse));
}

FreeMap power(FreeMap const& phi, int exponent) {
  FreeMap base = exponent < 0 ? phi.inverse() : phi;
  FreeMap result = FreeMap::identity(phi.rank());
  for (int i = 0; i < std::abs(exponent); ++i) result = compose(base, result);
  return result;
}

OrbitStream::OrbitStream(FreeMap const& phi, Word const& g, bool forward, std::size_t letter_cap)
    : map_(forward ? phi : phi.inverse()),
      current_(cyclic_reduce(g)),
      sign_(forward ? 1 : -1),
      letter_cap_(letter_cap) {}

std::optional<OrbitEntry> OrbitStream::next(int limit_steps) {
  if (truncated_) {
    return std::nullopt;
  }
  if (!started_) {
    started_ = true;
    return OrbitEntry{0, current_};
  }
  if (step_ >= limit_steps) {
    return std::nullopt;
  }
  std::vector<Letter> stack;
  stack.reserve(current_.size() * 2);
  map_.apply_onto(current_.letters(), stack);
  ++step_;
  if (stack.size() > letter_cap_) {
    truncated_ = true;
    note_ = "n=" + std::to_string(sign_ * step_) + ": length " + std::to_string(stack.size()) +
            " exceeds letter cap " + std::to_string(letter_cap_);
    return std::nullopt;
  }
  current_ = cyclic_reduce_letters(std::move(stack));
  return OrbitEntry{sign_ * step_, current_};
}

OrbitResult orbit(FreeMap const& phi, Word const& g, int n_lo, int n_hi, std::size_t letter_cap) {
  if (n_lo > 0 || n_hi < 0) {
    throw std::invalid_argument("orbit: require n_lo <= 0 <= n_hi");
  }
  if (g.max_index() >= phi.rank()) {
    throw std::invalid_argument("orbit: g uses a generator outside the rank");
  }
  OrbitResult result;
  std::vector<OrbitEntry> backward;
  if (n_lo < 0) {
    if (!phi.is_certified()) {
      throw std::invalid_argument("orbit: backward iteration needs a certified automorphism");
    }
    OrbitStream stream(phi, g, false, letter_cap);
    stream.next(-n_lo);  // n = 0, reported by the forward pass
    while (auto e = stream.next(-n_lo)) {
      backward.push_back(std::move(*e));
      result.reached_lo = backward.back().n;
    }
    if (stream.truncated()) result.truncation_notes.push_back(stream.truncation_note());
  }
  std::reverse(backward.begin(), backward.end());
  result.entries = std::move(backward);
  OrbitStream stream(phi, g, true, letter_cap);
  while (auto e = stream.next(n_hi)) {
    result.reached_hi = e->n;
    result.entries.push_back(std::move(*e));
  }
  if (stream.truncated()) result.truncation_notes.push_back(stream.truncation_note());
  return result;
}

namespace {

FreeMap elementary(int rank, int target, Word const& image, Word const& inverse_image) {
  std::vector<Word> images;
  std::vector<Word> inverse;
  for (int i = 0; i < rank; ++i) {
    images.push_back(i == target ? image : Word::generator(i));
    inverse.push_back(i == target ? inverse_image : Word::generator(i));
  }
  return FreeMap(rank, std::move(images), std::move(inverse));
}

}  // namespace

std::optional<BasisCertificate> extend_to_basis(Word const& w_in, int rank) {
  Word const w = reduce(w_in);
  if (w.max_index() >= rank) {
    throw std::invalid_argument("extend_to_basis: word uses a generator outside rank");
  }
  int j = -1;
  for (int i = rank - 1; i >= 0; --i) {
    if (count_generator(w.letters(), i) == 1) {
      j = i;
      break;
    }
  }
  if (j < 0) {
    return std::nullopt;
  }
  auto const letters = w.letters();
  std::size_t const pos = static_cast<std::size_t>(
      std::find_if(letters.begin(), letters.end(), [&](Letter l) { return l.index() == j; }) -
      letters.begin());
  bool const negative = letters[pos].is_inverse();
  std::vector<Letter> prefix(letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(pos));
  std::vector<Letter> suffix(letters.begin() + static_cast<std::ptrdiff_t>(pos) + 1, letters.end());

  BasisCertificate cert;
  cert.generator = j;
  cert.word = w;
  cert.inverted_first = negative;
  // For a negative occurrence, build a_j -> suffix^-1 a_j prefix^-1 and
  // precompose with the inversion a_j -> a_j^-1.
  if (negative) {
    std::vector<Letter> new_prefix = detail::inverted(std::span<const Letter>(suffix), LetterInverse{});
    std::vector<Letter> new_suffix = detail::inverted(std::span<const Letter>(prefix), LetterInverse{});
    prefix = std::move(new_prefix);
    suffix = std::move(new_suffix);
  }
  Word const aj = Word::generator(j);
  FreeMap psi = FreeMap::identity(rank);
  for (std::size_t i = suffix.size(); i-- > 0;) {
    Word const x({suffix[i]});
    psi = compose(elementary(rank, j, aj * x, aj * x.inverse()), psi);
    cert.transvections.push_back({j, suffix[i], false});
  }
  for (Letter x_letter : prefix) {
    Word const x({x_letter});
    psi = compose(elementary(rank, j, x * aj, x.inverse() * aj), psi);
    cert.transvections.push_back({j, x_letter, true});
  }
  if (negative) {
    psi = compose(psi, elementary(rank, j, aj.inverse(), aj.inverse()));
  }
  cert.automorphism = std::move(psi);
  return cert;
}

bool check_certificate(BasisCertificate const& cert) {
  return cert.automorphism.is_certified() &&
         cert.automorphism.image(cert.generator) == reduce(cert.word);
}

namespace {

// Folding graph for basis_inverse. Edges are stored with a positive target
// letter; the label is the source-group element read along the edge.
struct FoldEdge {
  int from = 0;
  int to = 0;
  int gen = 0;
  Word label;
  bool alive = true;
};

Word reduced_product(Word const& a, Word const& b) { return reduce(a * b); }

}  // namespace

std::optional<std::vector<Word>> basis_inverse(std::vector<Word> const& words_in, int rank) {
  if (static_cast<int>(words_in.size()) != rank) {
    return std::nullopt;
  }
  std::vector<FoldEdge> edges;
  int num_vertices = 1;  // vertex 0 is the base
  for (int j = 0; j < rank; ++j) {
    Word const w = reduce(words_in[static_cast<std::size_t>(j)]);
    if (w.empty() || w.max_index() >= rank) {
      return std::nullopt;
    }
    int prev = 0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      int const next = (k + 1 == w.size()) ? 0 : num_vertices++;
      Word traversal = (k == 0) ? Word::generator(j) : Word();
      Letter const l = w[k];
      if (!l.is_inverse()) {
        edges.push_back({prev, next, l.index(), traversal});
      } else {
        edges.push_back({next, prev, l.index(), traversal.inverse()});
      }
      prev = next;
    }
  }

  struct Half {
    std::size_t edge;
    bool forward;
  };
  auto target = [&](Half h) { return h.forward ? edges[h.edge].to : edges[h.edge].from; };
  auto label = [&](Half h) {
    return h.forward ? edges[h.edge].label : edges[h.edge].label.inverse();
  };

  for (;;) {
    bool folded = false;
    std::map<std::pair<int, std::uint32_t>, Half> seen;
    for (std::size_t e = 0; e < edges.size() && !folded; ++e) {
      if (!edges[e].alive) continue;
      for (bool forward : {true, false}) {
        int const v = forward ? edges[e].from : edges[e].to;
        std::uint32_t const code = Letter(edges[e].gen, !forward).code();
        Half const h{e, forward};
        auto [it, inserted] = seen.emplace(std::make_pair(v, code), h);
        if (inserted) continue;
        Half h1 = it->second;
        Half h2 = h;
        int u1 = target(h1);
        int u2 = target(h2);
        if (u1 == u2) {
          if (reduce(label(h1)) != reduce(label(h2))) {
            return std::nullopt;  // not injective
          }
          edges[h2.edge].alive = false;
        } else {
          if (u2 == 0) {
            std::swap(h1, h2);
            std::swap(u1, u2);
          }
          Word const c = reduced_product(label(h1).inverse(), label(h2));
          Word const c_inv = c.inverse();
          for (FoldEdge& fe : edges) {
            if (!fe.alive) continue;
            if (fe.from == u2) fe.label = reduced_product(c, fe.label);
            if (fe.to == u2) fe.label = reduced_product(fe.label, c_inv);
            if (fe.from == u2) fe.from = u1;
            if (fe.to == u2) fe.to = u1;
          }
        }
        folded = true;
        break;
      }
    }
    if (!folded) break;
  }

  std::vector<std::optional<Word>> loops(static_cast<std::size_t>(rank));
  for (FoldEdge const& fe : edges) {
    if (!fe.alive) continue;
    if (fe.from != 0 || fe.to != 0 || loops[static_cast<std::size_t>(fe.gen)]) {
      return std::nullopt;
    }
    loops[static_cast<std::size_t>(fe.gen)] = reduce(fe.label);
  }
  std::vector<Word> out;
  for (auto& l : loops) {
    if (!l) return std::nullopt;
    out.push_back(*l);
  }
  return out;
}

}  // namespace cvn
