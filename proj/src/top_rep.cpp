#include "cvn/top_rep.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>

#include "cvn/detail/sequence.hpp"

namespace cvn {

GraphMap::GraphMap(Graph source, Graph target, std::vector<EdgePath> positive_images,
                   std::vector<VertexId> vertex_map)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(positive_images)) {
  if (static_cast<int>(images_.size()) != source_.num_positive()) {
    throw std::invalid_argument("graph map: expected one image per positive edge");
  }
  std::vector<VertexId> vm(static_cast<std::size_t>(source_.num_vertices()), -1);
  if (!vertex_map.empty()) {
    if (vertex_map.size() != vm.size()) {
      throw std::invalid_argument("graph map: vertex map has the wrong size");
    }
    vm = vertex_map;
  }
  auto assign = [&](VertexId v, VertexId w, EdgeId e) {
    VertexId& slot = vm[static_cast<std::size_t>(v)];
    if (slot >= 0 && slot != w) {
      throw std::invalid_argument("graph map: image of edge " + source_.label(e) +
                                  " does not respect the vertex map at vertex " + std::to_string(v));
    }
    slot = w;
  };
  for (EdgeId e = 0; e < source_.num_edges(); e += 2) {
    EdgePath const& p = images_[static_cast<std::size_t>(e / 2)];
    if (p.start < 0 || p.start >= target_.num_vertices() || !is_chained(target_, p)) {
      throw std::invalid_argument("graph map: image of edge " + source_.label(e) + " is not a path");
    }
    assign(source_.origin(e), p.start, e);
    assign(source_.terminus(e), end_vertex(target_, p), e);
  }
  for (VertexId v = 0; v < source_.num_vertices(); ++v) {
    if (vm[static_cast<std::size_t>(v)] < 0) {
      throw std::invalid_argument("graph map: no image for vertex " + std::to_string(v));
    }
  }
  vertex_map_ = std::move(vm);
}

EdgePath GraphMap::image(EdgeId e) const {
  EdgePath const& p = images_.at(static_cast<std::size_t>(e / 2));
  return Graph::is_positive(e) ? p : inverse_path(target_, p);
}

EdgePath GraphMap::apply(EdgePath const& p) const {
  EdgePath out{vertex_image(p.start), {}};
  for (EdgeId e : p.edges) {
    EdgePath const piece = image(e);
    out.edges.insert(out.edges.end(), piece.edges.begin(), piece.edges.end());
  }
  return out;
}

EdgePath GraphMap::apply_reduced(EdgePath const& p) const {
  EdgePath out{vertex_image(p.start), {}};
  for (EdgeId e : p.edges) {
    for (EdgeId x : image(e).edges) detail::push_reduced(out.edges, x, EdgeInverse{});
  }
  return out;
}

std::string to_string(StratumKind k) {
  switch (k) {
    case StratumKind::Zero:
      return "Zero";
    case StratumKind::NEG:
      return "NEG";
    case StratumKind::EG:
      return "EG";
  }
  return "?";
}

namespace {

constexpr std::int64_t kSaturate = std::int64_t{1} << 50;

std::int64_t sat_add(std::int64_t a, std::int64_t b) { return std::min(kSaturate, a + b); }
std::int64_t sat_mul(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturate / b) return kSaturate;
  return std::min(kSaturate, a * b);
}

bool is_zero(IntMatrix const& m) {
  for (auto const& row : m)
    for (auto x : row)
      if (x != 0) return false;
  return true;
}

bool is_permutation(IntMatrix const& m) {
  std::size_t const n = m.size();
  std::vector<int> col_ones(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    int ones = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (m[r][c] == 1) {
        ++ones;
        ++col_ones[c];
      } else if (m[r][c] != 0) {
        return false;
      }
    }
    if (ones != 1) return false;
  }
  return std::all_of(col_ones.begin(), col_ones.end(), [](int x) { return x == 1; });
}

// Indices reachable from s along arcs c -> r whenever m[r][c] > 0.
std::vector<bool> reach(IntMatrix const& m, std::size_t s) {
  std::vector<bool> seen(m.size(), false);
  std::vector<std::size_t> stack{s};
  seen[s] = true;
  while (!stack.empty()) {
    std::size_t const c = stack.back();
    stack.pop_back();
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (m[r][c] > 0 && !seen[r]) {
        seen[r] = true;
        stack.push_back(r);
      }
    }
  }
  return seen;
}

}  // namespace

IntMatrix multiply(IntMatrix const& a, IntMatrix const& b) {
  std::size_t const n = a.size();
  IntMatrix out(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < n; ++j) out[i][j] = sat_add(out[i][j], sat_mul(a[i][k], b[k][j]));
  return out;
}

std::optional<std::vector<int>> reducibility_witness(IntMatrix const& m) {
  for (std::size_t s = 0; s < m.size(); ++s) {
    std::vector<bool> const seen = reach(m, s);
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      std::vector<int> subset;
      for (std::size_t i = 0; i < seen.size(); ++i)
        if (seen[i]) subset.push_back(static_cast<int>(i));
      return subset;
    }
  }
  return std::nullopt;
}

std::optional<int> primitivity_exponent(IntMatrix const& m, int limit) {
  if (m.empty()) return std::nullopt;
  IntMatrix p = m;
  for (int k = 1; k <= limit; ++k) {
    bool positive = true;
    for (auto const& row : p)
      for (auto x : row) positive = positive && x > 0;
    if (positive) return k;
    p = multiply(p, m);
  }
  return std::nullopt;
}

PFResult pf_classify(IntMatrix const& m) {
  std::size_t const n = m.size();
  for (auto const& row : m) {
    if (row.size() != n) throw std::invalid_argument("pf_classify: matrix is not square");
    for (auto x : row)
      if (x < 0) throw std::invalid_argument("pf_classify: negative entry");
  }
  PFResult out;
  if (n == 0 || is_zero(m)) {
    out.kind = StratumKind::Zero;
    out.certificate = "zero matrix";
    return out;
  }
  if (auto w = reducibility_witness(m)) {
    std::string subset;
    for (int i : *w) subset += (subset.empty() ? "" : ",") + std::to_string(i);
    throw std::invalid_argument("pf_classify: reducible matrix, invariant index subset {" + subset + "}");
  }

  // Power iteration on I + M, which is primitive, with Collatz-Wielandt brackets.
  std::vector<double> x(n, 1.0);
  double lo = 0.0;
  double hi = 0.0;
  int it = 0;
  for (; it < 100'000; ++it) {
    std::vector<double> y(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      y[r] = x[r];
      for (std::size_t c = 0; c < n; ++c) y[r] += static_cast<double>(m[r][c]) * x[c];
    }
    lo = std::numeric_limits<double>::infinity();
    hi = 0.0;
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      lo = std::min(lo, y[r] / x[r]);
      hi = std::max(hi, y[r] / x[r]);
      norm = std::max(norm, y[r]);
    }
    for (std::size_t r = 0; r < n; ++r) x[r] = y[r] / norm;
    if (hi - lo < 1e-12) break;
  }
  out.iterations = it + 1;
  out.lower = lo - 1.0;
  out.upper = hi - 1.0;
  out.lambda = 0.5 * (lo + hi) - 1.0;

  if (is_permutation(m)) {
    out.kind = StratumKind::NEG;
    out.certificate_power = 1;
    out.certificate = "permutation matrix, lambda = 1";
    return out;
  }
  IntMatrix p = m;
  for (int k = 1; k <= static_cast<int>(n * n) + 1; ++k) {
    bool all_two = true;
    for (auto const& row : p) {
      std::int64_t s = 0;
      for (auto v : row) s = sat_add(s, v);
      all_two = all_two && s >= 2;
    }
    if (all_two) {
      out.kind = StratumKind::EG;
      out.certificate_power = k;
      out.certificate = "every row sum of M^" + std::to_string(k) + " is at least 2, so lambda^" +
                        std::to_string(k) + " >= 2";
      return out;
    }
    p = multiply(p, m);
  }
  throw std::logic_error("pf_classify: irreducible non-permutation matrix without growth certificate");
}

TopRep::TopRep(Graph g, std::vector<EdgePath> images, std::optional<Filtration> filtration)
    : memo_(std::make_shared<Memo>()) {
  for (std::size_t i = 0; i < images.size(); ++i) {
    EdgePath const& p = images[i];
    std::string const name = i < static_cast<std::size_t>(g.num_positive())
                                 ? g.name(static_cast<EdgeId>(2 * i))
                                 : std::to_string(i);
    if (p.edges.empty()) {
      throw std::invalid_argument("image of edge " + name + " is degenerate");
    }
    if (!detail::is_reduced(std::span<const EdgeId>(p.edges), EdgeInverse{})) {
      throw std::invalid_argument("image of edge " + name + " is not reduced (map is not tight)");
    }
  }
  Filtration filt = filtration ? *filtration : stratify(g, images);
  map_ = GraphMap(g, g, std::move(images), {});

  stratum_of_.assign(static_cast<std::size_t>(g.num_positive()), -1);
  std::vector<bool> previous(static_cast<std::size_t>(g.num_positive()), false);
  for (std::size_t i = 0; i < filt.levels.size(); ++i) {
    std::vector<bool> const level = edge_mask(g, filt.levels[i]);
    std::vector<EdgeId> stratum;
    for (std::size_t k = 0; k < level.size(); ++k) {
      if (previous[k] && !level[k]) {
        throw std::invalid_argument("filtration level " + std::to_string(i + 1) + " does not contain level " +
                                    std::to_string(i));
      }
      if (level[k] && !previous[k]) {
        stratum.push_back(static_cast<EdgeId>(2 * k));
        stratum_of_[k] = static_cast<int>(i + 1);
      }
    }
    if (stratum.empty()) {
      throw std::invalid_argument("filtration level " + std::to_string(i + 1) + " is not strictly larger");
    }
    for (std::size_t k = 0; k < level.size(); ++k) {
      if (!level[k]) continue;
      for (EdgeId x : map_.image(static_cast<EdgeId>(2 * k)).edges) {
        if (!level[static_cast<std::size_t>(x / 2)]) {
          throw std::invalid_argument("filtration level " + std::to_string(i + 1) + " is not invariant: f(" +
                                      g.name(static_cast<EdgeId>(2 * k)) + ") crosses " + g.name(x));
        }
      }
    }
    strata_.push_back(std::move(stratum));
    previous = level;
  }
  if (std::find(previous.begin(), previous.end(), false) != previous.end()) {
    throw std::invalid_argument("filtration does not end with the whole graph");
  }
  filtration_ = std::move(filt);
}

EdgeId TopRep::df(EdgeId e) const { return image(e).edges.front(); }

namespace {

std::optional<EdgePath> edge_iterate_capped(TopRep const& f, EdgeId e, int n, std::size_t cap,
                                            std::function<std::optional<EdgePath>(EdgeId, int)> const& lookup) {
  if (!Graph::is_positive(e)) {
    auto p = lookup(Graph::inverse(e), n);
    if (!p) return std::nullopt;
    return inverse_path(f.graph(), *p);
  }
  if (n == 1) return f.image(e);
  EdgePath out{f.map().vertex_image(f.graph().origin(e)), {}};
  for (EdgeId d : f.image(e).edges) {
    auto piece = edge_iterate_capped(f, d, n - 1, cap, lookup);
    if (!piece) return std::nullopt;
    for (EdgeId x : piece->edges) detail::push_reduced(out.edges, x, EdgeInverse{});
    // Later pieces cancel at most their own length, so a long prefix stays long.
    if (out.edges.size() > 2 * cap) return std::nullopt;
  }
  if (out.edges.size() > cap) return std::nullopt;
  return out;
}

}  // namespace

EdgePath TopRep::edge_iterate(EdgeId e, int n) const {
  if (n < 0) throw std::invalid_argument("edge_iterate: n must be non-negative");
  if (n == 0) return {graph().origin(e), {e}};
  std::function<std::optional<EdgePath>(EdgeId, int)> lookup;
  lookup = [&](EdgeId pe, int k) -> std::optional<EdgePath> {
    {
      std::lock_guard<std::mutex> lock(memo_->mutex);
      auto it = memo_->table.find({pe, k});
      if (it != memo_->table.end()) return it->second;
    }
    auto p = edge_iterate_capped(*this, pe, k, kDefaultLetterCap, lookup);
    if (p && p->edges.size() <= kMemoCap) {
      std::lock_guard<std::mutex> lock(memo_->mutex);
      memo_->table.emplace(std::make_pair(pe, k), *p);
    }
    return p;
  };
  auto p = lookup(Graph::positive_of(e), n);
  if (!p) throw std::length_error("edge_iterate: iterate exceeds the letter cap");
  return Graph::is_positive(e) ? *p : inverse_path(graph(), *p);
}

Filtration stratify(Graph const& g, std::vector<EdgePath> const& images) {
  int const n = g.num_positive();
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    std::set<int> targets;
    for (EdgeId x : images.at(static_cast<std::size_t>(j)).edges) targets.insert(x / 2);
    succ[static_cast<std::size_t>(j)].assign(targets.begin(), targets.end());
  }
  // Tarjan's algorithm emits components sinks first.
  std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
  std::vector<int> stack;
  std::vector<std::vector<int>> comps;
  int counter = 0;
  std::function<void(int)> strong = [&](int v) {
    auto const sv = static_cast<std::size_t>(v);
    index[sv] = low[sv] = counter++;
    stack.push_back(v);
    on_stack[sv] = true;
    for (int w : succ[sv]) {
      auto const sw = static_cast<std::size_t>(w);
      if (index[sw] < 0) {
        strong(w);
        low[sv] = std::min(low[sv], low[sw]);
      } else if (on_stack[sw]) {
        low[sv] = std::min(low[sv], index[sw]);
      }
    }
    if (low[sv] == index[sv]) {
      std::vector<int> comp;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[static_cast<std::size_t>(w)] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
  };
  for (int v = 0; v < n; ++v)
    if (index[static_cast<std::size_t>(v)] < 0) strong(v);

  Filtration out;
  std::vector<EdgeId> level;
  for (auto const& comp : comps) {
    for (int k : comp) level.push_back(2 * k);
    std::sort(level.begin(), level.end());
    out.levels.push_back(level);
  }
  return out;
}

Graph rose(int rank) {
  static constexpr char kNames[] = "xyzwuvst";
  Graph g(1);
  for (int i = 0; i < rank; ++i) {
    g.add_edge(0, 0, rank <= 8 ? std::string(1, kNames[i]) : "x" + std::to_string(i));
  }
  return g;
}

TopRep rose_representative(FreeMap const& phi) {
  Graph g = rose(phi.rank());
  std::vector<EdgePath> images;
  for (int i = 0; i < phi.rank(); ++i) {
    EdgePath p{0, {}};
    for (Letter l : phi.image(i).letters()) p.edges.push_back(static_cast<EdgeId>(l.code()));
    images.push_back(std::move(p));
  }
  return TopRep(std::move(g), std::move(images));
}

IntMatrix transition_matrix(TopRep const& f, int stratum) {
  std::vector<EdgeId> const& edges = f.strata().at(static_cast<std::size_t>(stratum - 1));
  std::size_t const n = edges.size();
  IntMatrix m(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t c = 0; c < n; ++c) {
    for (EdgeId x : f.image(edges[c]).edges) {
      auto it = std::find(edges.begin(), edges.end(), Graph::positive_of(x));
      if (it != edges.end()) ++m[static_cast<std::size_t>(it - edges.begin())][c];
    }
  }
  return m;
}

IntMatrix transition_matrix(TopRep const& f) {
  std::size_t const n = static_cast<std::size_t>(f.graph().num_positive());
  IntMatrix m(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t c = 0; c < n; ++c) {
    for (EdgeId x : f.image(static_cast<EdgeId>(2 * c)).edges) ++m[static_cast<std::size_t>(x / 2)][c];
  }
  return m;
}

TurnVerdict turn_legality(TopRep const& f, Turn turn) {
  TurnVerdict out;
  std::set<std::pair<EdgeId, EdgeId>> seen;
  for (;;) {
    out.orbit.push_back(turn);
    if (turn.degenerate()) {
      out.legal = false;
      return out;
    }
    auto key = std::minmax(turn.first, turn.second);
    if (!seen.insert(key).second) {
      out.orbit.pop_back();
      return out;
    }
    turn = {f.df(turn.first), f.df(turn.second)};
  }
}

std::vector<Turn> turns_of(std::span<const EdgeId> edges) {
  std::vector<Turn> out;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) out.push_back({Graph::inverse(edges[i]), edges[i + 1]});
  return out;
}

namespace {

std::string turn_string(Graph const& g, Turn t) { return "{" + g.label(t.first) + ", " + g.label(t.second) + "}"; }

std::optional<std::size_t> first_cancellation(std::span<const EdgeId> edges) {
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    if (edges[i + 1] == Graph::inverse(edges[i])) return i;
  return std::nullopt;
}

// Turn legality cached per map.
class LegalityCache {
 public:
  explicit LegalityCache(TopRep const& f) : f_(f) {}
  bool legal(Turn t) {
    auto key = std::minmax(t.first, t.second);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    bool const ok = turn_legality(f_, t).legal;
    cache_.emplace(key, ok);
    return ok;
  }

 private:
  TopRep const& f_;
  std::map<std::pair<EdgeId, EdgeId>, bool> cache_;
};

}  // namespace

TrainTrackReport verify_train_track(TopRep const& f, int check_depth) {
  TrainTrackReport out;
  out.check_depth = check_depth;
  Graph const& g = f.graph();
  for (EdgeId e = 0; e < g.num_edges(); e += 2) {
    for (Turn t : turns_of(f.image(e).edges)) {
      TurnVerdict v = turn_legality(f, t);
      if (!v.legal) {
        out.train_track = false;
        out.failures.push_back("f(" + g.name(e) + ") takes illegal turn " + turn_string(g, t));
        if (!out.illegal_turn) out.illegal_turn = std::make_pair(t, std::move(v));
      }
    }
  }
  for (EdgeId e = 0; e < g.num_edges(); e += 2) {
    EdgePath p{g.origin(e), {e}};
    for (int n = 1; n <= check_depth; ++n) {
      if (out.cancellation && out.cancellation->n <= n) break;
      EdgePath const q = f.map().apply(p);
      if (auto i = first_cancellation(q.edges)) {
        out.cancellation = Cancellation{n, e, *i, q.edges[*i], q.edges[*i + 1]};
        break;
      }
      p = q;
      if (p.edges.size() > kMemoCap) break;
    }
  }
  if (out.cancellation) {
    Cancellation const& c = *out.cancellation;
    if (out.train_track) {
      out.failures.push_back("all image turns legal but cancellation occurs; legality check inconsistent");
    }
    out.train_track = false;
    out.failures.push_back("cancellation " + g.label(c.left) + " " + g.label(c.right) + " in f^" +
                           std::to_string(c.n) + "(" + g.name(c.edge) + ") at position " +
                           std::to_string(c.position));
  }
  return out;
}

std::vector<EdgePath> enumerate_paths(Graph const& g, std::vector<bool> const& allowed, int max_len) {
  std::vector<EdgePath> out;
  std::function<void(EdgePath&)> grow = [&](EdgePath& p) {
    if (!p.edges.empty()) out.push_back(p);
    if (static_cast<int>(p.edges.size()) == max_len) return;
    VertexId const at = end_vertex(g, p);
    for (EdgeId e : g.star(at)) {
      if (!allowed[static_cast<std::size_t>(e / 2)]) continue;
      if (!p.edges.empty() && e == Graph::inverse(p.edges.back())) continue;
      p.edges.push_back(e);
      grow(p);
      p.edges.pop_back();
    }
  };
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    EdgePath p{v, {}};
    grow(p);
  }
  return out;
}

RttReport verify_rtt(TopRep const& f, int path_cap) {
  RttReport out;
  Graph const& g = f.graph();
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (g.valence(v) == 1) {
      out.no_valence_one = false;
      out.valence_one.push_back(v);
      out.failures.push_back("condition 1: vertex " + std::to_string(v) + " has valence one");
    }
  }
  LegalityCache legality(f);
  std::vector<bool> lower(static_cast<std::size_t>(g.num_positive()), false);  // G_{i-1}
  for (std::size_t i = 0; i < f.strata().size(); ++i) {
    StratumReport s;
    s.index = static_cast<int>(i + 1);
    s.edges = f.strata()[i];
    s.matrix = transition_matrix(f, s.index);
    std::string const tag = "stratum " + std::to_string(s.index);
    if (auto w = reducibility_witness(s.matrix); w && !is_zero(s.matrix)) {
      s.irreducible = false;
      out.irreducible = false;
      std::string subset;
      for (int k : *w) {
        s.invariant_subset.push_back(k);
        subset += (subset.empty() ? "" : " ") + g.name(s.edges[static_cast<std::size_t>(k)]);
      }
      out.failures.push_back("condition 2: " + tag + " matrix is reducible, invariant edges {" + subset + "}");
    } else {
      s.pf = pf_classify(s.matrix);
    }
    std::vector<bool> const h = edge_mask(g, s.edges);
    std::vector<bool> level = lower;
    for (std::size_t k = 0; k < h.size(); ++k) level[k] = level[k] || h[k];

    if (s.irreducible && s.pf.kind == StratumKind::EG) {
      for (EdgeId e : s.edges) {
        for (EdgeId d : {e, Graph::inverse(e)}) {
          if (!h[static_cast<std::size_t>(f.df(d) / 2)]) {
            out.condition_3a = false;
            out.failures.push_back("condition 3a: " + tag + ": Df(" + g.label(d) + ") = " + g.label(f.df(d)) +
                                   " leaves the stratum");
          }
        }
      }
      std::vector<bool> touches(static_cast<std::size_t>(g.num_vertices()), false);
      for (EdgeId e : s.edges) {
        touches[static_cast<std::size_t>(g.origin(e))] = true;
        touches[static_cast<std::size_t>(g.terminus(e))] = true;
      }
      for (EdgePath const& p : enumerate_paths(g, lower, path_cap)) {
        if (!touches[static_cast<std::size_t>(p.start)] ||
            !touches[static_cast<std::size_t>(end_vertex(g, p))])
          continue;
        ++out.paths_3b;
        if (f.map().apply_reduced(p).edges.empty()) {
          out.condition_3b = false;
          out.failures.push_back("condition 3b: " + tag + ": [f(" + to_string(g, p) + ")] is trivial");
        }
      }
      auto i_legal = [&](std::span<const EdgeId> edges) {
        for (Turn t : turns_of(edges)) {
          bool const inside_lower = lower[static_cast<std::size_t>(t.first / 2)] &&
                                    lower[static_cast<std::size_t>(t.second / 2)];
          if (!inside_lower && !legality.legal(t)) return false;
        }
        return true;
      };
      for (EdgePath const& p : enumerate_paths(g, h, path_cap)) {
        bool legal = true;
        for (Turn t : turns_of(p.edges)) legal = legal && legality.legal(t);
        if (!legal) continue;
        ++out.paths_3c;
        EdgePath const q = f.map().apply(p);
        bool inside = true;
        for (EdgeId x : q.edges) inside = inside && level[static_cast<std::size_t>(x / 2)];
        if (!inside || !i_legal(q.edges)) {
          out.condition_3c = false;
          out.failures.push_back("condition 3c: " + tag + ": f(" + to_string(g, p) + ") = " + to_string(g, q) +
                                 " is not " + std::to_string(s.index) + "-legal");
        }
      }
      for (EdgePath const& sigma : enumerate_paths(g, level, path_cap)) {
        bool crosses = false;
        for (EdgeId x : sigma.edges) crosses = crosses || h[static_cast<std::size_t>(x / 2)];
        if (!crosses || !i_legal(sigma.edges)) continue;
        ++out.paths_split;
        // f(a_1) [f(b_1)] f(a_2) ... with a_k in H_i and b_k in G_{i-1}
        std::vector<EdgeId> expected;
        std::size_t k = 0;
        while (k < sigma.edges.size()) {
          bool const top = h[static_cast<std::size_t>(sigma.edges[k] / 2)];
          EdgePath block{g.origin(sigma.edges[k]), {}};
          while (k < sigma.edges.size() && h[static_cast<std::size_t>(sigma.edges[k] / 2)] == top) {
            block.edges.push_back(sigma.edges[k++]);
          }
          EdgePath const img = top ? f.map().apply(block) : f.map().apply_reduced(block);
          expected.insert(expected.end(), img.edges.begin(), img.edges.end());
        }
        EdgePath const actual = f.map().apply_reduced(sigma);
        if (actual.edges != expected) {
          out.splitting = false;
          out.failures.push_back("splitting: " + tag + ": [f(" + to_string(g, sigma) + ")] = " +
                                 to_string(g, actual) + " differs from the blockwise image " +
                                 to_string(g, std::span<const EdgeId>(expected)));
        } else if (!i_legal(actual.edges)) {
          out.splitting = false;
          out.failures.push_back("splitting: " + tag + ": [f(" + to_string(g, sigma) + ")] = " +
                                 to_string(g, actual) + " is not " + std::to_string(s.index) + "-legal");
        }
      }
    }
    out.strata.push_back(std::move(s));
    lower = level;
  }
  return out;
}

GoodRttReport verify_good_rtt(TopRep const& f) {
  GoodRttReport out;
  Graph const& g = f.graph();
  std::size_t const top = f.strata().size();
  std::vector<bool> lower(static_cast<std::size_t>(g.num_positive()), false);
  for (std::size_t i = 0; i < top; ++i) {
    std::vector<EdgeId> const& edges = f.strata()[i];
    std::string const tag = "stratum " + std::to_string(i + 1);
    IntMatrix const m = transition_matrix(f, static_cast<int>(i + 1));
    std::optional<PFResult> pf;
    try {
      pf = pf_classify(m);
    } catch (std::invalid_argument const& err) {
      out.failures.push_back(tag + ": " + err.what());
    }
    int const limit = static_cast<int>(m.size() * m.size()) + 1;
    if (pf && pf->kind == StratumKind::EG) {
      auto k = primitivity_exponent(m, limit);
      if (!k) {
        out.aperiodic = false;
        out.failures.push_back(tag + ": EG matrix is not aperiodic (no positive power up to " +
                               std::to_string(limit) + ")");
      } else {
        out.notes.push_back(tag + ": EG, M^" + std::to_string(*k) + " > 0");
      }
    }
    if (pf && pf->kind == StratumKind::Zero && i + 1 == top) {
      out.zero_not_top = false;
      out.failures.push_back(tag + ": zero stratum is the top stratum");
    }
    if (pf && pf->kind == StratumKind::NEG) {
      bool ok = false;
      std::string detail;
      if (edges.size() != 1) {
        detail = "NEG stratum has " + std::to_string(edges.size()) + " edges";
      } else {
        for (EdgeId e0 : {edges[0], Graph::inverse(edges[0])}) {
          EdgePath const img = f.image(e0);
          if (img.edges.front() != e0) continue;
          EdgePath const u{g.terminus(e0), std::vector<EdgeId>(img.edges.begin() + 1, img.edges.end())};
          bool in_lower = true;
          for (EdgeId x : u.edges) in_lower = in_lower && lower[static_cast<std::size_t>(x / 2)];
          VertexId const base = g.terminus(e0);
          bool const closed = end_vertex(g, u) == base;
          bool const fixed = f.map().vertex_image(base) == base;
          if (in_lower && closed && fixed) {
            ok = true;
            detail = "f(" + g.label(e0) + ") = " + g.label(e0) + " u with u = " +
                     (u.edges.empty() ? std::string("trivial") : to_string(g, u)) + ", closed at vertex " +
                     std::to_string(base) + ", fixed by f";
            break;
          }
          detail = "f(" + g.label(e0) + ") = " + to_string(g, img) + ": u " +
                   (!in_lower ? "leaves G_{i-1}" : !closed ? "is not closed" : "has an unfixed basepoint");
        }
        if (detail.empty()) detail = "f(" + g.name(edges[0]) + ") does not begin or end with the edge";
      }
      if (ok) {
        out.notes.push_back(tag + ": NEG, " + detail);
      } else {
        out.neg_form = false;
        out.failures.push_back(tag + ": " + detail);
      }
    }
    if (i + 1 == top && pf && pf->kind != StratumKind::Zero) {
      out.convention_k = primitivity_exponent(m, limit);
    }
    for (EdgeId e : edges) lower[static_cast<std::size_t>(e / 2)] = true;
  }
  return out;
}

IterateResult iterate_reduced(TopRep const& f, EdgePath const& p, int n, std::size_t letter_cap) {
  if (n < 0) throw std::invalid_argument("iterate_reduced: n must be non-negative");
  IterateResult out;
  if (n == 0) {
    out.path = reduce_path(p);
    return out;
  }
  EdgePath const start = reduce_path(p);
  out.path = EdgePath{start.start, {}};
  for (int k = 0; k < n; ++k) out.path.start = f.map().vertex_image(out.path.start);
  try {
    for (EdgeId e : start.edges) {
      EdgePath const piece = f.edge_iterate(e, n);
      for (EdgeId x : piece.edges) detail::push_reduced(out.path.edges, x, EdgeInverse{});
      if (out.path.edges.size() > letter_cap + piece.edges.size()) break;
    }
  } catch (std::length_error const&) {
    out.truncated = true;
  }
  if (out.truncated || out.path.edges.size() > letter_cap) {
    out.truncated = true;
    out.note = "n=" + std::to_string(n) + ": iterate exceeds letter cap " + std::to_string(letter_cap);
    out.path.edges.clear();
  }
  return out;
}

CyclicEdgePath iterate_reduced_cyclic(TopRep const& f, CyclicEdgePath const& p, int n) {
  if (p.empty()) return p;
  IterateResult r = iterate_reduced(f, p.as_path(f.graph()), n);
  if (r.truncated) throw std::length_error(r.note);
  return cyclic_reduce_path(f.graph(), r.path);
}

int lemma_l_constant(TopRep const& f) {
  int const t = static_cast<int>(f.strata().size());
  PFResult const pf = pf_classify(transition_matrix(f, t));
  if (pf.kind != StratumKind::EG) {
    throw std::invalid_argument("lemma_l_constant: top stratum is " + to_string(pf.kind) + ", not EG");
  }
  std::vector<EdgeId> const& top = f.strata().back();
  int k = 0;
  for (EdgeId e : top) {
    int count = 0;
    for (EdgeId x : f.image(e).edges) count += f.stratum_of(x) == t;
    k = std::max(k, count);
  }
  return 2 * k;
}

int max_cyclic_power(std::span<const EdgeId> alpha, std::span<const EdgeId> path, bool cyclic) {
  std::size_t const m = alpha.size();
  if (m == 0 || path.empty()) return 0;
  auto canonical = [](std::vector<EdgeId> s) {
    detail::rotate_to_least(s);
    return s;
  };
  std::vector<EdgeId> const fwd = canonical({alpha.begin(), alpha.end()});
  std::vector<EdgeId> const bwd = canonical(detail::inverted(alpha, EdgeInverse{}));
  std::vector<EdgeId> seq(path.begin(), path.end());
  std::size_t const n = path.size();
  if (cyclic) seq.insert(seq.end(), path.begin(), path.end());
  int best = 0;
  std::size_t i = 0;
  while (i + m <= seq.size()) {
    std::size_t j = i + m;
    while (j < seq.size() && seq[j] == seq[j - m]) ++j;
    std::vector<EdgeId> const window = canonical({seq.begin() + static_cast<std::ptrdiff_t>(i),
                                                  seq.begin() + static_cast<std::ptrdiff_t>(i + m)});
    if (window == fwd || window == bwd) {
      std::size_t len = j - i;
      if (cyclic) len = std::min(len, n);
      best = std::max(best, static_cast<int>(len / m));
    }
    i = j - m + 1;
  }
  return best;
}

namespace {

PowerScan scan_iterates(int horizon, std::function<std::optional<std::vector<EdgeId>>(int)> const& next,
                        std::span<const EdgeId> alpha, bool cyclic) {
  PowerScan out;
  int running = 0;
  int at_quarter = 0;
  int const quarter = horizon - horizon / 4;
  for (int n = 1; n <= horizon; ++n) {
    auto edges = next(n);
    if (!edges) {
      out.truncation_notes.push_back("n=" + std::to_string(n) + ": iterate exceeds letter cap");
      break;
    }
    int const k = max_cyclic_power(alpha, *edges, cyclic);
    out.per_n.push_back(k);
    if (k > running) {
      running = k;
      out.argmax_n = n;
    }
    if (n == quarter) at_quarter = running;
  }
  out.max_k = running;
  out.stabilized = out.truncation_notes.empty() && at_quarter == running;
  return out;
}

}  // namespace

PowerScan max_cyclic_power_in_iterates(TopRep const& f, CyclicEdgePath const& alpha, EdgePath const& source,
                                       int horizon) {
  EdgePath cur = reduce_path(source);
  return scan_iterates(
      horizon,
      [&](int) -> std::optional<std::vector<EdgeId>> {
        cur = f.map().apply_reduced(cur);
        if (cur.edges.size() > kDefaultLetterCap) return std::nullopt;
        return cur.edges;
      },
      alpha.edges(), false);
}

PowerScan max_cyclic_power_in_iterates(TopRep const& f, CyclicEdgePath const& alpha,
                                       CyclicEdgePath const& source, int horizon) {
  CyclicEdgePath cur = source;
  return scan_iterates(
      horizon,
      [&](int) -> std::optional<std::vector<EdgeId>> {
        if (cur.empty()) return std::vector<EdgeId>{};
        EdgePath const img = f.map().apply_reduced(cur.as_path(f.graph()));
        if (img.edges.size() > kDefaultLetterCap) return std::nullopt;
        cur = cyclic_reduce_path(f.graph(), img);
        return std::vector<EdgeId>(cur.edges().begin(), cur.edges().end());
      },
      alpha.edges(), true);
}

int bcc_estimate(GraphMap const& f, int len_cap) {
  Graph const& g = f.source();
  std::vector<bool> const all(static_cast<std::size_t>(g.num_positive()), true);
  std::vector<EdgePath> const paths = enumerate_paths(g, all, len_cap);
  std::vector<std::vector<std::size_t>> starting(static_cast<std::size_t>(g.num_vertices()));
  std::vector<EdgePath> images;
  images.reserve(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    starting[static_cast<std::size_t>(paths[i].start)].push_back(i);
    images.push_back(f.apply_reduced(paths[i]));
  }
  int best = 0;
  for (std::size_t a = 0; a < paths.size(); ++a) {
    EdgeId const last = paths[a].edges.back();
    std::vector<EdgeId> const& fa = images[a].edges;
    for (std::size_t b : starting[static_cast<std::size_t>(g.terminus(last))]) {
      if (paths[b].edges.front() == Graph::inverse(last)) continue;
      std::vector<EdgeId> const& fb = images[b].edges;
      std::size_t c = 0;
      while (c < fa.size() && c < fb.size() && fb[c] == Graph::inverse(fa[fa.size() - 1 - c])) ++c;
      best = std::max(best, static_cast<int>(c));
    }
  }
  return best;
}

int bcc_estimate(TopRep const& f, int len_cap) { return bcc_estimate(f.map(), len_cap); }

}  // namespace cvn
