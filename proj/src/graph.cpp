#include "cvn/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "cvn/detail/sequence.hpp"

namespace cvn {

std::vector<Diagnostic> validate(GraphTuple const& g) {
  std::vector<Diagnostic> out;
  std::size_t const n = g.origin.size();
  auto bad = [&](std::string kind, EdgeId e, std::string msg) {
    out.push_back({std::move(kind), e, -1, std::move(msg)});
  };
  if (g.terminus.size() != n || g.inverse.size() != n || g.positive.size() != n) {
    bad("shape", -1, "origin, terminus, inverse and orientation tables differ in size");
    return out;
  }
  auto in_vertices = [&](VertexId v) { return v >= 0 && v < g.num_vertices; };
  std::vector<int> valence(static_cast<std::size_t>(std::max(g.num_vertices, 0)), 0);
  for (std::size_t i = 0; i < n; ++i) {
    EdgeId const e = static_cast<EdgeId>(i);
    std::string const tag = "edge " + std::to_string(e);
    if (!in_vertices(g.origin[i]) || !in_vertices(g.terminus[i])) {
      bad("endpoint", e, tag + " has an endpoint outside the vertex set");
      continue;
    }
    ++valence[static_cast<std::size_t>(g.origin[i])];
    EdgeId const inv = g.inverse[i];
    if (inv < 0 || static_cast<std::size_t>(inv) >= n) {
      bad("inverse-range", e, tag + " has inverse outside the edge set");
      continue;
    }
    auto const j = static_cast<std::size_t>(inv);
    if (inv == e) {
      bad("self-inverse edge", e, tag + " is its own inverse");
      continue;
    }
    if (g.inverse[j] != e) {
      bad("involution", e, tag + ": inverse of inverse is not the edge");
    }
    if (in_vertices(g.terminus[j]) && g.origin[i] != g.terminus[j]) {
      bad("orientation", e, tag + ": o(e) differs from t(inverse e)");
    }
    if (g.positive[i] == g.positive[j]) {
      bad("orientation", e, tag + ": exactly one of e and its inverse must be positive");
    }
  }
  for (VertexId v = 0; v < g.num_vertices; ++v) {
    if (valence[static_cast<std::size_t>(v)] == 0) {
      out.push_back({"isolated vertex", -1, v, "vertex " + std::to_string(v) + " has valence 0"});
    }
  }
  return out;
}

Graph::Graph(int num_vertices) : num_vertices_(num_vertices) {
  if (num_vertices < 1) {
    throw std::invalid_argument("graph needs at least one vertex");
  }
  star_.resize(static_cast<std::size_t>(num_vertices));
}

EdgeId Graph::add_edge(VertexId o, VertexId t, std::string name) {
  if (o < 0 || o >= num_vertices_ || t < 0 || t >= num_vertices_) {
    throw std::invalid_argument("add_edge: vertex out of range");
  }
  EdgeId const e = num_edges();
  if (name.empty()) {
    name = "e" + std::to_string(e / 2);
  }
  if (find_edge(name)) {
    throw std::invalid_argument("add_edge: duplicate edge name " + name);
  }
  origin_.push_back(o);
  origin_.push_back(t);
  names_.push_back(std::move(name));
  star_[static_cast<std::size_t>(o)].push_back(e);
  star_[static_cast<std::size_t>(t)].push_back(e + 1);
  std::sort(star_[static_cast<std::size_t>(t)].begin(), star_[static_cast<std::size_t>(t)].end());
  return e;
}

std::string Graph::label(EdgeId e) const { return name(e) + (is_positive(e) ? "" : "-"); }

std::optional<EdgeId> Graph::find_edge(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<EdgeId>(2 * i);
  }
  return std::nullopt;
}

std::vector<EdgeId> Graph::positive_edges() const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < num_edges(); e += 2) out.push_back(e);
  return out;
}

GraphTuple Graph::tuple() const {
  GraphTuple t;
  t.num_vertices = num_vertices_;
  for (EdgeId e = 0; e < num_edges(); ++e) {
    t.origin.push_back(origin(e));
    t.terminus.push_back(terminus(e));
    t.inverse.push_back(inverse(e));
    t.positive.push_back(is_positive(e));
  }
  return t;
}

VertexId end_vertex(Graph const& g, EdgePath const& p) {
  return p.edges.empty() ? p.start : g.terminus(p.edges.back());
}

bool is_chained(Graph const& g, EdgePath const& p) {
  VertexId at = p.start;
  for (EdgeId e : p.edges) {
    if (e < 0 || e >= g.num_edges() || g.origin(e) != at) return false;
    at = g.terminus(e);
  }
  return true;
}

EdgePath reduce_path(EdgePath const& p) {
  return {p.start, detail::reduced(std::span<const EdgeId>(p.edges), EdgeInverse{})};
}

EdgePath inverse_path(Graph const& g, EdgePath const& p) {
  return {end_vertex(g, p), detail::inverted(std::span<const EdgeId>(p.edges), EdgeInverse{})};
}

EdgePath concat(Graph const& g, EdgePath const& p, EdgePath const& q) {
  if (end_vertex(g, p) != q.start) {
    throw std::invalid_argument("concat: paths do not meet");
  }
  EdgePath out = p;
  out.edges.insert(out.edges.end(), q.edges.begin(), q.edges.end());
  return out;
}

EdgePath reduced_concat(Graph const& g, std::initializer_list<EdgePath> pieces) {
  if (pieces.size() == 0) {
    throw std::invalid_argument("reduced_concat: no pieces");
  }
  EdgePath out{pieces.begin()->start, {}};
  for (EdgePath const& piece : pieces) {
    if (end_vertex(g, out) != piece.start) {
      throw std::invalid_argument("reduced_concat: paths do not meet");
    }
    for (EdgeId e : piece.edges) detail::push_reduced(out.edges, e, EdgeInverse{});
  }
  return out;
}

EdgePath CyclicEdgePath::as_path(Graph const& g) const {
  if (edges_.empty()) return {};
  return {g.origin(edges_.front()), edges_};
}

CyclicEdgePath cyclic_reduce_path(Graph const& g, EdgePath const& p) {
  if (!is_chained(g, p) || end_vertex(g, p) != p.start) {
    throw std::invalid_argument("cyclic_reduce_path: not a closed edge path");
  }
  std::vector<EdgeId> edges = detail::reduced(std::span<const EdgeId>(p.edges), EdgeInverse{});
  detail::strip_conjugation(edges, EdgeInverse{});
  detail::rotate_to_least(edges);
  CyclicEdgePath out;
  out.edges_ = std::move(edges);
  return out;
}

int crossings(std::span<const EdgeId> edges, EdgeId e) {
  EdgeId const pos = Graph::positive_of(e);
  return static_cast<int>(
      std::count_if(edges.begin(), edges.end(), [&](EdgeId x) { return Graph::positive_of(x) == pos; }));
}

std::string to_string(Graph const& g, std::span<const EdgeId> edges) {
  std::string out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i > 0) out += ' ';
    out += g.label(edges[i]);
  }
  return out;
}

std::string to_string(Graph const& g, EdgePath const& p) {
  if (p.edges.empty()) return "[v" + std::to_string(p.start) + "]";
  return to_string(g, std::span<const EdgeId>(p.edges));
}

std::string to_string(Graph const& g, CyclicEdgePath const& p) {
  if (p.empty()) return "1";
  return to_string(g, p.edges());
}

EdgePath parse_path(Graph const& g, std::string_view text, VertexId start) {
  std::istringstream in{std::string(text)};
  std::string tok;
  EdgePath p{start, {}};
  while (in >> tok) {
    bool inv = false;
    if (tok.size() > 1 && tok.back() == '-') {
      inv = true;
      tok.pop_back();
    }
    auto e = g.find_edge(tok);
    if (!e) {
      throw ParseError("unknown edge \"" + tok + "\" in path \"" + std::string(text) + "\"");
    }
    p.edges.push_back(inv ? Graph::inverse(*e) : *e);
  }
  if (!p.edges.empty()) p.start = g.origin(p.edges.front());
  if (!is_chained(g, p)) {
    throw ParseError("path \"" + std::string(text) + "\" is not chained");
  }
  return p;
}

std::vector<bool> edge_mask(Graph const& g, std::span<const EdgeId> edges) {
  std::vector<bool> mask(static_cast<std::size_t>(g.num_positive()), false);
  for (EdgeId e : edges) mask.at(static_cast<std::size_t>(e / 2)) = true;
  return mask;
}

std::vector<EdgeId> SpanningTree::edges() const {
  std::vector<EdgeId> out;
  for (std::size_t i = 0; i < tree_edge.size(); ++i) {
    if (tree_edge[i]) out.push_back(static_cast<EdgeId>(2 * i));
  }
  return out;
}

SpanningTree bfs_tree(Graph const& g, std::vector<bool> const& allowed, VertexId root) {
  SpanningTree t;
  t.root = root;
  t.parent_edge.assign(static_cast<std::size_t>(g.num_vertices()), -1);
  t.depth.assign(static_cast<std::size_t>(g.num_vertices()), -1);
  t.tree_edge.assign(static_cast<std::size_t>(g.num_positive()), false);
  std::deque<VertexId> queue{root};
  t.depth[static_cast<std::size_t>(root)] = 0;
  while (!queue.empty()) {
    VertexId const v = queue.front();
    queue.pop_front();
    for (EdgeId e : g.star(v)) {
      if (!allowed[static_cast<std::size_t>(e / 2)]) continue;
      VertexId const w = g.terminus(e);
      if (t.depth[static_cast<std::size_t>(w)] >= 0) continue;
      t.depth[static_cast<std::size_t>(w)] = t.depth[static_cast<std::size_t>(v)] + 1;
      t.parent_edge[static_cast<std::size_t>(w)] = e;
      t.tree_edge[static_cast<std::size_t>(e / 2)] = true;
      queue.push_back(w);
    }
  }
  return t;
}

SpanningTree spanning_tree(Graph const& g, std::span<const EdgeId> excluded, VertexId root) {
  std::vector<bool> allowed(static_cast<std::size_t>(g.num_positive()), true);
  for (EdgeId e : excluded) allowed.at(static_cast<std::size_t>(e / 2)) = false;
  SpanningTree t = bfs_tree(g, allowed, root);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (!t.contains(v)) {
      throw std::invalid_argument("spanning_tree: graph minus excluded edges is disconnected (vertex " +
                                  std::to_string(v) + " unreachable)");
    }
  }
  return t;
}

EdgePath tree_geodesic(Graph const& g, SpanningTree const& t, VertexId u, VertexId v) {
  if (u < 0 || v < 0 || u >= g.num_vertices() || v >= g.num_vertices() || !t.contains(u) ||
      !t.contains(v)) {
    throw std::invalid_argument("tree_geodesic: vertex not in tree");
  }
  std::vector<EdgeId> up;    // from u towards the meeting point
  std::vector<EdgeId> down;  // from v towards the meeting point, reversed later
  VertexId a = u;
  VertexId b = v;
  auto step = [&](VertexId& x, std::vector<EdgeId>& acc) {
    EdgeId const pe = t.parent_edge[static_cast<std::size_t>(x)];
    acc.push_back(pe);
    x = g.origin(pe);
  };
  while (t.depth[static_cast<std::size_t>(a)] > t.depth[static_cast<std::size_t>(b)]) step(a, up);
  while (t.depth[static_cast<std::size_t>(b)] > t.depth[static_cast<std::size_t>(a)]) step(b, down);
  while (a != b) {
    step(a, up);
    step(b, down);
  }
  EdgePath p{u, {}};
  for (EdgeId e : up) p.edges.push_back(Graph::inverse(e));
  for (std::size_t i = down.size(); i-- > 0;) p.edges.push_back(down[i]);
  return p;
}

TreeBasis::TreeBasis(Graph const& g, SpanningTree tree) : graph_(g), tree_(std::move(tree)) {
  generator_index_.assign(static_cast<std::size_t>(g.num_positive()), -1);
  for (EdgeId e = 0; e < g.num_edges(); e += 2) {
    if (!tree_.contains_edge(e)) {
      generator_index_[static_cast<std::size_t>(e / 2)] = static_cast<int>(generators_.size());
      generators_.push_back(e);
    }
  }
}

std::optional<int> TreeBasis::generator_of(EdgeId e) const {
  int const k = generator_index_.at(static_cast<std::size_t>(e / 2));
  if (k < 0) return std::nullopt;
  return k;
}

Word TreeBasis::collapse(std::span<const EdgeId> edges) const {
  std::vector<Letter> out;
  for (EdgeId e : edges) {
    int const k = generator_index_.at(static_cast<std::size_t>(e / 2));
    if (k >= 0) out.emplace_back(k, !Graph::is_positive(e));
  }
  return Word(std::move(out));
}

EdgePath TreeBasis::loop(int generator) const {
  EdgeId const e = edge_of(generator);
  Graph const& g = graph_;
  return reduced_concat(g, {tree_geodesic(g, tree_, tree_.root, g.origin(e)), EdgePath{g.origin(e), {e}},
                            tree_geodesic(g, tree_, g.terminus(e), tree_.root)});
}

EdgePath TreeBasis::realize(Word const& w) const {
  EdgePath out{tree_.root, {}};
  std::vector<EdgePath> loops;
  for (int k = 0; k < rank(); ++k) loops.push_back(loop(k));
  for (Letter l : w.letters()) {
    if (l.index() >= rank()) {
      throw std::invalid_argument("TreeBasis::realize: generator outside rank");
    }
    EdgePath const& piece = loops[static_cast<std::size_t>(l.index())];
    if (!l.is_inverse()) {
      for (EdgeId e : piece.edges) detail::push_reduced(out.edges, e, EdgeInverse{});
    } else {
      for (std::size_t i = piece.edges.size(); i-- > 0;) {
        detail::push_reduced(out.edges, Graph::inverse(piece.edges[i]), EdgeInverse{});
      }
    }
  }
  return out;
}

std::vector<int> components(Graph const& g, std::vector<bool> const& allowed) {
  std::vector<int> comp(static_cast<std::size_t>(g.num_vertices()), -1);
  int next = 0;
  for (VertexId s = 0; s < g.num_vertices(); ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    std::deque<VertexId> queue{s};
    comp[static_cast<std::size_t>(s)] = next;
    while (!queue.empty()) {
      VertexId const v = queue.front();
      queue.pop_front();
      for (EdgeId e : g.star(v)) {
        if (!allowed[static_cast<std::size_t>(e / 2)]) continue;
        VertexId const w = g.terminus(e);
        if (comp[static_cast<std::size_t>(w)] < 0) {
          comp[static_cast<std::size_t>(w)] = next;
          queue.push_back(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

std::vector<int> distances(Graph const& g, std::vector<bool> const& allowed, VertexId v) {
  SpanningTree const t = bfs_tree(g, allowed, v);
  return t.depth;
}

int diameter(Graph const& g, std::vector<bool> const& allowed, std::span<const VertexId> vertices) {
  int best = 0;
  for (VertexId u : vertices) {
    std::vector<int> const d = distances(g, allowed, u);
    for (VertexId w : vertices) best = std::max(best, d[static_cast<std::size_t>(w)]);
  }
  return best;
}

int diameter(Graph const& g) {
  std::vector<VertexId> all(static_cast<std::size_t>(g.num_vertices()));
  for (VertexId v = 0; v < g.num_vertices(); ++v) all[static_cast<std::size_t>(v)] = v;
  return diameter(g, std::vector<bool>(static_cast<std::size_t>(g.num_positive()), true), all);
}

}  // namespace cvn
