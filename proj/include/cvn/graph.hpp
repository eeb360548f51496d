// Finite graphs with an edge involution, edge paths, spanning trees and the
// collapse bases they induce on the fundamental group.

#ifndef CVN_GRAPH_HPP_
#define CVN_GRAPH_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cvn/word.hpp"

namespace cvn {

using VertexId = int;
using EdgeId = int;

// Raw five-tuple (V, E, o, t, bar) as read from input, before any checks.
struct GraphTuple {
  int num_vertices = 0;
  std::vector<VertexId> origin;
  std::vector<VertexId> terminus;
  std::vector<EdgeId> inverse;
  std::vector<bool> positive;
};

struct Diagnostic {
  std::string kind;
  EdgeId edge = -1;  // -1 when the problem is a vertex
  VertexId vertex = -1;
  std::string message;
};

// Every violated graph axiom, one entry per offending edge or vertex.
std::vector<Diagnostic> validate(GraphTuple const& g);

// Canonical graph: positive edges have even ids and the inverse of e is e^1.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int num_vertices);

  // Adds a positive edge o -> t and its inverse. Returns the positive id.
  EdgeId add_edge(VertexId o, VertexId t, std::string name = {});

  int num_vertices() const { return num_vertices_; }
  int num_edges() const { return static_cast<int>(origin_.size()); }
  int num_positive() const { return num_edges() / 2; }
  VertexId origin(EdgeId e) const { return origin_.at(static_cast<std::size_t>(e)); }
  VertexId terminus(EdgeId e) const { return origin_.at(static_cast<std::size_t>(e ^ 1)); }
  static constexpr EdgeId inverse(EdgeId e) { return e ^ 1; }
  static constexpr bool is_positive(EdgeId e) { return (e & 1) == 0; }
  static constexpr EdgeId positive_of(EdgeId e) { return e & ~1; }
  // Edges with origin v, ascending.
  std::vector<EdgeId> const& star(VertexId v) const { return star_.at(static_cast<std::size_t>(v)); }
  int valence(VertexId v) const { return static_cast<int>(star(v).size()); }
  // rank of pi_1 for a connected graph
  int rank() const { return num_positive() - num_vertices_ + 1; }

  std::string const& name(EdgeId e) const { return names_.at(static_cast<std::size_t>(e / 2)); }
  // "x" for a positive edge, "x-" for its inverse.
  std::string label(EdgeId e) const;
  // Positive id of the named edge.
  std::optional<EdgeId> find_edge(std::string_view name) const;
  std::vector<EdgeId> positive_edges() const;

  GraphTuple tuple() const;
  std::vector<Diagnostic> validate() const { return cvn::validate(tuple()); }

  bool operator==(Graph const&) const = default;

 private:
  int num_vertices_ = 0;
  std::vector<VertexId> origin_;
  std::vector<std::string> names_;
  std::vector<std::vector<EdgeId>> star_;
};

struct EdgeInverse {
  constexpr EdgeId operator()(EdgeId e) const { return e ^ 1; }
};

// An edge path, or the degenerate path at `start` when edges is empty.
struct EdgePath {
  VertexId start = 0;
  std::vector<EdgeId> edges;

  bool empty() const { return edges.empty(); }
  std::size_t size() const { return edges.size(); }
  bool operator==(EdgePath const&) const = default;
};

VertexId end_vertex(Graph const& g, EdgePath const& p);
bool is_chained(Graph const& g, EdgePath const& p);
EdgePath reduce_path(EdgePath const& p);
EdgePath inverse_path(Graph const& g, EdgePath const& p);
// p followed by q; throws std::invalid_argument if they do not meet.
EdgePath concat(Graph const& g, EdgePath const& p, EdgePath const& q);
// Reduced concatenation of the pieces.
EdgePath reduced_concat(Graph const& g, std::initializer_list<EdgePath> pieces);

// A cyclically reduced loop stored in least rotation by edge id. The empty
// loop is the degenerate marker for a trivial class.
class CyclicEdgePath {
 public:
  CyclicEdgePath() = default;
  std::span<const EdgeId> edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  EdgeId operator[](std::size_t i) const { return edges_[i]; }
  // The loop read from its canonical start.
  EdgePath as_path(Graph const& g) const;

  bool operator==(CyclicEdgePath const&) const = default;

 private:
  friend CyclicEdgePath cyclic_reduce_path(Graph const&, EdgePath const&);
  std::vector<EdgeId> edges_;
};

// Throws std::invalid_argument unless p is a closed, well-chained path.
CyclicEdgePath cyclic_reduce_path(Graph const& g, EdgePath const& p);

// Number of times the loop crosses e in either direction.
int crossings(std::span<const EdgeId> edges, EdgeId e);

std::string to_string(Graph const& g, EdgePath const& p);
std::string to_string(Graph const& g, CyclicEdgePath const& p);
std::string to_string(Graph const& g, std::span<const EdgeId> edges);
// Whitespace-separated edge labels ("x e y-"); the start vertex is taken from
// the first edge, or `start` for the empty path.
EdgePath parse_path(Graph const& g, std::string_view text, VertexId start = 0);

// Edge-indexed mask over positive edges.
std::vector<bool> edge_mask(Graph const& g, std::span<const EdgeId> edges);

// A tree in g, spanning the component of its root in the allowed subgraph.
struct SpanningTree {
  VertexId root = 0;
  std::vector<EdgeId> parent_edge;  // oriented parent -> v; -1 at root and outside
  std::vector<int> depth;           // -1 outside the tree
  std::vector<bool> tree_edge;      // indexed by positive edge / 2

  bool contains(VertexId v) const { return depth.at(static_cast<std::size_t>(v)) >= 0; }
  bool contains_edge(EdgeId e) const { return tree_edge.at(static_cast<std::size_t>(e / 2)); }
  std::vector<EdgeId> edges() const;  // positive ids, ascending
};

// BFS by ascending edge id from root over edges whose positive id is allowed.
SpanningTree bfs_tree(Graph const& g, std::vector<bool> const& allowed, VertexId root);

// Spanning tree of g avoiding the excluded positive edges. Throws
// std::invalid_argument when g minus those edges is disconnected.
SpanningTree spanning_tree(Graph const& g, std::span<const EdgeId> excluded = {},
                           VertexId root = 0);

// Unique reduced path in T from u to v. Throws std::invalid_argument when
// either vertex is outside the tree.
EdgePath tree_geodesic(Graph const& g, SpanningTree const& t, VertexId u, VertexId v);

// Free basis of pi_1(g, root) read off a spanning tree: generator k is the
// k-th positive non-tree edge in ascending order.
class TreeBasis {
 public:
  TreeBasis(Graph const& g, SpanningTree tree);

  int rank() const { return static_cast<int>(generators_.size()); }
  SpanningTree const& tree() const { return tree_; }
  EdgeId edge_of(int generator) const { return generators_.at(static_cast<std::size_t>(generator)); }
  std::optional<int> generator_of(EdgeId e) const;
  // Word read by dropping tree edges. Reduced input gives reduced output.
  Word collapse(std::span<const EdgeId> edges) const;
  // [root, o(e)] e [t(e), root] for the generator's edge.
  EdgePath loop(int generator) const;
  // Reduced loop at root representing w.
  EdgePath realize(Word const& w) const;

 private:
  Graph graph_;
  SpanningTree tree_;
  std::vector<EdgeId> generators_;
  std::vector<int> generator_index_;  // by positive edge / 2, -1 for tree edges
};

// Component id per vertex using only allowed positive edges.
std::vector<int> components(Graph const& g, std::vector<bool> const& allowed);
// Unweighted BFS distances from v along allowed edges; -1 when unreachable.
std::vector<int> distances(Graph const& g, std::vector<bool> const& allowed, VertexId v);
// Largest finite distance between vertices of `vertices` inside the allowed subgraph.
int diameter(Graph const& g, std::vector<bool> const& allowed, std::span<const VertexId> vertices);
int diameter(Graph const& g);

}  // namespace cvn

#endif  // CVN_GRAPH_HPP_
