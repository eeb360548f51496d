// Markings of graphs by the rose, marked metric graphs (points of outer
// space) with exact lengths, and the graph maps between differently marked
// graphs.

#ifndef CVN_MARKED_GRAPH_HPP_
#define CVN_MARKED_GRAPH_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "cvn/free_map.hpp"
#include "cvn/graph.hpp"
#include "cvn/rational.hpp"
#include "cvn/top_rep.hpp"

namespace cvn {

// Identification of F_N with pi_1(graph, base): generator i goes to the
// closed path petal(i) at the base vertex.
class Marking {
 public:
  Marking() = default;
  // Throws std::invalid_argument when the graph is invalid or disconnected,
  // a petal is not a closed path at base, or the petals are not a free basis.
  Marking(Graph g, VertexId base, std::vector<EdgePath> petals);

  static Marking rose(int rank);

  int rank() const { return static_cast<int>(petals_.size()); }
  Graph const& graph() const { return graph_; }
  VertexId base() const { return base_; }
  EdgePath const& petal(int i) const { return petals_.at(static_cast<std::size_t>(i)); }
  std::vector<EdgePath> const& petals() const { return petals_; }

  // Reduced loop at the base vertex for g.
  EdgePath realize_path(Word const& g) const;
  // Cyclically reduced loop in the free homotopy class of g; empty for a
  // trivial class.
  CyclicEdgePath realize(Word const& g) const;
  CyclicEdgePath realize(CyclicWord const& g) const { return realize(g.as_word()); }
  // The element of F_N read off a closed path at the base vertex.
  Word word_of(EdgePath const& loop) const;
  // The conjugacy class of any closed path.
  CyclicWord cyclic_word_of(std::span<const EdgeId> loop) const;
  // tree generator k -> word in the marking generators, with inverse images
  // given by the petal collapses. Used for certificates.
  FreeMap const& tree_to_marking() const { return nu_; }
  TreeBasis const& tree_basis() const { return *basis_; }
  // The same isomorphism for another spanning tree: generator k of the tree
  // basis goes to the word of its loop, moved to the base inside the tree.
  FreeMap tree_change(SpanningTree const& tree) const;

  bool operator==(Marking const& o) const {
    return graph_ == o.graph_ && base_ == o.base_ && petals_ == o.petals_;
  }

 private:
  Graph graph_;
  VertexId base_ = 0;
  std::vector<EdgePath> petals_;
  std::optional<TreeBasis> basis_;
  FreeMap nu_;
};

using CrossingVector = std::vector<std::int64_t>;

// A point of outer space: marked graph with positive rational edge lengths,
// valence at least three everywhere.
class MarkedMetricGraph {
 public:
  MarkedMetricGraph() = default;
  // Throws std::invalid_argument on a vertex of valence < 3, a non-positive
  // length or a length vector of the wrong size.
  MarkedMetricGraph(Marking marking, std::vector<Rational> lengths);

  Marking const& marking() const { return marking_; }
  Graph const& graph() const { return marking_.graph(); }
  int rank() const { return marking_.rank(); }
  std::vector<Rational> const& lengths() const { return lengths_; }
  Rational const& length(EdgeId e) const { return lengths_.at(static_cast<std::size_t>(e / 2)); }

  CyclicEdgePath realize(Word const& g) const { return marking_.realize(g); }
  CrossingVector crossing_vector(Word const& g) const;
  Rational translation_length(Word const& g) const;
  Rational volume() const;
  // Throws std::invalid_argument for lambda <= 0.
  MarkedMetricGraph scale(Rational const& lambda) const;
  MarkedMetricGraph with_lengths(std::vector<Rational> lengths) const;

  bool operator==(MarkedMetricGraph const& o) const {
    return marking_ == o.marking_ && lengths_ == o.lengths_;
  }

 private:
  Marking marking_;
  std::vector<Rational> lengths_;
};

CrossingVector crossing_vector(Graph const& g, std::span<const EdgeId> loop);
Rational dot(CrossingVector const& c, std::vector<Rational> const& lengths);

// The difference of markings u: domain.graph() -> codomain.graph(), with
// [[u(domain.petal(i))]] = [[codomain.petal(i)]] for every generator.
// Vertices go to the codomain base and tree edges of the domain collapse.
// Throws std::invalid_argument on a rank mismatch and std::logic_error if the
// generator check fails.
GraphMap marking_change(Marking const& codomain, Marking const& domain);

}  // namespace cvn

#endif  // CVN_MARKED_GRAPH_HPP_
