#include "cvn/marked_graph.hpp"

#include <stdexcept>

#include "cvn/detail/sequence.hpp"

namespace cvn {

Marking::Marking(Graph g, VertexId base, std::vector<EdgePath> petals)
    : graph_(std::move(g)), base_(base), petals_(std::move(petals)) {
  if (auto const diags = graph_.validate(); !diags.empty()) {
    throw std::invalid_argument("marking: invalid graph: " + diags.front().message);
  }
  if (base_ < 0 || base_ >= graph_.num_vertices()) {
    throw std::invalid_argument("marking: base vertex " + std::to_string(base_) + " out of range");
  }
  SpanningTree tree = spanning_tree(graph_, {}, base_);
  if (static_cast<int>(petals_.size()) != graph_.rank()) {
    throw std::invalid_argument("marking: " + std::to_string(petals_.size()) + " petals for a graph of rank " +
                                std::to_string(graph_.rank()));
  }
  for (std::size_t i = 0; i < petals_.size(); ++i) {
    EdgePath& p = petals_[i];
    if (p.start != base_ || !is_chained(graph_, p) || end_vertex(graph_, p) != base_) {
      throw std::invalid_argument("marking: petal " + generator_name(static_cast<int>(i)) +
                                  " is not a closed path at the base vertex");
    }
    p = reduce_path(p);
  }
  basis_.emplace(graph_, std::move(tree));
  std::vector<Word> collapses;
  for (EdgePath const& p : petals_) collapses.push_back(basis_->collapse(p.edges));
  auto nu = basis_inverse(collapses, graph_.rank());
  if (!nu) throw std::invalid_argument("marking: petals do not form a free basis of the fundamental group");
  nu_ = FreeMap(graph_.rank(), std::move(*nu), std::move(collapses));
}

Marking Marking::rose(int rank) {
  Graph g = cvn::rose(rank);
  std::vector<EdgePath> petals;
  for (int i = 0; i < rank; ++i) petals.push_back({0, {2 * i}});
  return Marking(std::move(g), 0, std::move(petals));
}

EdgePath Marking::realize_path(Word const& g) const {
  EdgePath out{base_, {}};
  for (Letter l : g.letters()) {
    EdgePath const& p = petal(l.index());
    if (l.is_inverse()) {
      for (auto it = p.edges.rbegin(); it != p.edges.rend(); ++it)
        detail::push_reduced(out.edges, Graph::inverse(*it), EdgeInverse{});
    } else {
      for (EdgeId e : p.edges) detail::push_reduced(out.edges, e, EdgeInverse{});
    }
  }
  return out;
}

CyclicEdgePath Marking::realize(Word const& g) const { return cyclic_reduce_path(graph_, realize_path(g)); }

Word Marking::word_of(EdgePath const& loop) const {
  if (loop.start != base_ || end_vertex(graph_, loop) != base_) {
    throw std::invalid_argument("word_of: path is not a loop at the base vertex");
  }
  return nu_.apply(basis_->collapse(reduce_path(loop).edges));
}

CyclicWord Marking::cyclic_word_of(std::span<const EdgeId> loop) const {
  // Tree geodesics collapse to nothing, so the collapse of a loop at any
  // vertex is conjugate to the collapse of its based version.
  return cyclic_reduce(nu_.apply(basis_->collapse(loop)));
}

FreeMap Marking::tree_change(SpanningTree const& tree) const {
  TreeBasis const basis(graph_, tree);
  if (basis.rank() != rank()) throw std::invalid_argument("tree_change: tree does not span the graph");
  EdgePath const to_root = tree_geodesic(graph_, tree, base_, tree.root);
  EdgePath const from_root = inverse_path(graph_, to_root);
  std::vector<Word> images;
  for (int k = 0; k < basis.rank(); ++k) {
    images.push_back(word_of(reduced_concat(graph_, {to_root, basis.loop(k), from_root})));
  }
  std::vector<Word> inverse_images;
  for (EdgePath const& p : petals_) inverse_images.push_back(basis.collapse(p.edges));
  return FreeMap(rank(), std::move(images), std::move(inverse_images));
}

MarkedMetricGraph::MarkedMetricGraph(Marking marking, std::vector<Rational> lengths)
    : marking_(std::move(marking)), lengths_(std::move(lengths)) {
  Graph const& g = marking_.graph();
  if (static_cast<int>(lengths_.size()) != g.num_positive()) {
    throw std::invalid_argument("marked graph: expected " + std::to_string(g.num_positive()) + " lengths, got " +
                                std::to_string(lengths_.size()));
  }
  for (std::size_t k = 0; k < lengths_.size(); ++k) {
    if (lengths_[k] <= 0) {
      throw std::invalid_argument("marked graph: edge " + g.name(static_cast<EdgeId>(2 * k)) +
                                  " has non-positive length " + to_string(lengths_[k]));
    }
  }
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (g.valence(v) < 3) {
      throw std::invalid_argument("marked graph: vertex " + std::to_string(v) + " has valence " +
                                  std::to_string(g.valence(v)) + " < 3");
    }
  }
}

CrossingVector crossing_vector(Graph const& g, std::span<const EdgeId> loop) {
  CrossingVector out(static_cast<std::size_t>(g.num_positive()), 0);
  for (EdgeId e : loop) ++out[static_cast<std::size_t>(e / 2)];
  return out;
}

Rational dot(CrossingVector const& c, std::vector<Rational> const& lengths) {
  Rational out = 0;
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c[k] != 0) out += lengths.at(k) * c[k];
  return out;
}

CrossingVector MarkedMetricGraph::crossing_vector(Word const& g) const {
  return cvn::crossing_vector(graph(), realize(g).edges());
}

Rational MarkedMetricGraph::translation_length(Word const& g) const { return dot(crossing_vector(g), lengths_); }

Rational MarkedMetricGraph::volume() const {
  Rational out = 0;
  for (auto const& l : lengths_) out += l;
  return out;
}

MarkedMetricGraph MarkedMetricGraph::scale(Rational const& lambda) const {
  if (lambda <= 0) throw std::invalid_argument("scale: factor must be positive, got " + to_string(lambda));
  std::vector<Rational> scaled = lengths_;
  for (auto& l : scaled) l *= lambda;
  return MarkedMetricGraph(marking_, std::move(scaled));
}

MarkedMetricGraph MarkedMetricGraph::with_lengths(std::vector<Rational> lengths) const {
  return MarkedMetricGraph(marking_, std::move(lengths));
}

GraphMap marking_change(Marking const& codomain, Marking const& domain) {
  if (codomain.rank() != domain.rank()) {
    throw std::invalid_argument("marking_change: ranks differ (" + std::to_string(codomain.rank()) + " vs " +
                                std::to_string(domain.rank()) + ")");
  }
  Graph const& g = domain.graph();
  TreeBasis const& basis = domain.tree_basis();
  std::vector<EdgePath> images;
  for (EdgeId e = 0; e < g.num_edges(); e += 2) {
    if (auto k = basis.generator_of(e)) {
      images.push_back(codomain.realize_path(domain.tree_to_marking().image(*k)));
    } else {
      images.push_back({codomain.base(), {}});
    }
  }
  std::vector<VertexId> vertex_map(static_cast<std::size_t>(g.num_vertices()), codomain.base());
  GraphMap u(g, codomain.graph(), std::move(images), std::move(vertex_map));
  for (int i = 0; i < domain.rank(); ++i) {
    CyclicEdgePath const got = cyclic_reduce_path(codomain.graph(), u.apply_reduced(domain.petal(i)));
    if (got != codomain.realize(Word::generator(i))) {
      throw std::logic_error("marking_change: generator " + generator_name(i) + " is not carried to its petal");
    }
  }
  return u;
}

}  // namespace cvn
