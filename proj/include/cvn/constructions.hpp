// Explicit loop constructions in graphs: primitive loops that cross a chosen
// edge many times, and loops extended so that they cross a subgraph.

#ifndef CVN_CONSTRUCTIONS_HPP_
#define CVN_CONSTRUCTIONS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "cvn/free_map.hpp"
#include "cvn/graph.hpp"

namespace cvn {

// Certifies that a loop is primitive in pi_1(graph). The loop's collapse word
// over the tree basis is conjugate to automorphism(a_generator).
struct PrimitivityCertificate {
  std::string kind;                   // "edge-prim" or "nielsen"
  std::optional<EdgeId> once_crossed; // edge-prim witness edge
  SpanningTree tree;
  Word collapse;
  FreeMap automorphism;
  int generator = 0;
};

// Re-checks the certificate against the loop from scratch.
bool verify_certificate(Graph const& g, CyclicEdgePath const& loop, PrimitivityCertificate const& cert);

// Edge-prim certificate from the first positive edge crossed exactly once;
// nullopt when no edge is crossed exactly once.
std::optional<PrimitivityCertificate> edge_prim_certificate(Graph const& g, CyclicEdgePath const& loop);

struct PrimitiveLoop {
  CyclicEdgePath loop;
  int crossings = 0;
  std::string construction;  // "non-separating", "separating", "nielsen"
  int nielsen_power = 0;     // M' for the nielsen construction
  PrimitivityCertificate certificate;
};

// Cyclically reduced primitive loop crossing e0 at least m times. Throws
// std::invalid_argument on rank < 2, e0 outside h, or h not a proper subgraph.
PrimitiveLoop primitive_loop_crossing(Graph const& g, std::vector<EdgeId> const& h, EdgeId e0, int m);

struct CrossExtension {
  EdgePath eta;               // reduced closed path at the basepoint of alpha
  CyclicEdgePath alpha_prime; // [[eta alpha]]
  std::string construction;   // "internal-edge", "loop-beyond", "bridge", "pair"
  int reduction = 0;          // edges cancelled on each side when cyclically reducing
  int reduction_bound = 0;    // 2 * diam of alpha's component of g minus h
  int h_edges_in_eta = 0;
  int h_edges_in_alpha_prime = 0;
  PrimitivityCertificate certificate;
};

// Extends a loop in g minus h to a primitive loop crossing h. Throws
// std::invalid_argument when alpha meets h, is empty or not cyclically reduced.
CrossExtension extend_to_cross(Graph const& g, std::vector<EdgeId> const& h, CyclicEdgePath const& alpha);

}  // namespace cvn

#endif  // CVN_CONSTRUCTIONS_HPP_
