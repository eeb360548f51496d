#include "cvn/constructions.hpp"

#include <stdexcept>

namespace cvn {

namespace {

EdgePath single(Graph const& g, EdgeId e) { return {g.origin(e), {e}}; }

EdgePath power_path(Graph const& g, EdgePath const& loop, int k) {
  EdgePath out{loop.start, {}};
  for (int i = 0; i < k; ++i) out = reduced_concat(g, {out, loop});
  return out;
}

// Loop [v, o(e)]_T e [t(e), v]_T.
EdgePath lasso(Graph const& g, SpanningTree const& t, VertexId v, EdgeId e) {
  return reduced_concat(g, {tree_geodesic(g, t, v, g.origin(e)), single(g, e),
                            tree_geodesic(g, t, g.terminus(e), v)});
}

std::vector<bool> all_edges(Graph const& g) {
  return std::vector<bool>(static_cast<std::size_t>(g.num_positive()), true);
}

std::vector<EdgeId> non_tree_edges(Graph const& g, std::vector<bool> const& allowed,
                                   SpanningTree const& t) {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < g.num_edges(); e += 2) {
    if (allowed[static_cast<std::size_t>(e / 2)] && t.contains(g.origin(e)) && !t.contains_edge(e)) {
      out.push_back(e);
    }
  }
  return out;
}

void require_no_valence_one(Graph const& g) {
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (g.valence(v) == 1) {
      throw std::invalid_argument("graph has a valence-one vertex " + std::to_string(v));
    }
  }
  SpanningTree const t = bfs_tree(g, all_edges(g), 0);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (!t.contains(v)) {
      throw std::invalid_argument("graph is not connected");
    }
  }
}

std::vector<bool> h_mask(Graph const& g, std::vector<EdgeId> const& h) {
  if (h.empty()) {
    throw std::invalid_argument("subgraph H has no edges");
  }
  std::vector<bool> mask = edge_mask(g, h);
  bool proper = false;
  for (bool b : mask) proper = proper || !b;
  if (!proper) {
    throw std::invalid_argument("subgraph H must be proper");
  }
  return mask;
}

}  // namespace

bool verify_certificate(Graph const& g, CyclicEdgePath const& loop, PrimitivityCertificate const& cert) {
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (!cert.tree.contains(v)) return false;
  }
  TreeBasis const basis(g, cert.tree);
  CyclicWord const c = cyclic_reduce(basis.collapse(loop.edges()));
  if (c != cyclic_reduce(cert.collapse)) return false;
  if (cert.automorphism.rank() != basis.rank() || !cert.automorphism.is_certified()) return false;
  if (cert.once_crossed && crossings(loop.edges(), *cert.once_crossed) != 1) return false;
  return cyclic_reduce(cert.automorphism.image(cert.generator)) == c;
}

std::optional<PrimitivityCertificate> edge_prim_certificate(Graph const& g, CyclicEdgePath const& loop) {
  for (EdgeId e = 0; e < g.num_edges(); e += 2) {
    if (crossings(loop.edges(), e) != 1) continue;
    SpanningTree tree;
    try {
      std::vector<EdgeId> const excluded{e};
      tree = spanning_tree(g, excluded);
    } catch (std::invalid_argument const&) {
      continue;
    }
    TreeBasis const basis(g, tree);
    Word const c = cyclic_reduce(basis.collapse(loop.edges())).as_word();
    auto cert = extend_to_basis(c, basis.rank());
    if (!cert) continue;
    return PrimitivityCertificate{"edge-prim", e, std::move(tree), c, std::move(cert->automorphism),
                                  cert->generator};
  }
  return std::nullopt;
}

PrimitiveLoop primitive_loop_crossing(Graph const& g, std::vector<EdgeId> const& h, EdgeId e0, int m) {
  require_no_valence_one(g);
  if (g.rank() < 2) {
    throw std::invalid_argument("primitive_loop_crossing: rank of pi_1 must be at least 2");
  }
  std::vector<bool> const hm = h_mask(g, h);
  if (e0 < 0 || e0 >= g.num_edges() || !hm[static_cast<std::size_t>(e0 / 2)]) {
    throw std::invalid_argument("primitive_loop_crossing: e0 is not an edge of H");
  }
  if (m < 1) {
    throw std::invalid_argument("primitive_loop_crossing: M must be at least 1");
  }
  e0 = Graph::positive_of(e0);

  PrimitiveLoop out;
  std::vector<bool> without = all_edges(g);
  without[static_cast<std::size_t>(e0 / 2)] = false;
  std::vector<int> const comp = components(g, without);
  bool const separating = comp[static_cast<std::size_t>(g.origin(e0))] !=
                          comp[static_cast<std::size_t>(g.terminus(e0))];

  if (!separating) {
    VertexId const v = g.origin(e0);
    SpanningTree const t = bfs_tree(g, without, v);
    EdgeId e = -1;
    for (EdgeId c : non_tree_edges(g, all_edges(g), t)) {
      if (c != e0) {
        e = c;
        break;
      }
    }
    EdgePath const loop = reduced_concat(g, {power_path(g, lasso(g, t, v, e0), m), lasso(g, t, v, e)});
    out.loop = cyclic_reduce_path(g, loop);
    out.construction = "non-separating";
  } else {
    // Orient e0 so that its origin side is the larger-rank side.
    auto side = [&](VertexId s) {
      std::vector<bool> mask(static_cast<std::size_t>(g.num_positive()), false);
      int vertices = 0;
      int edges = 0;
      int const c = comp[static_cast<std::size_t>(s)];
      for (VertexId v = 0; v < g.num_vertices(); ++v) vertices += comp[static_cast<std::size_t>(v)] == c;
      for (EdgeId e = 0; e < g.num_edges(); e += 2) {
        if (e != e0 && comp[static_cast<std::size_t>(g.origin(e))] == c) {
          mask[static_cast<std::size_t>(e / 2)] = true;
          ++edges;
        }
      }
      return std::make_pair(mask, edges - vertices + 1);
    };
    EdgeId f0 = e0;
    auto [gamma, rank_gamma] = side(g.origin(f0));
    auto [gamma2, rank_gamma2] = side(g.terminus(f0));
    if (rank_gamma < 2 && rank_gamma2 >= 2) {
      f0 = Graph::inverse(e0);
      std::swap(gamma, gamma2);
      std::swap(rank_gamma, rank_gamma2);
    }
    VertexId const v = g.origin(f0);
    SpanningTree const t = bfs_tree(g, gamma, v);
    SpanningTree const t2 = bfs_tree(g, gamma2, g.terminus(f0));
    std::vector<EdgeId> const extra = non_tree_edges(g, gamma, t);
    std::vector<EdgeId> const extra2 = non_tree_edges(g, gamma2, t2);
    if (extra.empty() || extra2.empty()) {
      throw std::invalid_argument("primitive_loop_crossing: a side of the separating edge is a tree");
    }
    EdgeId const e1 = extra[0];
    EdgeId const ep = extra2[0];
    // l' = [v, o(e0)] e0 [t(e0), o(e')] e' [t(e'), t(e0)] e0-bar [o(e0), v]
    EdgePath const l_prime = reduced_concat(
        g, {single(g, f0), lasso(g, t2, g.terminus(f0), ep), single(g, Graph::inverse(f0))});
    EdgePath const l1 = lasso(g, t, v, e1);

    std::vector<bool> star_mask = t.tree_edge;
    for (std::size_t i = 0; i < star_mask.size(); ++i) star_mask[i] = star_mask[i] || t2.tree_edge[i];
    star_mask[static_cast<std::size_t>(e0 / 2)] = true;

    if (rank_gamma >= 2) {
      EdgeId const e2 = extra[1];
      EdgePath const block = reduced_concat(g, {l1, l_prime});
      EdgePath const loop =
          reduced_concat(g, {power_path(g, block, (m + 1) / 2), lasso(g, t, v, e2)});
      out.loop = cyclic_reduce_path(g, loop);
      out.construction = "separating";
    } else {
      // Nielsen moves on F(l1, l'): psi = eta' o eta1 sends l1 -> l1 l' l1, l' -> l' l1.
      Word const a = Word::generator(0);
      Word const b = Word::generator(1);
      FreeMap const eta1(2, {a * b, b}, std::vector<Word>{a * b.inverse(), b});
      FreeMap const eta_p(2, {a, b * a}, std::vector<Word>{a, b * a.inverse()});
      FreeMap const psi = compose(eta_p, eta1);
      FreeMap psi_k = FreeMap::identity(2);
      auto realize = [&](Word const& w) {
        EdgePath p{v, {}};
        for (Letter l : w.letters()) {
          EdgePath const& piece = l.index() == 0 ? l1 : l_prime;
          p = reduced_concat(g, {p, l.is_inverse() ? inverse_path(g, piece) : piece});
        }
        return p;
      };
      for (int k = 1;; ++k) {
        psi_k = compose(psi, psi_k);
        out.loop = cyclic_reduce_path(g, realize(psi_k.image(0)));
        if (crossings(out.loop.edges(), e0) >= m) {
          out.nielsen_power = k;
          break;
        }
      }
      out.construction = "nielsen";
      SpanningTree const star = bfs_tree(g, star_mask, v);
      TreeBasis const basis(g, star);
      int const p = *basis.generator_of(e1);
      // Relabel l1 -> a_p, l' -> a_q.
      FreeMap const swap(2, {b, a}, std::vector<Word>{b, a});
      FreeMap const theta = p == 0 ? psi_k : compose(swap, compose(psi_k, swap));
      out.certificate = PrimitivityCertificate{
          "nielsen", std::nullopt, star, cyclic_reduce(basis.collapse(out.loop.edges())).as_word(),
          theta, p};
    }
  }
  out.crossings = crossings(out.loop.edges(), e0);
  if (out.construction != "nielsen") {
    auto cert = edge_prim_certificate(g, out.loop);
    if (!cert) {
      throw std::logic_error("primitive_loop_crossing: no edge crossed exactly once in " +
                             to_string(g, out.loop));
    }
    out.certificate = std::move(*cert);
  }
  if (out.crossings < m || !verify_certificate(g, out.loop, out.certificate)) {
    throw std::logic_error("primitive_loop_crossing: construction failed its own check");
  }
  return out;
}

CrossExtension extend_to_cross(Graph const& g, std::vector<EdgeId> const& h, CyclicEdgePath const& alpha) {
  require_no_valence_one(g);
  std::vector<bool> const hm = h_mask(g, h);
  if (alpha.empty()) {
    throw std::invalid_argument("extend_to_cross: alpha must be a nontrivial loop");
  }
  for (EdgeId e : alpha.edges()) {
    if (hm[static_cast<std::size_t>(e / 2)]) {
      throw std::invalid_argument("extend_to_cross: alpha meets H at edge " + g.label(e));
    }
  }
  EdgePath const alpha_path = alpha.as_path(g);
  VertexId const v = alpha_path.start;

  std::vector<bool> not_h(hm.size());
  for (std::size_t i = 0; i < hm.size(); ++i) not_h[i] = !hm[i];
  std::vector<int> const comp = components(g, not_h);
  int const c1 = comp[static_cast<std::size_t>(v)];
  auto in_gamma1 = [&](VertexId x) { return comp[static_cast<std::size_t>(x)] == c1; };
  std::vector<bool> gamma1(hm.size(), false);
  std::vector<VertexId> gamma1_vertices;
  for (VertexId x = 0; x < g.num_vertices(); ++x) {
    if (in_gamma1(x)) gamma1_vertices.push_back(x);
  }
  for (EdgeId e = 0; e < g.num_edges(); e += 2) {
    if (not_h[static_cast<std::size_t>(e / 2)] && in_gamma1(g.origin(e))) gamma1[static_cast<std::size_t>(e / 2)] = true;
  }
  SpanningTree const t1 = bfs_tree(g, gamma1, v);

  CrossExtension out;
  out.reduction_bound = 2 * diameter(g, gamma1, gamma1_vertices);
  std::optional<EdgePath> eta;

  for (EdgeId e = 0; e < g.num_edges() && !eta; e += 2) {
    if (hm[static_cast<std::size_t>(e / 2)] && in_gamma1(g.origin(e)) && in_gamma1(g.terminus(e))) {
      eta = lasso(g, t1, v, e);
      out.construction = "internal-edge";
    }
  }

  // H edges leaving Gamma_1, oriented outwards.
  std::vector<EdgeId> leaving;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (hm[static_cast<std::size_t>(e / 2)] && in_gamma1(g.origin(e)) && !in_gamma1(g.terminus(e))) {
      leaving.push_back(e);
    }
  }
  auto beyond_mask = [&](EdgeId e0) {
    std::vector<bool> mask(hm.size(), true);
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = !gamma1[i];
    mask[static_cast<std::size_t>(e0 / 2)] = false;
    return mask;
  };

  for (std::size_t i = 0; i < leaving.size() && !eta; ++i) {
    EdgeId const e0 = leaving[i];
    std::vector<bool> const mask = beyond_mask(e0);
    VertexId const w = g.terminus(e0);
    SpanningTree const tj = bfs_tree(g, mask, w);
    std::vector<EdgeId> const extra = non_tree_edges(g, mask, tj);
    if (extra.empty()) continue;  // Gamma_j is a tree
    EdgeId const ej = extra.front();
    eta = reduced_concat(g, {tree_geodesic(g, t1, v, g.origin(e0)), single(g, e0), lasso(g, tj, w, ej),
                             single(g, Graph::inverse(e0)), tree_geodesic(g, t1, g.origin(e0), v)});
    out.construction = "loop-beyond";
  }

  for (std::size_t i = 0; i < leaving.size() && !eta; ++i) {
    EdgeId const e0 = leaving[i];
    std::vector<bool> const mask = beyond_mask(e0);
    SpanningTree const tj = bfs_tree(g, mask, g.terminus(e0));
    // Nearest return to Gamma_1, ties broken by BFS order.
    VertexId back = -1;
    int best = -1;
    for (VertexId x : gamma1_vertices) {
      int const d = tj.depth[static_cast<std::size_t>(x)];
      if (d >= 0 && (best < 0 || d < best)) {
        best = d;
        back = x;
      }
    }
    if (back < 0) continue;
    EdgePath const q = tree_geodesic(g, tj, g.terminus(e0), back);
    bool bridge = false;
    for (std::size_t k = 0; k + 1 < q.edges.size(); ++k) {
      bridge = bridge || hm[static_cast<std::size_t>(q.edges[k] / 2)];
    }
    eta = reduced_concat(g, {tree_geodesic(g, t1, v, g.origin(e0)), single(g, e0), q,
                             tree_geodesic(g, t1, back, v)});
    out.construction = bridge ? "bridge" : "pair";
  }

  if (!eta) {
    throw std::invalid_argument("extend_to_cross: no H edge reachable from alpha's component");
  }
  out.eta = *eta;
  EdgePath const joined = reduced_concat(g, {out.eta, alpha_path});
  out.alpha_prime = cyclic_reduce_path(g, joined);
  out.reduction = static_cast<int>(out.eta.size() + alpha_path.size() - out.alpha_prime.size()) / 2;
  for (EdgeId e : out.eta.edges) out.h_edges_in_eta += hm[static_cast<std::size_t>(e / 2)];
  for (EdgeId e : out.alpha_prime.edges()) out.h_edges_in_alpha_prime += hm[static_cast<std::size_t>(e / 2)];
  auto cert = edge_prim_certificate(g, out.alpha_prime);
  if (!cert) {
    throw std::logic_error("extend_to_cross: result has no once-crossed edge");
  }
  out.certificate = std::move(*cert);
  return out;
}

}  // namespace cvn
