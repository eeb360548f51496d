#include "cvn/rigidity.hpp"

#include <algorithm>
#include <stdexcept>

namespace cvn {

PropertyWReport check_property_W(std::vector<OrbitEntry> const& stream, int letter) {
  PropertyWReport out;
  out.letter = letter;
  if (stream.empty()) {
    out.stabilized = true;
    return out;
  }
  out.n_lo = out.n_hi = stream.front().n;
  std::size_t const quarter = stream.size() - stream.size() / 4;
  int at_quarter = 0;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    OrbitEntry const& entry = stream[i];
    int const k = max_power(entry.word, letter);
    out.per_n.emplace_back(entry.n, k);
    out.observed_m = std::max(out.observed_m, k);
    out.n_lo = std::min(out.n_lo, entry.n);
    out.n_hi = std::max(out.n_hi, entry.n);
    if (i + 1 == quarter) at_quarter = out.observed_m;
  }
  out.stabilized = at_quarter == out.observed_m;
  return out;
}

std::string to_string(Direction d) {
  switch (d) {
    case Direction::Forward:
      return "fwd";
    case Direction::Backward:
      return "bwd";
    case Direction::Both:
      return "both";
  }
  return "?";
}

Direction parse_direction(std::string_view text) {
  if (text == "fwd" || text == "forward" || text == "+") return Direction::Forward;
  if (text == "bwd" || text == "backward" || text == "-") return Direction::Backward;
  if (text == "both") return Direction::Both;
  throw ParseError("bad direction \"" + std::string(text) + "\" (expected fwd, bwd or both)");
}

PropertyPReport check_property_P(FreeMap const& phi, Word const& g, int letter, int horizon, Direction direction,
                                 std::size_t letter_cap) {
  if (horizon < 0) throw std::invalid_argument("check_property_P: negative horizon");
  if (letter < 0 || letter >= phi.rank()) throw std::invalid_argument("check_property_P: letter outside rank");
  PropertyPReport out;
  auto run = [&](bool forward) {
    OrbitResult r = forward ? orbit(phi, g, 0, horizon, letter_cap) : orbit(phi, g, -horizon, 0, letter_cap);
    if (!forward) std::reverse(r.entries.begin(), r.entries.end());
    PropertyWReport w = check_property_W(r.entries, letter);
    w.truncation_notes = r.truncation_notes;
    if (!w.truncation_notes.empty()) w.stabilized = false;
    out.merged_m = std::max(out.merged_m, w.observed_m);
    out.stabilized = out.stabilized && w.stabilized;
    return w;
  };
  if (direction != Direction::Backward) out.forward = run(true);
  if (direction != Direction::Forward) out.backward = run(false);
  return out;
}

PropertyWStarReport w_to_wstar(std::vector<CyclicWord> const& sigma, int letter, int m, std::optional<int> k) {
  if (letter < 0 || letter > 1) throw std::invalid_argument("w_to_wstar: letter must be a or b");
  PropertyWStarReport out;
  out.k = k.value_or(m + 1);
  if (out.k < 1) throw std::invalid_argument("w_to_wstar: k must be at least 1");
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    std::vector<Letter> letters(sigma[i].letters().begin(), sigma[i].letters().end());
    for (Letter& l : letters) {
      if (l.index() > 1) throw std::invalid_argument("w_to_wstar: word outside F_2");
      if (letter == 1) l = Letter(1 - l.index(), l.is_inverse());
    }
    CyclicWord const rewritten = to_basis_a_bak(cyclic_reduce_letters(std::move(letters)), out.k);
    bool const only_bprime = std::all_of(rewritten.letters().begin(), rewritten.letters().end(),
                                         [](Letter l) { return l.index() == 1; });
    if (only_bprime) {
      out.condition1.push_back({i, rewritten, static_cast<int>(rewritten.size())});
    }
    if (int const t = max_power(rewritten, 1); t >= 2) {
      out.condition2.push_back({i, rewritten, t});
    }
    out.rewritten.push_back(rewritten);
  }
  return out;
}

MarkedRep rose_marked_rep(FreeMap const& phi) {
  return MarkedRep{rose_representative(phi), Marking::rose(phi.rank())};
}

namespace {

StratumKind top_kind(TopRep const& f) {
  return pf_classify(transition_matrix(f, static_cast<int>(f.strata().size()))).kind;
}

bool crosses(std::span<const EdgeId> loop, std::vector<bool> const& mask) {
  return std::any_of(loop.begin(), loop.end(), [&](EdgeId e) { return mask[static_cast<std::size_t>(e / 2)]; });
}

PairCandidate candidate_from_loop(Marking const& m, CyclicEdgePath const& loop, PrimitivityCertificate const& cert,
                                  std::string reason) {
  PairCandidate c;
  CyclicWord const w = m.cyclic_word_of(loop.edges());
  c.primitive = w.as_word();
  if (w.size() == 1) c.letter = w[0].index();
  c.basis = compose(m.tree_change(cert.tree), cert.automorphism);
  c.generator = cert.generator;
  c.reason = std::move(reason);
  c.inequality = "n/a";
  if (!c.basis.is_certified() || cyclic_reduce(c.basis.image(c.generator)) != w) {
    throw std::logic_error("suggest_pair: basis certificate does not carry a generator to " + to_string(w));
  }
  return c;
}

PairCandidate neg_candidate(MarkedRep const& rep, std::string const& side) {
  Graph const& g = rep.marking.graph();
  std::vector<EdgeId> const& top = rep.map.strata().back();
  EdgeId const e0 = top.front();
  std::string const reason = "top stratum of " + side + " is NEG with edge " + g.name(e0);
  if (g.origin(e0) == g.terminus(e0)) {
    CyclicEdgePath const loop = cyclic_reduce_path(g, EdgePath{g.origin(e0), {e0}});
    auto cert = edge_prim_certificate(g, loop);
    if (!cert) throw std::logic_error("suggest_pair: loop edge without certificate");
    return candidate_from_loop(rep.marking, loop, *cert, reason);
  }
  PrimitiveLoop const pl = primitive_loop_crossing(g, top, e0, 1);
  return candidate_from_loop(rep.marking, pl.loop, pl.certificate, reason + " (" + pl.construction + ")");
}

}  // namespace

std::vector<PairCandidate> suggest_pair(FreeMap const& phi, MarkedRep const& rep,
                                        std::optional<MarkedRep> const& inverse, std::optional<int> bcc_bound) {
  if (rep.marking.rank() != phi.rank()) throw std::invalid_argument("suggest_pair: marking rank differs from phi");
  StratumKind const kind = top_kind(rep.map);
  if (kind == StratumKind::NEG) return {neg_candidate(rep, "phi")};
  if (inverse && top_kind(inverse->map) == StratumKind::NEG) return {neg_candidate(*inverse, "phi^-1")};
  if (kind == StratumKind::Zero) throw std::invalid_argument("suggest_pair: top stratum of phi is a zero stratum");

  bool const single = rep.map.strata().size() == 1;
  if (single) {
    std::vector<PairCandidate> out;
    for (int i = 0; i < phi.rank(); ++i) {
      PairCandidate c;
      c.primitive = Word::generator(i);
      c.letter = i;
      c.basis = FreeMap::identity(phi.rank());
      c.generator = i;
      c.reason = "single EG stratum: every basis letter";
      c.inequality = "n/a";
      out.push_back(std::move(c));
    }
    return out;
  }
  if (!inverse) throw std::invalid_argument("suggest_pair: EG top stratum needs a representative of phi^-1");

  Graph const& g = rep.marking.graph();
  Graph const& gi = inverse->marking.graph();
  std::vector<EdgeId> const& top = rep.map.strata().back();
  std::vector<EdgeId> const& top_inv = inverse->map.strata().back();
  std::vector<bool> const top_mask = edge_mask(g, top);
  std::vector<bool> const top_inv_mask = edge_mask(gi, top_inv);

  GraphMap const u = marking_change(rep.marking, inverse->marking);
  int const bcc_lower = bcc_estimate(u, 3);
  int const bound = std::max(bcc_lower, bcc_bound.value_or(bcc_lower));
  int const m = 2 * (diameter(gi) + bound) + 1;
  std::string const inequality = bcc_bound ? "verified" : "unverified";

  PairCandidate c;
  if (top_inv.size() < static_cast<std::size_t>(gi.num_positive())) {
    PrimitiveLoop const pl = primitive_loop_crossing(gi, top_inv, top_inv.front(), m);
    CyclicWord const w = inverse->marking.cyclic_word_of(pl.loop.edges());
    CyclicEdgePath const alpha = rep.marking.realize(w);
    if (crosses(alpha.edges(), top_mask)) {
      c = candidate_from_loop(inverse->marking, pl.loop, pl.certificate,
                              "loop crossing " + gi.name(top_inv.front()) + " " + std::to_string(pl.crossings) +
                                  " times in the phi^-1 graph (" + pl.construction + ")");
    } else {
      CrossExtension const ext = extend_to_cross(g, top, alpha);
      c = candidate_from_loop(rep.marking, ext.alpha_prime, ext.certificate,
                              "loop extended to cross the top stratum of phi (" + ext.construction + ")");
      if (!crosses(inverse->marking.realize(c.primitive).edges(), top_inv_mask)) {
        c.reason += "; extension no longer crosses the top stratum of phi^-1";
      }
    }
  } else {
    PrimitiveLoop const pl = primitive_loop_crossing(g, top, top.front(), m);
    c = candidate_from_loop(rep.marking, pl.loop, pl.certificate,
                            "loop crossing " + g.name(top.front()) + " " + std::to_string(pl.crossings) +
                                " times in the phi graph (" + pl.construction + ")");
  }
  c.inequality = inequality;
  c.crossing_bound = m;
  return {c};
}

}  // namespace cvn
