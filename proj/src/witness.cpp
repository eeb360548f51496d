#include "cvn/witness.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

#include "cvn/parallel.hpp"
#include "cvn/top_rep.hpp"

namespace cvn {

namespace {

std::string loop_name(int i, int rank) {
  static constexpr char kNames[] = "xyzwuvst";
  return rank <= 8 ? std::string(1, kNames[i]) : "x" + std::to_string(i);
}

std::vector<Rational> unit_lengths(Graph const& g) {
  return std::vector<Rational>(static_cast<std::size_t>(g.num_positive()), Rational(1));
}

// Loops for generators [0, split) at vertex 0, the rest at vertex 1, joined by
// the connector e. The far loops are marked through the connector.
CandidateGraph split_barbell(int rank, int split) {
  Graph g(2);
  for (int i = 0; i < rank; ++i) g.add_edge(i < split ? 0 : 1, i < split ? 0 : 1, loop_name(i, rank));
  EdgeId const e = g.add_edge(0, 1, "e");
  std::vector<EdgePath> petals;
  for (int i = 0; i < rank; ++i) {
    if (i < split) {
      petals.push_back({0, {2 * i}});
    } else {
      petals.push_back({0, {e, 2 * i, Graph::inverse(e)}});
    }
  }
  std::string name;
  if (rank == 2) {
    name = "barbell";
  } else if (split == rank - 1) {
    name = "hung-loop";
  } else {
    name = "barbell-" + std::to_string(split) + "-" + std::to_string(rank - split);
  }
  std::vector<Rational> lengths = unit_lengths(g);
  return {name, MarkedMetricGraph(Marking(std::move(g), 0, std::move(petals)), std::move(lengths))};
}

CandidateGraph theta(int rank) {
  Graph g(2);
  for (int i = 0; i <= rank; ++i) g.add_edge(0, 1, rank == 2 ? std::string(1, "pqr"[i]) : "t" + std::to_string(i));
  EdgeId const back = Graph::inverse(2 * rank);
  std::vector<EdgePath> petals;
  for (int i = 0; i < rank; ++i) petals.push_back({0, {2 * i, back}});
  std::vector<Rational> lengths = unit_lengths(g);
  return {"theta", MarkedMetricGraph(Marking(std::move(g), 0, std::move(petals)), std::move(lengths))};
}

}  // namespace

std::vector<CandidateGraph> candidate_graphs(int rank, std::string_view family) {
  if (rank < 2) throw std::invalid_argument("candidate_graphs: rank must be at least 2");
  bool const all = family == "default";
  if (!all && family != "rose-only" && family != "barbell" && family != "theta") {
    throw ParseError("unknown graph family \"" + std::string(family) + "\" (expected default, rose-only, barbell or theta)");
  }
  std::vector<CandidateGraph> out;
  if (all || family == "rose-only") {
    Marking m = Marking::rose(rank);
    std::vector<Rational> lengths = unit_lengths(m.graph());
    out.push_back({"rose", MarkedMetricGraph(std::move(m), std::move(lengths))});
  }
  if (all || family == "barbell") {
    for (int split = rank - 1; split >= 1; --split) out.push_back(split_barbell(rank, split));
  }
  if (all || family == "theta") out.push_back(theta(rank));
  return out;
}

CrossingMatrix crossing_matrix(MarkedMetricGraph const& t, std::vector<CyclicWord> const& sample) {
  CrossingMatrix out;
  out.reserve(sample.size());
  for (CyclicWord const& w : sample) out.push_back(t.crossing_vector(w.as_word()));
  return out;
}

NullspaceResult nullspace_direction(CrossingMatrix const& m, std::vector<Rational> const& lengths,
                                    Rational const& rho) {
  if (rho <= 0 || rho >= 1) throw std::invalid_argument("nullspace_direction: rho must lie in (0, 1)");
  std::size_t const cols = lengths.size();
  std::vector<std::vector<Rational>> basis;  // reduced row echelon form
  std::vector<std::size_t> pivots;
  std::set<CrossingVector> seen;
  for (CrossingVector const& row : m) {
    if (row.size() != cols) throw std::invalid_argument("nullspace_direction: row width differs from lengths");
    if (!seen.insert(row).second) continue;
    std::vector<Rational> r(row.begin(), row.end());
    for (std::size_t b = 0; b < basis.size(); ++b) {
      if (r[pivots[b]] == 0) continue;
      Rational const f = r[pivots[b]];
      for (std::size_t c = 0; c < cols; ++c) r[c] -= f * basis[b][c];
    }
    auto const lead = std::find_if(r.begin(), r.end(), [](Rational const& x) { return x != 0; });
    if (lead == r.end()) continue;
    std::size_t const p = static_cast<std::size_t>(lead - r.begin());
    Rational const inv = 1 / r[p];
    for (auto& x : r) x *= inv;
    for (auto& b : basis) {
      if (b[p] == 0) continue;
      Rational const f = b[p];
      for (std::size_t c = 0; c < cols; ++c) b[c] -= f * r[c];
    }
    basis.push_back(std::move(r));
    pivots.push_back(p);
    if (basis.size() == cols) break;
  }
  NullspaceResult out;
  out.rank = static_cast<int>(basis.size());
  if (basis.size() == cols) return out;

  std::size_t free = 0;
  while (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) ++free;
  std::vector<Rational> d(cols, Rational(0));
  d[free] = 1;
  for (std::size_t b = 0; b < basis.size(); ++b) d[pivots[b]] = -basis[b][free];

  Integer scale = 1;
  for (auto const& x : d) scale = boost::multiprecision::lcm(scale, Integer(boost::multiprecision::denominator(x)));
  std::vector<Integer> delta;
  Integer g = 0;
  for (auto const& x : d) {
    delta.push_back(Integer(boost::multiprecision::numerator(x) * (scale / boost::multiprecision::denominator(x))));
    g = boost::multiprecision::gcd(g, delta.back());
  }
  auto const first = std::find_if(delta.begin(), delta.end(), [](Integer const& x) { return x != 0; });
  if (*first < 0) g = -g;
  for (auto& x : delta) x /= g;

  for (std::size_t c = 0; c < cols; ++c) {
    if (delta[c] >= 0) continue;
    Rational const bound = (1 - rho) * lengths[c] / Rational(-delta[c]);
    if (!out.t_star || bound < *out.t_star) out.t_star = bound;
  }
  out.delta = std::move(delta);
  return out;
}

std::optional<Word> distinguishing_word(MarkedMetricGraph const& t1, MarkedMetricGraph const& t2, int max_len) {
  int const rank = t1.rank();
  if (t2.rank() != rank) throw std::invalid_argument("distinguishing_word: ranks differ");
  std::vector<Letter> w;
  std::optional<Word> found;
  std::function<bool(int)> grow = [&](int len) {
    if (static_cast<int>(w.size()) == len) {
      if (w.front() == w.back().inverse()) return false;
      Word const word(w);
      if (t1.translation_length(word) != t2.translation_length(word)) {
        found = word;
        return true;
      }
      return false;
    }
    for (std::uint32_t code = 0; code < static_cast<std::uint32_t>(2 * rank); ++code) {
      Letter const l = Letter::from_code(code);
      if (!w.empty() && l == w.back().inverse()) continue;
      w.push_back(l);
      bool const done = grow(len);
      w.pop_back();
      if (done) return true;
    }
    return false;
  };
  for (int len = 1; len <= max_len; ++len)
    if (grow(len)) return found;
  return std::nullopt;
}

OrbitResult witness_sample(FreeMap const& phi, Word const& g, int horizon, bool forward_only,
                           std::size_t letter_cap) {
  if (horizon < 0) throw std::invalid_argument("witness_sample: negative horizon");
  return orbit(phi, g, forward_only ? 0 : -horizon, horizon, letter_cap);
}

namespace {

std::string row_string(CrossingVector const& row) {
  std::string s = "(";
  for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + std::to_string(row[i]);
  return s + ")";
}

std::string delta_string(std::vector<Integer> const& delta) {
  std::string s = "(";
  for (std::size_t i = 0; i < delta.size(); ++i) s += (i ? "," : "") + delta[i].str();
  return s + ")";
}

struct Attempt {
  std::string report;
  std::optional<WitnessPair> pair;
  std::vector<std::string> transcript;
};

Attempt try_candidate(CandidateGraph const& cand, std::vector<OrbitEntry> const& sample,
                      WitnessOptions const& options) {
  Attempt out;
  MarkedMetricGraph const& t1 = cand.graph;
  std::size_t const cols = static_cast<std::size_t>(t1.graph().num_positive());
  CrossingMatrix rows;
  rows.reserve(sample.size());
  for (OrbitEntry const& e : sample) rows.push_back(crossing_vector(t1.graph(), t1.marking().realize(e.word).edges()));
  NullspaceResult const ns = nullspace_direction(rows, t1.lengths(), options.rho);
  std::string const head = cand.name + ": rank " + std::to_string(ns.rank) + " of " + std::to_string(cols);
  if (!ns.delta) {
    out.report = head + ", no direction";
    return out;
  }
  WitnessPair pair;
  pair.graph_name = cand.name;
  pair.t1 = t1;
  pair.delta = *ns.delta;
  pair.t_star = ns.t_star;
  pair.step = ns.t_star ? Rational(*ns.t_star / 2) : Rational(1);
  std::vector<Rational> lengths = t1.lengths();
  for (std::size_t c = 0; c < cols; ++c) lengths[c] += pair.step * Rational(pair.delta[c]);
  pair.t2 = t1.with_lengths(std::move(lengths));

  for (std::size_t i = 0; i < sample.size(); ++i) {
    Rational const l1 = dot(rows[i], pair.t1.lengths());
    Rational const l2 = dot(rows[i], pair.t2.lengths());
    Integer orth = 0;
    for (std::size_t c = 0; c < cols; ++c) orth += Integer(rows[i][c]) * pair.delta[c];
    if (l1 != l2 || orth != 0) {
      throw std::logic_error("build_witness: direction is not orthogonal to sample row " + row_string(rows[i]));
    }
    out.transcript.push_back("n=" + std::to_string(sample[i].n) + " letters=" +
                             std::to_string(sample[i].word.size()) + " crossing=" + row_string(rows[i]) +
                             " T1=" + to_string(l1) + " T2=" + to_string(l2) + " equal");
  }
  auto w = distinguishing_word(pair.t1, pair.t2, options.max_word_len);
  if (!w) {
    out.report = head + ", delta " + delta_string(pair.delta) + ", no distinguishing word up to length " +
                 std::to_string(options.max_word_len);
    out.transcript.clear();
    return out;
  }
  pair.certificate = *w;
  pair.certificate_t1 = pair.t1.translation_length(*w);
  pair.certificate_t2 = pair.t2.translation_length(*w);
  out.report = head + ", delta " + delta_string(pair.delta) + ", step " + to_string(pair.step) + ", certificate " +
               to_string(*w);
  out.pair = std::move(pair);
  return out;
}

}  // namespace

WitnessResult build_witness(std::vector<OrbitEntry> const& sample, int rank, WitnessOptions const& options) {
  if (sample.empty()) throw std::invalid_argument("build_witness: empty sample");
  std::vector<CandidateGraph> const cands = candidate_graphs(rank, options.family);
  std::vector<Attempt> const attempts = parallel_map<Attempt>(
      cands.size(), [&](std::size_t i) { return try_candidate(cands[i], sample, options); });
  WitnessResult out;
  for (Attempt const& a : attempts) out.graph_reports.push_back(a.report);
  for (Attempt const& a : attempts) {
    if (!a.pair) continue;
    std::vector<std::string> const failures = verify_witness(*a.pair, sample);
    if (!failures.empty()) throw std::logic_error("build_witness: " + failures.front());
    out.pair = a.pair;
    out.transcript = a.transcript;
    break;
  }
  return out;
}

std::vector<std::string> verify_witness(WitnessPair const& pair, std::vector<OrbitEntry> const& sample) {
  std::vector<std::string> failures;
  if (!(pair.t1.marking() == pair.t2.marking())) failures.push_back("T1 and T2 have different marked graphs");
  std::vector<Rational> const& l1 = pair.t1.lengths();
  std::vector<Rational> const& l2 = pair.t2.lengths();
  if (l1.size() != l2.size() || l1.size() != pair.delta.size()) {
    failures.push_back("length and direction vectors differ in size");
    return failures;
  }
  for (std::size_t c = 0; c < l1.size(); ++c) {
    std::string const name = pair.t1.graph().name(static_cast<EdgeId>(2 * c));
    if (l2[c] != l1[c] + pair.step * Rational(pair.delta[c])) {
      failures.push_back("edge " + name + ": T2 length is not T1 + step * delta");
    }
    if (l2[c] <= 0) failures.push_back("edge " + name + ": T2 length is not positive");
  }
  for (OrbitEntry const& e : sample) {
    Word const w = e.word.as_word();
    Rational const a = pair.t1.translation_length(w);
    Rational const b = pair.t2.translation_length(w);
    if (a != b) {
      failures.push_back("n=" + std::to_string(e.n) + ": lengths " + to_string(a) + " and " + to_string(b) +
                         " differ");
    }
  }
  Rational const c1 = pair.t1.translation_length(pair.certificate);
  Rational const c2 = pair.t2.translation_length(pair.certificate);
  if (c1 == c2) failures.push_back("certificate " + to_string(pair.certificate) + " has equal lengths");
  if (c1 != pair.certificate_t1 || c2 != pair.certificate_t2) {
    failures.push_back("recorded certificate lengths do not match");
  }
  return failures;
}

}  // namespace cvn
